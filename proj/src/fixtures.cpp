#include "storygame/fixtures.hpp"

#include "storygame/efg_io.hpp"
#include "storygame/extraction.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace storygame::fixtures {

namespace {

NodeSpec romeo_choice(std::string name, double die_r, double die_j, double live_r, double live_j,
                      const std::string& outcome_prefix) {
  NodeSpec node = NodeSpec::decision(std::move(name), kRomeo, "romeo-unsure", {"die", "live"},
                                     {NodeSpec::terminal({die_r, die_j}, outcome_prefix + " / Romeo dies"),
                                      NodeSpec::terminal({live_r, live_j}, outcome_prefix + " / Romeo lives")});
  node.infoset_name = "Romeo finds Juliet apparently dead";
  return node;
}

GameSpec game2_spec() {
  NodeSpec grief = romeo_choice("grief: Juliet has died", -20, -100, -50, -100, "grief");
  NodeSpec failed = romeo_choice("message failed: Juliet is asleep", -100, -100, 90, 90, "message failed");
  NodeSpec suicide = romeo_choice("suicide: Juliet has died", -20, -95, -50, -95, "suicide");

  NodeSpec message = NodeSpec::chance("message", {{"message-reaches", Rational(3, 10)}, {"message-fails", Rational(7, 10)}},
                                      {NodeSpec::terminal({90, 90}, "reunited by message"), std::move(failed)});
  message.chance_set_name = "Friar Lawrence's message";
  message.note = "Does Juliet's message reach Romeo in time?";

  NodeSpec juliet = NodeSpec::decision(
      "B", kJuliet, "juliet-plan", {"marry-paris", "fake-death", "take-own-life"},
      {NodeSpec::terminal({-40, -43}, "Juliet marries Paris"), std::move(message), std::move(suicide)});
  juliet.infoset_name = "Juliet decides";
  juliet.note = "Juliet's family intends for her to marry Paris; Friar Lawrence has other ideas.";

  NodeSpec root = NodeSpec::chance("A", {{"grief", Rational(17, 20)}, {"no-grief", Rational(3, 20)}},
                                   {std::move(grief), std::move(juliet)});
  root.chance_set_name = "Juliet overwhelmed with grief";
  root.note = "Aftermath of Mercutio's and Tybalt's deaths and Romeo's banishment.";

  GameSpec spec;
  spec.title = "Romeo and Juliet (Game II)";
  spec.comment = "Payoffs are (Romeo, Juliet).";
  spec.players = {{"Romeo", "Banished to Mantua; learns of events only through messages."},
                  {"Juliet", "Pressed by her family to marry Paris."}};
  spec.root = std::move(root);
  spec.story_path = actual_story().actions;
  return spec;
}

}  // namespace

Game romeo_juliet_game2() { return build_game(game2_spec()); }

NodeId game2_juliet_node() {
  const Game g = romeo_juliet_game2();
  return *g.child_by_label(g.root(), "no-grief");
}

Game romeo_juliet_game1() {
  const Game g2 = romeo_juliet_game2();
  GameData data = reroot(g2, *g2.child_by_label(g2.root(), "no-grief")).data();
  data.title = "Romeo and Juliet (Game I)";
  data.story_path = game1_story().actions;
  return Game::from_data(std::move(data));
}

StorySpec actual_story() {
  return {{"Romeo", "Juliet"},
          {"no-grief", "fake-death", "message-fails", "die"},
          {"Juliet is not overcome with grief.", "Juliet takes Friar Lawrence's potion.",
           "The message never reaches Mantua.", "Romeo takes his own life at Juliet's tomb."}};
}

StorySpec game1_story() {
  return {{"Romeo", "Juliet"},
          {"fake-death", "message-fails", "live"},
          {"Juliet takes Friar Lawrence's potion.", "The message never reaches Mantua.", "Romeo chooses to live."}};
}

StorySpec marry_paris_story() {
  return {{"Romeo", "Juliet"}, {"no-grief", "marry-paris"}, {"Juliet is not overcome with grief.", "Juliet marries Paris."}};
}

// ---------------------------------------------------------------------------
// Extraction fixtures

namespace {

using nlohmann::ordered_json;

struct ScoredOutcome {
  const char* id;
  const char* description;
  double romeo;
  double juliet;
};

constexpr ScoredOutcome kOutcomes[] = {
    {"grief-die", "Juliet, overcome with grief, takes her own life and Romeo dies beside her", -20, -100},
    {"grief-live", "Juliet, overcome with grief, takes her own life and Romeo lives on", -50, -100},
    {"marry-paris", "Juliet obeys her family and marries Paris", -40, -43},
    {"reunited", "Juliet fakes her death, the message reaches Romeo and the two are reunited", 90, 90},
    {"failed-die", "Juliet fakes her death, the message fails and Romeo takes his own life at her tomb", -100, -100},
    {"failed-live", "Juliet fakes her death, the message fails, Romeo lives and finds her awake", 90, 90},
    {"suicide-die", "Juliet takes her own life and Romeo dies beside her", -20, -95},
    {"suicide-live", "Juliet takes her own life and Romeo lives on", -50, -95},
};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string score_reply(const ScoredOutcome& o, const std::string& who) {
  const double v = who == "Romeo" ? o.romeo : o.juliet;
  if (std::string(o.id) == "reunited" && who == "Romeo")
    return "For Romeo this is close to the best possible ending; somewhere between 85 and 95.";
  return "I'd put it at " + number(v) + " for " + who + ".";
}

std::map<std::string, std::string> replies() {
  std::map<std::string, std::string> out = {
      {"characters",
       "1. Romeo (Montague): Banished to Mantua after killing Tybalt.\n"
       "2. Juliet (Capulet): Secretly married to Romeo and pressed by her family to marry Paris."},
      {"decisions",
       "1. Romeo: whether to end his life when he finds Juliet apparently dead.\n"
       "2. Juliet: how to escape the marriage to Paris."},
      {"options-juliet",
       "1. Obey her family and marry Paris (Family's preference): This is the most straightforward and socially "
       "acceptable option. It would appease her family and maintain the peace between the Capulets and Montagues. "
       "[...]\n"
       "2. Fake her own death and reunite with Romeo (Risky): This is Friar Lawrence's plan. It involves Juliet "
       "taking a potion that will make her appear dead, allowing her to escape her family and eventually reunite "
       "with Romeo in Mantua. While this offers a glimmer of hope for a happy ending, it's incredibly risky. "
       "There's a high chance of miscommunication or things going wrong [...].\n"
       "3. Take her own life (Tragic): Overwhelmed by the seemingly impossible situation and the prospect of "
       "marrying Paris, Juliet might consider suicide as a way to escape her predicament. This would be the most "
       "tragic outcome for the audience [...]"},
      {"options-romeo",
       "1. Take his own life beside her (Tragic): He cannot imagine a life without Juliet.\n"
       "2. Live on (Cautious): He mourns her and returns to Mantua."},
      {"probability-message",
       "Given the communication limitations and potential obstacles in Shakespearean times, the probability of "
       "Juliet's message reaching Romeo in time is realistically quite low. I would estimate it to be around 30%."},
      {"probability-grief",
       "I would estimate the probability of Juliet being initially overwhelmed with grief to be around 80-90%. "
       "[...]"},
  };
  for (const auto& o : kOutcomes)
    for (const std::string who : {"Romeo", "Juliet"})
      out["score-" + std::string(o.id) + "-" + who] = score_reply(o, who);
  return out;
}

ordered_json protocol_document() {
  ordered_json doc;
  doc["schema"] = 1;
  doc["templates"] = ordered_json::array({
      {{"id", "characters"},
       {"text", "{story_context} Who are the main characters whose decisions shape the ending? Please only list "
                "{k} characters."},
       {"slots", {"story_context", "k"}},
       {"kind", "option-list"}},
      {{"id", "decisions"},
       {"text", "{story_context} For each of {characters}, describe the main decision they face near the end of "
                "the story. Please list one decision per character, in that order."},
       {"slots", {"story_context", "characters"}},
       {"kind", "option-list"}},
      {{"id", "options"},
       {"text", "{story_context} Name options {character} could consider {guidance}. Please only list {k} options."},
       {"slots", {"story_context", "character", "guidance", "k"}},
       {"kind", "option-list"}},
      {{"id", "probability"},
       {"text", "{story_context} {question} Please give a number between 0 and 100."},
       {"slots", {"story_context", "question"}},
       {"kind", "percentage"}},
      {{"id", "score"},
       {"text", "{story_context} Consider the ending where {outcome}. On a scale from -100 to 100, what score "
                "would {character} give this outcome?"},
       {"slots", {"story_context", "outcome", "character"}},
       {"kind", "score"}},
  });
  ordered_json steps = ordered_json::array();
  steps.push_back({{"id", "characters"},
                   {"template", "characters"},
                   {"slots", {{"k", "two"}}},
                   {"target", "characters"},
                   {"count", 2}});
  steps.push_back({{"id", "decisions"},
                   {"template", "decisions"},
                   {"slots", {{"characters", "Romeo and Juliet"}}},
                   {"target", "decisions"},
                   {"ids", {"romeo-final", "juliet-plan"}},
                   {"owners", {"Romeo", "Juliet"}}});
  steps.push_back({{"id", "options-juliet"},
                   {"template", "options"},
                   {"slots",
                    {{"character", "Juliet"},
                     {"guidance", "including ones that her family might prefer, ones that may appear risky, and "
                                  "ones that might appear tragic to the audience"},
                     {"k", "three"}}},
                   {"target", "options"},
                   {"decision", "juliet-plan"},
                   {"count", 3}});
  steps.push_back({{"id", "options-romeo"},
                   {"template", "options"},
                   {"slots",
                    {{"character", "Romeo"},
                     {"guidance", "when he finds Juliet apparently dead in the Capulet tomb"},
                     {"k", "two"}}},
                   {"target", "options"},
                   {"decision", "romeo-final"},
                   {"count", 2}});
  steps.push_back({{"id", "probability-message"},
                   {"template", "probability"},
                   {"slots",
                    {{"question", "In the case where Juliet chooses to fake her own death, what's the probability "
                                  "that her message alerting Romeo to this plan reaches him in time?"}}},
                   {"target", "probability"},
                   {"chance", "message"},
                   {"description", "Friar Lawrence's message reaches Romeo in time"}});
  steps.push_back({{"id", "probability-grief"},
                   {"template", "probability"},
                   {"slots",
                    {{"question", "What is the probability that Juliet is initially overwhelmed with grief "
                                  "following the deaths of Mercutio and Tybalt as well as the banishment of Romeo? "
                                  "Assume if she's overwhelmed with grief, she would then decide to take her own "
                                  "life."}}},
                   {"target", "probability"},
                   {"chance", "grief"},
                   {"description", "Juliet overwhelmed with grief"}});
  for (const auto& o : kOutcomes)
    for (const std::string who : {"Romeo", "Juliet"})
      steps.push_back({{"id", "score-" + std::string(o.id) + "-" + who},
                       {"template", "score"},
                       {"slots", {{"outcome", o.description}, {"character", who}}},
                       {"target", "score"},
                       {"outcome", o.id},
                       {"character", who},
                       {"description", o.description}});
  doc["steps"] = std::move(steps);
  return doc;
}

ordered_json outcome(const char* id) { return {{"outcome", id}}; }

ordered_json romeo_hint(const char* die, const char* live) {
  return {{"decision", "romeo-final"},
          {"infoset", "romeo-unsure"},
          {"branches",
           {{{"option", 0}, {"label", "die"}, {"next", outcome(die)}},
            {{"option", 1}, {"label", "live"}, {"next", outcome(live)}}}}};
}

ordered_json hints_document() {
  ordered_json message = {
      {"chance", "message"},
      {"branches",
       {{{"label", "message-reaches"}, {"event", true}, {"next", outcome("reunited")}},
        {{"label", "message-fails"}, {"next", romeo_hint("failed-die", "failed-live")}}}}};
  ordered_json juliet = {{"decision", "juliet-plan"},
                         {"infoset", "juliet-plan"},
                         {"branches",
                          {{{"option", 0}, {"label", "marry-paris"}, {"next", outcome("marry-paris")}},
                           {{"option", 1}, {"label", "fake-death"}, {"next", message}},
                           {{"option", 2}, {"label", "take-own-life"}, {"next", romeo_hint("suicide-die", "suicide-live")}}}}};
  ordered_json root = {{"chance", "grief"},
                       {"branches",
                        {{{"label", "grief"}, {"event", true}, {"next", romeo_hint("grief-die", "grief-live")}},
                         {{"label", "no-grief"}, {"next", juliet}}}}};
  ordered_json doc;
  doc["schema"] = 1;
  doc["title"] = "Romeo and Juliet (Game II, elicited)";
  doc["players"] = {"Romeo", "Juliet"};
  doc["root"] = std::move(root);
  return doc;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << bytes;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

std::string story_context() {
  return "In Romeo and Juliet, Romeo is banished for avenging Mercutio's death and killing Tybalt. Juliet's family "
         "intends for her to marry Paris. Friar Lawrence has other ideas.";
}

std::string extraction_protocol() { return protocol_document().dump(2) + "\n"; }

std::string topology_hints() { return hints_document().dump(2) + "\n"; }

std::vector<Recording> transcripts() {
  const auto reply = replies();
  std::vector<Recording> out;
  std::size_t index = 1;
  for (const auto& step : parse_protocol(extraction_protocol())) {
    SlotValues slots = step.slots;
    slots["story_context"] = story_context();
    char stem[16];
    std::snprintf(stem, sizeof stem, "%02zu-", index++);
    out.push_back({stem + step.id, render_prompt(step.prompt, slots), reply.at(step.id)});
  }
  return out;
}

std::string recording_json(const Recording& recording) {
  const bool synthetic = recording.name.find("score-") != std::string::npos ||
                         recording.name.find("characters") != std::string::npos ||
                         recording.name.find("decisions") != std::string::npos ||
                         recording.name.find("options-romeo") != std::string::npos;
  ordered_json doc;
  doc["request"] = {{"prompt", recording.prompt}, {"temperature", 0}};
  doc["response"] = {{"text", recording.response}, {"metadata", {{"source", synthetic ? "synthetic" : "recorded"}}}};
  return doc.dump(2) + "\n";
}

void emit(const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory / "transcripts", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + directory.string() + ": " + ec.message());
  const Game g1 = romeo_juliet_game1();
  const Game g2 = romeo_juliet_game2();
  write_file(directory / "game1.efg", write_efg(g1));
  write_file(directory / "game1.json", write_json(g1));
  write_file(directory / "game2.efg", write_efg(g2));
  write_file(directory / "game2.json", write_json(g2));
  write_file(directory / "actual_path.json", write_story(actual_story()));
  write_file(directory / "game1_path.json", write_story(game1_story()));
  write_file(directory / "marry_paris_path.json", write_story(marry_paris_story()));
  write_file(directory / "story.txt", story_context() + "\n");
  write_file(directory / "protocol.json", extraction_protocol());
  write_file(directory / "hints.json", topology_hints());
  for (const auto& r : transcripts()) write_file(directory / "transcripts" / (r.name + ".json"), recording_json(r));
}

}  // namespace storygame::fixtures
