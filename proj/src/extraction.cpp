#include "storygame/extraction.hpp"

#include "storygame/efg_io.hpp"
#include "storygame/generation_client.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

namespace storygame {

std::string_view to_string(ResponseKind kind) {
  switch (kind) {
    case ResponseKind::OptionList: return "option-list";
    case ResponseKind::Percentage: return "percentage";
    case ResponseKind::Score: return "score";
  }
  return "?";
}

ResponseKind parse_response_kind(std::string_view text) {
  if (text == "option-list") return ResponseKind::OptionList;
  if (text == "percentage") return ResponseKind::Percentage;
  if (text == "score") return ResponseKind::Score;
  throw Error(ErrorCode::SchemaError, "unknown response kind '" + std::string(text) + "'");
}

std::string render_prompt(const PromptTemplate& tmpl, const SlotValues& slots) {
  std::string out;
  const std::string& text = tmpl.text;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t open = text.find('{', pos);
    if (open == std::string::npos) break;
    const std::size_t close = text.find('}', open);
    if (close == std::string::npos) break;
    const std::string name = text.substr(open + 1, close - open - 1);
    out.append(text, pos, open - pos);
    if (std::find(tmpl.slots.begin(), tmpl.slots.end(), name) == tmpl.slots.end())
      throw Error(ErrorCode::MissingSlot, "template '" + tmpl.id + "' references undeclared slot {" + name + "}");
    auto it = slots.find(name);
    if (it == slots.end())
      throw Error(ErrorCode::MissingSlot, "template '" + tmpl.id + "' needs a value for {" + name + "}");
    out += it->second;
    pos = close + 1;
  }
  out.append(text, pos, std::string::npos);
  return out;
}

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string strip_markup(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), '*'), s.end());
  return trim(std::move(s));
}

// Text of each numbered item ("1. ...", "2) ...", "3: ..."), in order.
std::vector<std::string> numbered_items(std::string_view text) {
  static const std::regex item(R"(^\s*\**\s*(\d+)\s*[.):]\**\s*(.*)$)");
  std::vector<std::string> out;
  std::istringstream lines{std::string(text)};
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::smatch m;
    if (std::regex_match(line, m, item)) out.push_back(strip_markup(m[2].str()));
  }
  return out;
}

}  // namespace

std::vector<std::string> parse_options(std::string_view text, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::TooFewOptions, "k must be at least 1");
  auto items = numbered_items(text);
  if (items.size() < k)
    throw Error(ErrorCode::TooFewOptions,
                "found " + std::to_string(items.size()) + " numbered options, expected " + std::to_string(k));
  items.resize(k);
  for (auto& item : items) item = trim(item.substr(0, item.find_first_of(":(")));
  return items;
}

double parse_probability(std::string_view text) {
  static const std::regex percent(
      R"((\d+(?:\.\d+)?)(?:\s*(?:-|–|—|to)\s*(\d+(?:\.\d+)?))?\s*(?:\\?%|percent\b))");
  const std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), percent); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    double value = std::stod(m[1].str());
    if (m[2].matched) value = 0.5 * (value + std::stod(m[2].str()));
    if (value >= 0.0 && value <= 100.0) return value / 100.0;
  }
  throw Error(ErrorCode::NoProbabilityFound, "no percentage in response");
}

double parse_score(std::string_view text) {
  static const std::regex number(R"((?:^|[^\d.])((?:-|−|\+)?\d+(?:\.\d+)?))");
  static const std::regex range_tail(R"(^\s*(?:-|–|—|to|and)\s*((?:-|−|\+)?\d+(?:\.\d+)?))");
  const std::string s(text);
  auto to_double = [](std::string token) {
    if (token.rfind("−", 0) == 0) token.replace(0, std::string("−").size(), "-");
    return std::stod(token);
  };
  for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    const double first = to_double(m[1].str());
    std::smatch tail;
    const std::string rest = s.substr(static_cast<std::size_t>(m.position(1) + m.length(1)));
    if (std::regex_search(rest, tail, range_tail)) {
      const double second = to_double(tail[1].str());
      if (std::abs(first) <= 100.0 && std::abs(second) <= 100.0) return 0.5 * (first + second);
    }
    if (std::abs(first) <= 100.0) return first;
  }
  throw Error(ErrorCode::NoScoreFound, "no score between -100 and 100 in response");
}

// ---------------------------------------------------------------------------

const DecisionPoint* GameDraft::decision(std::string_view id) const {
  for (const auto& d : decisions)
    if (d.id == id) return &d;
  return nullptr;
}

const ChancePoint* GameDraft::chance(std::string_view id) const {
  for (const auto& c : chances)
    if (c.id == id) return &c;
  return nullptr;
}

const OutcomeScores* GameDraft::outcome(std::string_view id) const {
  for (const auto& o : outcomes)
    if (o.id == id) return &o;
  return nullptr;
}

std::string draft_to_json(const GameDraft& draft) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["characters"] = draft.characters;
  doc["decisions"] = ordered_json::array();
  for (const auto& d : draft.decisions)
    doc["decisions"].push_back({{"id", d.id}, {"owner", d.owner}, {"context", d.context}, {"options", d.options}});
  doc["chances"] = ordered_json::array();
  for (const auto& c : draft.chances)
    doc["chances"].push_back(
        {{"id", c.id}, {"context", c.context}, {"probability", c.probability}, {"source", c.source}});
  doc["outcomes"] = ordered_json::array();
  for (const auto& o : draft.outcomes) {
    ordered_json scores = ordered_json::object();
    for (const auto& [who, v] : o.scores) scores[who] = v;
    doc["outcomes"].push_back({{"id", o.id}, {"description", o.description}, {"scores", scores}});
  }
  doc["provenance"] = ordered_json::array();
  for (const auto& p : draft.provenance)
    doc["provenance"].push_back({{"step", p.step}, {"field", p.field}, {"prompt", p.prompt}, {"response", p.response}});
  doc["gaps"] = ordered_json::array();
  for (const auto& g : draft.gaps) doc["gaps"].push_back({{"step", g.step}, {"field", g.field}, {"reason", g.reason}});
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::ordered_json;

ordered_json parse_document(std::string_view text) {
  try {
    return ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

void check_schema(const ordered_json& doc) {
  if (!doc.is_object()) throw SchemaError("", "document must be an object");
  if (!doc.contains("schema") || doc["schema"] != 1) throw SchemaError("/schema", "expected schema 1");
}

std::string get_string(const ordered_json& j, const std::string& at, const char* key, bool required = true) {
  if (!j.contains(key)) {
    if (required) throw SchemaError(at + "/" + key, "missing string");
    return {};
  }
  if (!j[key].is_string()) throw SchemaError(at + "/" + key, "expected a string");
  return j[key].get<std::string>();
}

std::vector<std::string> get_strings(const ordered_json& j, const std::string& at, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw SchemaError(at + "/" + key, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j[key].size(); ++i) {
    if (!j[key][i].is_string()) throw SchemaError(at + "/" + key + "/" + std::to_string(i), "expected a string");
    out.push_back(j[key][i].get<std::string>());
  }
  return out;
}

std::size_t get_count(const ordered_json& j, const std::string& at) {
  if (!j.contains("count") || !j["count"].is_number_unsigned() || j["count"].get<std::size_t>() == 0)
    throw SchemaError(at + "/count", "expected a positive integer");
  return j["count"].get<std::size_t>();
}

}  // namespace

std::vector<ProtocolStep> parse_protocol(std::string_view json) {
  const ordered_json doc = parse_document(json);
  check_schema(doc);
  std::map<std::string, PromptTemplate> templates;
  if (!doc.contains("templates") || !doc["templates"].is_array())
    throw SchemaError("/templates", "expected an array of templates");
  for (std::size_t i = 0; i < doc["templates"].size(); ++i) {
    const std::string at = "/templates/" + std::to_string(i);
    const auto& t = doc["templates"][i];
    PromptTemplate tmpl;
    tmpl.id = get_string(t, at, "id");
    tmpl.text = get_string(t, at, "text");
    tmpl.slots = get_strings(t, at, "slots");
    try {
      tmpl.kind = parse_response_kind(get_string(t, at, "kind"));
    } catch (const Error& e) {
      throw SchemaError(at + "/kind", e.what());
    }
    templates[tmpl.id] = std::move(tmpl);
  }
  if (!doc.contains("steps") || !doc["steps"].is_array()) throw SchemaError("/steps", "expected an array of steps");
  std::vector<ProtocolStep> steps;
  for (std::size_t i = 0; i < doc["steps"].size(); ++i) {
    const std::string at = "/steps/" + std::to_string(i);
    const auto& s = doc["steps"][i];
    ProtocolStep step;
    step.id = get_string(s, at, "id");
    const std::string tmpl = get_string(s, at, "template");
    if (!templates.count(tmpl)) throw SchemaError(at + "/template", "unknown template '" + tmpl + "'");
    step.prompt = templates.at(tmpl);
    if (s.contains("slots")) {
      if (!s["slots"].is_object()) throw SchemaError(at + "/slots", "expected an object");
      for (const auto& [k, v] : s["slots"].items()) {
        if (!v.is_string()) throw SchemaError(at + "/slots/" + k, "expected a string");
        step.slots[k] = v.get<std::string>();
      }
    }
    if (s.contains("temperature") && s["temperature"].is_number()) step.temperature = s["temperature"].get<double>();
    const std::string target = get_string(s, at, "target");
    if (target == "characters") {
      step.target = StepTarget::Characters;
      step.count = get_count(s, at);
    } else if (target == "decisions") {
      step.target = StepTarget::Decisions;
      step.ids = get_strings(s, at, "ids");
      step.owners = get_strings(s, at, "owners");
      if (step.ids.size() != step.owners.size() || step.ids.empty())
        throw SchemaError(at + "/owners", "need one owner per decision id");
    } else if (target == "options") {
      step.target = StepTarget::Options;
      step.ref = get_string(s, at, "decision");
      step.count = get_count(s, at);
    } else if (target == "probability") {
      step.target = StepTarget::Probability;
      step.ref = get_string(s, at, "chance");
      step.description = get_string(s, at, "description", false);
    } else if (target == "score") {
      step.target = StepTarget::Score;
      step.ref = get_string(s, at, "outcome");
      step.character = get_string(s, at, "character");
      step.description = get_string(s, at, "description", false);
    } else {
      throw SchemaError(at + "/target", "unknown target '" + target + "'");
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

GameDraft build_draft(std::string_view story, const std::vector<ProtocolStep>& protocol, GenerationClient& client) {
  if (protocol.empty()) throw Error(ErrorCode::ProtocolIncomplete, "protocol has no steps");
  if (trim(std::string(story)).empty())
    throw Error(ErrorCode::ProtocolIncomplete, "step '" + protocol.front().id + "': story text is empty");

  GameDraft draft;
  for (const auto& step : protocol) {
    std::string field;
    switch (step.target) {
      case StepTarget::Characters: field = "characters"; break;
      case StepTarget::Decisions: field = "decisions"; break;
      case StepTarget::Options: field = "decisions/" + step.ref + "/options"; break;
      case StepTarget::Probability: field = "chances/" + step.ref + "/probability"; break;
      case StepTarget::Score: field = "outcomes/" + step.ref + "/scores/" + step.character; break;
    }
    SlotValues slots = step.slots;
    slots["story_context"] = std::string(story);
    GenerationRequest request;
    request.prompt = render_prompt(step.prompt, slots);
    request.temperature = step.temperature;
    const GenerationResponse response = client.generate(request);
    const std::size_t source = draft.provenance.size();
    draft.provenance.push_back({step.id, field, request.prompt, response.text});

    try {
      if (trim(response.text).empty()) throw Error(ErrorCode::ClientError, "empty response");
      switch (step.target) {
        case StepTarget::Characters:
          for (auto& name : parse_options(response.text, step.count)) draft.characters.push_back(std::move(name));
          break;
        case StepTarget::Decisions: {
          auto items = numbered_items(response.text);
          if (items.size() < step.ids.size())
            throw Error(ErrorCode::TooFewOptions, "found " + std::to_string(items.size()) + " decisions");
          for (std::size_t i = 0; i < step.ids.size(); ++i)
            draft.decisions.push_back({step.ids[i], step.owners[i], items[i], {}});
          break;
        }
        case StepTarget::Options: {
          auto it = std::find_if(draft.decisions.begin(), draft.decisions.end(),
                                 [&](const DecisionPoint& d) { return d.id == step.ref; });
          if (it == draft.decisions.end())
            throw Error(ErrorCode::TopologyInconsistent, "decision '" + step.ref + "' was not elicited");
          it->options = parse_options(response.text, step.count);
          break;
        }
        case StepTarget::Probability:
          draft.chances.push_back({step.ref, step.description, parse_probability(response.text), source});
          break;
        case StepTarget::Score: {
          const double score = parse_score(response.text);
          auto it = std::find_if(draft.outcomes.begin(), draft.outcomes.end(),
                                 [&](const OutcomeScores& o) { return o.id == step.ref; });
          if (it == draft.outcomes.end()) {
            draft.outcomes.push_back({step.ref, step.description, {}, {}});
            it = std::prev(draft.outcomes.end());
          }
          it->scores[step.character] = score;
          it->sources[step.character] = source;
          break;
        }
      }
    } catch (const Error& e) {
      draft.gaps.push_back({step.id, field, e.what()});
    }
  }
  return draft;
}

// ---------------------------------------------------------------------------

namespace {

HintNode parse_hint_node(const ordered_json& j, const std::string& at) {
  if (!j.is_object()) throw SchemaError(at, "hint node must be an object");
  HintNode node;
  if (j.contains("outcome")) {
    node.kind = HintNode::Kind::Outcome;
    node.ref = get_string(j, at, "outcome");
    return node;
  }
  if (j.contains("chance")) {
    node.kind = HintNode::Kind::Chance;
    node.ref = get_string(j, at, "chance");
  } else if (j.contains("decision")) {
    node.kind = HintNode::Kind::Decision;
    node.ref = get_string(j, at, "decision");
    node.infoset = get_string(j, at, "infoset", false);
    if (node.infoset.empty()) node.infoset = node.ref;
  } else {
    throw SchemaError(at, "expected one of \"chance\", \"decision\" or \"outcome\"");
  }
  if (!j.contains("branches") || !j["branches"].is_array() || j["branches"].empty())
    throw SchemaError(at + "/branches", "expected a non-empty array");
  for (std::size_t i = 0; i < j["branches"].size(); ++i) {
    const std::string b = at + "/branches/" + std::to_string(i);
    const auto& bj = j["branches"][i];
    if (!bj.is_object()) throw SchemaError(b, "branch must be an object");
    HintNode::Branch branch;
    branch.label = get_string(bj, b, "label", false);
    if (bj.contains("option")) {
      if (!bj["option"].is_number_unsigned()) throw SchemaError(b + "/option", "expected an option index");
      branch.option = bj["option"].get<std::size_t>();
    }
    if (bj.contains("event")) {
      if (!bj["event"].is_boolean()) throw SchemaError(b + "/event", "expected a boolean");
      branch.event = bj["event"].get<bool>();
    }
    if (!bj.contains("next")) throw SchemaError(b + "/next", "missing next node");
    branch.next = std::make_shared<HintNode>(parse_hint_node(bj["next"], b + "/next"));
    node.branches.push_back(std::move(branch));
  }
  return node;
}

class DraftCompiler {
 public:
  DraftCompiler(const GameDraft& draft, const TopologyHints& hints) : draft_(draft), hints_(hints) {}

  CompiledGame compile() {
    if (!draft_.gaps.empty()) {
      std::string list;
      for (const auto& g : draft_.gaps) list += (list.empty() ? "" : ", ") + g.field;
      throw Error(ErrorCode::GapRemaining, "draft has unresolved gaps: " + list);
    }
    GameSpec spec;
    spec.title = hints_.title;
    const auto& names = hints_.players.empty() ? draft_.characters : hints_.players;
    for (const auto& name : names) {
      if (std::find(draft_.characters.begin(), draft_.characters.end(), name) == draft_.characters.end())
        throw Error(ErrorCode::TopologyInconsistent, "player '" + name + "' is not a character of the draft");
      spec.players.push_back({name, {}});
    }
    players_ = names;
    spec.root = build(hints_.root);
    return {build_game(spec), std::move(sources_)};
  }

 private:
  NodeSpec build(const HintNode& hint) {
    const NodeId id = next_id_++;
    switch (hint.kind) {
      case HintNode::Kind::Outcome: return outcome(hint, id);
      case HintNode::Kind::Chance: return chance(hint, id);
      case HintNode::Kind::Decision: return decision(hint, id);
    }
    throw Error(ErrorCode::TopologyInconsistent, "unknown hint node");
  }

  NodeSpec outcome(const HintNode& hint, NodeId id) {
    const OutcomeScores* o = draft_.outcome(hint.ref);
    if (!o) throw Error(ErrorCode::GapRemaining, "outcome '" + hint.ref + "' has no scores");
    std::vector<double> payoffs;
    for (const auto& who : players_) {
      auto it = o->scores.find(who);
      if (it == o->scores.end())
        throw Error(ErrorCode::GapRemaining, "outcome '" + hint.ref + "' has no score for " + who);
      payoffs.push_back(it->second);
      sources_.push_back({id, "payoff/" + who, o->sources.at(who)});
    }
    return NodeSpec::terminal(std::move(payoffs), o->description.empty() ? o->id : o->description);
  }

  NodeSpec chance(const HintNode& hint, NodeId id) {
    const ChancePoint* c = draft_.chance(hint.ref);
    if (!c) throw Error(ErrorCode::GapRemaining, "chance '" + hint.ref + "' has no probability");
    const auto events = std::count_if(hint.branches.begin(), hint.branches.end(),
                                      [](const HintNode::Branch& b) { return b.event; });
    if (hint.branches.size() != 2 || events != 1)
      throw Error(ErrorCode::TopologyInconsistent,
                  "chance '" + hint.ref + "' needs exactly two branches, one marked as the event");
    const Rational p = Rational::from_double(c->probability, 6);
    std::vector<std::pair<std::string, Rational>> branches;
    std::vector<NodeSpec> children;
    for (const auto& b : hint.branches) {
      if (b.label.empty()) throw Error(ErrorCode::TopologyInconsistent, "chance branches need labels");
      branches.emplace_back(b.label, b.event ? p : Rational(1) - p);
      sources_.push_back({id, "prob/" + b.label, c->source});
      children.push_back(build(*b.next));
    }
    NodeSpec spec = NodeSpec::chance(hint.ref, std::move(branches), std::move(children));
    spec.chance_set_name = c->context;
    return spec;
  }

  NodeSpec decision(const HintNode& hint, NodeId) {
    const DecisionPoint* d = draft_.decision(hint.ref);
    if (!d) throw Error(ErrorCode::GapRemaining, "decision '" + hint.ref + "' was not elicited");
    auto owner = std::find(players_.begin(), players_.end(), d->owner);
    if (owner == players_.end())
      throw Error(ErrorCode::TopologyInconsistent, "decision '" + d->id + "' belongs to unknown player " + d->owner);
    auto [it, inserted] = decision_set_.emplace(d->id, hint.infoset);
    if (!inserted && it->second != hint.infoset)
      throw Error(ErrorCode::TopologyInconsistent,
                  "decision '" + d->id + "' is assigned to infosets '" + it->second + "' and '" + hint.infoset + "'");
    auto [owner_it, fresh] = set_owner_.emplace(hint.infoset, d->owner);
    if (!fresh && owner_it->second != d->owner)
      throw Error(ErrorCode::TopologyInconsistent, "infoset '" + hint.infoset + "' mixes players");

    std::vector<std::string> labels;
    std::vector<NodeSpec> children;
    for (std::size_t k = 0; k < hint.branches.size(); ++k) {
      const auto& b = hint.branches[k];
      const std::size_t option = b.option.value_or(k);
      if (option >= d->options.size())
        throw Error(ErrorCode::TopologyInconsistent,
                    "decision '" + d->id + "' has no option " + std::to_string(option));
      labels.push_back(b.label.empty() ? d->options[option] : b.label);
      children.push_back(build(*b.next));
    }
    auto [labels_it, first] = set_labels_.emplace(hint.infoset, labels);
    if (!first && labels_it->second != labels)
      throw Error(ErrorCode::TopologyInconsistent, "infoset '" + hint.infoset + "' members offer different actions");
    NodeSpec spec = NodeSpec::decision(d->id, static_cast<PlayerIndex>(owner - players_.begin()), hint.infoset,
                                       std::move(labels), std::move(children));
    spec.infoset_name = d->context;
    return spec;
  }

  const GameDraft& draft_;
  const TopologyHints& hints_;
  std::vector<std::string> players_;
  NodeId next_id_ = 0;
  std::vector<NumberSource> sources_;
  std::map<std::string, std::string> decision_set_;
  std::map<std::string, std::string> set_owner_;
  std::map<std::string, std::vector<std::string>> set_labels_;
};

}  // namespace

TopologyHints parse_hints(std::string_view json) {
  const ordered_json doc = parse_document(json);
  check_schema(doc);
  TopologyHints hints;
  hints.title = get_string(doc, "", "title", false);
  if (doc.contains("players")) hints.players = get_strings(doc, "", "players");
  if (!doc.contains("root")) throw SchemaError("/root", "missing root");
  hints.root = parse_hint_node(doc["root"], "/root");
  return hints;
}

CompiledGame compile_draft(const GameDraft& draft, const TopologyHints& hints) {
  return DraftCompiler(draft, hints).compile();
}

}  // namespace storygame
