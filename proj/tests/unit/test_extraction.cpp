#include "storygame/efg_io.hpp"
#include "storygame/extraction.hpp"
#include "storygame/fixtures.hpp"
#include "storygame/generation_client.hpp"

#include <doctest.h>

#include <functional>
#include <set>

using namespace storygame;
namespace fx = storygame::fixtures;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Usage;
}

std::map<std::string, GenerationResponse> recorded(const std::function<std::string(const fx::Recording&)>& edit = {}) {
  std::map<std::string, GenerationResponse> out;
  for (const auto& r : fx::transcripts()) out[r.prompt] = {edit ? edit(r) : r.response, {}};
  return out;
}

const char* kJulietReply =
    "1. Obey her family and marry Paris (Family's preference): This is the most straightforward option.\n"
    "2. Fake her own death and reunite with Romeo (Risky): This is Friar Lawrence's plan.\n"
    "3. Take her own life (Tragic): Overwhelmed by the seemingly impossible situation.";

}  // namespace

TEST_SUITE("extraction") {
  TEST_CASE("render_prompt") {
    const PromptTemplate t{"opts", "List {k} options for {character}", {"k", "character"}, ResponseKind::OptionList};
    CHECK(render_prompt(t, {{"k", "3"}, {"character", "Juliet"}}) == "List 3 options for Juliet");
    CHECK(code_of([&] { render_prompt(t, {{"k", "3"}}); }) == ErrorCode::MissingSlot);
    const PromptTemplate undeclared{"x", "Hello {x}", {}, ResponseKind::Score};
    CHECK(code_of([&] { render_prompt(undeclared, {{"x", "1"}}); }) == ErrorCode::MissingSlot);

    const auto protocol = parse_protocol(fx::extraction_protocol());
    bool seen = false;
    for (const auto& step : protocol) {
      if (step.prompt.kind != ResponseKind::Percentage) continue;
      SlotValues slots = step.slots;
      slots["story_context"] = fx::story_context();
      const std::string text = render_prompt(step.prompt, slots);
      CHECK(text.find("Please give a number between 0 and 100.") != std::string::npos);
      seen = true;
    }
    CHECK(seen);
  }

  TEST_CASE("response kinds") {
    for (auto k : {ResponseKind::OptionList, ResponseKind::Percentage, ResponseKind::Score})
      CHECK(parse_response_kind(to_string(k)) == k);
  }

  TEST_CASE("parse_options") {
    CHECK(parse_options(kJulietReply, 3) ==
          std::vector<std::string>{"Obey her family and marry Paris", "Fake her own death and reunite with Romeo",
                                   "Take her own life"});
    CHECK(code_of([] { parse_options("1. A\n2. B", 3); }) == ErrorCode::TooFewOptions);
    CHECK(parse_options("1) A\n2) B\n3) C\n4) D", 3) == std::vector<std::string>{"A", "B", "C"});
    CHECK(parse_options("Sure!\n1: **Run**\n2: Hide", 2) == std::vector<std::string>{"Run", "Hide"});
  }

  TEST_CASE("parse_probability") {
    CHECK(parse_probability("Given the obstacles, I would estimate it to be around 30%.") == doctest::Approx(0.30));
    CHECK(parse_probability("I would put it to be around 80-90%.") == doctest::Approx(0.85));
    CHECK(code_of([] { parse_probability("no numbers here"); }) == ErrorCode::NoProbabilityFound);
    CHECK(code_of([] { parse_probability("maybe 30 or so"); }) == ErrorCode::NoProbabilityFound);
    CHECK(parse_probability("between 10 to 20 percent") == doctest::Approx(0.15));
    for (int n = 0; n <= 100; ++n) CHECK(parse_probability(std::to_string(n) + "%") == doctest::Approx(n / 100.0));
  }

  TEST_CASE("parse_score") {
    CHECK(parse_score("I'd put it at -40 for Romeo.") == -40);
    CHECK(parse_score("between 85 and 95") == 90);
    CHECK(code_of([] { parse_score("score: one hundred"); }) == ErrorCode::NoScoreFound);
    CHECK(parse_score("out of 1000 I'd say 75") == 75);
    CHECK(parse_score("+12.5") == 12.5);
  }

  TEST_CASE("parsers are deterministic") {
    for (int i = 0; i < 3; ++i) {
      CHECK(parse_probability("around 80-90%") == parse_probability("around 80-90%"));
      CHECK(parse_options(kJulietReply, 2) == parse_options(kJulietReply, 2));
    }
  }

  TEST_CASE("protocol parsing") {
    const auto protocol = parse_protocol(fx::extraction_protocol());
    CHECK(protocol.size() == fx::transcripts().size());
    CHECK(protocol.front().target == StepTarget::Characters);
    CHECK(protocol.back().target == StepTarget::Score);
    try {
      parse_protocol(R"({"schema":1,"templates":[],"steps":[{"id":"a"}]})");
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.pointer().rfind("/steps/0", 0) == 0);
    }
  }

  TEST_CASE("build_draft over the recorded transcripts") {
    FixtureClient client(recorded());
    const GameDraft d = build_draft(fx::story_context(), parse_protocol(fx::extraction_protocol()), client);
    CHECK(d.complete());
    CHECK(client.network_calls() == 0);
    CHECK(client.call_log().size() == fx::transcripts().size());
    CHECK(d.characters == std::vector<std::string>{"Romeo", "Juliet"});
    REQUIRE(d.decision("juliet-plan") != nullptr);
    CHECK(d.decision("juliet-plan")->options.size() == 3);
    CHECK(d.decision("juliet-plan")->owner == "Juliet");
    REQUIRE(d.chance("message") != nullptr);
    CHECK(d.chance("message")->probability == doctest::Approx(0.30));
    REQUIRE(d.chance("grief") != nullptr);
    CHECK(d.chance("grief")->probability == doctest::Approx(0.85));
    REQUIRE(d.outcome("reunited") != nullptr);
    CHECK(d.outcome("reunited")->scores.at("Romeo") == 90);
    CHECK(d.provenance.size() == fx::transcripts().size());
    CHECK(draft_to_json(d) == draft_to_json(d));
  }

  TEST_CASE("build_draft errors and gaps") {
    FixtureClient client(recorded());
    const auto protocol = parse_protocol(fx::extraction_protocol());
    CHECK(code_of([&] { build_draft("   ", protocol, client); }) == ErrorCode::ProtocolIncomplete);
    CHECK(client.call_log().empty());

    FixtureClient missing(recorded([](const fx::Recording& r) {
      return r.name.find("score-failed-die") != std::string::npos ? std::string("I couldn't say.") : r.response;
    }));
    const GameDraft d = build_draft(fx::story_context(), protocol, missing);
    CHECK_FALSE(d.complete());
    CHECK(d.gaps.size() == 2);
    for (const auto& g : d.gaps) CHECK(g.field.rfind("outcomes/failed-die/scores/", 0) == 0);
    CHECK(code_of([&] { compile_draft(d, parse_hints(fx::topology_hints())); }) == ErrorCode::GapRemaining);

    FixtureClient empty(std::map<std::string, GenerationResponse>{});
    CHECK(code_of([&] { build_draft(fx::story_context(), protocol, empty); }) == ErrorCode::ClientError);
  }

  TEST_CASE("compile_draft reproduces Game II") {
    FixtureClient client(recorded());
    const GameDraft d = build_draft(fx::story_context(), parse_protocol(fx::extraction_protocol()), client);
    const CompiledGame c = compile_draft(d, parse_hints(fx::topology_hints()));
    CHECK(structural_difference(c.game, fx::romeo_juliet_game2()) == std::nullopt);

    // Every probability and payoff points back at the prompt that produced it.
    std::set<std::pair<NodeId, std::string>> covered;
    for (const auto& s : c.sources) {
      REQUIRE(s.provenance < d.provenance.size());
      covered.insert({s.node, s.field});
      const auto& p = d.provenance[s.provenance];
      if (s.field.rfind("payoff/", 0) == 0)
        CHECK(p.field.substr(p.field.rfind('/') + 1) == s.field.substr(7));
      else
        CHECK(p.field.rfind("chances/", 0) == 0);
    }
    for (const auto& n : c.game.nodes()) {
      if (n.kind == NodeKind::Chance)
        for (const auto& e : n.children) CHECK(covered.count({n.id, "prob/" + e.label}) == 1);
      if (n.is_terminal())
        for (const auto& pl : c.game.players()) CHECK(covered.count({n.id, "payoff/" + pl.name}) == 1);
    }
  }

  TEST_CASE("hints that split one decision over two infosets") {
    FixtureClient client(recorded());
    const GameDraft d = build_draft(fx::story_context(), parse_protocol(fx::extraction_protocol()), client);
    std::string hints = fx::topology_hints();
    const std::string key = "\"infoset\": \"romeo-unsure\"";
    const auto at = hints.find(key);
    REQUIRE(at != std::string::npos);
    hints.replace(at, key.size(), "\"infoset\": \"romeo-elsewhere\"");
    CHECK(code_of([&] { compile_draft(d, parse_hints(hints)); }) == ErrorCode::TopologyInconsistent);
  }
}
