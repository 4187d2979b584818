#include "storygame/efg_io.hpp"
#include "storygame/fixtures.hpp"
#include "support/random_games.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace storygame;
namespace fx = storygame::fixtures;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::filesystem::path kSource = STORYGAME_SOURCE_DIR;

}  // namespace

TEST_SUITE("efg_io") {
  TEST_CASE("one-node document") {
    const Game g = parse_efg("EFG 2 R \"t\" { \"R\" \"J\" }\nt \"\" 1 \"end\" { -100, -100 }\n");
    CHECK(g.num_nodes() == 1);
    CHECK(g.node(0).payoffs == std::vector<double>{-100, -100});
    CHECK(g.title() == "t");
    const std::string text = write_efg(g);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text == "EFG 2 R \"t\" { \"R\" \"J\" }\nt \"\" 1 \"end\" { -100, -100 }\n");
  }

  TEST_CASE("Game II round trip through .efg") {
    const Game g = fx::romeo_juliet_game2();
    const std::string text = write_efg(g);
    const Game back = parse_efg(text);
    CHECK(structural_difference(back, g) == std::nullopt);
    CHECK(write_efg(back) == text);

    // One record per node, the first a chance record.
    std::istringstream lines(text);
    std::string line;
    std::vector<std::string> records;
    while (std::getline(lines, line))
      if (!line.empty() && (line[0] == 'c' || line[0] == 'p' || line[0] == 't')) records.push_back(line);
    CHECK(records.size() == g.num_nodes());
    CHECK(records.front().rfind("c \"A\"", 0) == 0);
  }

  TEST_CASE("rational chance probabilities") {
    const Game g = parse_efg(
        "EFG 2 R \"m\" { \"R\" }\n"
        "c \"msg\" 1 \"\" { \"reaches\" 3/10 \"fails\" 7/10 } 0\n"
        "t \"\" 1 \"a\" { 1 }\n"
        "t \"\" 2 \"b\" { 2 }\n");
    CHECK(g.node(0).chance_probs[0] == Rational(3, 10));
    CHECK(g.node(0).chance_probs[1].to_double() == doctest::Approx(0.7).epsilon(1e-15));
  }

  TEST_CASE("hand-written sample") {
    const Game g = parse_efg(slurp(kSource / "tests/data/trust.efg"));
    CHECK(g.title() == "Trust with a market");
    CHECK(g.num_players() == 2);
    CHECK(g.num_nodes() == 9);
    CHECK(g.num_infosets() == 2);
    const Node& market = g.node(2);
    CHECK(market.kind == NodeKind::Chance);
    CHECK(market.chance_probs == std::vector<Rational>{Rational(7, 10), Rational(3, 10)});
    const Infoset& trustee = g.infoset(1);
    CHECK(trustee.owner == 1);
    CHECK(trustee.members == std::vector<NodeId>{3, 6});
    CHECK(trustee.actions == std::vector<std::string>{"share", "grab"});
    CHECK(g.node(8).payoffs == std::vector<double>{0, 4});
    CHECK(g.node(7).payoffs == std::vector<double>{0.5, 0.5});
    // Idempotence of write ∘ parse.
    const std::string once = write_efg(g);
    CHECK(write_efg(parse_efg(once)) == once);
  }

  TEST_CASE("syntax errors carry a position") {
    try {
      parse_efg("EFG 2 R \"t\" { \"R\" }\nt \"\" 1 \"x\" { 1 \nq");
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.code() == ErrorCode::SyntaxError);
      CHECK(e.line() == 3);
      CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(parse_efg("EFG 3 R \"t\" { \"R\" }"), SyntaxError);
    CHECK_THROWS_AS(parse_efg(""), SyntaxError);
  }

  TEST_CASE("normalization and semantic errors") {
    auto code = [](const std::string& text) {
      try {
        parse_efg(text);
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::Usage;
    };
    const std::string head = "EFG 2 R \"t\" { \"R\" \"J\" }\n";
    CHECK(code(head + "c \"\" 1 \"\" { \"a\" 0.3 \"b\" 0.6 } 0\nt \"\" 1 \"\" { 0, 0 }\nt \"\" 2 \"\" { 0, 0 }\n") ==
          ErrorCode::NormalizationError);
    CHECK(code(head + "p \"\" 3 1 \"\" { \"a\" } 0\nt \"\" 1 \"\" { 0, 0 }\n") == ErrorCode::SemanticError);
    CHECK(code(head + "t \"\" 1 \"\" { 0, 0, 0 }\n") == ErrorCode::SemanticError);
    CHECK(code(head + "p \"\" 1 1 \"\" { \"a\" } 2 \"bonus\" { 1, 1 }\nt \"\" 1 \"\" { 0, 0 }\n") ==
          ErrorCode::SemanticError);
    CHECK(code(head +
               "c \"\" 1 \"\" { \"x\" 1/2 \"y\" 1/2 } 0\n"
               "p \"\" 1 1 \"\" { \"a\" \"b\" } 0\nt \"\" 1 \"\" { 0, 0 }\nt \"\" 2 \"\" { 0, 0 }\n"
               "p \"\" 1 1 \"\" { \"a\" \"c\" } 0\nt \"\" 3 \"\" { 0, 0 }\nt \"\" 4 \"\" { 0, 0 }\n") ==
          ErrorCode::SemanticError);
  }

  TEST_CASE("minimal JSON") {
    const Game g = parse_json(R"({"players":["R","J"],"root":{"kind":"terminal","payoffs":[0,0]}})");
    CHECK(g.num_nodes() == 1);
    CHECK(g.num_players() == 2);
  }

  TEST_CASE("JSON errors carry a pointer") {
    try {
      parse_json(R"({"players":["R","J"],"root":{"kind":"terminal","payoffs":[0]}})");
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.code() == ErrorCode::SchemaError);
      CHECK(e.pointer() == "/root/payoffs");
    }
    try {
      parse_json(R"({"schema":1,"players":["R"],"root":{"kind":"chance","branches":[)"
                 R"({"label":"a","prob":"1/2","child":{"kind":"terminal","payoffs":[1]}},)"
                 R"({"label":"b","prob":"x","child":{"kind":"terminal","payoffs":[1]}}]}})");
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.pointer() == "/root/branches/1/prob");
    }
    CHECK_THROWS_AS(parse_json(R"({"schema":2,"players":["R"],"root":{"kind":"terminal","payoffs":[1]}})"),
                    SchemaError);
    CHECK_THROWS_AS(parse_json("{not json"), SchemaError);
  }

  TEST_CASE("JSON round trip keeps narrative metadata") {
    for (const Game& g : {fx::romeo_juliet_game1(), fx::romeo_juliet_game2()}) {
      const std::string text = write_json(g);
      const Game back = parse_json(text);
      CHECK(structural_difference(back, g) == std::nullopt);
      CHECK(write_json(back) == text);
      CHECK(back.players()[0].description == g.players()[0].description);
      CHECK(back.story_path() == g.story_path());
      CHECK(back.node(back.root()).note == g.node(g.root()).note);
    }
  }

  TEST_CASE("format detection") {
    CHECK(detect_format("  {\"players\": []}") == GameFormat::Json);
    CHECK(detect_format("EFG 2 R") == GameFormat::Efg);
    const Game g = fx::romeo_juliet_game1();
    CHECK(structural_difference(parse_game(write_game(g, GameFormat::Json)), g) == std::nullopt);
    CHECK(structural_difference(parse_game(write_game(g, GameFormat::Efg)), g) == std::nullopt);
  }

  TEST_CASE("checked-in fixtures match the emitted bytes") {
    const auto tmp = std::filesystem::temp_directory_path() / "storygame_fixture_check";
    std::filesystem::remove_all(tmp);
    fx::emit(tmp);
    for (const auto& entry : std::filesystem::recursive_directory_iterator(tmp)) {
      if (!entry.is_regular_file()) continue;
      const auto rel = std::filesystem::relative(entry.path(), tmp);
      INFO(rel.string());
      CHECK(slurp(kSource / "fixtures" / rel) == slurp(entry.path()));
    }
    CHECK(structural_difference(parse_efg(slurp(kSource / "fixtures/game2.efg")), fx::romeo_juliet_game2()) ==
          std::nullopt);
    CHECK(structural_difference(parse_json(slurp(kSource / "fixtures/game2.json")), fx::romeo_juliet_game2()) ==
          std::nullopt);
    std::filesystem::remove_all(tmp);
  }

  TEST_CASE("random games round trip in both formats") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
      const Game g = testing::random_game(rng);
      const std::string efg = write_efg(g);
      const Game from_efg = parse_efg(efg);
      INFO(efg);
      CHECK(structural_difference(from_efg, g) == std::nullopt);
      CHECK(write_efg(from_efg) == efg);
      const std::string json = write_json(g);
      CHECK(structural_difference(parse_json(json), g) == std::nullopt);
      CHECK(write_json(parse_json(json)) == json);
    }
  }
}
