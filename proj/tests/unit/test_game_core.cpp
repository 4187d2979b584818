#include "storygame/fixtures.hpp"
#include "storygame/game.hpp"
#include "support/random_games.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>

using namespace storygame;
namespace fx = storygame::fixtures;

namespace {

// Root decision of P1 with two terminal children.
GameData two_leaf_data() {
  GameData d;
  d.players = {{"R", {}}, {"J", {}}};
  Node root;
  root.id = 0;
  root.kind = NodeKind::Decision;
  root.player = 0;
  root.infoset = 0;
  root.children = {{"l", 1}, {"r", 2}};
  Node a;
  a.id = 1;
  a.payoffs = {1, 2};
  Node b;
  b.id = 2;
  b.payoffs = {3, 4};
  d.nodes = {root, a, b};
  d.infosets = {{0, 0, "", {0}, {"l", "r"}}};
  return d;
}

bool has_code(const std::vector<Diagnostic>& ds, ErrorCode code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Usage;
}

std::size_t romeo_infoset_size(const Game& g) {
  for (const auto& s : g.infosets())
    if (s.owner == fx::kRomeo) return s.members.size();
  return 0;
}

}  // namespace

TEST_SUITE("game_core") {
  TEST_CASE("single terminal spec gives a one-node game") {
    GameSpec spec;
    spec.players = {{"R", {}}, {"J", {}}};
    spec.root = NodeSpec::terminal({0, 0});
    const Game g = build_game(spec);
    CHECK(g.num_nodes() == 1);
    CHECK(g.num_infosets() == 0);
    CHECK(g.node(g.root()).payoffs == std::vector<double>{0, 0});
  }

  TEST_CASE("Game II fixture shape") {
    const Game g = fx::romeo_juliet_game2();
    CHECK(g.num_players() == 2);
    // A, grief member + 2 leaves, B, marry leaf, message, reaches leaf,
    // fails member + 2 leaves, suicide member + 2 leaves.
    CHECK(g.num_nodes() == 14);
    CHECK(g.node(g.root()).kind == NodeKind::Chance);
    CHECK(romeo_infoset_size(g) == 3);
    CHECK(fx::game2_juliet_node() == 4);
    CHECK(g.node(4).name == "B");
  }

  TEST_CASE("chance probabilities must sum to exactly one") {
    GameSpec spec;
    spec.players = {{"R", {}}};
    spec.root = NodeSpec::chance("c", {{"x", Rational::parse("0.3")}, {"y", Rational::parse("0.6")}},
                                 {NodeSpec::terminal({0}), NodeSpec::terminal({1})});
    CHECK(code_of([&] { build_game(spec); }) == ErrorCode::ChanceProbsNotNormalized);

    spec.root.probs = {Rational(1, 3), Rational(2, 3)};
    CHECK_NOTHROW(build_game(spec));
  }

  TEST_CASE("duplicate node ids") {
    GameData d = two_leaf_data();
    d.nodes[2].id = 1;
    d.nodes[0].children[1].child = 1;
    CHECK(has_code(validate(d), ErrorCode::DuplicateNodeId));
    CHECK_THROWS_AS(Game::from_data(d), ValidationError);
  }

  TEST_CASE("infoset shape mismatch") {
    GameSpec spec;
    spec.players = {{"R", {}}};
    spec.root = NodeSpec::chance(
        "c", {{"x", Rational(1, 2)}, {"y", Rational(1, 2)}},
        {NodeSpec::decision("a", 0, "I", {"l", "r"}, {NodeSpec::terminal({0}), NodeSpec::terminal({1})}),
         NodeSpec::decision("b", 0, "I", {"l", "m", "r"},
                            {NodeSpec::terminal({0}), NodeSpec::terminal({1}), NodeSpec::terminal({2})})});
    CHECK(code_of([&] { build_game(spec); }) == ErrorCode::InfosetShapeMismatch);

    spec.root.children[1] =
        NodeSpec::decision("b", 0, "I", {"r", "l"}, {NodeSpec::terminal({0}), NodeSpec::terminal({1})});
    CHECK(code_of([&] { build_game(spec); }) == ErrorCode::InfosetShapeMismatch);
  }

  TEST_CASE("infoset mixing two players") {
    GameData d;
    d.players = {{"R", {}}, {"J", {}}};
    Node root;
    root.id = 0;
    root.kind = NodeKind::Chance;
    root.chance_probs = {Rational(1, 2), Rational(1, 2)};
    root.children = {{"x", 1}, {"y", 2}};
    Node a;
    a.id = 1;
    a.kind = NodeKind::Decision;
    a.player = 0;
    a.children = {{"l", 3}};
    Node b = a;
    b.id = 2;
    b.player = 1;
    b.children = {{"l", 4}};
    Node t3;
    t3.id = 3;
    t3.payoffs = {0, 0};
    Node t4 = t3;
    t4.id = 4;
    d.nodes = {root, a, b, t3, t4};
    d.infosets = {{0, 0, "", {1, 2}, {"l"}}};
    CHECK(has_code(validate(d), ErrorCode::InfosetOwnerMismatch));
  }

  TEST_CASE("unreachable node") {
    GameData d = two_leaf_data();
    Node stray;
    stray.id = 7;
    stray.payoffs = {0, 0};
    d.nodes.push_back(stray);
    CHECK(has_code(validate(d), ErrorCode::OrphanNode));
  }

  TEST_CASE("unknown child and cycle") {
    GameData d = two_leaf_data();
    d.nodes[0].children[1].child = 9;
    CHECK(has_code(validate(d), ErrorCode::UnknownNode));

    GameData c = two_leaf_data();
    c.nodes[1].kind = NodeKind::Decision;
    c.nodes[1].infoset = 1;
    c.nodes[1].children = {{"back", 0}};
    c.infosets.push_back({1, 0, "", {1}, {"back"}});
    CHECK_FALSE(validate(c).empty());
  }

  TEST_CASE("fixtures validate cleanly with perfect recall") {
    CHECK(validate(fx::romeo_juliet_game2()).empty());
    CHECK(validate(fx::romeo_juliet_game1()).empty());
  }

  TEST_CASE("perfect recall violation is a warning") {
    // P1 moves, then P1 cannot tell which action it took.
    GameSpec spec;
    spec.players = {{"R", {}}};
    spec.root = NodeSpec::decision(
        "a", 0, "first", {"l", "r"},
        {NodeSpec::decision("b", 0, "second", {"x", "y"}, {NodeSpec::terminal({0}), NodeSpec::terminal({1})}),
         NodeSpec::decision("c", 0, "second", {"x", "y"}, {NodeSpec::terminal({2}), NodeSpec::terminal({3})})});
    const Game g = build_game(spec);
    REQUIRE(g.warnings().size() >= 1);
    CHECK(g.warnings()[0].severity == Severity::Warning);
    CHECK(g.warnings()[0].code == ErrorCode::PerfectRecall);
    CHECK_FALSE(g.warnings()[0].infosets.empty());
  }

  TEST_CASE("ids are canonical pre-order") {
    const Game g = fx::romeo_juliet_game2();
    for (const auto& n : g.nodes()) {
      for (const auto& e : n.children) {
        CHECK(e.child > n.id);
        CHECK(g.node(e.child).parent == n.id);
      }
    }
    InfosetId expected = 0;
    std::vector<bool> seen(g.num_infosets(), false);
    for (const auto& n : g.nodes()) {
      if (n.kind != NodeKind::Decision || seen[n.infoset]) continue;
      CHECK(n.infoset == expected++);
      seen[n.infoset] = true;
    }
  }

  TEST_CASE("tree property on random games") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
      const Game g = testing::random_game(rng);
      std::size_t edges = 0;
      for (const auto& n : g.nodes()) edges += n.children.size();
      CHECK(edges == g.num_nodes() - 1);
      std::size_t decisions = 0, members = 0;
      for (const auto& n : g.nodes()) decisions += n.kind == NodeKind::Decision;
      for (const auto& s : g.infosets()) members += s.members.size();
      CHECK(decisions == members);
      CHECK(g.warnings().empty());
    }
  }

  TEST_CASE("reroot at the root is the identity") {
    const Game g = fx::romeo_juliet_game2();
    const Game same = reroot(g, g.root());
    CHECK(structural_difference(same, g) == std::nullopt);
  }

  TEST_CASE("reroot at B gives Game I") {
    const Game g2 = fx::romeo_juliet_game2();
    const Game g1 = reroot(g2, fx::game2_juliet_node());
    CHECK(g1.num_nodes() == g2.num_nodes() - 4);
    CHECK(g1.num_nodes() == 10);
    CHECK(romeo_infoset_size(g2) == 3);
    CHECK(romeo_infoset_size(g1) == 2);
    CHECK(g1.node(g1.root()).name == "B");
    CHECK(structural_difference(g1, fx::romeo_juliet_game1()) == std::nullopt);
    // Original untouched.
    CHECK(g2.num_nodes() == 14);
  }

  TEST_CASE("reroot keeps payoffs") {
    const Game g2 = fx::romeo_juliet_game2();
    const Game g1 = fx::romeo_juliet_game1();
    std::vector<std::vector<double>> a, b;
    for (const auto& n : g2.nodes())
      if (n.is_terminal() && n.id > fx::game2_juliet_node()) a.push_back(n.payoffs);
    for (const auto& n : g1.nodes())
      if (n.is_terminal()) b.push_back(n.payoffs);
    CHECK(a == b);
  }

  TEST_CASE("reroot at a leaf and at an unknown node") {
    const Game g2 = fx::romeo_juliet_game2();
    const Game leaf = reroot(g2, 2);
    CHECK(leaf.num_nodes() == 1);
    CHECK(leaf.num_infosets() == 0);
    CHECK(leaf.node(0).payoffs == g2.node(2).payoffs);
    CHECK(code_of([&] { reroot(g2, 99); }) == ErrorCode::UnknownNode);
  }
}
