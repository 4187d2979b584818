#include "storygame/fixtures.hpp"
#include "storygame/qre.hpp"
#include "support/random_games.hpp"

#include <doctest.h>

#include <cmath>

using namespace storygame;
namespace fx = storygame::fixtures;

namespace {

Game one_decision(std::vector<double> payoffs) {
  GameSpec spec;
  spec.players = {{"R", {}}};
  std::vector<std::string> labels;
  std::vector<NodeSpec> leaves;
  for (std::size_t a = 0; a < payoffs.size(); ++a) {
    labels.push_back("a" + std::to_string(a));
    leaves.push_back(NodeSpec::terminal({payoffs[a]}));
  }
  spec.root = NodeSpec::decision("d", 0, "I", labels, std::move(leaves));
  return build_game(spec);
}

}  // namespace

TEST_SUITE("qre") {
  TEST_CASE("lambda zero gives uniform play") {
    const Game g = fx::romeo_juliet_game2();
    const BehavioralProfile skewed({{0.9, 0.1}, {0.2, 0.3, 0.5}});
    CHECK(logit_response(g, skewed, 0.0) == BehavioralProfile::uniform(g));
    const auto fp = qre_fixed_point(g, 0.0, BehavioralProfile::uniform(g));
    CHECK(fp.converged);
    CHECK(fp.iterations == 0);
    CHECK(fp.profile == BehavioralProfile::uniform(g));
    CHECK(qre_fixed_point(g, 0.0, skewed).profile == BehavioralProfile::uniform(g));
  }

  TEST_CASE("logistic response at Romeo's Game I infoset") {
    const Game g = fx::romeo_juliet_game1();
    const BehavioralProfile fake({{0.0, 1.0, 0.0}, {0.5, 0.5}});
    const auto r = logit_response(g, fake, 0.05);
    CHECK(r[1][1] == doctest::Approx(1.0 / (1.0 + std::exp(-0.05 * 190))).epsilon(1e-14));
    CHECK(r[1][1] == doctest::Approx(0.99993).epsilon(1e-5));
  }

  TEST_CASE("equal action values stay uniform") {
    const Game g = one_decision({5, 5, 5});
    for (double lambda : {0.0, 1.0, 1e3, 1e6}) {
      const auto r = logit_response(g, BehavioralProfile({{0.8, 0.1, 0.1}}), lambda);
      for (double p : r[0]) CHECK(p == doctest::Approx(1.0 / 3));
    }
  }

  TEST_CASE("softmax does not overflow") {
    const Game g = one_decision({1000, -1000});
    const auto r = logit_response(g, BehavioralProfile::uniform(g), 1e6);
    CHECK(r[0][0] == 1.0);
    CHECK(r[0][1] == 0.0);
  }

  TEST_CASE("fixed points at fixed lambda") {
    const Game g1 = fx::romeo_juliet_game1();
    const auto a = qre_fixed_point(g1, 10.0, BehavioralProfile::uniform(g1), 1e-10);
    CHECK(a.converged);
    CHECK(a.residual <= 1e-10);
    CHECK(a.profile[0][1] > 0.999);
    CHECK(a.profile[1][1] > 0.999);

    const Game g2 = fx::romeo_juliet_game2();
    const auto b = qre_fixed_point(g2, 50.0, BehavioralProfile::uniform(g2), 1e-10);
    CHECK(b.converged);
    CHECK(std::abs(b.profile[1][0] - b.profile[1][1]) <= 0.05);
    CHECK(b.profile[0][0] > 0.99);
  }

  TEST_CASE("non-convergence returns the best iterate, flagged") {
    const Game g2 = fx::romeo_juliet_game2();
    const auto r = qre_fixed_point(g2, 50.0, BehavioralProfile::uniform(g2), 1e-10, 3);
    CHECK_FALSE(r.converged);
    CHECK(r.residual > 1e-10);
    CHECK(r.residual == doctest::Approx(fixed_point_residual(g2, r.profile, 50.0)));
  }

  TEST_CASE("purify") {
    CHECK(purify(BehavioralProfile({{0.9995, 0.0005}})) == BehavioralProfile({{1.0, 0.0}}));
    CHECK(purify(BehavioralProfile({{0.51, 0.49}})) == BehavioralProfile({{0.51, 0.49}}));
    const auto p = purify(BehavioralProfile({{0.497, 0.001, 0.502}}));
    // The documented (0.4975, 0, 0.5025) is the renormalization rounded to 4 places.
    CHECK(p[0][0] == doctest::Approx(0.497 / 0.999).epsilon(1e-14));
    CHECK(p[0][1] == 0.0);
    CHECK(p[0][2] == doctest::Approx(0.502 / 0.999).epsilon(1e-14));
    CHECK(std::abs(p[0][0] - 0.4975) < 5e-5);
    CHECK(std::abs(p[0][2] - 0.5025) < 5e-5);
    CHECK_THROWS(purify(BehavioralProfile({{0.5, 0.5}}), 0.5));
  }

  TEST_CASE("default ladder") {
    const auto l = LambdaSchedule{}.ladder();
    REQUIRE(l.size() == 61);
    CHECK(l[0] == 0.0);
    CHECK(l[1] == 0.01);
    CHECK(l[2] == doctest::Approx(0.0125));
    CHECK(l.back() == doctest::Approx(0.01 * std::pow(1.25, 59)));
  }

  TEST_CASE("dominant action wins") {
    const Game g = one_decision({1, 0});
    const auto r = trace_lle(g);
    CHECK(r.final_profile == BehavioralProfile({{1.0, 0.0}}));
    CHECK(r.verified);
  }

  TEST_CASE("trace points are accepted fixed points with increasing lambda") {
    for (const Game& g : {fx::romeo_juliet_game1(), fx::romeo_juliet_game2()}) {
      const auto r = trace_lle(g);
      CHECK(r.stopped_on_stability);
      for (std::size_t k = 0; k < r.trace.size(); ++k) {
        if (r.trace[k].converged) CHECK(r.trace[k].residual <= 1e-10);
        if (k > 0) CHECK(r.trace[k].lambda > r.trace[k - 1].lambda);
      }
      CHECK(r.verified);
      CHECK(verify_nash(g, r.final_profile, 1e-4).is_epsilon_nash);
    }
  }

  TEST_CASE("Game I and Game II limits") {
    const auto one = trace_lle(fx::romeo_juliet_game1());
    CHECK(one.final_profile == BehavioralProfile({{0.0, 1.0, 0.0}, {0.0, 1.0}}));

    const auto two = trace_lle(fx::romeo_juliet_game2());
    CHECK(two.final_profile[0] == std::vector<double>{1.0, 0.0});
    CHECK(two.final_profile[1][0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(two.final_profile[1][1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(two.final_profile[1][2] == 0.0);
  }

  TEST_CASE("Game II fold is reported as a path jump") {
    const auto r = trace_lle(fx::romeo_juliet_game2());
    bool jump = false;
    for (const auto& i : r.issues) jump = jump || i.code == ErrorCode::PathJump;
    CHECK(jump);
  }

  TEST_CASE("deterministic traces") {
    const Game g = fx::romeo_juliet_game2();
    const auto a = trace_lle(g), b = trace_lle(g);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
      CHECK(a.trace[k].lambda == b.trace[k].lambda);
      CHECK(a.trace[k].profile == b.trace[k].profile);
      CHECK(a.trace[k].residual == b.trace[k].residual);
    }
  }

  TEST_CASE("dominant action rises monotonically along the ladder") {
    // Chance first, then a singleton infoset with strictly ranked leaves, and
    // an opponent whose play cannot change that ranking.
    GameSpec spec;
    spec.players = {{"R", {}}, {"J", {}}};
    spec.root = NodeSpec::chance(
        "c", {{"x", Rational(1, 3)}, {"y", Rational(2, 3)}},
        {NodeSpec::decision("d", 0, "I", {"good", "bad", "worse"},
                            {NodeSpec::terminal({3, 0}), NodeSpec::terminal({1, 5}), NodeSpec::terminal({0, 2})}),
         NodeSpec::decision("e", 1, "K", {"l", "r"}, {NodeSpec::terminal({2, 1}), NodeSpec::terminal({-2, 0})})});
    const Game g = build_game(spec);
    TraceOptions opt;
    opt.stable_rungs = 1000;  // walk the whole ladder
    const auto r = trace_lle(g, opt);
    CHECK(r.trace.size() == 61);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].profile[0][0] >= r.trace[k - 1].profile[0][0]);
    CHECK(r.trace.back().profile[0][0] >= 1 - 1e-6);
  }
}
