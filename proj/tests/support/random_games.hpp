#pragma once

// Seeded random extensive-form games for property tests. Games have perfect
// recall and no absentmindedness: decision nodes only share an infoset when
// their owner's own history (infosets visited, actions taken) is identical.

#include "storygame/eval.hpp"
#include "storygame/game.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace storygame::testing {

struct RandomGameOptions {
  std::size_t max_nodes = 30;
  std::size_t players = 2;
  std::size_t max_actions = 3;
  double chance_weight = 0.25;
  double terminal_weight = 0.3;
  double merge_probability = 0.6;
};

class RandomGameBuilder {
 public:
  RandomGameBuilder(std::mt19937_64& rng, RandomGameOptions options) : rng_(rng), options_(options) {}

  Game build() {
    reserved_ = 1;
    next_key_ = 0;
    groups_.clear();
    GameSpec spec;
    spec.title = "random";
    for (std::size_t p = 0; p < options_.players; ++p) spec.players.push_back({"P" + std::to_string(p + 1), {}});
    spec.root = node(std::vector<std::string>(options_.players), 0);
    return build_game(spec);
  }

 private:
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

  NodeSpec leaf() {
    std::vector<double> payoffs;
    for (std::size_t p = 0; p < options_.players; ++p)
      payoffs.push_back(std::round(std::uniform_real_distribution<double>(-100.0, 100.0)(rng_) * 1000.0) / 1000.0);
    return NodeSpec::terminal(std::move(payoffs), "o" + std::to_string(outcome_++));
  }

  // `history[p]` encodes player p's own infosets and actions on the path.
  NodeSpec node(const std::vector<std::string>& history, std::size_t depth) {
    const std::size_t k = pick(2, options_.max_actions);
    const bool room = reserved_ + k <= options_.max_nodes;
    if (!room || (depth > 0 && uniform() < options_.terminal_weight)) return leaf();
    reserved_ += k;
    std::vector<NodeSpec> children;
    if (uniform() < options_.chance_weight) {
      std::vector<std::pair<std::string, Rational>> branches;
      std::vector<long long> weights;
      long long total = 0;
      for (std::size_t a = 0; a < k; ++a) {
        weights.push_back(static_cast<long long>(pick(1, 9)));
        total += weights.back();
      }
      for (std::size_t a = 0; a < k; ++a) {
        branches.emplace_back("c" + std::to_string(a), Rational(weights[a], total));
        children.push_back(node(history, depth + 1));
      }
      return NodeSpec::chance("n", std::move(branches), std::move(children));
    }
    const std::size_t player = pick(0, options_.players - 1);
    auto& group = groups_[{player, history[player] + "|" + std::to_string(k)}];
    std::string key;
    if (!group.empty() && uniform() < options_.merge_probability) {
      key = group[pick(0, group.size() - 1)];
    } else {
      key = "I" + std::to_string(next_key_++);
      group.push_back(key);
    }
    std::vector<std::string> labels;
    for (std::size_t a = 0; a < k; ++a) {
      labels.push_back("a" + std::to_string(a));
      auto next = history;
      next[player] += key + ":" + std::to_string(a) + ";";
      children.push_back(node(next, depth + 1));
    }
    return NodeSpec::decision("n", player, key, std::move(labels), std::move(children));
  }

  std::mt19937_64& rng_;
  RandomGameOptions options_;
  std::size_t reserved_ = 1;
  std::size_t next_key_ = 0;
  std::size_t outcome_ = 0;
  std::map<std::pair<std::size_t, std::string>, std::vector<std::string>> groups_;
};

inline Game random_game(std::mt19937_64& rng, const RandomGameOptions& options = {}) {
  return RandomGameBuilder(rng, options).build();
}

/// Every probability at least 0.05 before normalization.
inline BehavioralProfile random_interior_profile(const Game& game, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  std::vector<std::vector<double>> probs;
  for (const auto& set : game.infosets()) {
    std::vector<double> v(set.actions.size());
    double sum = 0.0;
    for (double& p : v) sum += (p = dist(rng));
    for (double& p : v) p /= sum;
    probs.push_back(std::move(v));
  }
  return BehavioralProfile(std::move(probs));
}

}  // namespace storygame::testing
