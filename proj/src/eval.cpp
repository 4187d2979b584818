#include "storygame/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace storygame {

double branch_probability(const Game& game, const BehavioralProfile& profile, NodeId id, std::size_t branch) {
  const Node& node = game.node(id);
  switch (node.kind) {
    case NodeKind::Chance: return node.chance_probs.at(branch).to_double();
    case NodeKind::Decision: return profile[node.infoset].at(branch);
    case NodeKind::Terminal: break;
  }
  throw Error(ErrorCode::InvalidPath, "terminal node " + std::to_string(id) + " has no branches");
}

namespace {

std::vector<double> reach_unchecked(const Game& game, const BehavioralProfile& profile) {
  std::vector<double> reach(game.num_nodes(), 0.0);
  reach[game.root()] = 1.0;
  for (const Node& node : game.nodes())
    for (std::size_t c = 0; c < node.children.size(); ++c)
      reach[node.children[c].child] = reach[node.id] * branch_probability(game, profile, node.id, c);
  return reach;
}

ValueTable values_unchecked(const Game& game, const BehavioralProfile& profile) {
  const std::size_t n = game.num_players();
  ValueTable values(game.num_nodes(), std::vector<double>(n, 0.0));
  for (std::size_t k = game.num_nodes(); k-- > 0;) {
    const Node& node = game.node(k);
    if (node.is_terminal()) {
      values[k] = node.payoffs;
      continue;
    }
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      const double p = branch_probability(game, profile, k, c);
      if (p == 0.0) continue;
      const auto& child = values[node.children[c].child];
      for (std::size_t i = 0; i < n; ++i) values[k][i] += p * child[i];
    }
  }
  return values;
}

Beliefs beliefs_from_reach(const Game& game, const std::vector<double>& reach, InfosetId infoset) {
  const auto& members = game.infoset(infoset).members;
  Beliefs out;
  double total = 0.0;
  for (NodeId m : members) total += reach[m];
  if (!(total > 0.0)) {
    out.probs.assign(members.size(), 1.0 / static_cast<double>(members.size()));
    out.uniform_fallback = true;
    return out;
  }
  for (NodeId m : members) out.probs.push_back(reach[m] / total);
  return out;
}

ActionValues action_values_from(const Game& game, const std::vector<double>& reach, const ValueTable& values,
                                InfosetId infoset) {
  const Infoset& set = game.infoset(infoset);
  Beliefs beliefs = beliefs_from_reach(game, reach, infoset);
  ActionValues out;
  out.uniform_fallback = beliefs.uniform_fallback;
  out.values.assign(set.actions.size(), 0.0);
  for (std::size_t k = 0; k < set.members.size(); ++k) {
    const Node& node = game.node(set.members[k]);
    for (std::size_t a = 0; a < set.actions.size(); ++a)
      out.values[a] += beliefs.probs[k] * values[node.children[a].child][set.owner];
  }
  return out;
}

}  // namespace

bool next_strategy(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    if (++digits[k] < radix[k]) return true;
    digits[k] = 0;
  }
  return false;
}

namespace {

void check_infoset_id(const Game& game, InfosetId infoset) {
  if (infoset >= game.num_infosets())
    throw Error(ErrorCode::ProfileShapeMismatch, "infoset " + std::to_string(infoset) + " does not exist");
}

}  // namespace

std::vector<double> reach_probabilities(const Game& game, const BehavioralProfile& profile) {
  check_profile(game, profile);
  return reach_unchecked(game, profile);
}

ValueTable value_function(const Game& game, const BehavioralProfile& profile) {
  check_profile(game, profile);
  return values_unchecked(game, profile);
}

Beliefs infoset_beliefs_or_uniform(const Game& game, const BehavioralProfile& profile, InfosetId infoset) {
  check_profile(game, profile);
  check_infoset_id(game, infoset);
  return beliefs_from_reach(game, reach_unchecked(game, profile), infoset);
}

std::vector<double> infoset_beliefs(const Game& game, const BehavioralProfile& profile, InfosetId infoset) {
  Beliefs b = infoset_beliefs_or_uniform(game, profile, infoset);
  if (b.uniform_fallback)
    throw Error(ErrorCode::UnreachedInfoset, "infoset " + std::to_string(infoset) + " has zero reach probability");
  return std::move(b.probs);
}

std::vector<double> action_values(const Game& game, const BehavioralProfile& profile, InfosetId infoset) {
  check_profile(game, profile);
  check_infoset_id(game, infoset);
  ActionValues q =
      action_values_from(game, reach_unchecked(game, profile), values_unchecked(game, profile), infoset);
  if (q.uniform_fallback)
    throw Error(ErrorCode::UnreachedInfoset, "infoset " + std::to_string(infoset) + " has zero reach probability");
  return std::move(q.values);
}

std::vector<ActionValues> all_action_values(const Game& game, const BehavioralProfile& profile) {
  check_profile(game, profile, 1e-9);
  const auto reach = reach_unchecked(game, profile);
  const auto values = values_unchecked(game, profile);
  std::vector<ActionValues> out;
  out.reserve(game.num_infosets());
  for (InfosetId s = 0; s < game.num_infosets(); ++s) out.push_back(action_values_from(game, reach, values, s));
  return out;
}

void check_path(const Game& game, const PathTrace& path) {
  if (path.nodes.empty() || path.nodes.front() != game.root())
    throw Error(ErrorCode::InvalidPath, "path must start at the root");
  if (path.labels.size() + 1 != path.nodes.size())
    throw Error(ErrorCode::InvalidPath, "path needs exactly one label per step");
  for (std::size_t t = 0; t + 1 < path.nodes.size(); ++t) {
    if (path.nodes[t] >= game.num_nodes()) throw Error(ErrorCode::InvalidPath, "unknown node in path");
    const auto& children = game.node(path.nodes[t]).children;
    bool ok = std::any_of(children.begin(), children.end(), [&](const Edge& e) {
      return e.child == path.nodes[t + 1] && e.label == path.labels[t];
    });
    if (!ok)
      throw Error(ErrorCode::InvalidPath, "no branch '" + path.labels[t] + "' from node " +
                                              std::to_string(path.nodes[t]) + " to node " +
                                              std::to_string(path.nodes[t + 1]));
  }
  if (path.nodes.back() >= game.num_nodes() || !game.node(path.nodes.back()).is_terminal())
    throw Error(ErrorCode::InvalidPath, "path must end at a terminal node");
}

double path_probability(const Game& game, const BehavioralProfile& profile, const PathTrace& path) {
  check_profile(game, profile);
  check_path(game, path);
  double p = 1.0;
  for (std::size_t t = 0; t + 1 < path.nodes.size(); ++t) {
    const auto& children = game.node(path.nodes[t]).children;
    for (std::size_t c = 0; c < children.size(); ++c)
      if (children[c].child == path.nodes[t + 1]) p *= branch_probability(game, profile, path.nodes[t], c);
  }
  return p;
}

std::uint64_t pure_strategy_count(const Game& game, PlayerIndex player) {
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (InfosetId s : game.infosets_of(player)) {
    const std::uint64_t k = game.infoset(s).actions.size();
    count = count > cap / k ? cap : count * k;
  }
  return count;
}

BestResponse best_response_value(const Game& game, const BehavioralProfile& profile, PlayerIndex player,
                                 std::uint64_t budget) {
  check_profile(game, profile);
  if (player >= game.num_players())
    throw Error(ErrorCode::UnknownPlayer, "player " + std::to_string(player) + " does not exist");
  const std::uint64_t count = pure_strategy_count(game, player);
  if (count > budget)
    throw Error(ErrorCode::BudgetExceeded, "player " + game.player(player).name + " has " + std::to_string(count) +
                                               " pure strategies, budget is " + std::to_string(budget));

  BestResponse best;
  best.infosets = game.infosets_of(player);
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> actions(best.infosets.size(), 0);
  std::vector<std::size_t> radix;
  for (InfosetId s : best.infosets) radix.push_back(game.infoset(s).actions.size());
  BehavioralProfile trial = profile;
  // Odometer over the player's infosets; the last infoset varies fastest so the
  // visiting order is lexicographic.
  while (true) {
    for (std::size_t k = 0; k < best.infosets.size(); ++k) {
      auto& v = trial[best.infosets[k]];
      std::fill(v.begin(), v.end(), 0.0);
      v[actions[k]] = 1.0;
    }
    const double value = values_unchecked(game, trial)[game.root()][player];
    if (value > best.value) {
      best.value = value;
      best.actions = actions;
    }
    if (!next_strategy(actions, radix)) break;
  }
  return best;
}

NashReport verify_nash(const Game& game, const BehavioralProfile& profile, double epsilon, std::uint64_t budget) {
  check_profile(game, profile);
  NashReport report;
  report.epsilon = epsilon;
  report.root_value = values_unchecked(game, profile)[game.root()];
  for (PlayerIndex i = 0; i < game.num_players(); ++i) {
    const double br = best_response_value(game, profile, i, budget).value;
    report.regret.push_back(std::max(0.0, br - report.root_value[i]));
  }
  report.max_regret = report.regret.empty() ? 0.0 : *std::max_element(report.regret.begin(), report.regret.end());
  report.is_epsilon_nash = report.max_regret <= epsilon;
  return report;
}

MonteCarloEstimate monte_carlo_root_value(const Game& game, const BehavioralProfile& profile, std::size_t rollouts,
                                          std::uint64_t seed) {
  check_profile(game, profile);
  const std::size_t n = game.num_players();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  for (std::size_t r = 0; r < rollouts; ++r) {
    NodeId at = game.root();
    while (!game.node(at).is_terminal()) {
      const Node& node = game.node(at);
      const double u = unit(rng);
      double acc = 0.0;
      std::size_t pick = node.children.size() - 1;
      for (std::size_t c = 0; c < node.children.size(); ++c) {
        acc += branch_probability(game, profile, at, c);
        if (u < acc) {
          pick = c;
          break;
        }
      }
      // Skip zero-probability tail branches chosen only by rounding.
      while (pick > 0 && branch_probability(game, profile, at, pick) == 0.0) --pick;
      at = node.children[pick].child;
    }
    const auto& payoffs = game.node(at).payoffs;
    for (std::size_t i = 0; i < n; ++i) {
      sum[i] += payoffs[i];
      sum_sq[i] += payoffs[i] * payoffs[i];
    }
  }
  MonteCarloEstimate est;
  est.rollouts = rollouts;
  const double m = static_cast<double>(rollouts);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = sum[i] / m;
    const double var = rollouts > 1 ? std::max(0.0, (sum_sq[i] - m * mean * mean) / (m - 1.0)) : 0.0;
    est.mean.push_back(mean);
    est.standard_error.push_back(std::sqrt(var / m));
  }
  return est;
}

}  // namespace storygame
