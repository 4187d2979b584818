#pragma once

#include "storygame/game.hpp"
#include "storygame/profile.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace storygame {

/// Per-node, per-player expected payoff under a profile.
using ValueTable = std::vector<std::vector<double>>;

/// Root-to-leaf sequence of node ids and the branch labels taken between them.
struct PathTrace {
  std::vector<NodeId> nodes;
  std::vector<std::string> labels;
};

/// Probability of reaching each node from the root. Parents are visited
/// before children since ids are in pre-order.
std::vector<double> reach_probabilities(const Game& game, const BehavioralProfile& profile);

/// Backward pass: terminal value = payoffs, internal value = expectation of
/// the children's values under chance and the profile.
ValueTable value_function(const Game& game, const BehavioralProfile& profile);

/// Probability of moving from `node` along branch `branch` (chance weight or
/// behavioral probability). Terminal nodes have no branches.
double branch_probability(const Game& game, const BehavioralProfile& profile, NodeId node, std::size_t branch);

struct Beliefs {
  std::vector<double> probs;  ///< over Infoset::members, same order
  bool uniform_fallback = false;
};

/// Conditional distribution over the members of `infoset`. Throws
/// UnreachedInfoset when the infoset has zero reach.
std::vector<double> infoset_beliefs(const Game& game, const BehavioralProfile& profile, InfosetId infoset);

/// As above, but substitutes a uniform belief at zero reach and says so.
Beliefs infoset_beliefs_or_uniform(const Game& game, const BehavioralProfile& profile, InfosetId infoset);

struct ActionValues {
  std::vector<double> values;  ///< owner's expected payoff per action
  bool uniform_fallback = false;
};

/// Belief-weighted expected payoff of each action for the infoset's owner,
/// with downstream play following `profile`. Throws UnreachedInfoset.
std::vector<double> action_values(const Game& game, const BehavioralProfile& profile, InfosetId infoset);

/// Action values for every infoset from a single reach/value pass. Unreached
/// infosets fall back to uniform beliefs and are flagged.
std::vector<ActionValues> all_action_values(const Game& game, const BehavioralProfile& profile);

/// Throws InvalidPath unless `path` starts at the root, follows labelled
/// parent-child edges and ends at a terminal.
void check_path(const Game& game, const PathTrace& path);

/// Product of the branch probabilities along a valid path.
double path_probability(const Game& game, const BehavioralProfile& profile, const PathTrace& path);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000;

struct BestResponse {
  double value = 0.0;
  std::vector<InfosetId> infosets;  ///< the player's infosets, in id order
  std::vector<std::size_t> actions;  ///< chosen action per entry of `infosets`
};

/// Advances a mixed-radix counter (last digit fastest). False after wrapping.
bool next_strategy(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix);

/// Number of pure strategies of `player` (product of action counts), saturating.
std::uint64_t pure_strategy_count(const Game& game, PlayerIndex player);

/// Enumerates every pure strategy of `player` against `profile` and returns
/// the best root value. Ties go to the lexicographically first strategy.
BestResponse best_response_value(const Game& game, const BehavioralProfile& profile, PlayerIndex player,
                                 std::uint64_t budget = kDefaultEnumerationBudget);

struct NashReport {
  bool is_epsilon_nash = false;
  double epsilon = 0.0;
  std::vector<double> root_value;
  std::vector<double> regret;
  double max_regret = 0.0;
};

NashReport verify_nash(const Game& game, const BehavioralProfile& profile, double epsilon,
                       std::uint64_t budget = kDefaultEnumerationBudget);

struct MonteCarloEstimate {
  std::vector<double> mean;
  std::vector<double> standard_error;
  std::size_t rollouts = 0;
};

/// Forward sampling of root-to-leaf plays; independent of the backward pass.
MonteCarloEstimate monte_carlo_root_value(const Game& game, const BehavioralProfile& profile, std::size_t rollouts,
                                          std::uint64_t seed);

}  // namespace storygame
