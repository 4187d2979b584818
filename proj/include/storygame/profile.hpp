#pragma once

#include "storygame/game.hpp"

#include <vector>

namespace storygame {

namespace tolerance {
/// Structural identities (martingale, reach sums, tree vs tensor).
inline constexpr double structural = 1e-9;
/// Game-theoretic comparisons (regret, best-response gains).
inline constexpr double game = 1e-6;
/// Per-infoset probability vectors must sum to one within this.
inline constexpr double profile_sum = 1e-12;
}  // namespace tolerance

/// Behavioral strategy profile: one probability vector per infoset, indexed by
/// InfosetId, over that infoset's actions in order.
class BehavioralProfile {
 public:
  BehavioralProfile() = default;
  explicit BehavioralProfile(std::vector<std::vector<double>> probs) : probs_(std::move(probs)) {}

  static BehavioralProfile uniform(const Game& game);
  /// Every infoset plays the given action index (clamped to the last action).
  static BehavioralProfile pure(const Game& game, const std::vector<std::size_t>& actions);

  std::size_t size() const { return probs_.size(); }
  const std::vector<double>& operator[](InfosetId id) const { return probs_.at(id); }
  std::vector<double>& operator[](InfosetId id) { return probs_.at(id); }
  const std::vector<std::vector<double>>& data() const { return probs_; }

  bool is_interior() const;
  /// Sup-norm distance; profiles must have the same shape.
  double distance(const BehavioralProfile& other) const;

  friend bool operator==(const BehavioralProfile&, const BehavioralProfile&) = default;

 private:
  std::vector<std::vector<double>> probs_;
};

/// Throws ProfileShapeMismatch unless `profile` has one distribution per
/// infoset of `game`, each non-negative and summing to 1 within `sum_tol`.
void check_profile(const Game& game, const BehavioralProfile& profile,
                   double sum_tol = tolerance::profile_sum);

}  // namespace storygame
