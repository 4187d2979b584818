#include "storygame/profile.hpp"

#include <algorithm>
#include <cmath>

namespace storygame {

BehavioralProfile BehavioralProfile::uniform(const Game& game) {
  std::vector<std::vector<double>> probs;
  probs.reserve(game.num_infosets());
  for (const auto& set : game.infosets()) {
    const double n = static_cast<double>(set.actions.size());
    probs.emplace_back(set.actions.size(), 1.0 / n);
  }
  return BehavioralProfile(std::move(probs));
}

BehavioralProfile BehavioralProfile::pure(const Game& game, const std::vector<std::size_t>& actions) {
  std::vector<std::vector<double>> probs;
  for (const auto& set : game.infosets()) {
    std::vector<double> v(set.actions.size(), 0.0);
    std::size_t a = set.id < actions.size() ? actions[set.id] : 0;
    v[std::min(a, v.size() - 1)] = 1.0;
    probs.push_back(std::move(v));
  }
  return BehavioralProfile(std::move(probs));
}

bool BehavioralProfile::is_interior() const {
  for (const auto& v : probs_)
    for (double p : v)
      if (!(p > 0.0)) return false;
  return true;
}

double BehavioralProfile::distance(const BehavioralProfile& other) const {
  double d = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i)
    for (std::size_t a = 0; a < probs_[i].size(); ++a) d = std::max(d, std::abs(probs_[i][a] - other.probs_.at(i).at(a)));
  return d;
}

void check_profile(const Game& game, const BehavioralProfile& profile, double sum_tol) {
  if (profile.size() != game.num_infosets())
    throw Error(ErrorCode::ProfileShapeMismatch, "profile has " + std::to_string(profile.size()) +
                                                     " infosets, game has " + std::to_string(game.num_infosets()));
  for (const auto& set : game.infosets()) {
    const auto& v = profile[set.id];
    if (v.size() != set.actions.size())
      throw Error(ErrorCode::ProfileShapeMismatch,
                  "infoset " + std::to_string(set.id) + " expects " + std::to_string(set.actions.size()) + " actions");
    double sum = 0.0;
    for (double p : v) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw Error(ErrorCode::ProfileShapeMismatch, "infoset " + std::to_string(set.id) + " has a negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > sum_tol)
      throw Error(ErrorCode::ProfileShapeMismatch, "infoset " + std::to_string(set.id) + " probabilities do not sum to 1");
  }
}

}  // namespace storygame
