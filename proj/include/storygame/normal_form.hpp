#pragma once

#include "storygame/eval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace storygame {

/// A reduced pure strategy: an action for every infoset the player can reach
/// given their own earlier choices, nothing for the rest.
///
/// Mapping back to behavioral form: a behavioral profile σ induces the mixed
/// strategy P(s) = Π over the infosets s assigns of σ(s(I) | I). Unassigned
/// infosets marginalize out, which is why they can be merged.
struct ReducedStrategy {
  std::vector<std::optional<std::size_t>> actions;  ///< per entry of the player's infoset list

  std::string label(const Game& game, const std::vector<InfosetId>& infosets) const;
  friend bool operator==(const ReducedStrategy&, const ReducedStrategy&) = default;
  friend auto operator<=>(const ReducedStrategy&, const ReducedStrategy&) = default;
};

/// Payoff tensor over reduced pure-strategy profiles, expectation over chance.
struct NormalForm {
  std::vector<std::string> player_names;
  std::vector<std::vector<InfosetId>> infosets;             ///< per player
  std::vector<std::vector<ReducedStrategy>> strategies;     ///< per player
  std::vector<std::vector<double>> payoffs;                 ///< row-major over `shape()`; one vector per cell

  std::vector<std::size_t> shape() const;
  std::size_t num_cells() const { return payoffs.size(); }
  std::size_t flat_index(const std::vector<std::size_t>& profile) const;
  const std::vector<double>& at(const std::vector<std::size_t>& profile) const { return payoffs.at(flat_index(profile)); }
};

NormalForm to_normal_form(const Game& game, std::uint64_t budget = kDefaultEnumerationBudget);

/// Every pure profile where no unilateral pure deviation gains more than `tol`.
std::vector<std::vector<std::size_t>> enumerate_pure_nash(const NormalForm& nf, double tol = 1e-9);

/// Behavioral profile that plays a reduced pure-strategy profile. Infosets
/// left unassigned play their first action.
BehavioralProfile to_behavioral(const Game& game, const NormalForm& nf, const std::vector<std::size_t>& profile);

/// Product-form mixed strategy over each player's reduced strategies.
std::vector<std::vector<double>> to_mixed(const NormalForm& nf, const BehavioralProfile& profile);

/// Expected payoff vector of independent mixed strategies on the tensor.
std::vector<double> expected_payoff(const NormalForm& nf, const std::vector<std::vector<double>>& mixed);

}  // namespace storygame
