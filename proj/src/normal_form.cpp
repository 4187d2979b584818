#include "storygame/normal_form.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace storygame {

std::string ReducedStrategy::label(const Game& game, const std::vector<InfosetId>& infosets) const {
  std::string out;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (!out.empty()) out += ",";
    out += actions[k] ? game.infoset(infosets[k]).actions[*actions[k]] : "*";
  }
  return out.empty() ? "-" : out;
}

std::vector<std::size_t> NormalForm::shape() const {
  std::vector<std::size_t> dims;
  for (const auto& s : strategies) dims.push_back(s.size());
  return dims;
}

std::size_t NormalForm::flat_index(const std::vector<std::size_t>& profile) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < strategies.size(); ++i) index = index * strategies[i].size() + profile.at(i);
  return index;
}

namespace {

std::vector<ReducedStrategy> reduced_strategies(const Game& game, PlayerIndex player,
                                                const std::vector<InfosetId>& infosets) {
  std::map<InfosetId, std::size_t> position;
  std::vector<std::size_t> radix;
  for (std::size_t k = 0; k < infosets.size(); ++k) {
    position[infosets[k]] = k;
    radix.push_back(game.infoset(infosets[k]).actions.size());
  }
  std::vector<ReducedStrategy> out;
  std::set<ReducedStrategy> seen;
  std::vector<std::size_t> full(infosets.size(), 0);
  do {
    ReducedStrategy reduced;
    reduced.actions.assign(infosets.size(), std::nullopt);
    std::vector<NodeId> stack{game.root()};
    while (!stack.empty()) {
      const Node& node = game.node(stack.back());
      stack.pop_back();
      if (node.kind == NodeKind::Decision && node.player == player) {
        const std::size_t k = position.at(node.infoset);
        reduced.actions[k] = full[k];
        stack.push_back(node.children[full[k]].child);
        continue;
      }
      for (const auto& e : node.children) stack.push_back(e.child);
    }
    if (seen.insert(reduced).second) out.push_back(std::move(reduced));
  } while (next_strategy(full, radix));
  return out;
}

}  // namespace

NormalForm to_normal_form(const Game& game, std::uint64_t budget) {
  NormalForm nf;
  std::uint64_t cells = 1;
  for (PlayerIndex i = 0; i < game.num_players(); ++i) {
    const std::uint64_t full = pure_strategy_count(game, i);
    if (full > budget)
      throw Error(ErrorCode::BudgetExceeded,
                  "player " + game.player(i).name + " has " + std::to_string(full) + " pure strategies");
    nf.player_names.push_back(game.player(i).name);
    nf.infosets.push_back(game.infosets_of(i));
    nf.strategies.push_back(reduced_strategies(game, i, nf.infosets.back()));
    cells *= nf.strategies.back().size();
    if (cells > budget) throw Error(ErrorCode::BudgetExceeded, "normal form has more than " + std::to_string(budget) + " cells");
  }
  const auto dims = nf.shape();
  std::vector<std::size_t> profile(dims.size(), 0);
  nf.payoffs.reserve(cells);
  do {
    nf.payoffs.push_back(value_function(game, to_behavioral(game, nf, profile))[game.root()]);
  } while (next_strategy(profile, dims));
  return nf;
}

BehavioralProfile to_behavioral(const Game& game, const NormalForm& nf, const std::vector<std::size_t>& profile) {
  std::vector<std::size_t> actions(game.num_infosets(), 0);
  for (std::size_t i = 0; i < nf.strategies.size(); ++i) {
    const ReducedStrategy& s = nf.strategies[i].at(profile.at(i));
    for (std::size_t k = 0; k < s.actions.size(); ++k)
      if (s.actions[k]) actions[nf.infosets[i][k]] = *s.actions[k];
  }
  return BehavioralProfile::pure(game, actions);
}

std::vector<std::vector<std::size_t>> enumerate_pure_nash(const NormalForm& nf, double tol) {
  std::vector<std::vector<std::size_t>> out;
  const auto dims = nf.shape();
  std::vector<std::size_t> profile(dims.size(), 0);
  if (nf.payoffs.empty()) return out;
  do {
    const auto& base = nf.at(profile);
    bool stable = true;
    for (std::size_t i = 0; stable && i < dims.size(); ++i) {
      auto deviation = profile;
      for (std::size_t s = 0; s < dims[i]; ++s) {
        deviation[i] = s;
        if (nf.at(deviation)[i] > base[i] + tol) {
          stable = false;
          break;
        }
      }
    }
    if (stable) out.push_back(profile);
  } while (next_strategy(profile, dims));
  return out;
}

std::vector<std::vector<double>> to_mixed(const NormalForm& nf, const BehavioralProfile& profile) {
  std::vector<std::vector<double>> mixed;
  for (std::size_t i = 0; i < nf.strategies.size(); ++i) {
    std::vector<double> dist;
    for (const auto& s : nf.strategies[i]) {
      double p = 1.0;
      for (std::size_t k = 0; k < s.actions.size(); ++k)
        if (s.actions[k]) p *= profile[nf.infosets[i][k]].at(*s.actions[k]);
      dist.push_back(p);
    }
    mixed.push_back(std::move(dist));
  }
  return mixed;
}

std::vector<double> expected_payoff(const NormalForm& nf, const std::vector<std::vector<double>>& mixed) {
  const auto dims = nf.shape();
  std::vector<double> total(nf.player_names.size(), 0.0);
  std::vector<std::size_t> profile(dims.size(), 0);
  if (nf.payoffs.empty()) return total;
  do {
    double p = 1.0;
    for (std::size_t i = 0; i < dims.size(); ++i) p *= mixed.at(i).at(profile[i]);
    if (p == 0.0) continue;
    const auto& cell = nf.at(profile);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += p * cell[i];
  } while (next_strategy(profile, dims));
  return total;
}

}  // namespace storygame
