#include "storygame/game.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace storygame {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Decision: return "decision";
    case NodeKind::Chance: return "chance";
    case NodeKind::Terminal: return "terminal";
  }
  return "unknown";
}

std::string format(const Diagnostic& d) {
  std::ostringstream out;
  out << (d.severity == Severity::Error ? "error " : "warning ") << to_string(d.code) << ": " << d.message;
  return out.str();
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (d.severity != Severity::Error) continue;
    if (!out.empty()) out += "; ";
    out += d.message;
  }
  return out;
}

ErrorCode first_code(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error) return d.code;
  return ErrorCode::NotATree;
}

Diagnostic error(ErrorCode code, std::string message, std::vector<NodeId> nodes = {},
                 std::vector<InfosetId> infosets = {}) {
  return Diagnostic{Severity::Error, code, std::move(message), std::move(nodes), std::move(infosets)};
}

// Checks node-local and tree invariants. Fills `index` (id -> position in
// data.nodes) and `preorder` (positions, DFS from root) when the tree is sound.
void check_tree(const GameData& data, std::vector<Diagnostic>& out,
                std::unordered_map<NodeId, std::size_t>& index, std::vector<std::size_t>& preorder) {
  for (std::size_t i = 0; i < data.nodes.size(); ++i) {
    auto [it, inserted] = index.emplace(data.nodes[i].id, i);
    if (!inserted)
      out.push_back(error(ErrorCode::DuplicateNodeId,
                          "node id " + std::to_string(data.nodes[i].id) + " appears more than once",
                          {data.nodes[i].id}));
  }

  std::set<std::string> names;
  for (const auto& p : data.players)
    if (!names.insert(p.name).second)
      out.push_back(error(ErrorCode::UnknownPlayer, "duplicate player name '" + p.name + "'"));

  const std::size_t n_players = data.players.size();
  std::vector<int> parent_count(data.nodes.size(), 0);
  for (const auto& node : data.nodes) {
    const std::string where = "node " + std::to_string(node.id);
    switch (node.kind) {
      case NodeKind::Terminal:
        if (!node.children.empty())
          out.push_back(error(ErrorCode::NotATree, where + ": terminal node has children", {node.id}));
        if (node.payoffs.size() != n_players)
          out.push_back(error(ErrorCode::PayoffLength,
                              where + ": payoff vector has " + std::to_string(node.payoffs.size()) +
                                  " entries for " + std::to_string(n_players) + " players",
                              {node.id}));
        for (double v : node.payoffs)
          if (!std::isfinite(v)) out.push_back(error(ErrorCode::PayoffLength, where + ": non-finite payoff", {node.id}));
        break;
      case NodeKind::Chance: {
        if (node.children.empty())
          out.push_back(error(ErrorCode::EmptyChildren, where + ": chance node has no children", {node.id}));
        if (node.chance_probs.size() != node.children.size()) {
          out.push_back(error(ErrorCode::ChanceProbsNotNormalized,
                              where + ": probability count does not match child count", {node.id}));
          break;
        }
        Rational sum;
        bool negative = false;
        for (const auto& p : node.chance_probs) {
          if (p < Rational(0)) negative = true;
          sum = sum + p;
        }
        if (negative)
          out.push_back(error(ErrorCode::ChanceProbsNotNormalized, where + ": negative chance probability", {node.id}));
        if (!(sum == Rational(1)))
          out.push_back(error(ErrorCode::ChanceProbsNotNormalized,
                              where + ": chance probabilities sum to " + sum.to_string() + ", not 1", {node.id}));
        break;
      }
      case NodeKind::Decision:
        if (node.children.empty())
          out.push_back(error(ErrorCode::EmptyChildren, where + ": decision node has no children", {node.id}));
        if (node.player >= n_players)
          out.push_back(error(ErrorCode::UnknownPlayer, where + ": player index out of range", {node.id}));
        if (node.infoset >= data.infosets.size())
          out.push_back(error(ErrorCode::InfosetPartition, where + ": infoset index out of range", {node.id}));
        break;
    }
    for (const auto& edge : node.children) {
      auto it = index.find(edge.child);
      if (it == index.end()) {
        out.push_back(error(ErrorCode::UnknownNode, where + ": child " + std::to_string(edge.child) + " does not exist",
                            {node.id}));
        continue;
      }
      ++parent_count[it->second];
    }
  }

  auto root_it = index.find(data.root);
  if (root_it == index.end()) {
    out.push_back(error(ErrorCode::UnknownNode, "root node " + std::to_string(data.root) + " does not exist"));
    return;
  }
  if (parent_count[root_it->second] != 0)
    out.push_back(error(ErrorCode::NotATree, "root node has a parent", {data.root}));
  for (std::size_t i = 0; i < data.nodes.size(); ++i)
    if (i != root_it->second && parent_count[i] > 1)
      out.push_back(error(ErrorCode::NotATree,
                          "node " + std::to_string(data.nodes[i].id) + " has more than one parent",
                          {data.nodes[i].id}));

  // Iterative DFS pre-order; children pushed in reverse to keep source order.
  std::vector<bool> seen(data.nodes.size(), false);
  std::vector<std::size_t> stack{root_it->second};
  while (!stack.empty()) {
    std::size_t at = stack.back();
    stack.pop_back();
    if (seen[at]) {
      out.push_back(error(ErrorCode::NotATree, "cycle through node " + std::to_string(data.nodes[at].id),
                          {data.nodes[at].id}));
      continue;
    }
    seen[at] = true;
    preorder.push_back(at);
    const auto& children = data.nodes[at].children;
    for (auto it = children.rbegin(); it != children.rend(); ++it) {
      auto c = index.find(it->child);
      if (c != index.end()) stack.push_back(c->second);
    }
  }
  for (std::size_t i = 0; i < data.nodes.size(); ++i)
    if (!seen[i])
      out.push_back(error(ErrorCode::OrphanNode,
                          "node " + std::to_string(data.nodes[i].id) + " is not reachable from the root",
                          {data.nodes[i].id}));
}

void check_infosets(const GameData& data, const std::unordered_map<NodeId, std::size_t>& index,
                    std::vector<Diagnostic>& out) {
  std::map<NodeId, int> membership;
  for (std::size_t s = 0; s < data.infosets.size(); ++s) {
    const Infoset& set = data.infosets[s];
    const std::string where = "infoset " + std::to_string(s) + " ('" + set.name + "')";
    if (set.members.empty())
      out.push_back(error(ErrorCode::InfosetPartition, where + " has no members", {}, {s}));
    if (set.owner >= data.players.size())
      out.push_back(error(ErrorCode::UnknownPlayer, where + ": owner out of range", {}, {s}));
    for (NodeId m : set.members) {
      ++membership[m];
      auto it = index.find(m);
      if (it == index.end()) {
        out.push_back(error(ErrorCode::UnknownNode, where + ": member " + std::to_string(m) + " does not exist", {m},
                            {s}));
        continue;
      }
      const Node& node = data.nodes[it->second];
      if (node.kind != NodeKind::Decision) {
        out.push_back(error(ErrorCode::InfosetOwnerMismatch,
                            where + ": member " + std::to_string(m) + " is not a decision node", {m}, {s}));
        continue;
      }
      if (node.player != set.owner)
        out.push_back(error(ErrorCode::InfosetOwnerMismatch,
                            where + ": member " + std::to_string(m) + " belongs to another player", {m}, {s}));
      if (node.infoset != s)
        out.push_back(error(ErrorCode::InfosetPartition,
                            where + ": member " + std::to_string(m) + " points at infoset " +
                                std::to_string(node.infoset),
                            {m}, {s}));
      bool shape_ok = node.children.size() == set.actions.size();
      for (std::size_t a = 0; shape_ok && a < set.actions.size(); ++a)
        shape_ok = node.children[a].label == set.actions[a];
      if (!shape_ok)
        out.push_back(error(ErrorCode::InfosetShapeMismatch,
                            where + ": member " + std::to_string(m) + " does not offer the infoset's actions", {m},
                            {s}));
    }
  }
  for (const auto& node : data.nodes) {
    if (node.kind != NodeKind::Decision) continue;
    int count = membership.count(node.id) ? membership[node.id] : 0;
    if (count != 1)
      out.push_back(error(ErrorCode::InfosetPartition,
                          "decision node " + std::to_string(node.id) + " belongs to " + std::to_string(count) +
                              " infosets",
                          {node.id}));
  }
}

// A player has perfect recall at an infoset when every member is preceded by
// the same sequence of that player's own (infoset, action) choices.
void check_recall(const GameData& data, const std::unordered_map<NodeId, std::size_t>& index,
                  const std::vector<std::size_t>& preorder, std::vector<Diagnostic>& out) {
  using History = std::vector<std::pair<InfosetId, std::size_t>>;
  std::vector<History> history(data.nodes.size());
  std::map<InfosetId, History> reference;
  std::set<InfosetId> flagged;
  for (std::size_t at : preorder) {
    const Node& node = data.nodes[at];
    if (node.kind == NodeKind::Decision) {
      auto [it, inserted] = reference.emplace(node.infoset, History{});
      History own;
      bool absentminded = false;
      for (const auto& h : history[at]) {
        if (data.infosets[h.first].owner == node.player) own.push_back(h);
        if (h.first == node.infoset) absentminded = true;
      }
      if (inserted) it->second = own;
      if ((absentminded || it->second != own) && flagged.insert(node.infoset).second)
        out.push_back(Diagnostic{Severity::Warning, ErrorCode::PerfectRecall,
                                 "infoset " + std::to_string(node.infoset) + " ('" + data.infosets[node.infoset].name +
                                     "') violates perfect recall",
                                 {node.id},
                                 {node.infoset}});
    }
    for (std::size_t a = 0; a < node.children.size(); ++a) {
      std::size_t child = index.at(node.children[a].child);
      history[child] = history[at];
      if (node.kind == NodeKind::Decision) history[child].emplace_back(node.infoset, a);
    }
  }
}

std::vector<Diagnostic> validate_impl(const GameData& data, std::vector<std::size_t>* preorder_out) {
  std::vector<Diagnostic> out;
  std::unordered_map<NodeId, std::size_t> index;
  std::vector<std::size_t> preorder;
  check_tree(data, out, index, preorder);
  bool tree_ok = out.empty();
  check_infosets(data, index, out);
  if (out.empty()) check_recall(data, index, preorder, out);
  if (tree_ok && preorder_out) *preorder_out = std::move(preorder);
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(first_code(diagnostics), join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

NodeSpec NodeSpec::terminal(std::vector<double> payoffs, std::string outcome) {
  NodeSpec s;
  s.kind = NodeKind::Terminal;
  s.payoffs = std::move(payoffs);
  s.outcome = std::move(outcome);
  return s;
}

NodeSpec NodeSpec::chance(std::string name, std::vector<std::pair<std::string, Rational>> branches,
                          std::vector<NodeSpec> children) {
  NodeSpec s;
  s.kind = NodeKind::Chance;
  s.name = std::move(name);
  for (auto& [label, prob] : branches) {
    s.labels.push_back(std::move(label));
    s.probs.push_back(std::move(prob));
  }
  s.children = std::move(children);
  return s;
}

NodeSpec NodeSpec::decision(std::string name, PlayerIndex player, std::string infoset,
                            std::vector<std::string> labels, std::vector<NodeSpec> children) {
  NodeSpec s;
  s.kind = NodeKind::Decision;
  s.name = std::move(name);
  s.player = player;
  s.infoset = std::move(infoset);
  s.labels = std::move(labels);
  s.children = std::move(children);
  return s;
}

Game Game::from_data(GameData data) {
  std::vector<std::size_t> preorder;
  auto diagnostics = validate_impl(data, &preorder);
  if (has_errors(diagnostics)) throw ValidationError(std::move(diagnostics));

  // Renumber nodes in pre-order and infosets by first appearance.
  std::unordered_map<NodeId, NodeId> new_id;
  for (std::size_t i = 0; i < preorder.size(); ++i) new_id[data.nodes[preorder[i]].id] = i;
  std::vector<InfosetId> new_set(data.infosets.size(), static_cast<InfosetId>(-1));
  InfosetId next_set = 0;
  for (std::size_t at : preorder) {
    const Node& node = data.nodes[at];
    if (node.kind == NodeKind::Decision && new_set[node.infoset] == static_cast<InfosetId>(-1))
      new_set[node.infoset] = next_set++;
  }

  auto canonical = std::make_shared<GameData>();
  canonical->title = std::move(data.title);
  canonical->comment = std::move(data.comment);
  canonical->players = std::move(data.players);
  canonical->story_path = std::move(data.story_path);
  canonical->root = 0;
  canonical->nodes.resize(preorder.size());
  for (std::size_t i = 0; i < preorder.size(); ++i) {
    Node node = std::move(data.nodes[preorder[i]]);
    node.id = i;
    node.parent.reset();
    for (auto& edge : node.children) edge.child = new_id.at(edge.child);
    if (node.kind == NodeKind::Decision) node.infoset = new_set[node.infoset];
    canonical->nodes[i] = std::move(node);
  }
  for (auto& node : canonical->nodes)
    for (const auto& edge : node.children) canonical->nodes[edge.child].parent = node.id;

  canonical->infosets.resize(next_set);
  for (std::size_t s = 0; s < data.infosets.size(); ++s) {
    if (new_set[s] == static_cast<InfosetId>(-1)) continue;
    Infoset set = std::move(data.infosets[s]);
    set.id = new_set[s];
    for (auto& m : set.members) m = new_id.at(m);
    std::sort(set.members.begin(), set.members.end());
    canonical->infosets[set.id] = std::move(set);
  }

  auto warnings = std::make_shared<std::vector<Diagnostic>>();
  for (auto& d : diagnostics) {
    for (auto& n : d.nodes) n = new_id.count(n) ? new_id.at(n) : n;
    for (auto& s : d.infosets) s = new_set[s];
    warnings->push_back(std::move(d));
  }
  return Game(std::move(canonical), std::move(warnings));
}

std::vector<InfosetId> Game::infosets_of(PlayerIndex player) const {
  std::vector<InfosetId> out;
  for (const auto& set : data_->infosets)
    if (set.owner == player) out.push_back(set.id);
  return out;
}

std::optional<NodeId> Game::child_by_label(NodeId from, std::string_view label) const {
  std::optional<NodeId> found;
  for (const auto& edge : node(from).children) {
    if (edge.label != label) continue;
    if (found) return std::nullopt;
    found = edge.child;
  }
  return found;
}

namespace {

struct Builder {
  GameData data;
  std::map<std::pair<PlayerIndex, std::string>, InfosetId> sets;
  std::vector<Diagnostic> errors;

  NodeId add(const NodeSpec& spec) {
    NodeId id = data.nodes.size();
    data.nodes.emplace_back();
    Node node;
    node.id = id;
    node.kind = spec.kind;
    node.name = spec.name;
    node.note = spec.note;
    if (spec.labels.size() != spec.children.size())
      errors.push_back(error(ErrorCode::InfosetShapeMismatch,
                             "node '" + spec.name + "': label count does not match child count", {id}));
    switch (spec.kind) {
      case NodeKind::Terminal:
        node.payoffs = spec.payoffs;
        node.outcome = spec.outcome;
        break;
      case NodeKind::Chance:
        node.chance_probs = spec.probs;
        node.chance_set_name = spec.chance_set_name;
        break;
      case NodeKind::Decision: {
        node.player = spec.player;
        auto key = std::make_pair(spec.player, spec.infoset);
        auto it = sets.find(key);
        if (it == sets.end()) {
          InfosetId sid = data.infosets.size();
          Infoset set;
          set.id = sid;
          set.owner = spec.player;
          set.name = spec.infoset_name.empty() ? spec.infoset : spec.infoset_name;
          set.actions = spec.labels;
          data.infosets.push_back(std::move(set));
          it = sets.emplace(key, sid).first;
        }
        node.infoset = it->second;
        data.infosets[it->second].members.push_back(id);
        break;
      }
    }
    std::size_t n = std::min(spec.labels.size(), spec.children.size());
    for (std::size_t i = 0; i < n; ++i) {
      NodeId child = add(spec.children[i]);
      node.children.push_back(Edge{spec.labels[i], child});
    }
    data.nodes[id] = std::move(node);
    return id;
  }
};

}  // namespace

Game build_game(const GameSpec& spec) {
  Builder b;
  b.data.title = spec.title;
  b.data.comment = spec.comment;
  b.data.players = spec.players;
  b.data.story_path = spec.story_path;
  b.data.root = b.add(spec.root);
  auto diagnostics = validate_impl(b.data, nullptr);
  diagnostics.insert(diagnostics.begin(), b.errors.begin(), b.errors.end());
  if (has_errors(diagnostics)) throw ValidationError(std::move(diagnostics));
  return Game::from_data(std::move(b.data));
}

std::vector<Diagnostic> validate(const GameData& data) { return validate_impl(data, nullptr); }

std::vector<Diagnostic> validate(const Game& game) { return game.warnings(); }

Game reroot(const Game& game, NodeId new_root) {
  if (new_root >= game.num_nodes())
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(new_root) + " does not exist");
  GameData data;
  data.title = game.title();
  data.comment = game.comment();
  data.players = game.players();
  data.story_path = game.story_path();
  data.root = new_root;

  std::vector<bool> keep(game.num_nodes(), false);
  std::vector<NodeId> stack{new_root};
  while (!stack.empty()) {
    NodeId at = stack.back();
    stack.pop_back();
    keep[at] = true;
    data.nodes.push_back(game.node(at));
    for (const auto& e : game.node(at).children) stack.push_back(e.child);
  }
  std::vector<InfosetId> set_map(game.num_infosets(), static_cast<InfosetId>(-1));
  for (const auto& set : game.infosets()) {
    Infoset restricted = set;
    restricted.members.clear();
    for (NodeId m : set.members)
      if (keep[m]) restricted.members.push_back(m);
    if (restricted.members.empty()) continue;
    set_map[set.id] = data.infosets.size();
    restricted.id = data.infosets.size();
    data.infosets.push_back(std::move(restricted));
  }
  for (auto& node : data.nodes)
    if (node.kind == NodeKind::Decision) node.infoset = set_map[node.infoset];
  return Game::from_data(std::move(data));
}

std::optional<std::string> structural_difference(const Game& a, const Game& b, double payoff_tol,
                                                 bool compare_payoffs) {
  if (a.num_players() != b.num_players()) return "player counts differ";
  for (std::size_t i = 0; i < a.num_players(); ++i)
    if (a.player(i).name != b.player(i).name) return "player " + std::to_string(i) + " names differ";
  if (a.num_nodes() != b.num_nodes())
    return "node counts differ (" + std::to_string(a.num_nodes()) + " vs " + std::to_string(b.num_nodes()) + ")";
  if (a.num_infosets() != b.num_infosets()) return "infoset counts differ";
  // Both games are canonical, so equal structure means equal ids.
  for (NodeId id = 0; id < a.num_nodes(); ++id) {
    const Node& x = a.node(id);
    const Node& y = b.node(id);
    const std::string where = "node " + std::to_string(id) + ": ";
    if (x.kind != y.kind) return where + "kinds differ";
    if (x.children.size() != y.children.size()) return where + "child counts differ";
    for (std::size_t c = 0; c < x.children.size(); ++c) {
      if (x.children[c].label != y.children[c].label)
        return where + "labels differ ('" + x.children[c].label + "' vs '" + y.children[c].label + "')";
      if (x.children[c].child != y.children[c].child) return where + "children differ";
    }
    if (x.kind == NodeKind::Decision && (x.player != y.player || x.infoset != y.infoset))
      return where + "owner or infoset differs";
    if (x.kind == NodeKind::Chance && x.chance_probs != y.chance_probs) return where + "chance probabilities differ";
    if (x.kind == NodeKind::Terminal && compare_payoffs) {
      if (x.payoffs.size() != y.payoffs.size()) return where + "payoff lengths differ";
      for (std::size_t p = 0; p < x.payoffs.size(); ++p)
        if (std::abs(x.payoffs[p] - y.payoffs[p]) > payoff_tol) return where + "payoffs differ";
    }
  }
  for (InfosetId s = 0; s < a.num_infosets(); ++s)
    if (a.infoset(s).owner != b.infoset(s).owner || a.infoset(s).members != b.infoset(s).members)
      return "infoset " + std::to_string(s) + " differs";
  return std::nullopt;
}

}  // namespace storygame
