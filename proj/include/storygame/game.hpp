#pragma once

#include "storygame/error.hpp"
#include "storygame/rational.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace storygame {

using NodeId = std::size_t;
using InfosetId = std::size_t;
using PlayerIndex = std::size_t;

enum class NodeKind { Decision, Chance, Terminal };

std::string_view to_string(NodeKind kind);

struct Player {
  std::string name;
  /// Free-text character description; carried by the JSON format only.
  std::string description;
};

struct Edge {
  std::string label;
  NodeId child = 0;
};

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Terminal;
  std::string name;
  // Decision nodes.
  PlayerIndex player = 0;
  InfosetId infoset = 0;
  // Chance nodes: one exact probability per child, plus the name the .efg
  // format attaches to the chance information set.
  std::vector<Rational> chance_probs;
  std::string chance_set_name;
  // Terminal nodes.
  std::vector<double> payoffs;
  std::string outcome;

  std::vector<Edge> children;
  std::optional<NodeId> parent;
  /// Narrative annotation, ignored by every solver.
  std::string note;

  bool is_terminal() const { return kind == NodeKind::Terminal; }
};

struct Infoset {
  InfosetId id = 0;
  PlayerIndex owner = 0;
  std::string name;
  std::vector<NodeId> members;
  std::vector<std::string> actions;
};

/// Raw, possibly invalid game description. `Game::from_data` validates it.
struct GameData {
  std::string title;
  std::string comment;
  std::vector<Player> players;
  std::vector<Node> nodes;
  NodeId root = 0;
  std::vector<Infoset> infosets;
  /// Story-path marker (branch labels of the realized plot); annotation only.
  std::vector<std::string> story_path;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  ErrorCode code = ErrorCode::NotATree;
  std::string message;
  std::vector<NodeId> nodes;
  std::vector<InfosetId> infosets;
};

std::string format(const Diagnostic& d);

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Nested node description, the input of `build_game`.
struct NodeSpec {
  NodeKind kind = NodeKind::Terminal;
  std::string name;
  PlayerIndex player = 0;
  /// Infoset key, unique per player. Nodes sharing (player, key) form one infoset.
  std::string infoset;
  std::string infoset_name;
  std::vector<Rational> probs;
  std::string chance_set_name;
  std::vector<std::string> labels;
  std::vector<NodeSpec> children;
  std::vector<double> payoffs;
  std::string outcome;
  std::string note;

  static NodeSpec terminal(std::vector<double> payoffs, std::string outcome = {});
  static NodeSpec chance(std::string name, std::vector<std::pair<std::string, Rational>> branches,
                         std::vector<NodeSpec> children);
  static NodeSpec decision(std::string name, PlayerIndex player, std::string infoset,
                           std::vector<std::string> labels, std::vector<NodeSpec> children);
};

struct GameSpec {
  std::string title;
  std::string comment;
  std::vector<Player> players;
  NodeSpec root;
  std::vector<std::string> story_path;
};

/// Immutable, validated extensive-form game.
///
/// Node ids are dense and assigned in depth-first pre-order (root is 0, every
/// parent precedes its children). Infoset ids follow the pre-order position of
/// their first member. Copies share the underlying storage.
class Game {
 public:
  /// Validates and canonicalizes. Throws ValidationError listing every error.
  static Game from_data(GameData data);

  const std::string& title() const { return data_->title; }
  const std::string& comment() const { return data_->comment; }
  std::size_t num_players() const { return data_->players.size(); }
  const std::vector<Player>& players() const { return data_->players; }
  const Player& player(PlayerIndex i) const { return data_->players.at(i); }

  std::size_t num_nodes() const { return data_->nodes.size(); }
  const std::vector<Node>& nodes() const { return data_->nodes; }
  const Node& node(NodeId id) const { return data_->nodes.at(id); }
  NodeId root() const { return data_->root; }

  std::size_t num_infosets() const { return data_->infosets.size(); }
  const std::vector<Infoset>& infosets() const { return data_->infosets; }
  const Infoset& infoset(InfosetId id) const { return data_->infosets.at(id); }
  std::vector<InfosetId> infosets_of(PlayerIndex player) const;

  const std::vector<std::string>& story_path() const { return data_->story_path; }
  const GameData& data() const { return *data_; }

  /// Non-fatal diagnostics (perfect-recall violations) found at construction.
  const std::vector<Diagnostic>& warnings() const { return *warnings_; }

  /// Child of `from` along the branch labelled `label`, if there is exactly one.
  std::optional<NodeId> child_by_label(NodeId from, std::string_view label) const;

 private:
  Game(std::shared_ptr<const GameData> data, std::shared_ptr<const std::vector<Diagnostic>> warnings)
      : data_(std::move(data)), warnings_(std::move(warnings)) {}

  std::shared_ptr<const GameData> data_;
  std::shared_ptr<const std::vector<Diagnostic>> warnings_;
};

/// Builds a validated game from a nested description.
Game build_game(const GameSpec& spec);

/// All invariant violations (errors) and perfect-recall warnings. Empty iff clean.
std::vector<Diagnostic> validate(const GameData& data);
std::vector<Diagnostic> validate(const Game& game);

/// Subtree rooted at `new_root` as a standalone game. Infosets are restricted
/// to surviving members; players and payoffs are unchanged.
Game reroot(const Game& game, NodeId new_root);

/// Same tree shape, labels, kinds, owners, infoset partition, chance
/// probabilities and (optionally) payoffs within `payoff_tol`. Returns a
/// description of the first difference, or nullopt when equal.
std::optional<std::string> structural_difference(const Game& a, const Game& b, double payoff_tol = 1e-12,
                                                 bool compare_payoffs = true);

inline bool structurally_equal(const Game& a, const Game& b, double payoff_tol = 1e-12) {
  return !structural_difference(a, b, payoff_tol).has_value();
}

}  // namespace storygame
