#include "storygame/efg_io.hpp"

#include <json.hpp>

#include <map>
#include <set>

namespace storygame {

namespace {

using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

class JsonReader {
 public:
  Game read(const ordered_json& doc) {
    if (!doc.is_object()) fail("", "document must be an object");
    if (doc.contains("schema")) {
      if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != kSchemaVersion)
        fail("/schema", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
    }
    GameSpec spec;
    spec.title = optional_string(doc, "", "title");
    spec.comment = optional_string(doc, "", "comment");
    if (!doc.contains("players") || !doc["players"].is_array() || doc["players"].empty())
      fail("/players", "expected a non-empty array of players");
    for (std::size_t i = 0; i < doc["players"].size(); ++i) {
      const auto& p = doc["players"][i];
      const std::string at = "/players/" + std::to_string(i);
      if (p.is_string()) {
        spec.players.push_back({p.get<std::string>(), {}});
      } else if (p.is_object() && p.contains("name") && p["name"].is_string()) {
        spec.players.push_back({p["name"].get<std::string>(), optional_string(p, at, "description")});
      } else {
        fail(at, "player must be a name or an object with a \"name\"");
      }
      if (!names_.emplace(spec.players.back().name, i).second) fail(at, "duplicate player name");
    }
    players_ = spec.players.size();
    if (doc.contains("story_path")) {
      if (!doc["story_path"].is_array()) fail("/story_path", "expected an array of branch labels");
      for (std::size_t i = 0; i < doc["story_path"].size(); ++i) {
        if (!doc["story_path"][i].is_string()) fail("/story_path/" + std::to_string(i), "expected a string");
        spec.story_path.push_back(doc["story_path"][i].get<std::string>());
      }
    }
    if (!doc.contains("root")) fail("/root", "missing root node");
    spec.root = node(doc["root"], "/root");
    return build_game(spec);
  }

 private:
  NodeSpec node(const ordered_json& j, const std::string& at) {
    if (!j.is_object()) fail(at, "node must be an object");
    if (!j.contains("kind") || !j["kind"].is_string()) fail(at + "/kind", "expected \"decision\", \"chance\" or \"terminal\"");
    const std::string kind = j["kind"].get<std::string>();
    NodeSpec spec;
    spec.name = optional_string(j, at, "name");
    spec.note = optional_string(j, at, "note");
    if (kind == "terminal") {
      spec.kind = NodeKind::Terminal;
      spec.outcome = optional_string(j, at, "outcome");
      if (!j.contains("payoffs") || !j["payoffs"].is_array()) fail(at + "/payoffs", "expected an array of numbers");
      const auto& payoffs = j["payoffs"];
      if (payoffs.size() != players_)
        fail(at + "/payoffs", "expected " + std::to_string(players_) + " payoffs, found " + std::to_string(payoffs.size()));
      for (std::size_t i = 0; i < payoffs.size(); ++i) {
        if (!payoffs[i].is_number()) fail(at + "/payoffs/" + std::to_string(i), "expected a number");
        spec.payoffs.push_back(payoffs[i].get<double>());
      }
      return spec;
    }
    if (kind == "chance") {
      spec.kind = NodeKind::Chance;
      spec.chance_set_name = optional_string(j, at, "chance_set");
      const auto& branches = array_field(j, at, "branches");
      Rational sum;
      for (std::size_t c = 0; c < branches.size(); ++c) {
        const std::string b = at + "/branches/" + std::to_string(c);
        const auto& branch = branches[c];
        if (!branch.is_object()) fail(b, "branch must be an object");
        spec.labels.push_back(required_string(branch, b, "label"));
        spec.probs.push_back(probability(branch, b + "/prob"));
        sum = sum + spec.probs.back();
        if (!branch.contains("child")) fail(b + "/child", "missing child node");
        spec.children.push_back(node(branch["child"], b + "/child"));
      }
      if (!(sum == Rational(1))) fail(at + "/branches", "probabilities sum to " + sum.to_string() + ", not 1");
      return spec;
    }
    if (kind == "decision") {
      spec.kind = NodeKind::Decision;
      if (!j.contains("player")) fail(at + "/player", "missing player");
      const auto& player = j["player"];
      if (player.is_string() && names_.count(player.get<std::string>())) {
        spec.player = names_.at(player.get<std::string>());
      } else if (player.is_number_unsigned() && player.get<std::size_t>() < players_) {
        spec.player = player.get<std::size_t>();
      } else {
        fail(at + "/player", "unknown player");
      }
      if (!j.contains("infoset")) fail(at + "/infoset", "missing infoset key");
      const auto& key = j["infoset"];
      if (key.is_string()) spec.infoset = key.get<std::string>();
      else if (key.is_number_integer()) spec.infoset = std::to_string(key.get<long long>());
      else fail(at + "/infoset", "infoset key must be a string or an integer");
      spec.infoset_name = optional_string(j, at, "infoset_name");
      const auto& actions = array_field(j, at, "actions");
      for (std::size_t c = 0; c < actions.size(); ++c) {
        const std::string b = at + "/actions/" + std::to_string(c);
        if (!actions[c].is_object()) fail(b, "action must be an object");
        spec.labels.push_back(required_string(actions[c], b, "label"));
        if (!actions[c].contains("child")) fail(b + "/child", "missing child node");
        spec.children.push_back(node(actions[c]["child"], b + "/child"));
      }
      auto [it, inserted] = infoset_actions_.emplace(std::make_pair(spec.player, spec.infoset), spec.labels);
      if (!inserted && it->second != spec.labels)
        fail(at + "/actions", "infoset members must offer identical actions");
      return spec;
    }
    fail(at + "/kind", "unknown node kind '" + kind + "'");
  }

  Rational probability(const ordered_json& branch, const std::string& at) {
    if (!branch.contains("prob")) fail(at, "missing probability");
    const auto& p = branch["prob"];
    try {
      if (p.is_string()) return Rational::parse(p.get<std::string>());
      if (p.is_number_integer()) return Rational(p.get<long long>());
      if (p.is_number()) return Rational::parse(p.dump());
    } catch (const std::invalid_argument& e) {
      fail(at, e.what());
    }
    fail(at, "probability must be a number or a \"p/q\" string");
  }

  const ordered_json& array_field(const ordered_json& j, const std::string& at, const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty())
      fail(at + "/" + key, "expected a non-empty array");
    return j[key];
  }

  std::string required_string(const ordered_json& j, const std::string& at, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) fail(at + "/" + key, "expected a string");
    return j[key].get<std::string>();
  }

  std::string optional_string(const ordered_json& j, const std::string& at, const char* key) {
    if (!j.contains(key)) return {};
    if (!j[key].is_string()) fail(at + "/" + key, "expected a string");
    return j[key].get<std::string>();
  }

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) { throw SchemaError(pointer, message); }

  std::size_t players_ = 0;
  std::map<std::string, std::size_t> names_;
  std::map<std::pair<PlayerIndex, std::string>, std::vector<std::string>> infoset_actions_;
};

ordered_json node_json(const Game& game, NodeId id) {
  const Node& node = game.node(id);
  ordered_json j;
  j["kind"] = std::string(to_string(node.kind));
  if (!node.name.empty()) j["name"] = node.name;
  if (!node.note.empty()) j["note"] = node.note;
  switch (node.kind) {
    case NodeKind::Terminal:
      if (!node.outcome.empty()) j["outcome"] = node.outcome;
      j["payoffs"] = node.payoffs;
      break;
    case NodeKind::Chance:
      if (!node.chance_set_name.empty()) j["chance_set"] = node.chance_set_name;
      j["branches"] = ordered_json::array();
      for (std::size_t c = 0; c < node.children.size(); ++c) {
        ordered_json b;
        b["label"] = node.children[c].label;
        b["prob"] = node.chance_probs[c].to_string();
        b["child"] = node_json(game, node.children[c].child);
        j["branches"].push_back(std::move(b));
      }
      break;
    case NodeKind::Decision: {
      const Infoset& set = game.infoset(node.infoset);
      j["player"] = game.player(node.player).name;
      j["infoset"] = set.id;
      if (!set.name.empty()) j["infoset_name"] = set.name;
      j["actions"] = ordered_json::array();
      for (const auto& e : node.children) {
        ordered_json a;
        a["label"] = e.label;
        a["child"] = node_json(game, e.child);
        j["actions"].push_back(std::move(a));
      }
      break;
    }
  }
  return j;
}

}  // namespace

Game parse_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
  return JsonReader().read(doc);
}

std::string write_json(const Game& game) {
  ordered_json doc;
  doc["schema"] = kSchemaVersion;
  doc["title"] = game.title();
  if (!game.comment().empty()) doc["comment"] = game.comment();
  doc["players"] = ordered_json::array();
  for (const auto& p : game.players()) {
    if (p.description.empty()) {
      doc["players"].push_back(p.name);
    } else {
      doc["players"].push_back({{"name", p.name}, {"description", p.description}});
    }
  }
  if (!game.story_path().empty()) doc["story_path"] = game.story_path();
  doc["root"] = node_json(game, game.root());
  return doc.dump(2) + "\n";
}

}  // namespace storygame
