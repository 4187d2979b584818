#pragma once

#include "storygame/game.hpp"
#include "storygame/narrative.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace storygame::fixtures {

inline constexpr PlayerIndex kRomeo = 0;
inline constexpr PlayerIndex kJuliet = 1;

/// Chance over Juliet's grief at the root, her three options at B, the
/// message chance node, and Romeo's three-member information set.
Game romeo_juliet_game2();

/// Game II rerooted at Juliet's decision node B.
Game romeo_juliet_game1();

/// Node id of Juliet's decision B inside Game II.
NodeId game2_juliet_node();

/// The play as written: no grief, fake death, the message fails, Romeo dies.
StorySpec actual_story();

/// Game I's equilibrium play with the story's chance outcome.
StorySpec game1_story();

/// Juliet marries Paris.
StorySpec marry_paris_story();

/// Story text handed to every elicitation prompt.
std::string story_context();

/// Elicitation protocol (JSON) for the Romeo and Juliet ending.
std::string extraction_protocol();

/// Topology hints (JSON) that compile the elicited draft into Game II.
std::string topology_hints();

struct Recording {
  std::string name;  ///< file stem
  std::string prompt;
  std::string response;
};

/// One recorded request/response pair per protocol step. The option and
/// probability replies are the recorded ones; score replies are synthetic and
/// restate the Game II payoffs.
std::vector<Recording> transcripts();

std::string recording_json(const Recording& recording);

/// Writes games, story paths, protocol, hints and transcripts. Throws IoError.
void emit(const std::filesystem::path& directory);

}  // namespace storygame::fixtures
