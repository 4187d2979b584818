#pragma once

#include "storygame/game.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace storygame {

class GenerationClient;

// ---------------------------------------------------------------------------
// Prompt templates

enum class ResponseKind { OptionList, Percentage, Score };

std::string_view to_string(ResponseKind kind);
ResponseKind parse_response_kind(std::string_view text);

struct PromptTemplate {
  std::string id;
  /// Text with `{slot}` placeholders.
  std::string text;
  /// Every slot the text may reference.
  std::vector<std::string> slots;
  ResponseKind kind = ResponseKind::OptionList;
};

using SlotValues = std::map<std::string, std::string>;

/// Substitutes every `{slot}`. Throws MissingSlot when the text references a
/// slot that is undeclared or has no value.
std::string render_prompt(const PromptTemplate& tmpl, const SlotValues& slots);

// ---------------------------------------------------------------------------
// Response parsers. Deterministic and total: same text, same result or error.

/// First `k` numbered items ("1.", "2)", "3:"). Each label is the item text up
/// to the first colon or parenthetical qualifier. Throws TooFewOptions.
std::vector<std::string> parse_options(std::string_view text, std::size_t k);

/// First percentage ("30%") or percentage range ("80-90%", midpoint), as a
/// probability. Throws NoProbabilityFound.
double parse_probability(std::string_view text);

/// First number in [−100, 100], or the midpoint of the first range ("between
/// 85 and 95"). Out-of-range numbers are skipped. Throws NoScoreFound.
double parse_score(std::string_view text);

// ---------------------------------------------------------------------------
// Game drafts

struct DecisionPoint {
  std::string id;
  std::string owner;
  std::string context;
  std::vector<std::string> options;
};

struct ChancePoint {
  std::string id;
  std::string context;
  double probability = 0.0;
  std::size_t source = 0;  ///< index into GameDraft::provenance
};

struct OutcomeScores {
  std::string id;
  std::string description;
  std::map<std::string, double> scores;        ///< character -> score in [−100, 100]
  std::map<std::string, std::size_t> sources;  ///< character -> provenance index
};

struct ProvenanceEntry {
  std::string step;
  std::string field;
  std::string prompt;
  std::string response;
};

struct DraftGap {
  std::string step;
  std::string field;
  std::string reason;
};

struct GameDraft {
  std::vector<std::string> characters;
  std::vector<DecisionPoint> decisions;
  std::vector<ChancePoint> chances;
  std::vector<OutcomeScores> outcomes;
  std::vector<ProvenanceEntry> provenance;
  std::vector<DraftGap> gaps;

  bool complete() const { return gaps.empty(); }
  const DecisionPoint* decision(std::string_view id) const;
  const ChancePoint* chance(std::string_view id) const;
  const OutcomeScores* outcome(std::string_view id) const;
};

std::string draft_to_json(const GameDraft& draft);

// ---------------------------------------------------------------------------
// Elicitation protocol

enum class StepTarget { Characters, Decisions, Options, Probability, Score };

struct ProtocolStep {
  std::string id;
  PromptTemplate prompt;
  SlotValues slots;  ///< `story_context` is filled in from the story text
  StepTarget target = StepTarget::Characters;
  std::size_t count = 0;             ///< Characters / Options
  std::vector<std::string> ids;      ///< Decisions: decision ids, in list order
  std::vector<std::string> owners;   ///< Decisions: owner per id
  std::string ref;                   ///< Options: decision id; Probability: chance id; Score: outcome id
  std::string character;             ///< Score
  std::string description;           ///< Probability context / outcome description
  double temperature = 0.0;
};

/// Parses a versioned protocol document (`"schema": 1`) with a template pack
/// and an ordered list of steps.
std::vector<ProtocolStep> parse_protocol(std::string_view json);

/// Runs the protocol in order, logging every request/response pair. Parse
/// failures become gaps; transport failures throw ClientError. An empty story
/// throws ProtocolIncomplete.
GameDraft build_draft(std::string_view story, const std::vector<ProtocolStep>& protocol, GenerationClient& client);

// ---------------------------------------------------------------------------
// Topology hints and compilation

struct HintNode {
  enum class Kind { Chance, Decision, Outcome };
  Kind kind = Kind::Outcome;
  std::string ref;      ///< chance / decision / outcome id in the draft
  std::string infoset;  ///< Decision: grouping key
  struct Branch {
    std::string label;
    std::optional<std::size_t> option;  ///< Decision: option index in the draft
    bool event = false;                 ///< Chance: carries the elicited probability
    std::shared_ptr<HintNode> next;
  };
  std::vector<Branch> branches;
};

struct TopologyHints {
  std::string title;
  std::vector<std::string> players;
  HintNode root;
};

TopologyHints parse_hints(std::string_view json);

struct NumberSource {
  NodeId node = 0;
  std::string field;  ///< "prob/<branch>" or "payoff/<player>"
  std::size_t provenance = 0;
};

struct CompiledGame {
  Game game;
  std::vector<NumberSource> sources;
};

/// Builds a validated game from a complete draft. Throws GapRemaining or
/// TopologyInconsistent.
CompiledGame compile_draft(const GameDraft& draft, const TopologyHints& hints);

}  // namespace storygame
