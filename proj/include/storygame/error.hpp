#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace storygame {

/// Stable error codes shared by every module. The CLI maps these onto exit
/// codes and prints `to_string(code)` as the diagnostic prefix.
enum class ErrorCode {
  // game_core
  DuplicateNodeId,
  ChanceProbsNotNormalized,
  InfosetShapeMismatch,
  InfosetOwnerMismatch,
  InfosetPartition,
  OrphanNode,
  NotATree,
  PayoffLength,
  EmptyChildren,
  UnknownPlayer,
  UnknownNode,
  PerfectRecall,
  // efg_io
  SyntaxError,
  SemanticError,
  NormalizationError,
  SchemaError,
  // eval
  ProfileShapeMismatch,
  UnreachedInfoset,
  InvalidPath,
  BudgetExceeded,
  // qre_solver
  NoConvergence,
  PathJump,
  // narrative
  AmbiguousLabel,
  NoSuchBranch,
  PathEndsEarly,
  // extraction
  MissingSlot,
  TooFewOptions,
  NoProbabilityFound,
  NoScoreFound,
  ClientError,
  ProtocolIncomplete,
  GapRemaining,
  TopologyInconsistent,
  // cli
  IoError,
  Usage,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace storygame
