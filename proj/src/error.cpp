#include "storygame/error.hpp"

namespace storygame {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::ChanceProbsNotNormalized: return "ChanceProbsNotNormalized";
    case ErrorCode::InfosetShapeMismatch: return "InfosetShapeMismatch";
    case ErrorCode::InfosetOwnerMismatch: return "InfosetOwnerMismatch";
    case ErrorCode::InfosetPartition: return "InfosetPartition";
    case ErrorCode::OrphanNode: return "OrphanNode";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::PayoffLength: return "PayoffLength";
    case ErrorCode::EmptyChildren: return "EmptyChildren";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::PerfectRecall: return "PerfectRecall";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::NormalizationError: return "NormalizationError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ProfileShapeMismatch: return "ProfileShapeMismatch";
    case ErrorCode::UnreachedInfoset: return "UnreachedInfoset";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::PathJump: return "PathJump";
    case ErrorCode::AmbiguousLabel: return "AmbiguousLabel";
    case ErrorCode::NoSuchBranch: return "NoSuchBranch";
    case ErrorCode::PathEndsEarly: return "PathEndsEarly";
    case ErrorCode::MissingSlot: return "MissingSlot";
    case ErrorCode::TooFewOptions: return "TooFewOptions";
    case ErrorCode::NoProbabilityFound: return "NoProbabilityFound";
    case ErrorCode::NoScoreFound: return "NoScoreFound";
    case ErrorCode::ClientError: return "ClientError";
    case ErrorCode::ProtocolIncomplete: return "ProtocolIncomplete";
    case ErrorCode::GapRemaining: return "GapRemaining";
    case ErrorCode::TopologyInconsistent: return "TopologyInconsistent";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace storygame
