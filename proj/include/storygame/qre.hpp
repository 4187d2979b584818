#pragma once

#include "storygame/eval.hpp"

#include <string>
#include <vector>

namespace storygame {

/// Agent logit response: at every infoset, softmax(λ · Q) of the owner's
/// belief-weighted action values under `profile`.
BehavioralProfile logit_response(const Game& game, const BehavioralProfile& profile, double lambda);

/// Sup-norm gap between a profile and its logit response.
double fixed_point_residual(const Game& game, const BehavioralProfile& profile, double lambda);

struct FixedPointResult {
  BehavioralProfile profile;  ///< accepted iterate, or the best one seen when not converged
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double damping = 0.5;  ///< step size in use when the iteration stopped
};

/// Damped iteration σ ← (1−α)σ + α·logit_response(σ) until the residual is at
/// most `tol`. α starts at `damping` and halves whenever the step size grows.
FixedPointResult qre_fixed_point(const Game& game, double lambda, const BehavioralProfile& init, double tol = 1e-10,
                                 std::size_t max_iter = 20000, double damping = 0.5);

/// Snaps actions with probability ≥ 1−δ to 1, zeroes actions with probability
/// ≤ δ and renormalizes the rest.
BehavioralProfile purify(const BehavioralProfile& profile, double delta = 1e-3);

/// Geometric λ ladder, optionally preceded by λ = 0.
struct LambdaSchedule {
  double start = 0.01;
  double factor = 1.25;
  std::size_t steps = 60;
  bool include_zero = true;

  std::vector<double> ladder() const;
};

struct TraceOptions {
  LambdaSchedule schedule;
  double tol = 1e-10;
  std::size_t max_iter = 20000;
  double damping = 0.5;
  double purify_delta = 1e-3;
  /// Purified profiles closer than this (sup-norm) count as unchanged.
  double stability_tol = 1e-6;
  /// Number of consecutive rungs whose purified profiles must agree.
  std::size_t stable_rungs = 3;
  double jump_threshold = 0.4;
  /// Extra rungs inserted by bisection when a rung fails to converge.
  std::size_t max_bisections = 8;
  double verify_epsilon = 1e-4;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

struct LogitTracePoint {
  double lambda = 0.0;
  BehavioralProfile profile;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct SolverIssue {
  ErrorCode code = ErrorCode::NoConvergence;
  double lambda = 0.0;
  std::string message;
};

struct SolveReport {
  BehavioralProfile final_profile;  ///< purify(last_interior)
  BehavioralProfile last_interior;
  std::vector<LogitTracePoint> trace;
  bool purified = false;            ///< purification changed the last interior profile
  bool stopped_on_stability = false;
  bool verified = false;            ///< final profile passed verify_nash at `verify_epsilon`
  NashReport verification;
  std::vector<SolverIssue> issues;  ///< NoConvergence / PathJump / BudgetExceeded
  std::size_t iterations = 0;
  double wall_time_seconds = 0.0;
};

/// Follows the logit correspondence along the λ ladder with warm starts and
/// returns the purified limit (the limiting logit equilibrium).
SolveReport trace_lle(const Game& game, const TraceOptions& options = {});

}  // namespace storygame
