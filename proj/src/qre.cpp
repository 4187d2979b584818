#include "storygame/qre.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace storygame {

namespace {

std::vector<double> softmax(const std::vector<double>& q, double lambda) {
  std::vector<double> out(q.size());
  if (lambda == 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(q.size()));
    return out;
  }
  const double top = *std::max_element(q.begin(), q.end());
  double sum = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    out[a] = std::exp(lambda * (q[a] - top));
    sum += out[a];
  }
  for (double& p : out) p /= sum;
  return out;
}

}  // namespace

BehavioralProfile logit_response(const Game& game, const BehavioralProfile& profile, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::ProfileShapeMismatch, "lambda must be non-negative");
  const auto q = all_action_values(game, profile);
  std::vector<std::vector<double>> out;
  out.reserve(q.size());
  for (const auto& values : q) out.push_back(softmax(values.values, lambda));
  return BehavioralProfile(std::move(out));
}

double fixed_point_residual(const Game& game, const BehavioralProfile& profile, double lambda) {
  return logit_response(game, profile, lambda).distance(profile);
}

FixedPointResult qre_fixed_point(const Game& game, double lambda, const BehavioralProfile& init, double tol,
                                 std::size_t max_iter, double damping) {
  check_profile(game, init, 1e-9);
  // The λ = 0 response ignores σ entirely, so its fixed point is the response itself.
  if (lambda == 0.0) return {BehavioralProfile::uniform(game), 0.0, 0, true, damping};
  FixedPointResult best{init, std::numeric_limits<double>::infinity(), 0, false, damping};
  BehavioralProfile sigma = init;
  double alpha = damping;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it <= max_iter; ++it) {
    BehavioralProfile response = logit_response(game, sigma, lambda);
    const double residual = response.distance(sigma);
    if (residual < best.residual) best = {sigma, residual, it, false, alpha};
    if (residual <= tol) return {std::move(sigma), residual, it, true, alpha};
    if (it == max_iter) break;
    if (residual > previous)
      alpha = std::max(alpha * 0.5, 1.0 / 1024.0);
    else
      alpha = std::min(damping, alpha * 1.1);
    previous = residual;
    for (InfosetId s = 0; s < sigma.size(); ++s) {
      auto& v = sigma[s];
      double sum = 0.0;
      for (std::size_t a = 0; a < v.size(); ++a) {
        v[a] = (1.0 - alpha) * v[a] + alpha * response[s][a];
        sum += v[a];
      }
      for (double& p : v) p /= sum;
    }
  }
  best.iterations = max_iter;
  best.damping = alpha;
  return best;
}

BehavioralProfile purify(const BehavioralProfile& profile, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw Error(ErrorCode::ProfileShapeMismatch, "purify delta must be in (0, 0.5)");
  std::vector<std::vector<double>> out;
  for (const auto& v : profile.data()) {
    std::vector<double> w(v.size(), 0.0);
    auto top = std::max_element(v.begin(), v.end());
    if (top != v.end() && *top >= 1.0 - delta) {
      w[static_cast<std::size_t>(top - v.begin())] = 1.0;
    } else {
      double sum = 0.0;
      for (std::size_t a = 0; a < v.size(); ++a) {
        w[a] = v[a] <= delta ? 0.0 : v[a];
        sum += w[a];
      }
      for (double& p : w) p /= sum;
    }
    out.push_back(std::move(w));
  }
  return BehavioralProfile(std::move(out));
}

std::vector<double> LambdaSchedule::ladder() const {
  std::vector<double> out;
  if (include_zero) out.push_back(0.0);
  double lambda = start;
  for (std::size_t k = 0; k < steps; ++k) {
    out.push_back(lambda);
    lambda *= factor;
  }
  return out;
}

SolveReport trace_lle(const Game& game, const TraceOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const auto ladder = options.schedule.ladder();
  for (std::size_t k = 0; k < ladder.size(); ++k)
    if (ladder[k] < 0.0 || (k > 0 && !(ladder[k] > ladder[k - 1])))
      throw Error(ErrorCode::Usage, "lambda schedule must be non-negative and strictly increasing");

  SolveReport report;
  BehavioralProfile sigma = BehavioralProfile::uniform(game);
  report.last_interior = sigma;
  BehavioralProfile previous_pure;
  std::size_t agreeing = 0;
  double last_lambda = -1.0;

  auto accept = [&](double lambda, FixedPointResult&& fp) {
    report.iterations += fp.iterations;
    if (!report.trace.empty()) {
      const double jump = fp.profile.distance(report.trace.back().profile);
      if (jump > options.jump_threshold) {
        std::ostringstream msg;
        msg << "profile moved " << jump << " between lambda " << report.trace.back().lambda << " and " << lambda;
        report.issues.push_back({ErrorCode::PathJump, lambda, msg.str()});
      }
    }
    report.trace.push_back({lambda, fp.profile, fp.residual, fp.iterations, fp.converged});
    sigma = std::move(fp.profile);
    last_lambda = lambda;
  };

  for (double target : ladder) {
    // Approach `target` from the last accepted rung, bisecting on failure.
    std::vector<double> pending{target};
    std::size_t bisections = 0;
    bool failed = false;
    while (!pending.empty()) {
      const double lambda = pending.back();
      FixedPointResult fp = qre_fixed_point(game, lambda, sigma, options.tol, options.max_iter, options.damping);
      if (!fp.converged && bisections < options.max_bisections && last_lambda >= 0.0) {
        ++bisections;
        pending.push_back(0.5 * (last_lambda + lambda));
        continue;
      }
      if (!fp.converged) {
        std::ostringstream msg;
        msg << "fixed point at lambda " << lambda << " stopped with residual " << fp.residual;
        report.issues.push_back({ErrorCode::NoConvergence, lambda, msg.str()});
        failed = true;
      }
      pending.pop_back();
      accept(lambda, std::move(fp));
    }

    if (!failed) report.last_interior = sigma;
    BehavioralProfile pure = purify(sigma, options.purify_delta);
    if (previous_pure.size() == pure.size() && pure.distance(previous_pure) <= options.stability_tol)
      ++agreeing;
    else
      agreeing = 1;
    previous_pure = std::move(pure);
    if (agreeing >= options.stable_rungs) {
      report.stopped_on_stability = true;
      break;
    }
  }

  report.final_profile = purify(report.last_interior, options.purify_delta);
  report.purified = report.final_profile != report.last_interior;
  try {
    report.verification = verify_nash(game, report.final_profile, options.verify_epsilon, options.budget);
    report.verified = report.verification.is_epsilon_nash;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded) throw;
    report.issues.push_back({ErrorCode::BudgetExceeded, last_lambda, e.what()});
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace storygame
