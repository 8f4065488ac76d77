#include "barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdclass::detail {

namespace {

// Newton steps with a squared decrement below this are taken without a
// sufficient-decrease test: the objective difference is below rounding at
// large t, and the step lies well inside the barrier's Dikin ellipsoid.
constexpr double kFullStepDecrement = 0.05;
constexpr double kStallDecrement = 1e-6;
constexpr int kStallIterations = 20;
// decrement^2 / t bounds the objective error of a centering step, so a
// stalled decrement is harmless once it is this small relative to t.
constexpr double kStallObjectiveError = 1e-12;

// Solve H dx = rhs with symmetric Jacobi scaling; adds a growing ridge when
// the scaled matrix is not numerically positive definite.
Eigen::VectorXd newton_direction(const Eigen::MatrixXd& h, const Eigen::VectorXd& rhs) {
  const Eigen::Index d = h.rows();
  Eigen::VectorXd scale(d);
  for (Eigen::Index i = 0; i < d; ++i) scale[i] = h(i, i) > 0.0 ? 1.0 / std::sqrt(h(i, i)) : 1.0;
  Eigen::MatrixXd hs = scale.asDiagonal() * h * scale.asDiagonal();
  const Eigen::VectorXd rs = scale.cwiseProduct(rhs);
  double ridge = 0.0;
  for (int attempt = 0; attempt < 20; ++attempt) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(hs + ridge * Eigen::MatrixXd::Identity(d, d));
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      Eigen::VectorXd dx = scale.cwiseProduct(ldlt.solve(rs));
      if (dx.allFinite()) return dx;
    }
    ridge = ridge == 0.0 ? 1e-14 : ridge * 100.0;
  }
  return Eigen::VectorXd::Zero(d);
}

}  // namespace

BarrierOutcome barrier_minimize(const BarrierObjective& objective, const Eigen::MatrixXd& a,
                                const Eigen::VectorXd& b, Eigen::VectorXd x0,
                                const BarrierOptions& options, const StageCallback& on_stage) {
  BarrierOutcome out;
  out.x = std::move(x0);
  out.t = options.t0;
  const Eigen::Index dim = out.x.size();
  const double constraint_count = static_cast<double>(std::max<Eigen::Index>(a.rows(), 1));

  Eigen::VectorXd grad_f(dim), grad(dim), slack(a.rows());
  Eigen::MatrixXd hess_f(dim, dim), hess(dim, dim);

  Eigen::VectorXd centered;
  double centered_t = 0.0;
  auto give_up = [&](BarrierStatus status) {
    if (centered.size() == dim && centered_t > 0.0 &&
        constraint_count / centered_t <= options.acceptable_gap) {
      out.x = centered;
      out.t = centered_t;
      out.status = BarrierStatus::converged;
    } else {
      out.status = status;
    }
    return out;
  };

  while (true) {
    slack = b - a * out.x;
    int inner = 0;
    int stalled = 0;
    double best_decrement2 = std::numeric_limits<double>::infinity();
    const double stall_limit = std::max(kStallDecrement, kStallObjectiveError * out.t);
    for (;; ++inner) {
      if (inner >= options.max_inner_iterations) return give_up(BarrierStatus::iteration_limit);
      if (dim == 0) break;
      objective.derivatives(out.x, grad_f, hess_f);
      const Eigen::VectorXd inv = slack.cwiseInverse();
      grad = out.t * grad_f + a.transpose() * inv;
      hess = out.t * hess_f + a.transpose() * inv.cwiseAbs2().asDiagonal() * a;
      const Eigen::VectorXd dx = newton_direction(hess, -grad);
      const double decrement2 = -grad.dot(dx);
      ++out.iterations;
      if (!(decrement2 >= 0.0) || !dx.allFinite()) return give_up(BarrierStatus::line_search_failure);
      if (decrement2 / 2.0 <= options.newton_tolerance) break;
      // Rounding floor: the decrement stopped shrinking at a tiny value.
      if (decrement2 < 0.5 * best_decrement2) {
        best_decrement2 = decrement2;
        stalled = 0;
      } else if (decrement2 < stall_limit && ++stalled > kStallIterations) {
        break;
      }

      const Eigen::VectorXd adx = a * dx;
      double alpha = 1.0;
      for (Eigen::Index i = 0; i < adx.size(); ++i)
        if (adx[i] > 0.0) alpha = std::min(alpha, 0.99 * slack[i] / adx[i]);

      const double f0 = objective.value(out.x);
      bool accepted = false;
      for (int ls = 0; ls < 80; ++ls, alpha *= 0.5) {
        const Eigen::VectorXd trial = out.x + alpha * dx;
        const Eigen::VectorXd trial_slack = b - a * trial;
        if ((trial_slack.array() <= 0.0).any()) continue;
        if (decrement2 <= kFullStepDecrement) {
          accepted = true;
        } else {
          double barrier_change = 0.0;
          for (Eigen::Index i = 0; i < adx.size(); ++i)
            barrier_change -= std::log1p(-alpha * adx[i] / slack[i]);
          const double change = out.t * (objective.value(trial) - f0) + barrier_change;
          accepted = change <= -0.25 * alpha * decrement2;
        }
        if (accepted) {
          out.x = trial;
          slack = trial_slack;
          break;
        }
      }
      if (!accepted) {
        // Rounding floor: the decrement cannot be verified any further.
        if (decrement2 < stall_limit) break;
        return give_up(BarrierStatus::line_search_failure);
      }
    }

    if (on_stage && on_stage(out.x, out.t)) {
      out.status = BarrierStatus::stopped_early;
      return out;
    }
    if (constraint_count / out.t <= options.gap_tolerance) {
      out.status = BarrierStatus::converged;
      return out;
    }
    centered = out.x;
    centered_t = out.t;
    out.t *= options.growth;
  }
}

}  // namespace rdclass::detail
