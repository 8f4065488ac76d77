#pragma once

// Log-barrier method for  min F(x)  s.t.  A x <= b,  F smooth convex.
// Each stage minimizes t F(x) - sum log(b - A x) by damped Newton; t grows
// by a constant factor until the duality-gap bound rows(A)/t is small.

#include <functional>

#include <Eigen/Dense>

namespace rdclass::detail {

struct BarrierObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)> derivatives;
};

struct BarrierOptions {
  double t0 = 1.0;
  double growth = 10.0;
  double gap_tolerance = 1e-10;
  // When a stage breaks down (rounding floor near the boundary), the last
  // centered point is returned as converged if its gap bound is at most this.
  double acceptable_gap = 0.0;
  double newton_tolerance = 1e-10;  // on half the squared Newton decrement
  int max_inner_iterations = 10000;
};

enum class BarrierStatus { converged, stopped_early, iteration_limit, line_search_failure };

struct BarrierOutcome {
  Eigen::VectorXd x;
  double t = 0.0;
  int iterations = 0;
  BarrierStatus status = BarrierStatus::converged;
};

/// Called after every centering stage; returning true ends the run with
/// stopped_early.
using StageCallback = std::function<bool(const Eigen::VectorXd& x, double t)>;

/// x0 must be strictly feasible.
BarrierOutcome barrier_minimize(const BarrierObjective& objective, const Eigen::MatrixXd& a,
                                const Eigen::VectorXd& b, Eigen::VectorXd x0,
                                const BarrierOptions& options, const StageCallback& on_stage = {});

}  // namespace rdclass::detail
