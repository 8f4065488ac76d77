#pragma once

// One decoder-consistent convex program: for a fixed decoder map, minimize
// I(X; X~) over the compression channel subject to
//   * each channel row on the probability simplex,
//   * expected cost under the decoder <= budget,
//   * the decoder being a minimum-posterior-cost decoder for the channel
//     (linear in the channel; the MAP conditions under 0-1 cost).

#include <optional>
#include <string_view>

#include "rdclass/probability.hpp"

namespace rdclass {

struct SubproblemSpec {
  ProblemInstance instance;
  DecoderMap decoder;
  double budget = 0.0;

  /// Throws ValidationError on size mismatch, bad labels or a negative budget.
  void validate() const;
};

enum class SolveStatus { optimal, infeasible, numerical_failure };
std::string_view to_string(SolveStatus status);

struct SolverOptions {
  double gap_tolerance = 1e-10;          // barrier stops when rows/t falls below this
  double acceptable_gap = 1e-8;          // fallback when rounding stalls a later stage
  double feasibility_threshold = 1e-8;   // phase-1 minimum violation above this is infeasible
  double relaxation = 1e-9;              // slack granted to budget and consistency rows
  double active_tolerance = 1e-5;        // KKT: constraints with slack below this are active
  double clamp = 1e-12;                  // KKT: channel entries floored here for log terms
  int max_inner_iterations = 10000;
};

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  std::optional<CompressionChannel> channel;  // present iff optimal
  double mi = 0.0;
  double achieved_budget = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

enum class FeasibilityStatus { feasible, infeasible, numerical_failure };

struct FeasibilityReport {
  FeasibilityStatus status = FeasibilityStatus::infeasible;
  std::optional<CompressionChannel> witness;  // present iff feasible
  double min_violation = 0.0;                 // phase-1 objective at termination
  int iterations = 0;
};

SolveResult solve_subproblem(const SubproblemSpec& spec, const SolverOptions& options = {});

/// Phase-1 linear program: minimize the largest violation of the budget and
/// consistency rows over the product of simplices.
FeasibilityReport check_feasibility(const SubproblemSpec& spec, const SolverOptions& options = {});

/// Norm of the Lagrangian stationarity residual at `channel`, with row-sum
/// equality directions projected out and nonnegative multipliers for the
/// active inequality rows fitted by nonnegative least squares, combined
/// (root sum of squares) with the norm of the constraint violations.
double kkt_residual(const SubproblemSpec& spec, const CompressionChannel& channel,
                    const SolverOptions& options = {});

/// Largest violation of the budget and consistency rows (negative when all
/// hold strictly); nonnegativity is implied by the channel type.
double max_constraint_violation(const SubproblemSpec& spec, const CompressionChannel& channel);

}  // namespace rdclass
