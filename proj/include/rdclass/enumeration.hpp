#pragma once

// Global solve by enumerating decoder maps: each fixed map gives one convex
// subproblem, and the smallest optimal I(X; X~) over all maps is the global
// optimum. Relabeling compressed letters permutes channel columns together
// with decoder entries and leaves objective and constraints unchanged, so by
// default only non-decreasing maps (one per relabeling class) are solved.

#include <optional>
#include <string>
#include <vector>

#include "rdclass/subproblem.hpp"

namespace rdclass {

/// Refusal to enumerate more than kMaxDecoderMaps maps.
class EnumerationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kMaxDecoderMaps = 1'000'000;

std::vector<DecoderMap> enumerate_decoders(std::size_t labels, std::size_t letters,
                                           bool canonical);

struct EnumerationOptions {
  bool canonical = true;
  unsigned threads = 0;  // 0: std::thread::hardware_concurrency()
  SolverOptions solver;
};

struct SubproblemOutcome {
  DecoderMap decoder;
  SolveResult result;
};

struct GlobalResult {
  SolveStatus status = SolveStatus::infeasible;
  SolveResult best;
  std::optional<DecoderMap> decoder;         // winning map when optimal
  std::optional<DecoderMap> failed_decoder;  // first map (lexicographic) that failed numerically
  std::size_t subproblems_solved = 0;
  std::size_t subproblems_infeasible = 0;
  std::vector<SubproblemOutcome> subproblems;  // enumeration order
};

GlobalResult global_solve(const ProblemInstance& instance, double budget,
                          const EnumerationOptions& options = {});

struct CurvePoint {
  double budget = 0.0;
  SolveStatus status = SolveStatus::infeasible;
  double mi = 0.0;
  double achieved_budget = 0.0;
  std::optional<DecoderMap> decoder;
};

struct CurveMetadata {
  std::string instance_digest;
  double gap_tolerance = 0.0;
  double feasibility_threshold = 0.0;
  double relaxation = 0.0;
  bool canonical = true;
};

struct TradeoffCurve {
  std::vector<CurvePoint> points;
  CurveMetadata metadata;
};

/// One global_solve per budget. Budgets must be strictly increasing and
/// nonnegative. Failures are recorded per point.
TradeoffCurve sweep(const ProblemInstance& instance, const std::vector<double>& budgets,
                    const EnumerationOptions& options = {});

/// count points from lo to hi inclusive, linearly spaced (count == 1 gives lo).
std::vector<double> linear_grid(double lo, double hi, int count);

}  // namespace rdclass
