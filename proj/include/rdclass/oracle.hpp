#pragma once

// Independent checks that share no code path with the barrier solver:
// brute-force search over channels whose rows are simplex grid points,
// Monte Carlo simulation of the label -> data -> compressed chain, and
// central finite differences of the mutual information.

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "rdclass/probability.hpp"
#include "rdclass/subproblem.hpp"

namespace rdclass {

/// The requested oracle run exceeds its size guard.
class OracleRefusal : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kMaxGridCells = 100'000'000;
inline constexpr std::size_t kMaxGridVariables = 6;  // n * l

struct GridSearchReport {
  double step = 0.0;
  double best_mi = 0.0;  // +inf when nothing is feasible
  std::optional<CompressionChannel> best_channel;
  std::optional<DecoderMap> best_decoder;
  std::size_t feasible_count = 0;
  std::size_t evaluated_count = 0;
};

/// Global problem: each grid channel is decoded by its own minimum-cost
/// decoder and is feasible when that cost is within the budget.
GridSearchReport grid_search(const ProblemInstance& instance, double budget, double step);

/// Fixed-decoder problem: a grid channel is feasible when the decoder's cost
/// is within budget and the decoder is a minimum-cost decoder for it.
GridSearchReport grid_search(const SubproblemSpec& spec, double step);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

MonteCarloEstimate monte_carlo_error(const ProblemInstance& instance,
                                     const CompressionChannel& channel, const DecoderMap& decoder,
                                     std::size_t samples, std::uint64_t seed);

/// Max over entries of |analytic - central difference| / max(1, |analytic|)
/// for dI/dQ(k|j). Requires every entry >= 10 h.
double gradient_check(const ProblemInstance& instance, const CompressionChannel& channel,
                      double h);

}  // namespace rdclass
