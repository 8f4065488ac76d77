#pragma once

// Closed-form optimum for the binary symmetric case: uniform binary label,
// symmetric label->data crossover p1 < 1/2, binary compressed alphabet. The
// optimal compression channel is symmetric with crossover p2 <= 1/2, giving
//   error = p1 + p2 - 2 p1 p2,   rate = 1 - H2(p2) bits.

#include <stdexcept>
#include <vector>

#include "rdclass/probability.hpp"

namespace rdclass {

/// Requested error is below the lossless (Bayes) error.
class BelowBayesFloor : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BinaryInstance {
 public:
  explicit BinaryInstance(double p1);
  double p1() const noexcept { return p1_; }

  /// Uniform prior, generation [[1-p1, p1], [p1, 1-p1]], two compressed letters, 0-1 cost.
  ProblemInstance to_problem() const;

 private:
  double p1_;
};

struct BinaryTradeoffPoint {
  double p2 = 0.0;
  double pe = 0.0;
  double mi = 0.0;
  // At p2 = 1/2 both posteriors are uniform and the MAP decision is a tie.
  bool map_tie = false;
};

double binary_entropy(double p);
double binary_error(double p1, double p2);
double binary_rate(double p2);
std::vector<BinaryTradeoffPoint> binary_curve(double p1, int grid_size);

/// p2 achieving error pe_target. Throws BelowBayesFloor when pe_target < p1;
/// targets above 1/2 clamp to p2 = 1/2.
double invert_error_to_p2(double p1, double pe_target);

/// Compression channel with P(x~=1|x=0) = p2 and P(x~=0|x=1) = p3.
CompressionChannel binary_channel(double p2, double p3);

}  // namespace rdclass
