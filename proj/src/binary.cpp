#include "rdclass/binary.hpp"

#include <cmath>
#include <string>

namespace rdclass {

namespace {

void require_p1(double p1) {
  if (!(p1 >= 0.0 && p1 < 0.5))
    throw ValidationError("p1 must lie in [0, 1/2), got " + std::to_string(p1));
}

void require_p2(double p2) {
  if (!(p2 >= 0.0 && p2 <= 0.5))
    throw ValidationError("p2 must lie in [0, 1/2], got " + std::to_string(p2));
}

}  // namespace

BinaryInstance::BinaryInstance(double p1) : p1_(p1) { require_p1(p1); }

ProblemInstance BinaryInstance::to_problem() const {
  Eigen::MatrixXd g(2, 2);
  g << 1.0 - p1_, p1_, p1_, 1.0 - p1_;
  return ProblemInstance(LabelPrior(Eigen::Vector2d(0.5, 0.5)), GenerationChannel(g), 2);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binary entropy argument outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double binary_error(double p1, double p2) {
  require_p1(p1);
  require_p2(p2);
  return p1 + p2 - 2.0 * p1 * p2;
}

double binary_rate(double p2) {
  require_p2(p2);
  return 1.0 - binary_entropy(p2);
}

std::vector<BinaryTradeoffPoint> binary_curve(double p1, int grid_size) {
  require_p1(p1);
  if (grid_size < 2) throw ValidationError("grid_size must be at least 2");
  std::vector<BinaryTradeoffPoint> points;
  points.reserve(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    const double p2 = i == grid_size - 1 ? 0.5 : 0.5 * i / (grid_size - 1);
    points.push_back({p2, binary_error(p1, p2), binary_rate(p2), p2 == 0.5});
  }
  return points;
}

double invert_error_to_p2(double p1, double pe_target) {
  require_p1(p1);
  if (std::isnan(pe_target)) throw ValidationError("error target is NaN");
  if (pe_target < p1) {
    throw BelowBayesFloor("infeasible: below Bayes floor (target " + std::to_string(pe_target) +
                          " < p1 " + std::to_string(p1) + ")");
  }
  if (pe_target >= 0.5) return 0.5;
  return std::min(0.5, (pe_target - p1) / (1.0 - 2.0 * p1));
}

CompressionChannel binary_channel(double p2, double p3) {
  Eigen::MatrixXd q(2, 2);
  q << 1.0 - p2, p2, p3, 1.0 - p3;
  return CompressionChannel(q);
}

}  // namespace rdclass
