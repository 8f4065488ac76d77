#pragma once

#include <cmath>
#include <string>

#include "rdclass/binary.hpp"
#include "rdclass/instance_io.hpp"
#include "rdclass/probability.hpp"
#include "rdclass/rng.hpp"

namespace fixtures {

inline std::string instance_path(const std::string& name) {
  return std::string(RDCLASS_INSTANCE_DIR) + "/" + name;
}

inline rdclass::ProblemInstance parametric_cost(double c = 1.0) {
  return rdclass::load_instance(instance_path("three_label_parametric_cost.json"), {{"c", c}});
}

inline rdclass::ProblemInstance two_letter() {
  return rdclass::load_instance(instance_path("three_label_two_letter.json"));
}

inline rdclass::ProblemInstance binary(double p1) { return rdclass::BinaryInstance(p1).to_problem(); }

// Closed form written out independently of the library: 1 - H2(p) in bits.
inline double one_minus_h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 1.0;
  return 1.0 + p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p);
}

inline Eigen::VectorXd random_simplex(rdclass::PortableRng& rng, Eigen::Index size,
                                      double floor = 0.0) {
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = rng.exponential() + floor;
  return v / v.sum();
}

inline Eigen::MatrixXd random_stochastic(rdclass::PortableRng& rng, Eigen::Index rows,
                                         Eigen::Index cols, double floor = 0.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = random_simplex(rng, cols, floor).transpose();
  return m;
}

inline rdclass::ProblemInstance random_instance(rdclass::PortableRng& rng, Eigen::Index labels,
                                                Eigen::Index data, std::size_t letters) {
  return rdclass::ProblemInstance(rdclass::LabelPrior(random_simplex(rng, labels, 0.05)),
                                  rdclass::GenerationChannel(random_stochastic(rng, labels, data)),
                                  letters);
}

}  // namespace fixtures
