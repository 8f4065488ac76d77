#pragma once

#include <Eigen/Dense>

namespace rdclass::detail {

/// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace rdclass::detail
