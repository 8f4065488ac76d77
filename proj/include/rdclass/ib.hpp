#pragma once

// Information Bottleneck baseline. For a multiplier beta the channel
// minimizes I(X; X~) - beta I(Y; X~) (bits) and is found with the usual
// self-consistent updates
//   Q(k|j)  ∝ r_k * 2^(-beta * KL(P(y|x_j) || P(y|x~_k)))
//   r_k     = sum_j p_j Q(k|j)
//   P(y|x~_k) = sum_j P(y, x_j) Q(k|j) / r_k
// from several starts, keeping the best objective. Cost is evaluated under
// the channel's own minimum-cost decoder.

#include <cstdint>
#include <vector>

#include "rdclass/probability.hpp"

namespace rdclass {

struct IBOptions {
  int random_restarts = 10;  // plus one barycenter start
  int max_iterations = 10000;
  double tolerance = 1e-9;   // max entry change between sweeps
  std::uint64_t seed = 0;
};

struct IBSolution {
  CompressionChannel channel;
  double beta = 0.0;
  double mi_x = 0.0;
  double mi_y = 0.0;
  double objective = 0.0;
  bool converged = false;
  int restarts_used = 0;
  int iterations = 0;  // of the winning run
};

IBSolution ib_solve(const ProblemInstance& instance, double beta, const IBOptions& options = {});

/// One self-consistent update applied to `channel`; exposed for fixed-point checks.
Eigen::MatrixXd ib_update(const ProblemInstance& instance, const Eigen::MatrixXd& channel,
                          double beta);

struct IBPoint {
  double beta = 0.0;
  double mi_x = 0.0;
  double mi_y = 0.0;
  double cost = 0.0;
  bool converged = false;
  DecoderMap decoder;
  CompressionChannel channel;
};

std::vector<IBPoint> ib_sweep(const ProblemInstance& instance, const std::vector<double>& betas,
                              const IBOptions& options = {});

/// beta = 0 followed by 40 log-spaced values from 0.01 to 1000.
std::vector<double> default_beta_grid();

/// count log-spaced values from lo to hi inclusive (lo > 0).
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace rdclass
