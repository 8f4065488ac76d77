#include "rdclass/ib.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "rdclass/rng.hpp"

namespace rdclass {

namespace {

struct IBModel {
  Eigen::VectorXd px;        // p(x_j)
  Eigen::MatrixXd label_given_data;  // n x m, row j is P(y | x_j)
  Eigen::MatrixXd joint;     // n x m, P(x_j, y_i)
};

IBModel make_model(const ProblemInstance& instance) {
  IBModel model;
  model.px = data_marginal(instance);
  model.joint = (instance.prior().probs().asDiagonal() * instance.generation().matrix()).transpose();
  model.label_given_data = model.joint;
  for (Eigen::Index j = 0; j < model.px.size(); ++j) {
    if (model.px[j] > 0.0)
      model.label_given_data.row(j) /= model.px[j];
    else
      model.label_given_data.row(j) = instance.prior().probs().transpose();
  }
  return model;
}

double kl_bits(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

Eigen::MatrixXd update(const IBModel& model, const Eigen::MatrixXd& q, double beta) {
  const Eigen::Index n = q.rows();
  const Eigen::Index l = q.cols();
  const Eigen::VectorXd r = q.transpose() * model.px;
  Eigen::MatrixXd label_given_letter(l, model.joint.cols());  // row k is P(y | x~_k)
  for (Eigen::Index k = 0; k < l; ++k) {
    if (r[k] > 0.0)
      label_given_letter.row(k) = (model.joint.transpose() * q.col(k)).transpose() / r[k];
    else
      label_given_letter.row(k).setZero();
  }
  Eigen::MatrixXd next(n, l);
  Eigen::VectorXd logw(l);
  for (Eigen::Index j = 0; j < n; ++j) {
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < l; ++k) {
      if (r[k] <= 0.0) {
        logw[k] = -std::numeric_limits<double>::infinity();
        continue;
      }
      const double kl = beta == 0.0 ? 0.0
                                     : kl_bits(model.label_given_data.row(j).transpose(),
                                               label_given_letter.row(k).transpose());
      logw[k] = std::log2(r[k]) - beta * kl;
      top = std::max(top, logw[k]);
    }
    double total = 0.0;
    for (Eigen::Index k = 0; k < l; ++k) {
      next(j, k) = std::isfinite(logw[k]) ? std::exp2(logw[k] - top) : 0.0;
      total += next(j, k);
    }
    next.row(j) /= total;
  }
  return next;
}

struct Run {
  Eigen::MatrixXd channel;
  bool converged = false;
  int iterations = 0;
};

Run iterate(const IBModel& model, Eigen::MatrixXd q, double beta, const IBOptions& options) {
  Run run;
  for (int it = 0; it < options.max_iterations; ++it) {
    Eigen::MatrixXd next = update(model, q, beta);
    const double change = (next - q).cwiseAbs().maxCoeff();
    q = std::move(next);
    run.iterations = it + 1;
    if (change <= options.tolerance) {
      run.converged = true;
      break;
    }
  }
  run.channel = std::move(q);
  return run;
}

Eigen::MatrixXd random_channel(PortableRng& rng, Eigen::Index n, Eigen::Index l) {
  Eigen::MatrixXd q(n, l);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < l; ++k) q(j, k) = rng.exponential();
    q.row(j) /= q.row(j).sum();
  }
  return q;
}

// Rows summing to 1 within the validation tolerance.
Eigen::MatrixXd renormalized(Eigen::MatrixXd q) {
  for (Eigen::Index j = 0; j < q.rows(); ++j) q.row(j) /= q.row(j).sum();
  return q;
}

}  // namespace

Eigen::MatrixXd ib_update(const ProblemInstance& instance, const Eigen::MatrixXd& channel,
                          double beta) {
  if (!(beta >= 0.0)) throw ValidationError("beta must be nonnegative");
  return update(make_model(instance), channel, beta);
}

IBSolution ib_solve(const ProblemInstance& instance, double beta, const IBOptions& options) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be nonnegative");
  const IBModel model = make_model(instance);
  const Eigen::Index n = instance.data_count();
  const auto l = static_cast<Eigen::Index>(instance.compressed_size());

  PortableRng rng(options.seed);
  std::vector<Eigen::MatrixXd> starts;
  starts.push_back(Eigen::MatrixXd::Constant(n, l, 1.0 / static_cast<double>(l)));
  for (int r = 0; r < options.random_restarts; ++r) starts.push_back(random_channel(rng, n, l));

  std::optional<IBSolution> best;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    Run run = iterate(model, starts[s], beta, options);
    CompressionChannel channel(renormalized(std::move(run.channel)));
    const double mi_x = mutual_information_unchecked(model.px, channel.matrix());
    const double mi_y = label_information(instance, channel);
    const double objective = mi_x - beta * mi_y;
    // Ties keep the earlier start.
    if (!best || objective < best->objective) {
      best = IBSolution{std::move(channel), beta, mi_x, mi_y, objective, run.converged,
                        static_cast<int>(starts.size()), run.iterations};
    }
  }
  return *best;
}

std::vector<IBPoint> ib_sweep(const ProblemInstance& instance, const std::vector<double>& betas,
                              const IBOptions& options) {
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!(betas[i] >= 0.0)) throw ValidationError("betas must be nonnegative");
    if (i > 0 && !(betas[i] > betas[i - 1])) throw ValidationError("betas must be increasing");
  }
  std::vector<IBPoint> points;
  for (double beta : betas) {
    IBSolution sol = ib_solve(instance, beta, options);
    DecoderMap decoder = induced_decoder(instance, sol.channel);
    const double cost = expected_cost(instance, sol.channel, decoder);
    points.push_back(IBPoint{beta, sol.mi_x, sol.mi_y, cost, sol.converged, std::move(decoder),
                             std::move(sol.channel)});
  }
  return points;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ValidationError("log grid needs 0 < min <= max");
  if (count < 1) throw ValidationError("grid count must be positive");
  if (count == 1) return {lo};
  std::vector<double> grid;
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i)
    grid.push_back(i == 0 ? lo : i == count - 1 ? hi : std::pow(10.0, a + (b - a) * i / (count - 1)));
  return grid;
}

std::vector<double> default_beta_grid() {
  std::vector<double> grid{0.0};
  const auto logs = log_grid(0.01, 1000.0, 40);
  grid.insert(grid.end(), logs.begin(), logs.end());
  return grid;
}

}  // namespace rdclass
