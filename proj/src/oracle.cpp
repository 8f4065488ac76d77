#include "rdclass/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rdclass/rng.hpp"

namespace rdclass {

namespace {

// Slack for "cost within budget" on exactly representable grid channels.
constexpr double kGridTolerance = 1e-12;

int steps_per_unit(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw ValidationError("grid step must lie in (0, 1]");
  const double units = std::round(1.0 / step);
  if (std::abs(units * step - 1.0) > 1e-9) throw ValidationError("grid step must divide 1");
  return static_cast<int>(units);
}

// All ways to write `total` as an ordered sum of `parts` nonnegative integers.
std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(parts), 0);
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == parts - 1) {
      cur[static_cast<std::size_t>(idx)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[static_cast<std::size_t>(idx)] = v;
      self(self, idx + 1, left - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

struct GridSpace {
  std::vector<Eigen::RowVectorXd> rows;
  std::size_t cells = 0;
};

GridSpace make_space(const ProblemInstance& instance, double step) {
  const auto n = static_cast<std::size_t>(instance.data_count());
  const std::size_t l = instance.compressed_size();
  if (n * l > kMaxGridVariables) {
    throw OracleRefusal("grid search refused: n*l = " + std::to_string(n * l) +
                        " exceeds the limit of " + std::to_string(kMaxGridVariables));
  }
  const int units = steps_per_unit(step);
  GridSpace space;
  for (const auto& comp : compositions(units, static_cast<int>(l))) {
    Eigen::RowVectorXd row(static_cast<Eigen::Index>(l));
    for (std::size_t k = 0; k < l; ++k)
      row[static_cast<Eigen::Index>(k)] = static_cast<double>(comp[k]) / units;
    space.rows.push_back(row);
  }
  double cells = 1.0;
  for (std::size_t j = 0; j < n; ++j) cells *= static_cast<double>(space.rows.size());
  if (cells > static_cast<double>(kMaxGridCells)) {
    throw OracleRefusal("grid search refused: " + std::to_string(cells) +
                        " channels exceed the limit of " + std::to_string(kMaxGridCells));
  }
  space.cells = static_cast<std::size_t>(cells);
  return space;
}

// Visits every channel in the grid; visit(q) returns nothing.
template <typename Visit>
void for_each_channel(const GridSpace& space, Eigen::Index n, Visit&& visit) {
  const Eigen::Index l = space.rows.front().size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  Eigen::MatrixXd q(n, l);
  for (Eigen::Index j = 0; j < n; ++j) q.row(j) = space.rows[0];
  while (true) {
    visit(q);
    Eigen::Index j = n - 1;
    while (j >= 0) {
      auto& i = idx[static_cast<std::size_t>(j)];
      if (++i < space.rows.size()) {
        q.row(j) = space.rows[i];
        break;
      }
      i = 0;
      q.row(j) = space.rows[0];
      --j;
    }
    if (j < 0) break;
  }
}

double extended_mi(const Eigen::VectorXd& p, const Eigen::MatrixXd& q) {
  const Eigen::VectorXd r = q.transpose() * p;
  double mi = 0.0;
  for (Eigen::Index j = 0; j < q.rows(); ++j)
    for (Eigen::Index k = 0; k < q.cols(); ++k)
      if (p[j] > 0.0 && q(j, k) > 0.0) mi += p[j] * q(j, k) * std::log2(q(j, k) / r[k]);
  return mi;
}

std::size_t sample_index(const std::vector<double>& cdf, double u) {
  for (std::size_t i = 0; i < cdf.size(); ++i)
    if (u < cdf[i]) return i;
  // u landed in the rounding gap above the last partial sum.
  for (std::size_t i = cdf.size(); i-- > 0;)
    if (i == 0 || cdf[i] > cdf[i - 1]) return i;
  return 0;
}

std::vector<double> cumulative(const Eigen::Ref<const Eigen::VectorXd>& probs) {
  std::vector<double> cdf(static_cast<std::size_t>(probs.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  return cdf;
}

}  // namespace

GridSearchReport grid_search(const ProblemInstance& instance, double budget, double step) {
  const GridSpace space = make_space(instance, step);
  const Eigen::VectorXd p = data_marginal(instance);
  const Eigen::MatrixXd weight = instance.prior().probs().asDiagonal() *
                                 instance.generation().matrix();
  const auto& cost = instance.cost().matrix();
  GridSearchReport report;
  report.step = step;
  report.best_mi = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_q;
  for_each_channel(space, instance.data_count(), [&](const Eigen::MatrixXd& q) {
    ++report.evaluated_count;
    // Column k of cost^T * joint holds the expected cost of each decision.
    const Eigen::MatrixXd decision_cost = cost.transpose() * (weight * q);
    const double total = decision_cost.colwise().minCoeff().sum();
    if (total > budget + kGridTolerance) return;
    ++report.feasible_count;
    const double mi = extended_mi(p, q);
    if (mi < report.best_mi) {
      report.best_mi = mi;
      best_q = q;
    }
  });
  if (best_q.size() > 0) {
    report.best_channel.emplace(best_q);
    report.best_decoder = induced_decoder(instance, *report.best_channel);
  }
  return report;
}

GridSearchReport grid_search(const SubproblemSpec& spec, double step) {
  spec.validate();
  const ProblemInstance& instance = spec.instance;
  const GridSpace space = make_space(instance, step);
  const Eigen::VectorXd p = data_marginal(instance);
  const Eigen::MatrixXd weight = instance.prior().probs().asDiagonal() *
                                 instance.generation().matrix();
  const auto& cost = instance.cost().matrix();
  const Eigen::Index l = static_cast<Eigen::Index>(instance.compressed_size());
  GridSearchReport report;
  report.step = step;
  report.best_mi = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best_q;
  for_each_channel(space, instance.data_count(), [&](const Eigen::MatrixXd& q) {
    ++report.evaluated_count;
    const Eigen::MatrixXd decision_cost = cost.transpose() * (weight * q);
    double total = 0.0;
    for (Eigen::Index k = 0; k < l; ++k) {
      const double chosen = decision_cost(static_cast<Eigen::Index>(spec.decoder[static_cast<std::size_t>(k)]), k);
      if (chosen > decision_cost.col(k).minCoeff() + kGridTolerance) return;
      total += chosen;
    }
    if (total > spec.budget + kGridTolerance) return;
    ++report.feasible_count;
    const double mi = extended_mi(p, q);
    if (mi < report.best_mi) {
      report.best_mi = mi;
      best_q = q;
    }
  });
  if (best_q.size() > 0) {
    report.best_channel.emplace(best_q);
    report.best_decoder = spec.decoder;
  }
  return report;
}

MonteCarloEstimate monte_carlo_error(const ProblemInstance& instance,
                                     const CompressionChannel& channel, const DecoderMap& decoder,
                                     std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ValidationError("need at least one sample");
  if (channel.rows() != instance.data_count() ||
      static_cast<std::size_t>(channel.cols()) != decoder.size()) {
    throw ValidationError("channel and decoder shapes do not match the instance");
  }
  decoder.validate(static_cast<std::size_t>(instance.label_count()));

  const auto label_cdf = cumulative(instance.prior().probs());
  std::vector<std::vector<double>> data_cdf, letter_cdf;
  for (Eigen::Index i = 0; i < instance.label_count(); ++i)
    data_cdf.push_back(cumulative(instance.generation().matrix().row(i).transpose()));
  for (Eigen::Index j = 0; j < channel.rows(); ++j)
    letter_cdf.push_back(cumulative(channel.matrix().row(j).transpose()));

  PortableRng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t y = sample_index(label_cdf, rng.uniform());
    const std::size_t x = sample_index(data_cdf[y], rng.uniform());
    const std::size_t k = sample_index(letter_cdf[x], rng.uniform());
    const double c = instance.cost()(static_cast<Eigen::Index>(y),
                                     static_cast<Eigen::Index>(decoder[k]));
    sum += c;
    sum_sq += c * c;
  }
  const double count = static_cast<double>(samples);
  const double mean = sum / count;
  double variance = 0.0;
  if (samples > 1) variance = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
  return {mean, std::sqrt(variance / count)};
}

double gradient_check(const ProblemInstance& instance, const CompressionChannel& channel,
                      double h) {
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be positive");
  if (channel.rows() != instance.data_count())
    throw ValidationError("channel rows do not match the data alphabet");
  if ((channel.matrix().array() < 10.0 * h).any())
    throw ValidationError("gradient check needs every channel entry >= 10 h");
  const Eigen::VectorXd p = data_marginal(instance);
  const Eigen::MatrixXd analytic = mutual_information_gradient(p, channel.matrix());
  double worst = 0.0;
  Eigen::MatrixXd q = channel.matrix();
  for (Eigen::Index j = 0; j < q.rows(); ++j) {
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
      const double orig = q(j, k);
      q(j, k) = orig + h;
      const double up = extended_mi(p, q);
      q(j, k) = orig - h;
      const double down = extended_mi(p, q);
      q(j, k) = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double err = std::abs(analytic(j, k) - numeric) / std::max(1.0, std::abs(analytic(j, k)));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace rdclass
