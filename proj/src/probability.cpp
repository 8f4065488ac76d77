#include "rdclass/probability.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rdclass {

namespace {

std::string describe_row_sum(std::string_view what, Eigen::Index row, double sum) {
  std::ostringstream os;
  os.precision(17);
  os << what << " row " << row << " sums to " << sum << ", expected 1";
  return os.str();
}

void require_distribution(const Eigen::VectorXd& v, std::string_view what) {
  if (v.size() == 0) throw ValidationError(std::string(what) + " is empty");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0 || v[i] > 1.0) {
      throw ValidationError(std::string(what) + " entry " + std::to_string(i) +
                            " is outside [0, 1]");
    }
  }
  if (std::abs(v.sum() - 1.0) > kNormalizationTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << " sums to " << v.sum() << ", expected 1";
    throw ValidationError(os.str());
  }
}

double log2_ratio(double num, double den) { return std::log2(num / den); }

}  // namespace

LabelPrior::LabelPrior(Eigen::VectorXd probs, PriorCheck check) : probs_(std::move(probs)) {
  require_distribution(probs_, "prior");
  if (check == PriorCheck::strictly_positive) {
    for (Eigen::Index i = 0; i < probs_.size(); ++i) {
      if (!(probs_[i] > 0.0)) {
        throw ValidationError("prior entry " + std::to_string(i) +
                              " is zero; drop zero-probability labels first");
      }
    }
  }
}

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd matrix, std::string_view what)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.cols() == 0) {
    throw ValidationError(std::string(what) + " matrix is empty");
  }
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c) {
      const double v = matrix_(r, c);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw ValidationError(std::string(what) + " row " + std::to_string(r) + " entry " +
                              std::to_string(c) + " is outside [0, 1]");
      }
    }
    const double sum = matrix_.row(r).sum();
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
      throw ValidationError(describe_row_sum(what, r, sum));
    }
  }
}

CompressionChannel CompressionChannel::identity(Eigen::Index n) {
  return CompressionChannel(Eigen::MatrixXd::Identity(n, n));
}

CompressionChannel CompressionChannel::uniform(Eigen::Index n, Eigen::Index l) {
  return CompressionChannel(Eigen::MatrixXd::Constant(n, l, 1.0 / static_cast<double>(l)));
}

CostMatrix::CostMatrix(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw ValidationError("cost matrix must be square and non-empty");
  }
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c) {
      const double v = matrix_(r, c);
      if (!std::isfinite(v)) {
        throw ValidationError("cost row " + std::to_string(r) + " has a non-finite entry");
      }
      if (r == c && v != 0.0) {
        throw ValidationError("cost row " + std::to_string(r) + " has a nonzero diagonal entry");
      }
      if (v < 0.0) {
        throw ValidationError("cost row " + std::to_string(r) + " has a negative entry");
      }
    }
  }
}

CostMatrix CostMatrix::zero_one(Eigen::Index m) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(m, m);
  c.diagonal().setZero();
  return CostMatrix(std::move(c));
}

bool CostMatrix::is_zero_one() const {
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c)
      if (r != c && matrix_(r, c) != 1.0) return false;
  return true;
}

void DecoderMap::validate(std::size_t label_count) const {
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] >= label_count) {
      throw ValidationError("decoder entry " + std::to_string(k) + " names label " +
                            std::to_string(labels[k]) + " but only " +
                            std::to_string(label_count) + " labels exist");
    }
  }
}

ProblemInstance::ProblemInstance(LabelPrior prior, GenerationChannel generation,
                                 std::size_t compressed_size)
    : ProblemInstance(prior, generation, compressed_size, CostMatrix::zero_one(prior.size())) {}

ProblemInstance::ProblemInstance(LabelPrior prior, GenerationChannel generation,
                                 std::size_t compressed_size, CostMatrix cost)
    : prior_(std::move(prior)),
      generation_(std::move(generation)),
      compressed_size_(compressed_size),
      cost_(std::move(cost)) {
  if (prior_.size() != generation_.rows()) {
    throw ValidationError("prior has " + std::to_string(prior_.size()) +
                          " labels but generation has " + std::to_string(generation_.rows()) +
                          " rows");
  }
  if (cost_.size() != prior_.size()) {
    throw ValidationError("cost matrix is " + std::to_string(cost_.size()) + "x" +
                          std::to_string(cost_.size()) + " but there are " +
                          std::to_string(prior_.size()) + " labels");
  }
  if (compressed_size_ == 0) throw ValidationError("compressed_size must be positive");
  for (Eigen::Index i = 0; i < prior_.size(); ++i)
    label_names_.push_back("y" + std::to_string(i + 1));
  for (Eigen::Index j = 0; j < generation_.cols(); ++j)
    data_names_.push_back("x" + std::to_string(j + 1));
}

void ProblemInstance::set_names(std::vector<std::string> labels, std::vector<std::string> data) {
  if (static_cast<Eigen::Index>(labels.size()) != label_count()) {
    throw ValidationError("expected " + std::to_string(label_count()) + " label names, got " +
                          std::to_string(labels.size()));
  }
  if (static_cast<Eigen::Index>(data.size()) != data_count()) {
    throw ValidationError("expected " + std::to_string(data_count()) + " data letter names, got " +
                          std::to_string(data.size()));
  }
  label_names_ = std::move(labels);
  data_names_ = std::move(data);
}

double entropy_bits(const Eigen::VectorXd& dist) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < dist.size(); ++i)
    if (dist[i] > 0.0) h -= dist[i] * std::log2(dist[i]);
  return h;
}

double mutual_information_unchecked(const Eigen::VectorXd& input,
                                    const Eigen::MatrixXd& channel) {
  const Eigen::VectorXd out = channel.transpose() * input;
  double mi = 0.0;
  for (Eigen::Index j = 0; j < channel.rows(); ++j) {
    if (input[j] <= 0.0) continue;
    for (Eigen::Index k = 0; k < channel.cols(); ++k) {
      const double q = channel(j, k);
      if (q <= 0.0) continue;
      mi += input[j] * q * log2_ratio(q, out[k]);
    }
  }
  return std::max(mi, 0.0);
}

double mutual_information(const Eigen::VectorXd& input, const Eigen::MatrixXd& channel) {
  require_distribution(input, "input distribution");
  if (channel.rows() != input.size()) {
    throw ValidationError("channel has " + std::to_string(channel.rows()) +
                          " rows but input has " + std::to_string(input.size()) + " letters");
  }
  StochasticMatrix checked(channel, "channel");
  return mutual_information_unchecked(input, checked.matrix());
}

Eigen::MatrixXd mutual_information_gradient(const Eigen::VectorXd& input,
                                            const Eigen::MatrixXd& channel) {
  const Eigen::VectorXd out = channel.transpose() * input;
  Eigen::MatrixXd grad(channel.rows(), channel.cols());
  for (Eigen::Index j = 0; j < channel.rows(); ++j)
    for (Eigen::Index k = 0; k < channel.cols(); ++k)
      grad(j, k) = input[j] == 0.0 ? 0.0 : input[j] * log2_ratio(channel(j, k), out[k]);
  return grad;
}

Eigen::VectorXd data_marginal(const ProblemInstance& instance) {
  return instance.generation().matrix().transpose() * instance.prior().probs();
}

namespace {

void require_compatible(const ProblemInstance& instance, const CompressionChannel& q) {
  if (q.rows() != instance.data_count()) {
    throw ValidationError("compression channel has " + std::to_string(q.rows()) +
                          " rows but there are " + std::to_string(instance.data_count()) +
                          " data letters");
  }
}

void require_compatible(const ProblemInstance& instance, const CompressionChannel& q,
                        const DecoderMap& decoder) {
  require_compatible(instance, q);
  if (static_cast<Eigen::Index>(decoder.size()) != q.cols()) {
    throw ValidationError("decoder has " + std::to_string(decoder.size()) +
                          " entries but the channel has " + std::to_string(q.cols()) +
                          " compressed letters");
  }
  decoder.validate(static_cast<std::size_t>(instance.label_count()));
}

}  // namespace

Eigen::MatrixXd label_compressed_joint(const ProblemInstance& instance,
                                       const CompressionChannel& compression) {
  require_compatible(instance, compression);
  return instance.prior().probs().asDiagonal() *
         (instance.generation().matrix() * compression.matrix());
}

Posterior posterior(const ProblemInstance& instance, const CompressionChannel& compression) {
  Eigen::MatrixXd joint = label_compressed_joint(instance, compression);
  Posterior post{std::move(joint), std::vector<bool>(compression.cols(), true)};
  for (Eigen::Index k = 0; k < post.matrix.cols(); ++k) {
    const double marginal = post.matrix.col(k).sum();
    if (marginal > 0.0) {
      post.matrix.col(k) /= marginal;
    } else {
      post.matrix.col(k).setConstant(std::numeric_limits<double>::quiet_NaN());
      post.defined[k] = false;
    }
  }
  return post;
}

namespace {

// Absolute slack used to call two expected costs a tie.
constexpr double kTieTolerance = 1e-15;

std::size_t min_cost_label(const Eigen::VectorXd& joint_column, const CostMatrix& cost) {
  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (Eigen::Index d = 0; d < cost.size(); ++d) {
    double c = 0.0;
    for (Eigen::Index i = 0; i < cost.size(); ++i) c += joint_column[i] * cost(i, d);
    if (c < best_cost - kTieTolerance) {
      best_cost = c;
      best = static_cast<std::size_t>(d);
    }
  }
  return best;
}

}  // namespace

DecoderMap induced_decoder(const ProblemInstance& instance,
                           const CompressionChannel& compression) {
  const Eigen::MatrixXd joint = label_compressed_joint(instance, compression);
  DecoderMap decoder;
  decoder.labels.reserve(static_cast<std::size_t>(joint.cols()));
  for (Eigen::Index k = 0; k < joint.cols(); ++k)
    decoder.labels.push_back(min_cost_label(joint.col(k), instance.cost()));
  return decoder;
}

double expected_cost(const ProblemInstance& instance, const CompressionChannel& compression,
                     const DecoderMap& decoder) {
  require_compatible(instance, compression, decoder);
  const Eigen::MatrixXd joint = label_compressed_joint(instance, compression);
  double total = 0.0;
  for (Eigen::Index k = 0; k < joint.cols(); ++k) {
    const auto d = static_cast<Eigen::Index>(decoder[static_cast<std::size_t>(k)]);
    for (Eigen::Index i = 0; i < joint.rows(); ++i) total += joint(i, k) * instance.cost()(i, d);
  }
  return total;
}

double bayes_floor(const ProblemInstance& instance) {
  const auto n = instance.data_count();
  const Eigen::MatrixXd joint = instance.prior().probs().asDiagonal() *
                                instance.generation().matrix();
  DecoderMap decoder;
  for (Eigen::Index j = 0; j < n; ++j)
    decoder.labels.push_back(min_cost_label(joint.col(j), instance.cost()));
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto d = static_cast<Eigen::Index>(decoder[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < joint.rows(); ++i) total += joint(i, j) * instance.cost()(i, d);
  }
  return total;
}

double label_information(const ProblemInstance& instance,
                         const CompressionChannel& compression) {
  require_compatible(instance, compression);
  const Eigen::MatrixXd label_to_compressed =
      instance.generation().matrix() * compression.matrix();
  return mutual_information_unchecked(instance.prior().probs(), label_to_compressed);
}

double label_data_information(const ProblemInstance& instance) {
  return mutual_information_unchecked(instance.prior().probs(), instance.generation().matrix());
}

}  // namespace rdclass
