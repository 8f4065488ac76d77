#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rdclass {

/// Thrown when an input violates a documented invariant (dimensions,
/// normalization, ranges). Messages name the offending row or field.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Tolerance for "sums to one".
inline constexpr double kNormalizationTolerance = 1e-12;

enum class PriorCheck { strictly_positive, allow_zero };

class LabelPrior {
 public:
  explicit LabelPrior(Eigen::VectorXd probs,
                      PriorCheck check = PriorCheck::strictly_positive);

  const Eigen::VectorXd& probs() const noexcept { return probs_; }
  Eigen::Index size() const noexcept { return probs_.size(); }
  double operator[](Eigen::Index i) const { return probs_[i]; }

 private:
  Eigen::VectorXd probs_;
};

/// Row-stochastic matrix: every entry in [0,1], every row sums to 1.
class StochasticMatrix {
 public:
  StochasticMatrix(Eigen::MatrixXd matrix, std::string_view what);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Eigen::Index rows() const noexcept { return matrix_.rows(); }
  Eigen::Index cols() const noexcept { return matrix_.cols(); }
  double operator()(Eigen::Index r, Eigen::Index c) const { return matrix_(r, c); }

 private:
  Eigen::MatrixXd matrix_;
};

/// P(x_j | y_i), one row per label (m x n).
class GenerationChannel : public StochasticMatrix {
 public:
  explicit GenerationChannel(Eigen::MatrixXd matrix)
      : StochasticMatrix(std::move(matrix), "generation") {}
};

/// Q(k | j) = P(x~_k | x_j), one row per data letter (n x l).
class CompressionChannel : public StochasticMatrix {
 public:
  explicit CompressionChannel(Eigen::MatrixXd matrix)
      : StochasticMatrix(std::move(matrix), "compression") {}

  static CompressionChannel identity(Eigen::Index n);
  static CompressionChannel uniform(Eigen::Index n, Eigen::Index l);
};

/// c(y_i, y^): cost of deciding y^ when the truth is y_i. Zero diagonal.
class CostMatrix {
 public:
  explicit CostMatrix(Eigen::MatrixXd matrix);
  static CostMatrix zero_one(Eigen::Index m);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  Eigen::Index size() const noexcept { return matrix_.rows(); }
  double operator()(Eigen::Index truth, Eigen::Index decided) const {
    return matrix_(truth, decided);
  }
  bool is_zero_one() const;

 private:
  Eigen::MatrixXd matrix_;
};

/// Entry k is the label decoded from compressed letter k.
struct DecoderMap {
  std::vector<std::size_t> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t operator[](std::size_t k) const { return labels[k]; }
  void validate(std::size_t label_count) const;

  friend auto operator<=>(const DecoderMap&, const DecoderMap&) = default;
};

class ProblemInstance {
 public:
  ProblemInstance(LabelPrior prior, GenerationChannel generation,
                  std::size_t compressed_size);
  ProblemInstance(LabelPrior prior, GenerationChannel generation,
                  std::size_t compressed_size, CostMatrix cost);

  const LabelPrior& prior() const noexcept { return prior_; }
  const GenerationChannel& generation() const noexcept { return generation_; }
  const CostMatrix& cost() const noexcept { return cost_; }
  std::size_t compressed_size() const noexcept { return compressed_size_; }

  Eigen::Index label_count() const noexcept { return prior_.size(); }
  Eigen::Index data_count() const noexcept { return generation_.cols(); }

  // Display names; default to y1..ym and x1..xn.
  const std::vector<std::string>& label_names() const noexcept { return label_names_; }
  const std::vector<std::string>& data_names() const noexcept { return data_names_; }
  void set_names(std::vector<std::string> labels, std::vector<std::string> data);

 private:
  LabelPrior prior_;
  GenerationChannel generation_;
  std::size_t compressed_size_;
  CostMatrix cost_;
  std::vector<std::string> label_names_;
  std::vector<std::string> data_names_;
};

/// Shannon entropy in bits, 0 log 0 = 0.
double entropy_bits(const Eigen::VectorXd& dist);

/// I(input; output) in bits for an input distribution pushed through a
/// row-stochastic channel. Validates both arguments.
double mutual_information(const Eigen::VectorXd& input, const Eigen::MatrixXd& channel);

/// Same as mutual_information() without validation; for solver iterates.
double mutual_information_unchecked(const Eigen::VectorXd& input,
                                    const Eigen::MatrixXd& channel);

/// dI/dQ(k|j) = p_j log2(Q(k|j) / r_k), r = p^T Q. Defined for any positive Q,
/// not only stochastic ones, so it can be checked entrywise.
Eigen::MatrixXd mutual_information_gradient(const Eigen::VectorXd& input,
                                            const Eigen::MatrixXd& channel);

Eigen::VectorXd data_marginal(const ProblemInstance& instance);

/// P(y_i, x~_k), m x l.
Eigen::MatrixXd label_compressed_joint(const ProblemInstance& instance,
                                       const CompressionChannel& compression);

struct Posterior {
  Eigen::MatrixXd matrix;     // m x l, column k is P(y | x~_k)
  std::vector<bool> defined;  // false where P(x~_k) == 0
};

Posterior posterior(const ProblemInstance& instance, const CompressionChannel& compression);

/// Minimum posterior-expected-cost decoder (MAP under 0-1 cost).
/// Ties go to the lowest label index.
DecoderMap induced_decoder(const ProblemInstance& instance,
                           const CompressionChannel& compression);

double expected_cost(const ProblemInstance& instance, const CompressionChannel& compression,
                     const DecoderMap& decoder);

/// Minimum expected cost when decoding straight from X.
double bayes_floor(const ProblemInstance& instance);

/// I(Y; X~) and I(Y; X), used by the bottleneck baseline and data-processing checks.
double label_information(const ProblemInstance& instance,
                         const CompressionChannel& compression);
double label_data_information(const ProblemInstance& instance);

}  // namespace rdclass
