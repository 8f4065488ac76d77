#include "rdclass/subproblem.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "barrier.hpp"
#include "nnls.hpp"

namespace rdclass {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::numerical_failure: return "numerical-failure";
  }
  return "unknown";
}

void SubproblemSpec::validate() const {
  if (decoder.size() != instance.compressed_size()) {
    throw ValidationError("decoder has " + std::to_string(decoder.size()) +
                          " entries but compressed_size is " +
                          std::to_string(instance.compressed_size()));
  }
  decoder.validate(static_cast<std::size_t>(instance.label_count()));
  if (!(budget >= 0.0) || !std::isfinite(budget))
    throw ValidationError("budget must be a finite nonnegative number");
}

namespace {

// Channel entries are flattened row-major: index j * l + k.
struct ChannelConstraints {
  Eigen::MatrixXd a;   // rows x (n*l)
  Eigen::VectorXd b;
  Eigen::Index first_relaxable = 0;  // rows before this are nonnegativity
};

ChannelConstraints build_constraints(const SubproblemSpec& spec) {
  const auto& inst = spec.instance;
  const Eigen::Index m = inst.label_count();
  const Eigen::Index n = inst.data_count();
  const auto l = static_cast<Eigen::Index>(inst.compressed_size());
  const Eigen::Index vars = n * l;
  const Eigen::Index rows = vars + 1 + l * (m - 1);

  // weight(i, j) = P(y_i) P(x_j | y_i)
  const Eigen::MatrixXd weight = inst.prior().probs().asDiagonal() * inst.generation().matrix();

  ChannelConstraints c;
  c.a = Eigen::MatrixXd::Zero(rows, vars);
  c.b = Eigen::VectorXd::Zero(rows);
  for (Eigen::Index v = 0; v < vars; ++v) c.a(v, v) = -1.0;
  c.first_relaxable = vars;

  Eigen::Index row = vars;
  for (Eigen::Index k = 0; k < l; ++k) {
    const auto d = static_cast<Eigen::Index>(spec.decoder[static_cast<std::size_t>(k)]);
    for (Eigen::Index j = 0; j < n; ++j) {
      double w = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) w += weight(i, j) * inst.cost()(i, d);
      c.a(row, j * l + k) = w;
    }
  }
  c.b[row] = spec.budget;
  ++row;

  for (Eigen::Index k = 0; k < l; ++k) {
    const auto d = static_cast<Eigen::Index>(spec.decoder[static_cast<std::size_t>(k)]);
    for (Eigen::Index rival = 0; rival < m; ++rival) {
      if (rival == d) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        double w = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
          w += weight(i, j) * (inst.cost()(i, d) - inst.cost()(i, rival));
        c.a(row, j * l + k) = w;
      }
      ++row;
    }
  }
  return c;
}

// Q = offset + basis * z, z holding the first l-1 entries of every row.
struct RowParametrization {
  Eigen::MatrixXd basis;   // (n*l) x (n*(l-1))
  Eigen::VectorXd offset;  // n*l
  Eigen::Index n = 0;
  Eigen::Index l = 0;

  RowParametrization(Eigen::Index rows, Eigen::Index cols) : n(rows), l(cols) {
    basis = Eigen::MatrixXd::Zero(n * l, n * (l - 1));
    offset = Eigen::VectorXd::Zero(n * l);
    for (Eigen::Index j = 0; j < n; ++j) {
      offset[j * l + l - 1] = 1.0;
      for (Eigen::Index k = 0; k + 1 < l; ++k) {
        basis(j * l + k, j * (l - 1) + k) = 1.0;
        basis(j * l + l - 1, j * (l - 1) + k) = -1.0;
      }
    }
  }

  Eigen::MatrixXd channel(const Eigen::VectorXd& z) const {
    Eigen::MatrixXd q(n, l);
    for (Eigen::Index j = 0; j < n; ++j) {
      double rest = 1.0;
      for (Eigen::Index k = 0; k + 1 < l; ++k) {
        q(j, k) = z[j * (l - 1) + k];
        rest -= q(j, k);
      }
      q(j, l - 1) = rest;
    }
    return q;
  }
};

Eigen::VectorXd flatten(const Eigen::MatrixXd& q) {
  Eigen::VectorXd v(q.size());
  for (Eigen::Index j = 0; j < q.rows(); ++j)
    for (Eigen::Index k = 0; k < q.cols(); ++k) v[j * q.cols() + k] = q(j, k);
  return v;
}

// Hessian of I (bits) in flattened channel coordinates; block diagonal over
// compressed letters: p_j / Q_jk on the diagonal minus p_j p_j' / r_k.
Eigen::MatrixXd mi_hessian(const Eigen::VectorXd& p, const Eigen::MatrixXd& q) {
  const Eigen::Index n = q.rows();
  const Eigen::Index l = q.cols();
  const Eigen::VectorXd r = q.transpose() * p;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n * l, n * l);
  for (Eigen::Index k = 0; k < l; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (p[j] == 0.0) continue;
      h(j * l + k, j * l + k) += p[j] / q(j, k);
      for (Eigen::Index jj = 0; jj < n; ++jj) h(j * l + k, jj * l + k) -= p[j] * p[jj] / r[k];
    }
  }
  return h / std::numbers::ln2;
}

// Signed (not clamped) mutual information for line-search differences.
double mi_value(const Eigen::VectorXd& p, const Eigen::MatrixXd& q) {
  const Eigen::VectorXd r = q.transpose() * p;
  double mi = 0.0;
  for (Eigen::Index j = 0; j < q.rows(); ++j) {
    if (p[j] == 0.0) continue;
    for (Eigen::Index k = 0; k < q.cols(); ++k)
      if (q(j, k) > 0.0) mi += p[j] * q(j, k) * std::log2(q(j, k) / r[k]);
  }
  return mi;
}

struct ReducedProblem {
  RowParametrization param;
  ChannelConstraints full;
  Eigen::MatrixXd a;  // constraints on z
  Eigen::VectorXd b;

  explicit ReducedProblem(const SubproblemSpec& spec)
      : param(spec.instance.data_count(), static_cast<Eigen::Index>(spec.instance.compressed_size())),
        full(build_constraints(spec)) {
    a = full.a * param.basis;
    b = full.b - full.a * param.offset;
  }

  Eigen::Index dim() const { return a.cols(); }
  Eigen::Index relaxable_rows() const { return a.rows() - full.first_relaxable; }

  double max_violation(const Eigen::VectorXd& z) const {
    const Eigen::Index nr = relaxable_rows();
    return (a.bottomRows(nr) * z - b.tail(nr)).maxCoeff();
  }

  Eigen::VectorXd barycenter() const {
    return Eigen::VectorXd::Constant(dim(), 1.0 / static_cast<double>(param.l));
  }
};

struct PhaseOneResult {
  FeasibilityStatus status = FeasibilityStatus::numerical_failure;
  Eigen::VectorXd z;
  double violation = 0.0;
  int iterations = 0;
};

PhaseOneResult phase_one(const ReducedProblem& rp, const SolverOptions& options) {
  PhaseOneResult res;
  const Eigen::Index d = rp.dim();
  const Eigen::Index r0 = rp.full.first_relaxable;
  const Eigen::Index rows = rp.a.rows();

  Eigen::VectorXd z0 = rp.barycenter();
  res.z = z0;
  res.violation = rp.max_violation(z0);
  if (res.violation <= 0.0) {
    res.status = FeasibilityStatus::feasible;
    return res;
  }

  // Variables (z, s): relaxable rows become a_i z - s <= b_i.
  Eigen::MatrixXd a1 = Eigen::MatrixXd::Zero(rows, d + 1);
  a1.leftCols(d) = rp.a;
  a1.block(r0, d, rows - r0, 1).setConstant(-1.0);
  Eigen::VectorXd x0(d + 1);
  x0.head(d) = z0;
  x0[d] = res.violation + 1.0;

  detail::BarrierObjective objective{
      [d](const Eigen::VectorXd& x) { return x[d]; },
      [d](const Eigen::VectorXd&, Eigen::VectorXd& g, Eigen::MatrixXd& h) {
        g = Eigen::VectorXd::Zero(d + 1);
        g[d] = 1.0;
        h = Eigen::MatrixXd::Zero(d + 1, d + 1);
      }};
  detail::BarrierOptions bo;
  bo.gap_tolerance = 1e-13;
  bo.max_inner_iterations = options.max_inner_iterations;

  const double count = static_cast<double>(rows);
  // A point this deep inside the relaxed rows is both a feasibility witness
  // and a strictly interior start for phase 2.
  const double accept = std::min(options.feasibility_threshold, 0.5 * options.relaxation);
  bool proven_infeasible = false;
  auto on_stage = [&](const Eigen::VectorXd& x, double t) {
    if (rp.max_violation(x.head(d)) <= accept) return true;
    if (x[d] - count / t > options.feasibility_threshold) {
      proven_infeasible = true;
      return true;
    }
    return false;
  };
  const auto outcome = detail::barrier_minimize(objective, a1, rp.b, x0, bo, on_stage);
  res.iterations = outcome.iterations;
  res.z = outcome.x.head(d);
  res.violation = rp.max_violation(res.z);
  if (outcome.status == detail::BarrierStatus::iteration_limit ||
      outcome.status == detail::BarrierStatus::line_search_failure) {
    res.status = FeasibilityStatus::numerical_failure;
    return res;
  }
  if (proven_infeasible || res.violation > options.feasibility_threshold) {
    res.status = FeasibilityStatus::infeasible;
  } else {
    res.status = FeasibilityStatus::feasible;
  }
  return res;
}

bool strictly_inside(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& z) {
  return ((b - a * z).array() > 0.0).all();
}

Eigen::VectorXd projected_row_complement(Eigen::VectorXd v, Eigen::Index n, Eigen::Index l) {
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mean = v.segment(j * l, l).mean();
    v.segment(j * l, l).array() -= mean;
  }
  return v;
}

double kkt_residual_impl(const SubproblemSpec& spec, const Eigen::MatrixXd& q,
                         const SolverOptions& options) {
  const ChannelConstraints c = build_constraints(spec);
  const Eigen::Index n = q.rows();
  const Eigen::Index l = q.cols();
  const Eigen::VectorXd p = data_marginal(spec.instance);
  const Eigen::MatrixXd clamped = q.cwiseMax(options.clamp);
  const Eigen::VectorXd grad =
      projected_row_complement(flatten(mutual_information_gradient(p, clamped)), n, l);

  const Eigen::VectorXd slack = c.b - c.a * flatten(q);
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < slack.size(); ++i)
    if (slack[i] <= options.active_tolerance) active.push_back(i);

  Eigen::MatrixXd normals(n * l, static_cast<Eigen::Index>(active.size()));
  for (std::size_t s = 0; s < active.size(); ++s)
    normals.col(static_cast<Eigen::Index>(s)) =
        projected_row_complement(c.a.row(active[s]).transpose(), n, l);
  const Eigen::VectorXd multipliers = detail::nnls(normals, -grad);
  // Primal feasibility is part of the certificate: a point outside the
  // feasible set is not a KKT point however well its gradient is fitted.
  const double stationarity = (grad + normals * multipliers).norm();
  const double infeasibility = (-slack).cwiseMax(0.0).norm();
  return std::hypot(stationarity, infeasibility);
}

}  // namespace

double max_constraint_violation(const SubproblemSpec& spec, const CompressionChannel& channel) {
  spec.validate();
  const ChannelConstraints c = build_constraints(spec);
  const Eigen::Index nr = c.a.rows() - c.first_relaxable;
  return (c.a.bottomRows(nr) * flatten(channel.matrix()) - c.b.tail(nr)).maxCoeff();
}

double kkt_residual(const SubproblemSpec& spec, const CompressionChannel& channel,
                    const SolverOptions& options) {
  spec.validate();
  if (channel.rows() != spec.instance.data_count() ||
      static_cast<std::size_t>(channel.cols()) != spec.instance.compressed_size()) {
    throw ValidationError("channel shape does not match the instance");
  }
  return kkt_residual_impl(spec, channel.matrix(), options);
}

FeasibilityReport check_feasibility(const SubproblemSpec& spec, const SolverOptions& options) {
  spec.validate();
  const ReducedProblem rp(spec);
  const PhaseOneResult p1 = phase_one(rp, options);
  FeasibilityReport report;
  report.status = p1.status;
  report.min_violation = p1.violation;
  report.iterations = p1.iterations;
  if (p1.status == FeasibilityStatus::feasible)
    report.witness.emplace(rp.param.channel(p1.z));
  return report;
}

SolveResult solve_subproblem(const SubproblemSpec& spec, const SolverOptions& options) {
  spec.validate();
  const ReducedProblem rp(spec);
  SolveResult result;
  result.mi = std::numeric_limits<double>::quiet_NaN();
  result.achieved_budget = std::numeric_limits<double>::quiet_NaN();
  result.kkt_residual = std::numeric_limits<double>::quiet_NaN();

  const PhaseOneResult p1 = phase_one(rp, options);
  result.iterations = p1.iterations;
  if (p1.status == FeasibilityStatus::infeasible) {
    result.status = SolveStatus::infeasible;
    return result;
  }
  if (p1.status == FeasibilityStatus::numerical_failure) {
    result.status = SolveStatus::numerical_failure;
    return result;
  }

  Eigen::VectorXd b2 = rp.b;
  b2.tail(rp.relaxable_rows()).array() += options.relaxation;

  Eigen::VectorXd start;
  const Eigen::VectorXd bary = rp.barycenter();
  if (strictly_inside(rp.a, b2, bary)) {
    start = bary;
  } else {
    for (double theta = 1e-3; theta >= 1e-15; theta *= 0.1) {
      const Eigen::VectorXd trial = (1.0 - theta) * p1.z + theta * bary;
      if (strictly_inside(rp.a, b2, trial)) {
        start = trial;
        break;
      }
    }
    if (start.size() == 0 && strictly_inside(rp.a, b2, p1.z)) start = p1.z;
  }
  if (start.size() == 0 && rp.dim() > 0) {
    result.status = SolveStatus::numerical_failure;
    return result;
  }
  if (rp.dim() == 0) start = Eigen::VectorXd(0);

  const Eigen::VectorXd p = data_marginal(spec.instance);
  const Eigen::MatrixXd& basis = rp.param.basis;
  detail::BarrierObjective objective{
      [&](const Eigen::VectorXd& z) { return mi_value(p, rp.param.channel(z)); },
      [&](const Eigen::VectorXd& z, Eigen::VectorXd& g, Eigen::MatrixXd& h) {
        const Eigen::MatrixXd q = rp.param.channel(z);
        g = basis.transpose() * flatten(mutual_information_gradient(p, q));
        h = basis.transpose() * mi_hessian(p, q) * basis;
      }};
  detail::BarrierOptions bo;
  bo.gap_tolerance = options.gap_tolerance;
  bo.acceptable_gap = options.acceptable_gap;
  bo.max_inner_iterations = options.max_inner_iterations;
  const auto outcome = detail::barrier_minimize(objective, rp.a, b2, start, bo);
  result.iterations += outcome.iterations;
  if (outcome.status != detail::BarrierStatus::converged) {
    result.status = SolveStatus::numerical_failure;
    return result;
  }

  const Eigen::MatrixXd q = rp.param.channel(outcome.x);
  if ((q.array() < 0.0).any()) {
    result.status = SolveStatus::numerical_failure;
    return result;
  }
  CompressionChannel channel(q);
  result.mi = mutual_information_unchecked(p, q);
  result.achieved_budget = expected_cost(spec.instance, channel, spec.decoder);
  result.kkt_residual = kkt_residual_impl(spec, q, options);
  const double violation = rp.max_violation(outcome.x);
  if (result.achieved_budget > spec.budget + 1e-7 || violation > 1e-8) {
    result.status = SolveStatus::numerical_failure;
    return result;
  }
  result.channel.emplace(std::move(channel));
  result.status = SolveStatus::optimal;
  return result;
}

}  // namespace rdclass
