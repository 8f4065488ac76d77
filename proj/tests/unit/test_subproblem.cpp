#include <doctest.h>

#include "fixtures.hpp"
#include "rdclass/enumeration.hpp"
#include "rdclass/oracle.hpp"
#include "rdclass/subproblem.hpp"

using namespace rdclass;
using doctest::Approx;

namespace {

constexpr double kRateTenth = 0.531004406410718778;

SubproblemSpec spec(ProblemInstance inst, std::vector<std::size_t> decoder, double budget) {
  return {std::move(inst), DecoderMap{std::move(decoder)}, budget};
}

Eigen::MatrixXd perturbed(const CompressionChannel& q, double shift) {
  Eigen::MatrixXd out = q.matrix().array() + shift;
  for (Eigen::Index j = 0; j < out.rows(); ++j) out.row(j) /= out.row(j).sum();
  return out;
}

void check_postconditions(const SubproblemSpec& s, const SolveResult& r) {
  REQUIRE(r.status == SolveStatus::optimal);
  REQUIRE(r.channel.has_value());
  CHECK(r.achieved_budget <= s.budget + 1e-7);
  CHECK(expected_cost(s.instance, *r.channel, s.decoder) == Approx(r.achieved_budget).epsilon(1e-12));
  CHECK(max_constraint_violation(s, *r.channel) <= 1e-8);
  CHECK(r.kkt_residual <= 1e-6);
  const auto induced = induced_decoder(s.instance, *r.channel);
  CHECK(std::abs(expected_cost(s.instance, *r.channel, induced) - r.achieved_budget) <= 1e-8);
}

}  // namespace

TEST_CASE("subproblem validation") {
  CHECK_THROWS_AS(spec(fixtures::binary(0.3), {0}, 0.4).validate(), ValidationError);
  CHECK_THROWS_AS(spec(fixtures::binary(0.3), {0, 2}, 0.4).validate(), ValidationError);
  CHECK_THROWS_AS(spec(fixtures::binary(0.3), {0, 1}, -0.1).validate(), ValidationError);
  CHECK(to_string(SolveStatus::numerical_failure) == "numerical-failure");
}

TEST_CASE("binary reference solves") {
  const auto constant = spec(fixtures::binary(0.3), {0, 0}, 0.5);
  const auto r0 = solve_subproblem(constant);
  check_postconditions(constant, r0);
  CHECK(r0.mi <= 1e-6);

  const auto identity = spec(fixtures::binary(0.3), {0, 1}, 0.34);
  const auto r1 = solve_subproblem(identity);
  check_postconditions(identity, r1);
  CHECK(r1.mi == Approx(kRateTenth).epsilon(1e-6));

  for (const auto& d : enumerate_decoders(2, 2, false)) {
    const auto r = solve_subproblem({fixtures::binary(0.3), d, 0.2});
    CHECK(r.status == SolveStatus::infeasible);
    CHECK_FALSE(r.channel.has_value());
    CHECK(std::isnan(r.mi));
  }
}

TEST_CASE("budget exactly at the Bayes floor") {
  const auto s = spec(fixtures::binary(0.3), {0, 1}, 0.3);
  const auto r = solve_subproblem(s);
  check_postconditions(s, r);
  CHECK(r.mi == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("phase one") {
  const auto feasible = check_feasibility(spec(fixtures::binary(0.3), {0, 0}, 0.5));
  CHECK(feasible.status == FeasibilityStatus::feasible);
  REQUIRE(feasible.witness.has_value());
  CHECK(max_constraint_violation(spec(fixtures::binary(0.3), {0, 0}, 0.5), *feasible.witness) <= 1e-8);

  const auto zero = check_feasibility(spec(fixtures::binary(0.3), {0, 1}, 0.0));
  CHECK(zero.status == FeasibilityStatus::infeasible);
  CHECK(zero.min_violation > 1e-8);
  CHECK_FALSE(zero.witness.has_value());
}

TEST_CASE("regression: two-letter instance, decoder y1|y3 at 0.13") {
  // An independent LP puts the smallest budget for this decoder at 0.250005.
  const auto s = spec(fixtures::two_letter(), {0, 2}, 0.13);
  const auto report = check_feasibility(s);
  CHECK(report.status == FeasibilityStatus::infeasible);
  CHECK(solve_subproblem(s).status == SolveStatus::infeasible);
  CHECK(grid_search(s, 0.05).feasible_count == 0);

  const auto above = spec(fixtures::two_letter(), {0, 2}, 0.2501);
  CHECK(check_feasibility(above).status == FeasibilityStatus::feasible);
  CHECK(grid_search(above, 0.05).feasible_count > 0);
}

TEST_CASE("kkt residual separates optimum from a perturbed point") {
  const auto s = spec(fixtures::two_letter(), {0, 1}, 0.1);
  const auto r = solve_subproblem(s);
  check_postconditions(s, r);
  const CompressionChannel moved(perturbed(*r.channel, 0.01));
  CHECK(kkt_residual(s, moved) > 1e-4);

  // Feasible with no active rows, so only stationarity can flag it.
  const auto loose = spec(fixtures::binary(0.3), {0, 1}, 0.45);
  const auto interior = binary_channel(0.2, 0.2);
  REQUIRE(max_constraint_violation(loose, interior) < -1e-3);
  CHECK(kkt_residual(loose, interior) > 1e-4);

  const auto b = spec(fixtures::binary(0.3), {0, 1}, 0.34);
  const auto rb = solve_subproblem(b);
  CHECK(kkt_residual(b, *rb.channel) <= 1e-6);
}

TEST_CASE("asymmetric cost instances") {
  for (double c : {0.5, 1.0, 2.0}) {
    const auto inst = fixtures::parametric_cost(c);
    for (double budget : {0.05, 0.2, 0.45}) {
      const auto s = spec(inst, {0, 1, 2}, budget);
      const auto r = solve_subproblem(s);
      CAPTURE(c);
      CAPTURE(budget);
      check_postconditions(s, r);
    }
  }
}

TEST_CASE("solver is never beaten by the fixed-decoder grid") {
  PortableRng rng(424242);
  int compared = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const Eigen::Index n = trial % 2 == 0 ? 2 : 3;
    const auto inst = fixtures::random_instance(rng, 2 + trial % 2, n, 2);
    const auto decoders = enumerate_decoders(static_cast<std::size_t>(inst.label_count()), 2, false);
    const auto& d = decoders[rng.next() % decoders.size()];
    const double floor = bayes_floor(inst);
    const double budget = floor + (0.6 - floor) * rng.uniform();
    const SubproblemSpec s{inst, d, budget};
    const auto r = solve_subproblem(s);
    const auto grid = grid_search(s, 0.02);
    CAPTURE(trial);
    CHECK(r.status != SolveStatus::numerical_failure);
    if (r.status == SolveStatus::optimal) {
      check_postconditions(s, r);
      if (grid.feasible_count > 0) {
        CHECK(r.mi <= grid.best_mi + 1e-3);
        ++compared;
      }
    } else {
      CHECK(grid.feasible_count == 0);
    }
  }
  CHECK(compared >= 4);
}

TEST_CASE("optimal mi is monotone in the budget") {
  const auto inst = fixtures::two_letter();
  double previous = 1e300;
  for (int i = 0; i <= 10; ++i) {
    const double budget = 0.07 + 0.018 * i;
    const auto r = solve_subproblem(spec(inst, {0, 1}, budget));
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.mi <= previous + 1e-6);
    previous = r.mi;
  }
}

TEST_CASE("solves are deterministic") {
  const auto s = spec(fixtures::parametric_cost(2.0), {0, 1, 2}, 0.1);
  const auto a = solve_subproblem(s);
  const auto b = solve_subproblem(s);
  REQUIRE(a.status == SolveStatus::optimal);
  CHECK(std::abs(a.mi - b.mi) <= 1e-9);
}
