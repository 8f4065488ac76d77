#include <doctest.h>

#include "fixtures.hpp"
#include "rdclass/oracle.hpp"

using namespace rdclass;
using doctest::Approx;

TEST_CASE("grid search reference runs") {
  const auto inst = fixtures::binary(0.3);
  const auto top = grid_search(inst, 0.5, 0.02);
  CHECK(top.best_mi <= 1e-9);
  CHECK(top.evaluated_count == 51 * 51);

  const auto mid = grid_search(inst, 0.34, 0.01);
  CHECK(std::abs(mid.best_mi - 0.53101) <= 2e-2);
  REQUIRE(mid.best_channel.has_value());
  CHECK(expected_cost(inst, *mid.best_channel, *mid.best_decoder) <= 0.34 + 1e-9);

  const auto none = grid_search(inst, 0.2, 0.02);
  CHECK(none.feasible_count == 0);
  CHECK_FALSE(none.best_channel.has_value());
}

TEST_CASE("grid search guards") {
  PortableRng rng(3);
  const auto big = fixtures::random_instance(rng, 3, 4, 4);
  CHECK_THROWS_AS(grid_search(big, 0.5, 0.02), OracleRefusal);
  CHECK_THROWS_AS(grid_search(fixtures::two_letter(), 0.5, 0.001), OracleRefusal);
  CHECK_THROWS_AS(grid_search(fixtures::binary(0.3), 0.5, 0.03), ValidationError);
}

TEST_CASE("monte carlo error estimates") {
  const auto inst = fixtures::binary(0.3);
  const auto mc = monte_carlo_error(inst, binary_channel(0.1, 0.1), DecoderMap{{0, 1}}, 1'000'000, 5);
  CHECK(std::abs(mc.estimate - 0.34) <= 3.0 * mc.standard_error);

  const ProblemInstance free(inst.prior(), inst.generation(), 2,
                             CostMatrix(Eigen::MatrixXd::Zero(2, 2)));
  CHECK(monte_carlo_error(free, binary_channel(0.3, 0.2), DecoderMap{{0, 1}}, 1000, 1).estimate == 0.0);

  const auto clean = fixtures::binary(0.0);
  const auto exact = monte_carlo_error(clean, CompressionChannel::identity(2), DecoderMap{{0, 1}}, 1000, 1);
  CHECK(exact.estimate == 0.0);
  CHECK(exact.standard_error == 0.0);

  const auto again = monte_carlo_error(inst, binary_channel(0.1, 0.1), DecoderMap{{0, 1}}, 1'000'000, 5);
  CHECK(again.estimate == mc.estimate);
  CHECK_THROWS_AS(monte_carlo_error(inst, binary_channel(0.1, 0.1), DecoderMap{{0, 1}}, 0, 5),
                  ValidationError);
}

TEST_CASE("standard error shrinks like one over root n") {
  const auto inst = fixtures::binary(0.3);
  const auto q = binary_channel(0.1, 0.1);
  double ratio_sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto small = monte_carlo_error(inst, q, DecoderMap{{0, 1}}, 20'000, seed);
    const auto large = monte_carlo_error(inst, q, DecoderMap{{0, 1}}, 40'000, seed + 100);
    ratio_sum += large.standard_error / small.standard_error;
  }
  CHECK(ratio_sum / 5.0 == Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("finite-difference gradient check") {
  PortableRng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = fixtures::random_instance(rng, 3, 4, 3);
    const CompressionChannel q(fixtures::random_stochastic(rng, 4, 3, 0.05));
    CHECK(gradient_check(inst, q, 1e-6) <= 1e-5);
  }
  const auto uniform = CompressionChannel::uniform(4, 3);
  CHECK(gradient_check(fixtures::parametric_cost(), uniform, 1e-6) <= 1e-7);
  CHECK_THROWS_AS(gradient_check(fixtures::binary(0.3), binary_channel(0.0, 0.1), 1e-6),
                  ValidationError);
}

TEST_CASE("large finite-difference steps lose accuracy") {
  const CompressionChannel q(Eigen::MatrixXd{{0.85, 0.15}, {0.12, 0.88}});
  const auto inst = fixtures::binary(0.3);
  CHECK(gradient_check(inst, q, 1e-2) > 1e-5);
  CHECK(gradient_check(inst, q, 1e-6) <= 1e-5);
}
