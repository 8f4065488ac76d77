#include <doctest.h>

#include "fixtures.hpp"
#include "rdclass/binary.hpp"

using namespace rdclass;
using doctest::Approx;

namespace {

// Arbitrary-precision evaluations of 1 - H2(p) in bits.
constexpr double kRateTenth = 0.531004406410718778;
constexpr double kRateQuarter = 0.188721875540867136;

}  // namespace

TEST_CASE("error formula") {
  CHECK(binary_error(0.3, 0.0) == Approx(0.3).epsilon(1e-15));
  CHECK(binary_error(0.3, 0.5) == Approx(0.5).epsilon(1e-15));
  CHECK(binary_error(0.3, 0.1) == Approx(0.34).epsilon(1e-15));
  CHECK_THROWS_AS(binary_error(0.5, 0.1), ValidationError);
  CHECK_THROWS_AS(binary_error(0.3, 0.6), ValidationError);
  CHECK_THROWS_AS(binary_error(-0.1, 0.1), ValidationError);
}

TEST_CASE("rate formula") {
  CHECK(binary_rate(0.0) == 1.0);
  CHECK(binary_rate(0.5) == Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(binary_rate(0.1) - kRateTenth) <= 1e-14);
  CHECK_THROWS_AS(binary_rate(0.51), ValidationError);
  double previous = 2.0;
  for (int i = 0; i <= 50; ++i) {
    const double r = binary_rate(0.01 * i);
    CHECK(r < previous);
    previous = r;
  }
}

TEST_CASE("curve endpoints and midpoint") {
  const auto two = binary_curve(0.3, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].p2 == 0.0);
  CHECK(two[0].pe == Approx(0.3).epsilon(1e-15));
  CHECK(two[0].mi == 1.0);
  CHECK(two[1].p2 == 0.5);
  CHECK(two[1].pe == Approx(0.5).epsilon(1e-15));
  CHECK(two[1].mi == Approx(0.0).epsilon(1e-15));
  CHECK(two[1].map_tie);
  CHECK_FALSE(two[0].map_tie);

  const auto three = binary_curve(0.3, 3);
  CHECK(three[1].p2 == 0.25);
  CHECK(three[1].pe == Approx(0.4).epsilon(1e-15));
  CHECK(std::abs(three[1].mi - kRateQuarter) <= 1e-14);

  for (const auto& pt : binary_curve(0.0, 11)) CHECK(pt.pe == Approx(pt.p2).epsilon(1e-15));
  CHECK_THROWS_AS(binary_curve(0.3, 1), ValidationError);
}

TEST_CASE("curve invariants") {
  for (double p1 : {0.0, 0.1, 0.3, 0.45}) {
    const auto pts = binary_curve(p1, 41);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::abs(pts[i].pe - (p1 + pts[i].p2 - 2 * p1 * pts[i].p2)) <= 1e-12);
      CHECK(std::abs(pts[i].mi - fixtures::one_minus_h2(pts[i].p2)) <= 1e-12);
      if (i > 0) {
        CHECK(pts[i].pe > pts[i - 1].pe);
        CHECK(pts[i].mi < pts[i - 1].mi);
      }
    }
  }
}

TEST_CASE("inverting the error formula") {
  CHECK(invert_error_to_p2(0.3, 0.34) == Approx(0.1).epsilon(1e-14));
  CHECK(invert_error_to_p2(0.3, 0.3) == 0.0);
  CHECK(invert_error_to_p2(0.3, 0.7) == 0.5);
  CHECK_THROWS_AS(invert_error_to_p2(0.3, 0.29), BelowBayesFloor);
  for (double p1 : {0.0, 0.05, 0.3, 0.49}) {
    for (int i = 0; i <= 20; ++i) {
      const double pe = p1 + (0.5 - p1) * i / 20.0;
      CHECK(std::abs(binary_error(p1, invert_error_to_p2(p1, pe)) - pe) <= 1e-12);
    }
  }
}

TEST_CASE("problem instance matches the binary model") {
  CHECK_THROWS_AS(BinaryInstance(0.5), ValidationError);
  const auto inst = BinaryInstance(0.2).to_problem();
  CHECK(inst.prior()[0] == 0.5);
  CHECK(inst.generation()(0, 1) == 0.2);
  CHECK(inst.generation()(1, 0) == 0.2);
  CHECK(inst.compressed_size() == 2);
  CHECK(inst.cost().is_zero_one());
}

TEST_CASE("symmetrizing a channel keeps MAP error and lowers rate") {
  PortableRng rng(2024);
  int checked = 0;
  while (checked < 100) {
    const double p1 = 0.5 * rng.uniform();
    const double p2 = rng.uniform();
    const double p3 = rng.uniform();
    if (!(p2 < 1.0 - p3) || p2 == p3) continue;
    ++checked;
    const auto inst = BinaryInstance(p1).to_problem();
    const auto asym = binary_channel(p2, p3);
    const auto sym = binary_channel(0.5 * (p2 + p3), 0.5 * (p2 + p3));
    const double pe_asym = expected_cost(inst, asym, induced_decoder(inst, asym));
    const double pe_sym = expected_cost(inst, sym, induced_decoder(inst, sym));
    CHECK(std::abs(pe_asym - pe_sym) <= 1e-12);
    const Eigen::VectorXd px = data_marginal(inst);
    CHECK(mutual_information(px, sym.matrix()) <= mutual_information(px, asym.matrix()) + 1e-12);
  }
}
