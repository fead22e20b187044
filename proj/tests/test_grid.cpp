#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gpe/energy.hpp"
#include "gpe/grid.hpp"

using namespace gpe;

TEST_CASE("grid spacing and endpoints") {
  const Grid g = build_grid(7.0, 4.0, 63);
  CHECK(g.side() == 65);
  CHECK(g.delta == doctest::Approx(14.0 / 64.0));
  CHECK(g.x.front() == -7.0);
  CHECK(g.x.back() == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(g.y == g.x);
  // xi_p = -pi(N+1)/(2L) + p pi/L
  CHECK(g.xi[0] == doctest::Approx(-std::numbers::pi * 64 / 14.0));
  CHECK(g.xi[32] == doctest::Approx(0.0));
  CHECK(g.xi[1] - g.xi[0] == doctest::Approx(std::numbers::pi / 7.0));
  CHECK(g.lambda == g.xi);
}

TEST_CASE("grid rejects bad geometry") {
  CHECK_THROWS_AS(build_grid(7.0, 8.0, 16), GridError);
  CHECK_THROWS_AS(build_grid(7.0, 0.0, 16), GridError);
  CHECK_THROWS_AS(build_grid(7.0, 4.0, 1), GridError);
}

TEST_CASE("default profile saturates at one inside the disk") {
  const auto rho = default_profile(4.0);
  CHECK(rho(0.0, 0.0) == 1.0);
  CHECK(rho(3.99, 0.0) == doctest::Approx(10.0 * (16.0 - 3.99 * 3.99)));
  CHECK(rho(7.0, 7.0) == doctest::Approx(10.0 * (16.0 - 98.0)));
}

TEST_CASE("mass constant is close to the disk integral") {
  const double R = 4.0;
  const double Rin = std::sqrt(R * R - 0.1);
  // rho = 1 for r < Rin, 10(R^2 - r^2) on the rim, integrated in polar coordinates
  const double exact = std::numbers::pi * Rin * Rin +
                       2.0 * std::numbers::pi * 10.0 *
                           ((R * R * R * R - R * R * Rin * Rin) / 2.0 - (R * R * R * R - Rin * Rin * Rin * Rin) / 4.0);
  CHECK(exact == doctest::Approx(50.108).epsilon(1e-4));
  for (int N : {256, 512}) {
    const double M = confinement_field(build_grid(7.0, R, N)).massTotal;
    CHECK(M >= 49.9);
    CHECK(M <= 50.3);
  }
}

TEST_CASE("initial data have a zero boundary") {
  const Grid g = build_grid(2.0, 1.5, 10);
  for (const InitialKind& kind :
       {InitialKind{init::CenteredGaussian{}}, InitialKind{init::OffsetGaussian{0.5, -0.5}},
        InitialKind{init::SineSum{}}}) {
    const WaveField f = initial_field(g, kind);
    CHECK(has_zero_boundary(f));
  }
  const WaveField c = initial_field(g, init::CenteredGaussian{});
  CHECK(c(3, 4).real() == doctest::Approx(std::exp(-10.0 * (g.x[3] * g.x[3] + g.y[4] * g.y[4])) / 5.0));
  const WaveField s = initial_field(g, init::SineSum{});
  CHECK(s(2, 7).real() == doctest::Approx(std::sin(g.x[2] + g.y[7])));
}

TEST_CASE("nearest index clamps to the grid") {
  const Grid g = build_grid(2.0, 1.5, 9);
  CHECK(nearest_index(g, 0.0) == 5);
  CHECK(nearest_index(g, -5.0) == 0);
  CHECK(nearest_index(g, 5.0) == 10);
}

TEST_CASE("physical parameters validate") {
  PhysicalParams p;
  CHECK_NOTHROW(p.validate());
  p.N1 = 0.7;
  CHECK_THROWS(p.validate());
  p.N2 = 0.3;
  CHECK_NOTHROW(p.validate());
  p.epsilon = 0.0;
  CHECK_THROWS(p.validate());
}
