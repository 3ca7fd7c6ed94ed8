#include <doctest.h>

#include <cmath>

#include "qmc/phase.hpp"

using namespace qmc;

TEST_CASE("critical theta for J = 1") {
  const double t = critical_theta(1.0);
  CHECK(std::fabs(t - std::sqrt(5.0)) <= 1e-10);
  CHECK(std::fabs(delta(t, 1.0)) <= 1e-10);
}

TEST_CASE("critical theta for J = 2 is the root of (theta + 1)^2 (theta - 2)") {
  // Delta = theta^4 - 3 theta^2 - 2 theta = theta (theta + 1)^2 (theta - 2)
  for (double th : {1.3, 1.7, 2.4, 3.1}) CHECK(delta(th, 2.0) == doctest::Approx(th * (th + 1) * (th + 1) * (th - 2)));
  const double t = critical_theta(2.0);
  CHECK(std::fabs(t - 2.0) <= 1e-10);
  CHECK(delta((1 + std::sqrt(5.0)) / 2, 2.0) < 0.0);
}

TEST_CASE("critical theta for J = 0") {
  CHECK(std::fabs(critical_theta(0.0) - 3.0) <= 1e-10);
}

TEST_CASE("one sign change on (1, 10]") {
  for (double J : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    int changes = 0;
    double prev = delta(1.0 + 1e-9, J);
    for (int i = 1; i <= 9000; ++i) {
      const double d = delta(1.0 + i * 1e-3, J);
      if ((d > 0) != (prev > 0)) ++changes;
      prev = d;
    }
    CHECK(changes == 1);
    CHECK(std::fabs(delta(critical_theta(J), J)) <= 1e-10);
  }
  CHECK_THROWS_AS(critical_theta(1.0, 2.0), NoRoot);
  CHECK_THROWS_AS(critical_theta(-1.0), InvalidArgument);
}

TEST_CASE("region classification") {
  CHECK(region_of(-1.0) == Region::Unique);
  CHECK(region_of(1e-12) == Region::Critical);
  CHECK(region_of(1e-3) == Region::Coexistence);
  CHECK(region_of(delta(1.7, 2.0)) == Region::Unique);
  CHECK(region_of(delta(2.0, 2.0)) == Region::Critical);
  CHECK(region_of(delta(2.1, 2.0)) == Region::Coexistence);
}

TEST_CASE("scan is row-major and consistent with Newton") {
  const auto betas = linspace(0.1, 1.5, 8);
  const auto Js = linspace(0.0, 3.0, 7);
  ScanOptions opts;
  opts.cross_check = true;
  const auto pts = scan(betas, Js, opts);
  REQUIRE(pts.size() == 56);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].beta == betas[i / Js.size()]);
    CHECK(pts[i].J == Js[i % Js.size()]);
    CHECK_FALSE(pts[i].mismatch);
    CHECK(pts[i].solution_count == (pts[i].region == Region::Coexistence ? 3 : 1));
    if (pts[i].theta <= std::sqrt(3.0)) CHECK(pts[i].region == Region::Unique);
  }
}

TEST_CASE("J = 1 row crosses at sqrt(5)") {
  const double bc = 0.5 * std::log(std::sqrt(5.0));
  const auto pts = scan({bc - 1e-3, bc + 1e-3}, {1.0});
  CHECK(pts[0].region == Region::Unique);
  CHECK(pts[1].region == Region::Coexistence);
}

TEST_CASE("Delta increases along theta above sqrt(3)") {
  for (double J : {0.0, 1.0, 2.0, 3.0}) {
    double prev = delta(std::sqrt(3.0), J);
    bool increasing = true;
    for (double th = std::sqrt(3.0) + 0.01; th < 20.0; th += 0.01) {
      const double d = delta(th, J);
      increasing = increasing && d > prev;
      prev = d;
    }
    CHECK(increasing);
  }
}

TEST_CASE("linspace") {
  CHECK(linspace(0.1, 1.5, 50).size() == 50);
  CHECK(linspace(0.1, 1.5, 50).back() == 1.5);
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
  CHECK_THROWS_AS(linspace(0.0, 1.0, 0), InvalidArgument);
}
