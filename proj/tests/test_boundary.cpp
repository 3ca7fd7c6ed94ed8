#include <doctest.h>

#include <cmath>

#include "qmc/boundary.hpp"
#include "qmc/phase.hpp"

using namespace qmc;

TEST_CASE("closed forms at J = 1, theta = 3") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto b = broken_solutions(p);
  REQUIRE(b);
  CHECK(b->first.xi0 == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
  CHECK(b->first.xi3 == doctest::Approx(1.0 / (12.0 * std::sqrt(2.0))).epsilon(1e-14));
  CHECK(b->first.h(0, 0).real() == doctest::Approx(b->first.xi0 + b->first.xi3));
  CHECK(symmetric_solution(p).alpha == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
  CHECK(closed_form_solutions(p).size() == 3);
}

TEST_CASE("no broken phase below the critical line") {
  const auto p = ModelParams::from_theta(2.0, 1.0);
  CHECK_FALSE(broken_solutions(p));
  CHECK(closed_form_solutions(p).size() == 1);
  CHECK_THROWS_AS(closed_form_solution(p, SolutionTag::Plus), NoBrokenPhase);
  CHECK(classify(p) == Regime::Unique);
  CHECK(classify(ModelParams::from_theta(std::sqrt(5.0), 1.0)) == Regime::Unique);
  CHECK(classify(ModelParams::from_theta(2.1, 2.0)) == Regime::Coexistence);
}

TEST_CASE("plus and minus are exchanged by the spin flip") {
  const auto p = ModelParams::from_theta(4.0, 2.0);
  const auto b = broken_solutions(p);
  REQUIRE(b);
  Eigen::Matrix2cd flip;
  flip << 0, 1, 1, 0;
  CHECK((flip * b->first.h * flip - b->second.h).norm() < 1e-15);
}

TEST_CASE("Newton recovers the closed-form set") {
  for (double J : {1.0, 2.0})
    for (double theta : {1.5, 2.0, 2.5, 3.0, 4.0}) {
      const auto p = ModelParams::from_theta(theta, J);
      const auto closed = closed_form_solutions(p);
      const auto res = solve_numeric(p, default_seeds(p));
      REQUIRE(res.solutions.size() == closed.size());
      for (std::size_t i = 0; i < closed.size(); ++i) {
        bool found = false;
        for (const auto& s : res.solutions)
          found = found || (std::fabs(s.trace_h() - closed[i].trace_h()) <= 1e-8 &&
                            std::fabs(s.trace_sigma_h() - closed[i].trace_sigma_h()) <= 1e-8);
        CHECK_MESSAGE(found, "J=" << J << " theta=" << theta << " " << to_string(closed[i].tag));
      }
      for (const auto& s : res.solutions) CHECK(check_boundary_equations(p, s.condition()).pass);
    }
}

TEST_CASE("random seeds in the uniqueness region") {
  const auto p = ModelParams::from_theta(2.0, 1.0);
  const auto seeds = random_seeds(2024, 100);
  REQUIRE(seeds.size() == 100);
  for (const auto& s : seeds) {
    CHECK(s.t > 0.0);
    CHECK(s.t <= 2.0);
  }
  const auto res = solve_numeric(p, seeds);
  REQUIRE(res.solutions.size() == 1);
  CHECK(res.solutions[0].trace_sigma_h() == 0.0);
  CHECK(res.solutions[0].trace_h() == doctest::Approx(symmetric_solution(p).alpha).epsilon(1e-10));
  CHECK(random_seeds(2024, 5)[3].s == seeds[3].s);
}

TEST_CASE("a seed at a root converges in zero iterations") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto plus = closed_form_solution(p, SolutionTag::Plus);
  const auto res = solve_numeric(p, {{plus.trace_h(), plus.trace_sigma_h()}});
  REQUIRE(res.iterations.size() == 1);
  CHECK(res.iterations[0] == 0);
  CHECK(res.solutions.size() == 1);
}

TEST_CASE("the trivial root is reported as degenerate") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto res = solve_numeric(p, {{1e-6, 0.0}});
  CHECK(res.solutions.empty());
  CHECK(res.degenerate == 1);
}

TEST_CASE("xi3 vanishes like a square root at the critical line") {
  for (double J : {1.0, 2.0}) {
    const double tc = critical_theta(J);
    double prev_ratio = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      const auto b = broken_solutions(ModelParams::from_theta(tc + eps, J));
      REQUIRE(b);
      const double ratio = b->first.xi3 / std::sqrt(eps);
      if (prev_ratio > 0.0) CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.05));
      prev_ratio = ratio;
    }
  }
}

TEST_CASE("theta = 1 is the free limit") {
  const ModelParams p{0.0, 1.0, 2};
  const auto c = coefficients<double>(p);
  CHECK(c.tau2 == doctest::Approx(0.0));
  CHECK(c.tau3 == doctest::Approx(0.0));
  const auto s = closed_form_solutions(p);
  REQUIRE(s.size() == 1);
  CHECK((s[0].h - site::identity()).norm() < 1e-15);
}

TEST_CASE("tag names") {
  for (auto t : {SolutionTag::Symmetric, SolutionTag::Plus, SolutionTag::Minus, SolutionTag::Numeric})
    CHECK(solution_tag_from_string(to_string(t)) == t);
  CHECK(solution_tag_from_string("phi1") == SolutionTag::Plus);
  CHECK_THROWS_AS(solution_tag_from_string("bogus"), InvalidArgument);
}
