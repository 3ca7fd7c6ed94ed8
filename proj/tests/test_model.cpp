#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "qmc/model.hpp"

using namespace qmc;

namespace {

// exp(c P) for P = (1 + sigma_u sigma_v)/2, through the general matrix exponential
Eigen::MatrixXcd expm_coupling(double c) {
  Eigen::Matrix4cd P = Eigen::Matrix4cd::Zero();
  P(0, 0) = P(3, 3) = 1.0;
  return (c * P).exp();
}

}  // namespace

TEST_CASE("coefficients at J = 1, theta = 3") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto c = coefficients<double>(p);
  CHECK(c.tau1 == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(c.tau2 == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(c.tau3 == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(c.Delta == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(c.gamma == doctest::Approx(3.0 * std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(c.tau1 + c.tau2 + c.tau3 == doctest::Approx(std::pow(3.0, 3.0)).epsilon(1e-12));
}

TEST_CASE("both coefficient routes agree across a grid") {
  for (double beta : {0.0, 0.1, 0.5, 1.0, 2.0})
    for (double J : {0.0, 0.5, 1.0, 2.5}) {
      const ModelParams p{beta, J, 2};
      const auto a = coefficients_from_couplings<long double>(p);
      const auto b = coefficients_from_theta<long double>(p);
      const long double s = b.tau1;
      CHECK(std::fabs(double((a.tau1 - b.tau1) / s)) < 1e-14);
      CHECK(std::fabs(double((a.tau2 - b.tau2) / s)) < 1e-14);
      CHECK(std::fabs(double((a.tau3 - b.tau3) / s)) < 1e-14);
      CHECK(std::fabs(double((a.Delta - b.Delta) / s)) < 1e-13);
    }
}

TEST_CASE("edge operators equal the matrix exponential") {
  const ModelParams p{0.7, 1.5, 2};
  CHECK((edge_operator(p, 0, 1).to_dense() - expm_coupling(p.beta)).norm() < 1e-12);
  CHECK((edge_operator_exp(p, 0, 1).to_dense() - expm_coupling(p.beta)).norm() < 1e-12);
  CHECK((competing_operator(p, 1, 2).to_dense() - expm_coupling(p.J * p.beta)).norm() < 1e-12);
  CHECK((competing_operator_exp(p, 1, 2).to_dense() - expm_coupling(p.J * p.beta)).norm() < 1e-12);
}

TEST_CASE("exp_projector rejects non-projectors") {
  CHECK_THROWS_AS(exp_projector(LocalOperator::at(0, site::sigma()), 1.0), InvalidArgument);
}

TEST_CASE("cell operator in coefficient form") {
  for (double beta : {0.2, 0.55, 1.3}) {
    const ModelParams p{beta, 2.0, 2};
    CHECK(max_abs_diff(cell_operator(p, 0), cell_operator_from_coefficients(p, 0)) < 1e-12);
    CHECK(max_abs_diff(cell_operator(p, 2), cell_operator_from_coefficients(p, 2)) < 1e-12);
  }
}

TEST_CASE("cell operator squared gives theta powers") {
  const ModelParams p{0.4, 1.5, 2};
  const auto A = cell_operator(p, 0);
  REQUIRE(A.is_diagonal_repr());
  const double theta = p.theta();
  for (int s = 0; s < 8; ++s) {
    const int x = (s >> 2) & 1, a = (s >> 1) & 1, b = s & 1;
    const double expect = std::pow(theta, (x == a) + (x == b) + p.J * (a == b));
    CHECK(std::norm(A.diag_entries()(s)) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("triple factors multiply on the right") {
  const ModelParams p{0.4, 1.0, 2};
  const auto M = LocalOperator::at(1, site::diagonal(2.0, 3.0));
  const auto A = cell_operator(p, 0, {M, std::nullopt});
  CHECK(max_abs_diff(A, multiply(cell_operator(p, 0), M)) < 1e-12);
}

TEST_CASE("higher order trees") {
  const ModelParams p{0.4, 1.0, 3};
  const auto A = cell_operator(p, 0);
  CHECK(A.support() == std::vector<int>{0, 1, 2, 3});
  CHECK_THROWS_AS(coefficients<double>(p), InvalidArgument);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ModelParams{-0.1, 1.0, 2}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.1, -1.0, 2}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{0.1, 1.0, 1}.validate()), InvalidArgument);
  CHECK_THROWS_AS(ModelParams::from_theta(0.5, 1.0), InvalidArgument);
  CHECK(ModelParams::from_theta(1.0, 1.0).beta == 0.0);
}
