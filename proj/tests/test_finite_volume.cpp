#include <doctest.h>

#include <random>

#include "brute_force.hpp"
#include "qmc/boundary.hpp"
#include "qmc/finite_volume.hpp"
#include "qmc/tree.hpp"

using namespace qmc;
using qmc_test::brute_expectation;

namespace {

struct Point {
  double J, theta;
};

const Point kGrid[] = {{1, 2.5}, {1, 3}, {1, 4}, {2, 2.5}, {2, 3}, {2, 4}};

LocalOperator random_diagonal(const std::vector<int>& support, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXcd d(Eigen::Index{1} << support.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = u(rng);
  return LocalOperator::diagonal(support, d);
}

double eval_diagonal(const LocalOperator& obs, const std::vector<int>& spins) {
  Eigen::Index idx = 0;
  for (int v : obs.support()) idx = (idx << 1) | spins[static_cast<std::size_t>(v)];
  return obs.diag_entries()(idx).real();
}

}  // namespace

TEST_CASE("projectivity for every boundary solution") {
  for (const auto& g : kGrid) {
    const auto p = ModelParams::from_theta(g.theta, g.J);
    for (const auto& s : closed_form_solutions(p))
      for (int n = 1; n <= 3; ++n) {
        const auto r = check_projectivity(n, p, s.condition());
        CHECK_MESSAGE(r.pass, "J=" << g.J << " theta=" << g.theta << " " << to_string(s.tag) << " n=" << n);
        CHECK(r.deviation <= 1e-10);
        CHECK(r.trace_deviation <= 1e-10);
      }
  }
}

TEST_CASE("perturbed boundary breaks projectivity") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  for (const auto& s : closed_form_solutions(p)) {
    auto bc = s.condition();
    bc.h(0, 0) += 0.1;
    CHECK(check_projectivity(2, p, bc).deviation > 1e-3);
    CHECK_FALSE(check_boundary_equations(p, bc).pass);
  }
}

TEST_CASE("boundary equations hold for the closed forms") {
  for (const auto& g : kGrid) {
    const auto p = ModelParams::from_theta(g.theta, g.J);
    for (const auto& s : closed_form_solutions(p)) CHECK(check_boundary_equations(p, s.condition()).residual() <= 1e-10);
  }
}

TEST_CASE("dense and diagonal construction agree") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto bc = closed_form_solution(p, SolutionTag::Plus).condition();
  VolumeOptions dense;
  dense.path = BuildPath::Dense;
  VolumeOptions diag;
  diag.path = BuildPath::Diagonal;
  const auto a = build_state(1, p, bc, dense);
  const auto b = build_state(1, p, bc, diag);
  CHECK(max_abs_diff(a.W, b.W) < 1e-12);
  CHECK(is_positive(a.W));
}

TEST_CASE("oracle modes agree with the brute-force weight sum") {
  std::mt19937_64 rng(11);
  for (const auto& g : {Point{1, 3}, Point{2, 2.5}}) {
    const auto p = ModelParams::from_theta(g.theta, g.J);
    for (const auto& s : closed_form_solutions(p)) {
      const auto bc = s.condition();
      for (int n = 1; n <= 2; ++n) {
        std::vector<int> sup = {0, static_cast<int>(level_offset(n, 2))};
        sup.push_back(static_cast<int>(volume_size(n, 2)) - 1);
        const auto obs = random_diagonal(sup, rng);
        const double ref = brute_expectation(n, p, bc, [&](const std::vector<int>& sp) { return eval_diagonal(obs, sp); });
        OracleOptions leaf, full, dense;
        leaf.mode = OracleMode::LeafContracted;
        full.mode = OracleMode::FullEnumeration;
        dense.mode = OracleMode::Dense;
        CHECK(expectation_oracle(n, p, bc, obs, leaf).real() == doctest::Approx(ref).epsilon(1e-11));
        CHECK(expectation_oracle(n, p, bc, obs, full).real() == doctest::Approx(ref).epsilon(1e-11));
        if (n == 1) CHECK(expectation_oracle(n, p, bc, obs, dense).real() == doctest::Approx(ref).epsilon(1e-11));
        // normalization
        CHECK(brute_expectation(n, p, bc, [](const std::vector<int>&) { return 1.0; }) == doctest::Approx(1.0));
      }
    }
  }
}

TEST_CASE("oracle is independent of the thread count") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto bc = closed_form_solution(p, SolutionTag::Plus).condition();
  std::mt19937_64 rng(12);
  const auto obs = random_diagonal(range_indices(0, 3, 2), rng);
  OracleOptions one, many;
  one.threads = 1;
  many.threads = 4;
  CHECK(expectation_oracle(3, p, bc, obs, one) == expectation_oracle(3, p, bc, obs, many));
}

TEST_CASE("oracle caps") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto bc = symmetric_solution(p).condition();
  OracleOptions dense;
  dense.mode = OracleMode::Dense;
  CHECK_THROWS_AS(expectation_oracle(2, p, bc, LocalOperator::at(0, site::e11()), dense), UnsupportedSize);
  OracleOptions small;
  small.diagonal_site_cap = 7;
  CHECK_THROWS_AS(expectation_oracle(3, p, bc, LocalOperator::at(0, site::e11()), small), UnsupportedSize);
  CHECK_THROWS_AS(expectation_oracle(1, p, bc, LocalOperator::at(5, site::e11())), InvalidArgument);
}

TEST_CASE("boundary layer trace factorizes over cells") {
  const auto p = ModelParams::from_theta(2.5, 2.0);
  for (const auto& s : closed_form_solutions(p))
    for (int n = 1; n <= 3; ++n)
      CHECK(max_abs_diff(boundary_layer_trace(n, p, s.condition()), boundary_layer_trace_factorized(n, p, s.condition())) <
            1e-12);
}

TEST_CASE("quasi-conditional expectation is a module map") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto bc = closed_form_solution(p, SolutionTag::Plus).condition();
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  // x on levels 1..2, c on level 3
  const auto x = LocalOperator::dense({1, 3}, m);
  const auto c = LocalOperator::at(9, site::diagonal(0.3, -1.7));
  const auto lhs = quasi_conditional_expectation(2, multiply(c, x), p, bc, 3);
  const auto rhs = multiply(c, quasi_conditional_expectation(2, x, p, bc, 3));
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);
  CHECK_THROWS_AS(quasi_conditional_expectation(2, LocalOperator::at(0, site::e11()), p, bc, 3), InvalidArgument);
}

TEST_CASE("composed quasi-conditional expectations reproduce the state") {
  const auto p = ModelParams::from_theta(2.5, 2.0);
  for (const auto& s : closed_form_solutions(p)) {
    const auto bc = s.condition();
    for (int n = 1; n <= 2; ++n) {
      const auto e = LocalOperator::at(static_cast<int>(level_offset(n, 2)), site::e11());
      const auto sz = tensor(LocalOperator::at(0, site::sigma()), LocalOperator::at(2, site::sigma()));
      CHECK(compose_quasi_conditional(n, e, p, bc).real() ==
            doctest::Approx(expectation_oracle(n, p, bc, e).real()).epsilon(1e-11));
      CHECK(compose_quasi_conditional(n, sz, p, bc).real() ==
            doctest::Approx(expectation_oracle(n, p, bc, sz).real()).epsilon(1e-11));
    }
  }
}

TEST_CASE("non-diagonal boundaries use the dense path") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  auto bc = symmetric_solution(p).condition();
  SiteOperator h = bc.h;
  h(0, 1) = h(1, 0) = 0.01;
  bc.h = h;
  const auto state = build_state(1, p, bc);
  CHECK_FALSE(state.W.is_diagonal_repr());
  CHECK(is_positive(state.W));
  CHECK(check_projectivity(1, p, bc).deviation > 1e-6);
}
