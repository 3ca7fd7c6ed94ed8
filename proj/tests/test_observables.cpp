#include <doctest.h>

#include <cmath>

#include "brute_force.hpp"
#include "qmc/finite_volume.hpp"
#include "qmc/observables.hpp"
#include "qmc/tree.hpp"

using namespace qmc;

namespace {

struct Point {
  double J, theta;
};

const Point kGrid[] = {{1, 3}, {1, 4}, {2, 2.5}};

double oracle(int n, const ModelParams& p, StateId s, const LocalOperator& obs) {
  return expectation_oracle(n, p, state_boundary(s, p).condition(), obs).real();
}

bool close_rel(double a, double b, double rel) { return std::fabs(a - b) <= rel * std::fabs(b) || std::fabs(a - b) <= 1e-14; }

}  // namespace

TEST_CASE("closed forms match the enumeration oracle") {
  for (const auto& g : kGrid) {
    const auto p = ModelParams::from_theta(g.theta, g.J);
    for (int n = 1; n <= 3; ++n)
      for (StateId s : {StateId::Alpha, StateId::Phi1, StateId::Phi2}) {
        INFO("J=" << g.J << " theta=" << g.theta << " n=" << n << " " << to_string(s));
        CHECK(close_rel(projector_value(s, Projector::P, n, p), oracle(n, p, s, projector_observable(Projector::P, n)), 1e-9));
        CHECK(close_rel(projector_value(s, Projector::Q, n, p), oracle(n, p, s, projector_observable(Projector::Q, n)), 1e-9));
        CHECK(close_rel(edge_marginal(s, n, p), oracle(n, p, s, edge_observable(n)), 1e-9));
        CHECK(close_rel(disorder_value(s, n, p), oracle(n, p, s, disorder_observable(n)), 1e-9));
      }
  }
}

TEST_CASE("projector values against the raw weight sum") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto bc = state_boundary(StateId::Phi1, p).condition();
  const double ref = qmc_test::brute_expectation(1, p, bc, [](const std::vector<int>& s) {
    return (s[0] == 0 && s[1] == 0 && s[2] == 0) ? 1.0 : 0.0;
  });
  CHECK(projector_value(StateId::Phi1, Projector::P, 1, p) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("alternative projector variants disagree with the oracle") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const double ref = oracle(2, p, StateId::Phi1, projector_observable(Projector::P, 2));
  CHECK(projector_value(StateId::Phi1, Projector::P, 2, p, ProjectorVariant::Statement) ==
        doctest::Approx(2.0 * ref).epsilon(1e-10));
  CHECK_FALSE(close_rel(projector_value(StateId::Phi1, Projector::P, 2, p, ProjectorVariant::ProofTrailingFactor), ref, 1e-3));
}

TEST_CASE("disorder observable at level n + 1") {
  const auto p = ModelParams::from_theta(2.5, 2.0);
  for (int n = 0; n <= 2; ++n) {
    const auto obs = disorder_observable(n, 2, DisorderPlacement::LevelNPlus1);
    CHECK(close_rel(disorder_value(StateId::Phi1, n, p, DisorderPlacement::LevelNPlus1), oracle(n + 1, p, StateId::Phi1, obs),
                    1e-9));
    CHECK(disorder_value(StateId::Alpha, n, p, DisorderPlacement::LevelNPlus1) == 0.0);
  }
  CHECK(disorder_value(StateId::Phi1, 0, p) == doctest::Approx(oracle(0, p, StateId::Phi1, disorder_observable(0))));
}

TEST_CASE("spin-flip symmetry") {
  for (const auto& g : kGrid) {
    const auto p = ModelParams::from_theta(g.theta, g.J);
    for (int n = 1; n <= 6; ++n) {
      CHECK(projector_value(StateId::Phi1, Projector::P, n, p) == projector_value(StateId::Phi2, Projector::Q, n, p));
      CHECK(projector_value(StateId::Phi1, Projector::Q, n, p) == projector_value(StateId::Phi2, Projector::P, n, p));
      CHECK(projector_value(StateId::Phi1, Projector::P, n, p) + projector_value(StateId::Phi1, Projector::Q, n, p) <= 1.0);
      CHECK(disorder_value(StateId::Phi1, n, p) == -disorder_value(StateId::Phi2, n, p));
      CHECK(edge_marginal(StateId::Phi1, n, p) + edge_marginal(StateId::Phi2, n, p) == doctest::Approx(1.0).epsilon(1e-12));
      // phi1(sigma) = phi1(E) - phi2(E)
      CHECK(disorder_value(StateId::Phi1, n, p) ==
            doctest::Approx(edge_marginal(StateId::Phi1, n, p) - edge_marginal(StateId::Phi2, n, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("transfer matrix spectrum") {
  for (const auto& g : kGrid) {
    const auto p = ModelParams::from_theta(g.theta, g.J);
    const auto t = transfer_data(p);
    const auto c = coefficients<double>(p);
    const double lambda = c.tau1 / c.tau3 - 0.5;
    CHECK(std::fabs(t.eigenvalues(0) - 1.0) <= 1e-12);
    CHECK(std::fabs(t.eigenvalues(1) - lambda) <= 1e-12);
    CHECK(std::fabs(t.determinant - lambda) <= 1e-12);
    const double D = 3 * c.tau3 - 2 * c.tau1;
    CHECK(t.rho.hat1 == doctest::Approx(c.tau3 * c.tau3 / D).epsilon(1e-12));
    CHECK(t.rho.hat2 == doctest::Approx(2 * c.tau3 * (c.tau3 - c.tau1) / D).epsilon(1e-12));
    CHECK(t.pi.hat1 == doctest::Approx(t.rho.hat1).epsilon(1e-12));
    CHECK(t.pi.check1 == doctest::Approx(-t.rho.check1).epsilon(1e-12));
    CHECK(t.rho.check2 == doctest::Approx(-t.rho.check1).epsilon(1e-12));
  }
}

TEST_CASE("eigendecomposition and algebraic spectral coefficients agree") {
  const auto p = ModelParams::from_theta(4.0, 1.0);
  const auto b = broken_phase<long double>(p);
  for (int sign : {1, -1}) {
    const auto e = spectral_coefficients_eigen(b, sign);
    const auto a = spectral_coefficients_closed_form(b, sign);
    CHECK(std::fabs(double(e.hat1 - a.hat1)) < 1e-12);
    CHECK(std::fabs(double(e.hat2 - a.hat2)) < 1e-12);
    CHECK(std::fabs(double(e.check1 - a.check1)) < 1e-12);
    CHECK(std::fabs(double(e.check2 - a.check2)) < 1e-12);
  }
}

TEST_CASE("transfer recursion") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto b = broken_phase<double>(p);
  CHECK(transfer_psi(0, p, PsiKind::Phi1Hat).iterated == doctest::Approx(1.0 / b.xi0));
  CHECK(transfer_psi(0, p, PsiKind::Phi1Check).iterated == 0.0);
  for (int n = 0; n <= 30; ++n)
    for (PsiKind k : {PsiKind::Phi1Hat, PsiKind::Phi1Check, PsiKind::Phi2Hat, PsiKind::Phi2Check}) {
      const auto v = transfer_psi(n, p, k);
      CHECK(std::fabs(v.iterated - v.closed_form) <= 1e-10);
    }
  // geometric decay towards rho_hat1; beyond n = 20 the deviation is below double resolution
  const auto t = transfer_data(p);
  for (int n = 5; n <= 20; n += 5) {
    const double dev = transfer_psi(n, p, PsiKind::Phi1Hat).closed_form - t.rho.hat1;
    CHECK(dev / std::pow(t.lambda, n) == doctest::Approx(t.rho.hat2).epsilon(1e-6));
  }
}

TEST_CASE("projector values approach one at low temperature") {
  double prev = 0.0;
  for (double theta : {3.0, 4.0, 6.0, 10.0, 20.0, 50.0}) {
    const auto p = ModelParams::from_theta(theta, 1.0);
    const double v = projector_value(StateId::Phi1, Projector::P, 2, p);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 0.999);
  const auto near = ModelParams::from_theta(std::sqrt(5.0) + 1e-9, 1.0);
  CHECK(projector_value(StateId::Phi1, Projector::P, 2, near) ==
        doctest::Approx(projector_value(StateId::Phi1, Projector::Q, 2, near)).epsilon(1e-3));
}

TEST_CASE("projector values stay finite for deep volumes") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const double v = projector_value(StateId::Phi1, Projector::P, 40, p);
  CHECK(std::isfinite(v));
  CHECK(v >= 0.0);
}

TEST_CASE("witness report") {
  const auto p = ModelParams::from_theta(3.0, 1.0);
  const auto w = witness_report(p, 50);
  CHECK(w.I1 > 0.0);
  CHECK(w.epsilon0 > 0.0);
  CHECK(w.I1 == doctest::Approx(w.I1_closed_form).epsilon(1e-12));
  CHECK(w.lower_bound_holds);
  CHECK(w.edge_gap_beyond_crossover);
  CHECK(w.disorder_gap_beyond_crossover);
  REQUIRE(w.edge_gap.size() == 50);
  CHECK(std::fabs(w.edge_gap[39] - w.I1) <= 1e-8);
  CHECK(std::fabs(w.disorder_gap[39] - w.epsilon0) <= 1e-8);
  CHECK(w.I2 * std::pow(std::fabs(w.lambda), w.edge_crossover) <= w.I1 / 2);
  if (w.edge_crossover > 0) CHECK(w.I2 * std::pow(std::fabs(w.lambda), w.edge_crossover - 1) > w.I1 / 2);
  CHECK(w.e11_operator_norm == 1.0);
  CHECK(w.e11_trace_norm == 0.5);
  CHECK_THROWS_AS(witness_report(ModelParams::from_theta(2.0, 1.0), 10), NoBrokenPhase);
}

TEST_CASE("overlap report") {
  std::vector<double> betas;
  for (double theta : {2.0, 3.0, 10.0, 40.0}) betas.push_back(0.5 * std::log(theta));
  const auto rows = overlap_report(1.0, 2, betas);
  REQUIRE(rows.size() == 4);
  CHECK_FALSE(rows[0].broken_phase);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].broken_phase);
    CHECK(rows[i].phi2_p == rows[i].phi1_q);
  }
  CHECK(rows[3].separated);
  CHECK_FALSE(rows[1].separated);
}

TEST_CASE("closed forms require the broken phase") {
  const auto p = ModelParams::from_theta(2.0, 1.0);
  CHECK_THROWS_AS(projector_value(StateId::Phi1, Projector::P, 1, p), NoBrokenPhase);
  CHECK_THROWS_AS(edge_marginal(StateId::Phi2, 1, p), NoBrokenPhase);
  CHECK(disorder_value(StateId::Alpha, 3, p) == 0.0);
  CHECK(edge_marginal(StateId::Alpha, 3, p) == 0.5);
  CHECK_THROWS_AS(projector_value(StateId::Phi1, Projector::P, 0, ModelParams::from_theta(3.0, 1.0)), InvalidArgument);
}

TEST_CASE("resolutions are named") {
  const auto& r = resolved_discrepancies();
  CHECK(r.size() >= 5);
  for (const auto& x : r) {
    CHECK_FALSE(x.id.empty());
    CHECK_FALSE(x.shipped.empty());
  }
}
