#ifndef QMC_OBSERVABLES_HPP
#define QMC_OBSERVABLES_HPP

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qmc/boundary.hpp"
#include "qmc/errors.hpp"
#include "qmc/linalg.hpp"
#include "qmc/model.hpp"

namespace qmc {

/// The three translation-invariant chains: disordered (alpha) and the two
/// broken-symmetry chains built from h = xi0 1 +/- xi3 sigma.
enum class StateId { Alpha, Phi1, Phi2 };
enum class Projector { P, Q };

std::string to_string(StateId s);
StateId state_from_string(const std::string& s);
SolutionTag solution_tag(StateId s);
BoundarySolution state_boundary(StateId s, const ModelParams& p);

/// Scalars shared by every closed form of the broken phase.
template <typename Scalar>
struct BrokenPhase {
  Coefficients<Scalar> c;
  Scalar xi0{};
  Scalar xi3{};
  /// Second eigenvalue of the transfer matrix, tau1/tau3 - 1/2.
  Scalar lambda{};
};

template <typename Scalar = long double>
BrokenPhase<Scalar> broken_phase(const ModelParams& p) {
  using std::sqrt;
  if (p.k != 2) throw InvalidArgument("closed forms are defined for k = 2 only");
  BrokenPhase<Scalar> b;
  b.c = coefficients<Scalar>(p);
  if (!(b.c.Delta > Scalar(kCriticalBand))) throw NoBrokenPhase("Delta(theta) <= 0: phi1 and phi2 do not exist");
  b.xi0 = Scalar(1) / b.c.tau3;
  b.xi3 = sqrt(b.c.Delta / Scalar(4)) / (b.c.tau3 * sqrt(b.c.tau2));
  b.lambda = b.c.tau1 / b.c.tau3 - Scalar(0.5);
  return b;
}

/// Transfer matrix N = [[tau1 xi0, tau3 x3 / 2], [tau2 x3, 1/2]] acting on
/// (psi_hat, psi_check), with x3 = +xi3 for phi1 and -xi3 for phi2.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> transfer_matrix(const BrokenPhase<Scalar>& b, int sign) {
  const Scalar x3 = sign > 0 ? b.xi3 : -b.xi3;
  Eigen::Matrix<Scalar, 2, 2> N;
  N << b.c.tau1 * b.xi0, b.c.tau3 * x3 / Scalar(2), b.c.tau2 * x3, Scalar(0.5);
  return N;
}

/// psi_n = (hat1 + hat2 lambda^n, check1 + check2 lambda^n).
template <typename Scalar>
struct SpectralCoefficients {
  Scalar hat1{}, hat2{}, check1{}, check2{};
};

/// Coefficients from the eigendecomposition N = P diag(1, lambda) P^{-1} applied to psi_0 = (1/xi0, 0).
template <typename Scalar>
SpectralCoefficients<Scalar> spectral_coefficients_eigen(const BrokenPhase<Scalar>& b, int sign) {
  using std::abs;
  const auto N = transfer_matrix(b, sign);
  Eigen::EigenSolver<Eigen::Matrix<Scalar, 2, 2>> es(N);
  const Eigen::Matrix<Scalar, 2, 2> P = es.eigenvectors().real();
  const Eigen::Matrix<Scalar, 2, 1> ev = es.eigenvalues().real();
  const int unit = abs(ev(0) - Scalar(1)) < abs(ev(1) - Scalar(1)) ? 0 : 1;
  const Eigen::Matrix<Scalar, 2, 1> psi0(Scalar(1) / b.xi0, Scalar(0));
  const Eigen::Matrix<Scalar, 2, 1> w = P.partialPivLu().solve(psi0);
  SpectralCoefficients<Scalar> s;
  s.hat1 = P(0, unit) * w(unit);
  s.check1 = P(1, unit) * w(unit);
  s.hat2 = P(0, 1 - unit) * w(1 - unit);
  s.check2 = P(1, 1 - unit) * w(1 - unit);
  return s;
}

/// Algebraic solution of the same recursion:
/// hat1 = tau3^2 / D, hat2 = 2 tau3 (tau3 - tau1) / D, check1 = -check2 = 2 tau2 tau3^2 x3 / D,
/// with D = 3 tau3 - 2 tau1.
template <typename Scalar>
SpectralCoefficients<Scalar> spectral_coefficients_closed_form(const BrokenPhase<Scalar>& b, int sign) {
  const auto& c = b.c;
  const Scalar x3 = sign > 0 ? b.xi3 : -b.xi3;
  const Scalar D = Scalar(3) * c.tau3 - Scalar(2) * c.tau1;
  SpectralCoefficients<Scalar> s;
  s.hat1 = c.tau3 * c.tau3 / D;
  s.hat2 = Scalar(2) * c.tau3 * (c.tau3 - c.tau1) / D;
  s.check1 = Scalar(2) * c.tau2 * c.tau3 * c.tau3 * x3 / D;
  s.check2 = -s.check1;
  return s;
}

/// Transfer-matrix summary for reporting.
struct TransferData {
  Eigen::Matrix2d N_phi1;
  Eigen::Matrix2d N_phi2;
  /// Eigenvalues of N sorted descending (1, tau1/tau3 - 1/2).
  Eigen::Vector2d eigenvalues;
  double determinant = 0.0;
  double lambda = 0.0;
  SpectralCoefficients<double> rho;  // phi1
  SpectralCoefficients<double> pi;   // phi2
};

TransferData transfer_data(const ModelParams& p);

enum class PsiKind { Phi1Hat, Phi1Check, Phi2Hat, Phi2Check };
std::string to_string(PsiKind k);

struct PsiValue {
  /// N^n (1/xi0, 0), iterated.
  double iterated = 0.0;
  /// Spectral closed form with lambda^n decay.
  double closed_form = 0.0;
};

PsiValue transfer_psi(int n, const ModelParams& p, PsiKind which);

enum class Route { ClosedForm, Iterated };

/// Value of the projector p_n (all spins up on Lambda_n) or q_n (all down).
///
/// `Derived` is the shipped formula, Tr(omega0 e) (h_e)^{2^n} (theta^{J+2}/4)^{2^n-1}
/// with Tr(omega0 e) = 1/(2 xi0) for the broken chains. The other variants
/// reproduce the alternative closed forms for comparison only.
enum class ProjectorVariant { Derived, Statement, ProofTrailingFactor };
double projector_value(StateId state, Projector which, int n, const ModelParams& p,
                       ProjectorVariant variant = ProjectorVariant::Derived);

/// phi(E_{Lambda_n}) with e11 at the leftmost vertex of W_n, n >= 1.
double edge_marginal(StateId state, int n, const ModelParams& p, Route route = Route::ClosedForm);

/// Where a_sigma^{Lambda_n} places sigma: leftmost vertex of level n or n+1.
enum class DisorderPlacement { LevelN, LevelNPlus1 };
double disorder_value(StateId state, int n, const ModelParams& p,
                      DisorderPlacement placement = DisorderPlacement::LevelN, Route route = Route::ClosedForm);

/// Witnesses of non-quasi-equivalence.
struct WitnessReport {
  double beta = 0.0, J = 0.0, theta = 0.0, Delta = 0.0;
  double lambda = 0.0;
  /// lim |phi1(E_n) - phi2(E_n)|, from the spectral constants.
  double I1 = 0.0;
  /// tau3 xi3 (2 tau2 + tau3) / (3 tau3 - 2 tau1).
  double I1_closed_form = 0.0;
  double I2 = 0.0;
  /// lim |phi_alpha(a_sigma) - phi1(a_sigma)|.
  double epsilon0 = 0.0;
  /// Coefficient of lambda^{m-1} in phi1(sigma at level m).
  double epsilon0_tail = 0.0;
  /// Smallest n with I2 |lambda|^n <= I1/2.
  int edge_crossover = 0;
  /// Smallest n with |tail| |lambda|^n <= epsilon0/2.
  int disorder_crossover = 0;
  /// Index n = 1..n_max (entry n-1); iterated recursion.
  std::vector<double> edge_gap;
  std::vector<double> edge_lower_bound;
  std::vector<double> disorder_gap;
  /// ||e11|| under the operator norm and under the normalized-trace norm tr|e11|.
  double e11_operator_norm = 1.0;
  double e11_trace_norm = 0.5;
  bool lower_bound_holds = false;
  bool edge_gap_beyond_crossover = false;
  bool disorder_gap_beyond_crossover = false;
};

WitnessReport witness_report(const ModelParams& p, int n_max);

struct OverlapRow {
  double beta = 0.0, theta = 0.0, Delta = 0.0;
  bool broken_phase = false;
  double phi1_p = 0.0, phi2_p = 0.0, phi1_q = 0.0, phi2_q = 0.0;
  /// phi1(p_n) > 1 - eps and phi2(p_n) < eps.
  bool separated = false;
};

std::vector<OverlapRow> overlap_report(double J, int n, const std::vector<double>& beta_grid, double epsilon = 0.01);

/// Observables as operators on Lambda_n (k = 2 unless given).
LocalOperator projector_observable(Projector which, int n, int k = 2);
LocalOperator edge_observable(int n, int k = 2);
LocalOperator disorder_observable(int n, int k = 2, DisorderPlacement placement = DisorderPlacement::LevelN);

/// Alternative expressions that the shipped closed forms replace, with the
/// replacement used here.
struct Resolution {
  std::string id;
  std::string alternative;
  std::string shipped;
};
const std::vector<Resolution>& resolved_discrepancies();

}  // namespace qmc

#endif  // QMC_OBSERVABLES_HPP
