#ifndef QMC_MODEL_HPP
#define QMC_MODEL_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qmc/errors.hpp"
#include "qmc/linalg.hpp"

namespace qmc {

/// Ising model with competing interactions on the order-k tree.
///
/// `beta` couples parent and child, `J * beta` couples siblings. beta = 0 is
/// accepted as the degenerate theta = 1 limit.
struct ModelParams {
  double beta = 0.5;
  double J = 1.0;
  int k = 2;

  double theta() const { return std::exp(2.0 * beta); }
  void validate() const;

  static ModelParams from_theta(double theta, double J, int k = 2);
};

/// Derived scalars of the order-2 model.
/// |Delta| within this band counts as the critical line; no broken phase there.
inline constexpr double kCriticalBand = 1e-9;

template <typename Scalar>
struct Coefficients {
  Scalar theta{}, K0{}, K3{}, R0{}, R3{};
  Scalar gamma{}, delta{}, eta{};
  Scalar tau1{}, tau2{}, tau3{};
  /// Delta(theta) = 4 (tau3 - tau1); positive marks coexistence.
  Scalar Delta{};
};

/// Delta(theta) = theta^J (theta^2 - 3) - 2 theta.
template <typename Scalar>
Scalar delta_of_theta(Scalar theta, Scalar J) {
  using std::pow;
  return pow(theta, J) * (theta * theta - Scalar(3)) - Scalar(2) * theta;
}

/// Coefficients via the operator route (K0, K3, R0, R3 -> gamma, delta, eta -> tau).
template <typename Scalar>
Coefficients<Scalar> coefficients_from_couplings(const ModelParams& p) {
  using std::exp;
  const Scalar beta = static_cast<Scalar>(p.beta);
  const Scalar Jb = static_cast<Scalar>(p.J) * beta;
  Coefficients<Scalar> c;
  c.theta = exp(Scalar(2) * beta);
  c.K0 = (exp(beta) + Scalar(1)) / Scalar(2);
  c.K3 = (exp(beta) - Scalar(1)) / Scalar(2);
  c.R0 = (exp(Jb) + Scalar(1)) / Scalar(2);
  c.R3 = (exp(Jb) - Scalar(1)) / Scalar(2);
  c.gamma = c.K0 * c.K0 * c.R0 + c.K3 * c.K3 * c.R3;
  c.delta = c.K0 * c.K3 * (c.R0 + c.R3);
  c.eta = c.K0 * c.K0 * c.R3 + c.K3 * c.K3 * c.R0;
  c.tau1 = c.gamma * c.gamma + Scalar(2) * c.delta * c.delta + c.eta * c.eta;
  c.tau2 = Scalar(2) * (c.gamma * c.eta + c.delta * c.delta);
  c.tau3 = Scalar(4) * c.delta * (c.gamma + c.eta);
  c.Delta = Scalar(4) * (c.tau3 - c.tau1);
  return c;
}

/// Coefficients via the closed theta-polynomials.
template <typename Scalar>
Coefficients<Scalar> coefficients_from_theta(const ModelParams& p) {
  using std::exp;
  using std::pow;
  auto c = coefficients_from_couplings<Scalar>(p);
  const Scalar th = c.theta;
  const Scalar thJ = pow(th, static_cast<Scalar>(p.J));
  c.tau1 = (thJ * (th * th + Scalar(1)) + Scalar(2) * th) / Scalar(4);
  c.tau2 = (thJ * (th * th + Scalar(1)) - Scalar(2) * th) / Scalar(4);
  c.tau3 = thJ * (th * th - Scalar(1)) / Scalar(2);
  c.Delta = delta_of_theta<Scalar>(th, static_cast<Scalar>(p.J));
  return c;
}

/// All derived scalars; throws ConsistencyFailure when the two routes
/// disagree beyond `rel_tol` (relative to the scale of tau1).
template <typename Scalar = double>
Coefficients<Scalar> coefficients(const ModelParams& p, double rel_tol = 1e-8) {
  using std::abs;
  p.validate();
  if (p.k != 2) throw InvalidArgument("closed-form coefficients are defined for k = 2 only");
  const auto a = coefficients_from_couplings<Scalar>(p);
  const auto b = coefficients_from_theta<Scalar>(p);
  const Scalar scale = abs(b.tau1);
  const Scalar dev = std::max({abs(a.tau1 - b.tau1), abs(a.tau2 - b.tau2), abs(a.tau3 - b.tau3),
                               abs(a.Delta - b.Delta) / Scalar(4)});
  if (dev > static_cast<Scalar>(rel_tol) * scale)
    throw ConsistencyFailure("coefficient routes disagree: relative deviation " +
                             std::to_string(static_cast<double>(dev / scale)));
  return b;
}

/// exp(c P) for an orthogonal projector P, by its spectral decomposition
/// 1 + (e^c - 1) P. Throws when P is not a projector.
LocalOperator exp_projector(const LocalOperator& P, double c, double tol = 1e-12);

/// H = (1 (x) 1 + sigma (x) sigma) / 2 on {u, v}.
LocalOperator coupling_projector(int u, int v);

/// K_<u,v> = K0 1(x)1 + K3 sigma(x)sigma.
LocalOperator edge_operator(const ModelParams& p, int u, int v);
/// K_<u,v> computed as exp(beta H).
LocalOperator edge_operator_exp(const ModelParams& p, int u, int v);

/// L_>u,v< = R0 1(x)1 + R3 sigma(x)sigma.
LocalOperator competing_operator(const ModelParams& p, int u, int v);
LocalOperator competing_operator_exp(const ModelParams& p, int u, int v);

/// Optional three-site factor M_(x,(x,i),(x,i+1)); identity when absent.
using TripleFactor = std::optional<LocalOperator>;

/// Cell operator A_{x,(x,1),...,(x,k)} as the ordered product
/// prod_i K_{x,(x,i)} * prod_i L_{(x,i),(x,i+1)} * prod_i M_i, where `x` is a
/// dense vertex index and the children are k*x+1 .. k*x+k.
LocalOperator cell_operator(const ModelParams& p, int x, const std::vector<TripleFactor>& m_factors = {});

/// gamma 111 + delta (s s 1 + s 1 s) + eta 1 s s, order 2 only.
LocalOperator cell_operator_from_coefficients(const ModelParams& p, int x);

}  // namespace qmc

#endif  // QMC_MODEL_HPP
