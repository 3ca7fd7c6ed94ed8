#include "qmc/model.hpp"

#include <string>

#include "qmc/tree.hpp"

namespace qmc {

void ModelParams::validate() const {
  if (!std::isfinite(beta) || beta < 0.0) throw InvalidArgument("beta must be finite and >= 0");
  if (!std::isfinite(J) || J < 0.0) throw InvalidArgument("J must be finite and >= 0");
  if (k < 2) throw InvalidArgument("tree order k must be >= 2");
}

ModelParams ModelParams::from_theta(double theta, double J, int k) {
  if (!(theta >= 1.0)) throw InvalidArgument("theta must be >= 1");
  return ModelParams{0.5 * std::log(theta), J, k};
}

LocalOperator exp_projector(const LocalOperator& P, double c, double tol) {
  if (max_abs_diff(multiply(P, P), P) > tol || max_abs_diff(adjoint(P), P) > tol)
    throw InvalidArgument("exp_projector expects an orthogonal projector");
  const auto one = LocalOperator::identity(P.support(), P.dim(), P.repr());
  return add(one, scale(P, std::expm1(c)));
}

LocalOperator coupling_projector(int u, int v) {
  const auto ss = tensor(LocalOperator::at(u, site::sigma()), LocalOperator::at(v, site::sigma()));
  const auto ones = LocalOperator::identity(ss.support());
  return scale(add(ones, ss), 0.5);
}

namespace {

LocalOperator pair_operator(double c0, double c3, int u, int v) {
  const auto ss = tensor(LocalOperator::at(u, site::sigma()), LocalOperator::at(v, site::sigma()));
  return add(scale(LocalOperator::identity(ss.support()), c0), scale(ss, c3));
}

}  // namespace

LocalOperator edge_operator(const ModelParams& p, int u, int v) {
  p.validate();
  const double e = std::exp(p.beta);
  return pair_operator((e + 1.0) / 2.0, (e - 1.0) / 2.0, u, v);
}

LocalOperator edge_operator_exp(const ModelParams& p, int u, int v) {
  p.validate();
  return exp_projector(coupling_projector(u, v), p.beta);
}

LocalOperator competing_operator(const ModelParams& p, int u, int v) {
  p.validate();
  const double e = std::exp(p.J * p.beta);
  return pair_operator((e + 1.0) / 2.0, (e - 1.0) / 2.0, u, v);
}

LocalOperator competing_operator_exp(const ModelParams& p, int u, int v) {
  p.validate();
  return exp_projector(coupling_projector(u, v), p.J * p.beta);
}

LocalOperator cell_operator(const ModelParams& p, int x, const std::vector<TripleFactor>& m_factors) {
  p.validate();
  const int k = p.k;
  std::vector<int> children;
  for (int i = 1; i <= k; ++i) children.push_back(static_cast<int>(child_index(static_cast<std::size_t>(x), i, k)));

  std::vector<int> support{x};
  support.insert(support.end(), children.begin(), children.end());
  auto A = LocalOperator::identity(support);
  for (int c : children) A = multiply(A, edge_operator(p, x, c));
  for (int i = 0; i + 1 < k; ++i) A = multiply(A, competing_operator(p, children[static_cast<std::size_t>(i)],
                                                                     children[static_cast<std::size_t>(i + 1)]));
  for (const auto& m : m_factors)
    if (m) A = multiply(A, *m);
  return A;
}

LocalOperator cell_operator_from_coefficients(const ModelParams& p, int x) {
  if (p.k != 2) throw InvalidArgument("coefficient form of the cell operator requires k = 2");
  const auto c = coefficients<double>(p);
  const int c1 = static_cast<int>(child_index(static_cast<std::size_t>(x), 1, 2));
  const int c2 = c1 + 1;
  const auto s = [](int v) { return LocalOperator::at(v, site::sigma()); };
  const auto one = LocalOperator::identity({x, c1, c2});
  auto A = scale(one, c.gamma);
  A = add(A, scale(tensor(s(x), s(c1)), c.delta));
  A = add(A, scale(tensor(s(x), s(c2)), c.delta));
  A = add(A, scale(tensor(s(c1), s(c2)), c.eta));
  return extend(A, {x, c1, c2});
}

}  // namespace qmc
