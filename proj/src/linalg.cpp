#include "qmc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

Eigen::Index ipow(int d, std::size_t m) {
  Eigen::Index r = 1;
  for (std::size_t i = 0; i < m; ++i) r *= d;
  return r;
}

void check_support(const std::vector<int>& support) {
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0) throw InvalidArgument("negative vertex index in support");
    if (i > 0 && support[i] <= support[i - 1])
      throw InvalidArgument("support must be strictly increasing");
  }
}

void check_cap(std::size_t sites, LocalOperator::Repr repr) {
  const int cap = repr == LocalOperator::Repr::Dense ? kDenseSiteCap : kDiagonalSiteCap;
  if (sites > static_cast<std::size_t>(cap))
    throw VolumeCapExceeded(std::string(repr == LocalOperator::Repr::Dense ? "dense" : "diagonal") +
                            " operator on " + std::to_string(sites) + " sites exceeds cap of " +
                            std::to_string(cap));
}

/// Positions of `sub` inside `full` (both sorted; sub must be a subset).
std::vector<std::size_t> positions_in(const std::vector<int>& full, const std::vector<int>& sub) {
  std::vector<std::size_t> pos;
  pos.reserve(sub.size());
  for (int v : sub) {
    auto it = std::lower_bound(full.begin(), full.end(), v);
    if (it == full.end() || *it != v) throw InvalidArgument("support is not a subset");
    pos.push_back(static_cast<std::size_t>(it - full.begin()));
  }
  return pos;
}

/// For every basis index on `full`, the induced basis index on the sites at `pos`.
std::vector<Eigen::Index> projection_table(std::size_t full_sites, const std::vector<std::size_t>& pos, int d) {
  const Eigen::Index n = ipow(d, full_sites);
  std::vector<Eigen::Index> table(static_cast<std::size_t>(n));
  std::vector<int> digits(full_sites, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index sub = 0;
    for (std::size_t p : pos) sub = sub * d + digits[p];
    table[static_cast<std::size_t>(i)] = sub;
    for (std::size_t q = full_sites; q-- > 0;) {
      if (++digits[q] < d) break;
      digits[q] = 0;
    }
  }
  return table;
}

std::vector<int> complement(const std::vector<int>& full, const std::vector<int>& sub) {
  std::vector<int> out;
  std::set_difference(full.begin(), full.end(), sub.begin(), sub.end(), std::back_inserter(out));
  return out;
}

std::vector<int> intersection(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void check_dim(const LocalOperator& a, const LocalOperator& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatch("site dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

}  // namespace

namespace site {

SiteOperator identity(int d) { return SiteOperator::Identity(d, d); }

SiteOperator sigma() { return diagonal(1.0, -1.0); }

SiteOperator e11() { return diagonal(1.0, 0.0); }

SiteOperator e22() { return diagonal(0.0, 1.0); }

SiteOperator diagonal(double up, double down) {
  SiteOperator m = SiteOperator::Zero(2, 2);
  m(0, 0) = up;
  m(1, 1) = down;
  return m;
}

}  // namespace site

bool is_diagonal(const SiteOperator& a, double tol) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j && std::abs(a(i, j)) > tol) return false;
  return true;
}

bool is_positive(const SiteOperator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  if (!a.allFinite()) return false;
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

SiteOperator positive_sqrt(const SiteOperator& a) {
  if (is_diagonal(a)) {
    SiteOperator r = SiteOperator::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) r(i, i) = std::sqrt(std::max(a(i, i).real(), 0.0));
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (a + a.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

Complex normalized_trace(const SiteOperator& a) { return a.trace() / static_cast<double>(a.rows()); }

// ---------------------------------------------------------------------------

LocalOperator LocalOperator::dense(std::vector<int> support, Eigen::MatrixXcd entries, int d) {
  check_support(support);
  check_cap(support.size(), Repr::Dense);
  const Eigen::Index n = ipow(d, support.size());
  if (entries.rows() != n || entries.cols() != n)
    throw DimensionMismatch("dense entries must be " + std::to_string(n) + "x" + std::to_string(n));
  LocalOperator op(std::move(support), d, Repr::Dense);
  op.dense_ = std::move(entries);
  return op;
}

LocalOperator LocalOperator::diagonal(std::vector<int> support, Eigen::VectorXcd entries, int d) {
  check_support(support);
  check_cap(support.size(), Repr::Diagonal);
  const Eigen::Index n = ipow(d, support.size());
  if (entries.size() != n) throw DimensionMismatch("diagonal entries must have length " + std::to_string(n));
  LocalOperator op(std::move(support), d, Repr::Diagonal);
  op.diag_ = std::move(entries);
  return op;
}

LocalOperator LocalOperator::identity(std::vector<int> support, int d, Repr repr) {
  const Eigen::Index n = ipow(d, support.size());
  if (repr == Repr::Dense) return dense(std::move(support), Eigen::MatrixXcd::Identity(n, n), d);
  return diagonal(std::move(support), Eigen::VectorXcd::Ones(n), d);
}

LocalOperator LocalOperator::scalar(Complex c, int d) {
  Eigen::VectorXcd v(1);
  v(0) = c;
  return diagonal({}, v, d);
}

LocalOperator LocalOperator::at(int vertex, const SiteOperator& op) {
  if (op.rows() != op.cols()) throw DimensionMismatch("site operator must be square");
  const int d = static_cast<int>(op.rows());
  if (is_diagonal(op)) return diagonal({vertex}, op.diagonal(), d);
  return dense({vertex}, op, d);
}

Eigen::Index LocalOperator::size() const { return ipow(d_, support_.size()); }

Eigen::MatrixXcd LocalOperator::to_dense() const {
  if (repr_ == Repr::Dense) return dense_;
  return diag_.asDiagonal();
}

Eigen::VectorXcd LocalOperator::diagonal_entries() const {
  if (repr_ == Repr::Diagonal) return diag_;
  return dense_.diagonal();
}

LocalOperator LocalOperator::compressed(double tol) const {
  if (repr_ == Repr::Diagonal) return *this;
  Eigen::MatrixXcd off = dense_;
  off.diagonal().setZero();
  if (off.size() == 0 || off.cwiseAbs().maxCoeff() <= tol) return diagonal(support_, dense_.diagonal(), d_);
  return *this;
}

LocalOperator LocalOperator::as_dense() const {
  if (repr_ == Repr::Dense) return *this;
  return dense(support_, to_dense(), d_);
}

// ---------------------------------------------------------------------------

std::vector<int> support_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

LocalOperator extend(const LocalOperator& a, const std::vector<int>& support) {
  if (support == a.support()) return a;
  check_support(support);
  const auto pos = positions_in(support, a.support());
  const auto proj = projection_table(support.size(), pos, a.dim());
  const Eigen::Index n = static_cast<Eigen::Index>(proj.size());

  if (a.is_diagonal_repr()) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = a.diag_entries()(proj[static_cast<std::size_t>(i)]);
    return LocalOperator::diagonal(support, std::move(v), a.dim());
  }

  const auto rest = complement(support, a.support());
  const auto rest_proj = projection_table(support.size(), positions_in(support, rest), a.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const auto& src = a.dense_entries();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (rest_proj[static_cast<std::size_t>(i)] == rest_proj[static_cast<std::size_t>(j)])
        m(i, j) = src(proj[static_cast<std::size_t>(i)], proj[static_cast<std::size_t>(j)]);
  return LocalOperator::dense(support, std::move(m), a.dim());
}

LocalOperator tensor(const LocalOperator& a, const LocalOperator& b) {
  check_dim(a, b);
  if (!intersection(a.support(), b.support()).empty())
    throw OverlappingSupport("tensor product requires disjoint supports");
  return multiply(a, b);
}

LocalOperator multiply(const LocalOperator& a, const LocalOperator& b) {
  check_dim(a, b);
  const auto support = support_union(a.support(), b.support());
  if (a.is_diagonal_repr() && b.is_diagonal_repr()) {
    auto ea = extend(a, support);
    auto eb = extend(b, support);
    return LocalOperator::diagonal(support, ea.diag_entries().cwiseProduct(eb.diag_entries()), a.dim());
  }
  auto ea = extend(a, support);
  auto eb = extend(b, support);
  if (ea.is_diagonal_repr()) {
    Eigen::MatrixXcd m = ea.diag_entries().asDiagonal() * eb.dense_entries();
    return LocalOperator::dense(support, std::move(m), a.dim());
  }
  if (eb.is_diagonal_repr()) {
    Eigen::MatrixXcd m = ea.dense_entries() * eb.diag_entries().asDiagonal();
    return LocalOperator::dense(support, std::move(m), a.dim());
  }
  Eigen::MatrixXcd m = ea.dense_entries() * eb.dense_entries();
  return LocalOperator::dense(support, std::move(m), a.dim());
}

LocalOperator add(const LocalOperator& a, const LocalOperator& b) {
  check_dim(a, b);
  const auto support = support_union(a.support(), b.support());
  auto ea = extend(a, support);
  auto eb = extend(b, support);
  if (ea.is_diagonal_repr() && eb.is_diagonal_repr())
    return LocalOperator::diagonal(support, ea.diag_entries() + eb.diag_entries(), a.dim());
  return LocalOperator::dense(support, ea.to_dense() + eb.to_dense(), a.dim());
}

LocalOperator scale(const LocalOperator& a, Complex c) {
  if (a.is_diagonal_repr()) return LocalOperator::diagonal(a.support(), a.diag_entries() * c, a.dim());
  return LocalOperator::dense(a.support(), a.dense_entries() * c, a.dim());
}

LocalOperator adjoint(const LocalOperator& a) {
  if (a.is_diagonal_repr()) return LocalOperator::diagonal(a.support(), a.diag_entries().conjugate(), a.dim());
  return LocalOperator::dense(a.support(), a.dense_entries().adjoint(), a.dim());
}

Complex normalized_trace(const LocalOperator& a) {
  const Eigen::VectorXcd diag = a.diagonal_entries();
  // pairwise (Eigen's redux) summation; fixed order
  return diag.sum() / static_cast<double>(diag.size());
}

LocalOperator partial_trace(const LocalOperator& a, const std::vector<int>& keep) {
  check_support(keep);
  const auto kept = intersection(a.support(), keep);
  const auto traced = complement(a.support(), kept);
  const int d = a.dim();
  const std::size_t m = a.support().size();
  const auto kproj = projection_table(m, positions_in(a.support(), kept), d);
  const auto tproj = projection_table(m, positions_in(a.support(), traced), d);
  const Eigen::Index nk = ipow(d, kept.size());
  const Eigen::Index nt = ipow(d, traced.size());
  const double norm = 1.0 / static_cast<double>(nt);

  LocalOperator reduced;
  if (a.is_diagonal_repr()) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(nk);
    for (Eigen::Index i = 0; i < a.size(); ++i) v(kproj[static_cast<std::size_t>(i)]) += a.diag_entries()(i);
    reduced = LocalOperator::diagonal(kept, v * norm, d);
  } else {
    // compose[k][t] = full index
    std::vector<Eigen::Index> compose(static_cast<std::size_t>(nk * nt));
    for (Eigen::Index i = 0; i < a.size(); ++i)
      compose[static_cast<std::size_t>(kproj[static_cast<std::size_t>(i)] * nt + tproj[static_cast<std::size_t>(i)])] = i;
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(nk, nk);
    const auto& src = a.dense_entries();
    for (Eigen::Index ki = 0; ki < nk; ++ki)
      for (Eigen::Index kj = 0; kj < nk; ++kj) {
        Complex s = 0.0;
        for (Eigen::Index t = 0; t < nt; ++t)
          s += src(compose[static_cast<std::size_t>(ki * nt + t)], compose[static_cast<std::size_t>(kj * nt + t)]);
        r(ki, kj) = s * norm;
      }
    reduced = LocalOperator::dense(kept, std::move(r), d);
  }
  if (kept.size() == keep.size()) return reduced;
  return extend(reduced, keep);
}

bool is_positive(const LocalOperator& a, double tol) {
  if (a.is_diagonal_repr()) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      const Complex z = a.diag_entries()(i);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
      if (std::abs(z.imag()) > tol || z.real() < -tol) return false;
    }
    return true;
  }
  return is_positive(SiteOperator(a.dense_entries()), tol);
}

double max_abs_diff(const LocalOperator& a, const LocalOperator& b) {
  check_dim(a, b);
  const auto support = support_union(a.support(), b.support());
  auto ea = extend(a, support);
  auto eb = extend(b, support);
  if (ea.is_diagonal_repr() && eb.is_diagonal_repr())
    return (ea.diag_entries() - eb.diag_entries()).cwiseAbs().maxCoeff();
  return (ea.to_dense() - eb.to_dense()).cwiseAbs().maxCoeff();
}

}  // namespace qmc
