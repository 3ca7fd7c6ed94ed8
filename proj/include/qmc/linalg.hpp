#ifndef QMC_LINALG_HPP
#define QMC_LINALG_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qmc {

using Complex = std::complex<double>;

/// A d x d matrix living at one site. Basis index 0 is spin up (sigma = +1).
using SiteOperator = Eigen::MatrixXcd;

inline constexpr double kDefaultTolerance = 1e-10;
/// Largest support the dense representation accepts.
inline constexpr int kDenseSiteCap = 7;
/// Largest support the diagonal representation accepts.
inline constexpr int kDiagonalSiteCap = 25;

namespace site {
SiteOperator identity(int d = 2);
/// Pauli sigma^z: diag(+1, -1).
SiteOperator sigma();
SiteOperator e11();
SiteOperator e22();
SiteOperator diagonal(double up, double down);
}  // namespace site

bool is_diagonal(const SiteOperator& a, double tol = 0.0);
bool is_positive(const SiteOperator& a, double tol = kDefaultTolerance);
/// Principal square root of a positive operator.
SiteOperator positive_sqrt(const SiteOperator& a);
/// Normalized trace: Tr(1) = 1.
Complex normalized_trace(const SiteOperator& a);

/// An element of B_Lambda for a finite vertex set Lambda.
///
/// The support is a strictly increasing list of dense vertex indices. The
/// basis index is a base-d number whose most significant digit belongs to
/// the smallest vertex index. Operators that are diagonal in the product
/// basis may be stored as their diagonal only; both forms describe the same
/// matrix and every operation accepts either.
class LocalOperator {
 public:
  enum class Repr { Dense, Diagonal };

  LocalOperator() = default;

  static LocalOperator dense(std::vector<int> support, Eigen::MatrixXcd entries, int d = 2);
  static LocalOperator diagonal(std::vector<int> support, Eigen::VectorXcd entries, int d = 2);
  static LocalOperator identity(std::vector<int> support, int d = 2, Repr repr = Repr::Diagonal);
  static LocalOperator scalar(Complex c, int d = 2);
  /// One-site operator; stored diagonally when `op` is diagonal.
  static LocalOperator at(int vertex, const SiteOperator& op);

  const std::vector<int>& support() const { return support_; }
  int dim() const { return d_; }
  Repr repr() const { return repr_; }
  bool is_diagonal_repr() const { return repr_ == Repr::Diagonal; }
  /// d^|support|
  Eigen::Index size() const;

  /// Dense matrix view (converted on demand for diagonal operators).
  Eigen::MatrixXcd to_dense() const;
  /// Diagonal entries. Valid for both representations.
  Eigen::VectorXcd diagonal_entries() const;
  const Eigen::MatrixXcd& dense_entries() const { return dense_; }
  const Eigen::VectorXcd& diag_entries() const { return diag_; }

  /// Converts a dense operator to the diagonal form when its off-diagonal part vanishes.
  LocalOperator compressed(double tol = 0.0) const;
  LocalOperator as_dense() const;

 private:
  LocalOperator(std::vector<int> support, int d, Repr repr) : support_(std::move(support)), d_(d), repr_(repr) {}

  std::vector<int> support_;
  int d_ = 2;
  Repr repr_ = Repr::Diagonal;
  Eigen::MatrixXcd dense_;
  Eigen::VectorXcd diag_;
};

/// Sorted union of two supports.
std::vector<int> support_union(const std::vector<int>& a, const std::vector<int>& b);

/// Embeds `a` into a larger support by tensoring with the identity.
LocalOperator extend(const LocalOperator& a, const std::vector<int>& support);

/// a (x) b for disjoint supports.
LocalOperator tensor(const LocalOperator& a, const LocalOperator& b);

/// Operator product a * b on the union of the supports. Order is kept.
LocalOperator multiply(const LocalOperator& a, const LocalOperator& b);
LocalOperator add(const LocalOperator& a, const LocalOperator& b);
LocalOperator scale(const LocalOperator& a, Complex c);
LocalOperator adjoint(const LocalOperator& a);

Complex normalized_trace(const LocalOperator& a);

/// Normalized partial trace onto `keep`; each traced site contributes 1/d.
/// Vertices of `keep` outside the support carry the identity.
LocalOperator partial_trace(const LocalOperator& a, const std::vector<int>& keep);

bool is_positive(const LocalOperator& a, double tol = kDefaultTolerance);

/// Largest entry-wise deviation |a - b| after extending both to a common support.
double max_abs_diff(const LocalOperator& a, const LocalOperator& b);

}  // namespace qmc

#endif  // QMC_LINALG_HPP
