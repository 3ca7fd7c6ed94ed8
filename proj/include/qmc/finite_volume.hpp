#ifndef QMC_FINITE_VOLUME_HPP
#define QMC_FINITE_VOLUME_HPP

#include <map>
#include <vector>

#include "qmc/linalg.hpp"
#include "qmc/model.hpp"

namespace qmc {

/// Boundary data (omega0 at the root, h^x at every vertex).
///
/// `h` is the translation-invariant value; `overrides` replaces it at
/// individual dense vertex indices.
struct BoundaryCondition {
  SiteOperator omega0 = site::identity();
  SiteOperator h = site::identity();
  std::map<int, SiteOperator> overrides;

  static BoundaryCondition uniform(SiteOperator omega0, SiteOperator h) { return {std::move(omega0), std::move(h), {}}; }

  bool translation_invariant() const { return overrides.empty(); }
  const SiteOperator& at(int vertex) const;
  bool is_diagonal() const;
  /// Throws NonPositiveBoundary unless every operator is positive within tol.
  void validate(double tol = kDefaultTolerance) const;
};

enum class BuildPath { Auto, Diagonal, Dense };

struct VolumeOptions {
  BuildPath path = BuildPath::Auto;
  /// Sites allowed on the diagonal path; 15 covers Lambda_3 at k = 2. At most kDiagonalSiteCap.
  int diagonal_site_cap = 15;
  double tol = kDefaultTolerance;
};

/// The density W_{n]} = K_n K_n^* on Lambda_n.
struct FiniteVolumeState {
  int n = 0;
  LocalOperator W;
  ModelParams params;
  BoundaryCondition boundary;
};

/// K_{[m,m+1]}: ordered product of the cell operators over forward-ordered W_m.
LocalOperator level_transfer(int m, const ModelParams& p, const VolumeOptions& opts = {});

/// h_n^{1/2} = prod_{x in W_n} (h^x)^{1/2}.
LocalOperator boundary_sqrt(int n, const ModelParams& p, const BoundaryCondition& bc, const VolumeOptions& opts = {});

/// W_{n]} with K_n = omega0^{1/2} K_{[0,1]} ... K_{[n-1,n]} h_n^{1/2}. n = 0 gives omega0^{1/2} h omega0^{1/2}.
FiniteVolumeState build_state(int n, const ModelParams& p, const BoundaryCondition& bc, const VolumeOptions& opts = {});

struct ProjectivityReport {
  int n = 0;
  /// max |tr_{n-1]}(W_{n]}) - W_{n-1]}|
  double deviation = 0.0;
  /// |tr(W_{n]}) - 1|
  double trace_deviation = 0.0;
  double tol = kDefaultTolerance;
  bool pass = false;
};

ProjectivityReport check_projectivity(int n, const ModelParams& p, const BoundaryCondition& bc,
                                      double tol = kDefaultTolerance, const VolumeOptions& opts = {});

struct BoundaryEquationReport {
  /// |Tr(omega0 h) - 1|
  double eq1_residual = 0.0;
  /// max |Tr_{x]}(A (1 (x) h (x) ... (x) h) A^*) - h|, by operator algebra on one cell.
  double eq2_residual = 0.0;
  /// Same equation through the scalar reduction h = (tau1 t^2 + tau2 s^2) 1 + tau3 t s sigma (k = 2).
  double reduced_residual = 0.0;
  double tol = kDefaultTolerance;
  bool pass = false;

  double residual() const;
};

BoundaryEquationReport check_boundary_equations(const ModelParams& p, const BoundaryCondition& bc,
                                                double tol = kDefaultTolerance);

/// Tr_{x]}(A_x (prod_i h^{(x,i)}) A_x^*) as an operator at x.
SiteOperator cell_boundary_trace(const ModelParams& p, int x, const BoundaryCondition& bc);

/// tr_{Lambda_{n-1}}(K_{[n-1,n]} h_n K_{[n-1,n]}^*), computed on the whole layer.
LocalOperator boundary_layer_trace(int n, const ModelParams& p, const BoundaryCondition& bc,
                                   const VolumeOptions& opts = {});
/// The same quantity as the product over x in W_{n-1} of single-cell traces.
LocalOperator boundary_layer_trace_factorized(int n, const ModelParams& p, const BoundaryCondition& bc);

enum class OracleMode {
  /// LeafContracted for diagonal inputs, Dense otherwise.
  Auto,
  /// Enumerate Lambda_n; sum each leaf cell of W_{n+1} exactly.
  LeafContracted,
  /// Enumerate every basis state of Lambda_{n+1}.
  FullEnumeration,
  /// Dense W_{n+1} (at most kDenseSiteCap sites).
  Dense,
};

struct OracleOptions {
  OracleMode mode = OracleMode::Auto;
  int diagonal_site_cap = 15;
  int threads = 0;
};

/// phi^{(n)}(a) = tr(W_{n+1]} (a (x) 1_{W_{n+1}})) by exact contraction.
Complex expectation_oracle(int n, const ModelParams& p, const BoundaryCondition& bc, const LocalOperator& obs,
                           const OracleOptions& opts = {});

/// Quasi-conditional expectation at `stage` on the truncation Lambda_{truncation}.
///
/// stage 1:  x -> tr_{W_0}(K_{[0,1]}^* omega0^{1/2} x omega0^{1/2} K_{[0,1]})
/// stage s:  x -> tr_{W_{s-1}}(K_{[s-1,s]}^* x K_{[s-1,s]})
/// The input lives on Lambda_{[s-1,truncation]}, the result on Lambda_{[s,truncation]}.
LocalOperator quasi_conditional_expectation(int stage, const LocalOperator& x, const ModelParams& p,
                                            const BoundaryCondition& bc, int truncation);

/// tr(h_{n+1} E_{n+1} o ... o E_2 o E_1(a)) for a supported in Lambda_n.
Complex compose_quasi_conditional(int n, const LocalOperator& a, const ModelParams& p, const BoundaryCondition& bc);

}  // namespace qmc

#endif  // QMC_FINITE_VOLUME_HPP
