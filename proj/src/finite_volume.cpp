#include "qmc/finite_volume.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "qmc/parallel.hpp"
#include "qmc/tree.hpp"

namespace qmc {

const SiteOperator& BoundaryCondition::at(int vertex) const {
  auto it = overrides.find(vertex);
  return it == overrides.end() ? h : it->second;
}

bool BoundaryCondition::is_diagonal() const {
  if (!qmc::is_diagonal(omega0) || !qmc::is_diagonal(h)) return false;
  return std::all_of(overrides.begin(), overrides.end(), [](const auto& kv) { return qmc::is_diagonal(kv.second); });
}

void BoundaryCondition::validate(double tol) const {
  if (!is_positive(omega0, tol)) throw NonPositiveBoundary("omega0 is not positive");
  if (!is_positive(h, tol)) throw NonPositiveBoundary("h is not positive");
  for (const auto& [v, op] : overrides)
    if (!is_positive(op, tol)) throw NonPositiveBoundary("h at vertex " + std::to_string(v) + " is not positive");
}

double BoundaryEquationReport::residual() const { return std::max({eq1_residual, eq2_residual, reduced_residual}); }

namespace {

bool use_dense(const BoundaryCondition& bc, const VolumeOptions& opts) {
  if (opts.path == BuildPath::Dense) return true;
  if (opts.path == BuildPath::Diagonal) {
    if (!bc.is_diagonal()) throw InvalidArgument("diagonal path requires a diagonal boundary condition");
    return false;
  }
  return !bc.is_diagonal();
}

void check_volume(int n, const ModelParams& p, bool dense, const VolumeOptions& opts) {
  const std::size_t sites = volume_size(n, p.k);
  const int cap = dense ? kDenseSiteCap : std::min(opts.diagonal_site_cap, kDiagonalSiteCap);
  if (sites > static_cast<std::size_t>(cap))
    throw VolumeCapExceeded("Lambda_" + std::to_string(n) + " has " + std::to_string(sites) + " sites; " +
                            (dense ? "dense" : "diagonal") + " cap is " + std::to_string(cap));
}

LocalOperator maybe_dense(LocalOperator op, bool dense) { return dense ? op.as_dense() : op; }

}  // namespace

LocalOperator level_transfer(int m, const ModelParams& p, const VolumeOptions& opts) {
  p.validate();
  if (m < 0) throw InvalidArgument("level must be >= 0");
  const std::size_t sites = level_size(m, p.k) + level_size(m + 1, p.k);
  if (sites > static_cast<std::size_t>(std::min(opts.diagonal_site_cap, kDiagonalSiteCap)))
    throw VolumeCapExceeded("Lambda_[" + std::to_string(m) + "," + std::to_string(m + 1) + "] exceeds cap");
  auto K = LocalOperator::identity(range_indices(m, m + 1, p.k));
  for (int x : level_indices(m, p.k)) K = multiply(K, cell_operator(p, x));
  return K;
}

LocalOperator boundary_sqrt(int n, const ModelParams& p, const BoundaryCondition& bc, const VolumeOptions& opts) {
  const bool dense = use_dense(bc, opts);
  auto H = LocalOperator::identity(level_indices(n, p.k));
  for (int x : level_indices(n, p.k)) H = multiply(H, LocalOperator::at(x, positive_sqrt(bc.at(x))));
  return maybe_dense(H, dense);
}

FiniteVolumeState build_state(int n, const ModelParams& p, const BoundaryCondition& bc, const VolumeOptions& opts) {
  p.validate();
  if (n < 0) throw InvalidArgument("volume level must be >= 0");
  bc.validate(opts.tol);
  const bool dense = use_dense(bc, opts);
  check_volume(n, p, dense, opts);

  auto K = maybe_dense(LocalOperator::at(0, positive_sqrt(bc.omega0)), dense);
  for (int m = 0; m < n; ++m) K = multiply(K, maybe_dense(level_transfer(m, p, opts), dense));
  K = multiply(K, boundary_sqrt(n, p, bc, opts));
  auto W = multiply(K, adjoint(K));
  return FiniteVolumeState{n, std::move(W), p, bc};
}

ProjectivityReport check_projectivity(int n, const ModelParams& p, const BoundaryCondition& bc, double tol,
                                      const VolumeOptions& opts) {
  if (n < 1) throw InvalidArgument("projectivity needs n >= 1");
  const auto Wn = build_state(n, p, bc, opts);
  const auto Wprev = build_state(n - 1, p, bc, opts);
  ProjectivityReport r;
  r.n = n;
  r.tol = tol;
  r.deviation = max_abs_diff(partial_trace(Wn.W, range_indices(0, n - 1, p.k)), Wprev.W);
  r.trace_deviation = std::abs(normalized_trace(Wn.W) - 1.0);
  r.pass = r.deviation <= tol && r.trace_deviation <= tol;
  return r;
}

SiteOperator cell_boundary_trace(const ModelParams& p, int x, const BoundaryCondition& bc) {
  const auto A = cell_operator(p, x);
  auto H = LocalOperator::identity(A.support());
  for (int i = 1; i <= p.k; ++i) {
    const int c = static_cast<int>(child_index(static_cast<std::size_t>(x), i, p.k));
    H = multiply(H, LocalOperator::at(c, bc.at(c)));
  }
  const auto Y = multiply(multiply(A, H), adjoint(A));
  return partial_trace(Y, {x}).to_dense();
}

BoundaryEquationReport check_boundary_equations(const ModelParams& p, const BoundaryCondition& bc, double tol) {
  if (!bc.translation_invariant())
    throw InvalidArgument("boundary equations are checked for translation-invariant boundaries");
  BoundaryEquationReport r;
  r.tol = tol;
  r.eq1_residual = std::abs(normalized_trace(SiteOperator(bc.omega0 * bc.h)) - 1.0);
  r.eq2_residual = (cell_boundary_trace(p, 0, bc) - bc.h).cwiseAbs().maxCoeff();
  if (p.k == 2) {
    const auto c = coefficients<double>(p);
    const Complex t = normalized_trace(bc.h);
    const Complex s = normalized_trace(SiteOperator(site::sigma() * bc.h));
    const SiteOperator rhs = (c.tau1 * t * t + c.tau2 * s * s) * site::identity() + (c.tau3 * t * s) * site::sigma();
    r.reduced_residual = (rhs - bc.h).cwiseAbs().maxCoeff();
  }
  r.pass = r.residual() <= tol;
  return r;
}

LocalOperator boundary_layer_trace(int n, const ModelParams& p, const BoundaryCondition& bc, const VolumeOptions& opts) {
  if (n < 1) throw InvalidArgument("boundary layer needs n >= 1");
  const bool dense = use_dense(bc, opts);
  const auto K = maybe_dense(level_transfer(n - 1, p, opts), dense);
  auto H = LocalOperator::identity(level_indices(n, p.k));
  for (int x : level_indices(n, p.k)) H = multiply(H, LocalOperator::at(x, bc.at(x)));
  const auto Y = multiply(multiply(K, H), adjoint(K));
  return partial_trace(Y, level_indices(n - 1, p.k));
}

LocalOperator boundary_layer_trace_factorized(int n, const ModelParams& p, const BoundaryCondition& bc) {
  if (n < 1) throw InvalidArgument("boundary layer needs n >= 1");
  auto out = LocalOperator::identity(level_indices(n - 1, p.k));
  for (int x : level_indices(n - 1, p.k)) out = multiply(out, LocalOperator::at(x, cell_boundary_trace(p, x, bc)));
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration oracle

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

struct Partial {
  double re = 0.0;
  double im = 0.0;
  Partial operator+(const Partial& o) const { return {re + o.re, im + o.im}; }
};

/// log-weights of a diagonal product state over a volume of `bits` sites;
/// bit of vertex v sits at position bits-1-v, spin up = 0.
struct DiagonalModel {
  int k = 2;
  int bits = 0;
  std::vector<int> cell_parents;       // parents whose full cell is enumerated
  std::vector<double> log_cell;        // log |a|^2 indexed by (s_x, s_1..s_k)
  double log_root[2] = {0.0, 0.0};     // log omega0
  std::vector<int> leaf_vertices;      // vertices carrying a single-site factor
  std::vector<std::array<double, 2>> log_leaf;

  double log_weight(std::uint64_t state) const {
    const auto bit = [&](int v) { return static_cast<int>((state >> (bits - 1 - v)) & 1u); };
    double lw = log_root[bit(0)];
    for (int x : cell_parents) {
      int idx = bit(x);
      for (int i = 1; i <= k; ++i) idx = (idx << 1) | bit(k * x + i);
      lw += log_cell[static_cast<std::size_t>(idx)];
    }
    for (std::size_t j = 0; j < leaf_vertices.size(); ++j) lw += log_leaf[j][static_cast<std::size_t>(bit(leaf_vertices[j]))];
    return lw;
  }
};

std::vector<double> log_cell_weights(const ModelParams& p) {
  const auto A = cell_operator(p, 0);
  if (!A.is_diagonal_repr()) throw UnsupportedSize("diagonal oracle requires a diagonal cell operator");
  std::vector<double> out(static_cast<std::size_t>(A.size()));
  for (Eigen::Index i = 0; i < A.size(); ++i) out[static_cast<std::size_t>(i)] = safe_log(std::norm(A.diag_entries()(i)));
  return out;
}

double diag_real(const SiteOperator& op, int i) { return op(i, i).real(); }

Complex enumerate(const DiagonalModel& model, const LocalOperator& obs, int threads) {
  const std::uint64_t count = std::uint64_t{1} << model.bits;
  const auto& sup = obs.support();
  const auto obs_value = [&](std::uint64_t state) {
    Eigen::Index idx = 0;
    for (int v : sup) idx = (idx << 1) | static_cast<Eigen::Index>((state >> (model.bits - 1 - v)) & 1u);
    return obs.diag_entries()(idx);
  };

  const std::size_t chunks = static_cast<std::size_t>((count + kReductionChunk - 1) / kReductionChunk);
  std::vector<double> chunk_max(chunks, kNegInf);
  for_each_chunk(count, threads, [&](std::size_t c, std::uint64_t b, std::uint64_t e) {
    double m = kNegInf;
    for (std::uint64_t s = b; s < e; ++s) m = std::max(m, model.log_weight(s));
    chunk_max[c] = m;
  });
  const double shift = *std::max_element(chunk_max.begin(), chunk_max.end());
  if (shift == kNegInf) return 0.0;

  std::vector<Partial> parts(chunks);
  for_each_chunk(count, threads, [&](std::size_t c, std::uint64_t b, std::uint64_t e) {
    CompensatedSum<double> re, im;
    for (std::uint64_t s = b; s < e; ++s) {
      const double w = std::exp(model.log_weight(s) - shift);
      if (w == 0.0) continue;
      const Complex o = obs_value(s);
      re.add(o.real() * w);
      im.add(o.imag() * w);
    }
    parts[c] = {re.value(), im.value()};
  });
  const Partial total = pairwise_sum(std::move(parts));
  const double log_scale = shift - model.bits * std::log(2.0);
  const auto rescale = [&](double v) {
    if (v == 0.0) return 0.0;
    return std::copysign(std::exp(std::log(std::abs(v)) + log_scale), v);
  };
  return {rescale(total.re), rescale(total.im)};
}

}  // namespace

Complex expectation_oracle(int n, const ModelParams& p, const BoundaryCondition& bc, const LocalOperator& obs,
                           const OracleOptions& opts) {
  p.validate();
  if (n < 0) throw InvalidArgument("volume level must be >= 0");
  bc.validate();
  const int k = p.k;
  const auto lambda_n = static_cast<int>(volume_size(n, k));
  for (int v : obs.support())
    if (v >= lambda_n) throw InvalidArgument("observable support must lie in Lambda_n");

  OracleMode mode = opts.mode;
  const bool diagonal_inputs = obs.is_diagonal_repr() && bc.is_diagonal() && obs.dim() == 2;
  if (mode == OracleMode::Auto) mode = diagonal_inputs ? OracleMode::LeafContracted : OracleMode::Dense;

  if (mode == OracleMode::Dense) {
    const int sites = static_cast<int>(volume_size(n + 1, k));
    if (sites > kDenseSiteCap)
      throw UnsupportedSize("dense oracle needs Lambda_" + std::to_string(n + 1) + " with " + std::to_string(sites) +
                            " sites; cap is " + std::to_string(kDenseSiteCap));
    VolumeOptions vo;
    vo.path = BuildPath::Dense;
    const auto state = build_state(n + 1, p, bc, vo);
    return normalized_trace(multiply(state.W, extend(obs.as_dense(), state.W.support())));
  }

  if (!diagonal_inputs) throw UnsupportedSize("enumeration oracle requires diagonal observable and boundary");
  const int cap = std::min(opts.diagonal_site_cap, kDiagonalSiteCap);

  DiagonalModel model;
  model.k = k;
  model.log_cell = log_cell_weights(p);
  model.log_root[0] = safe_log(diag_real(bc.omega0, 0));
  model.log_root[1] = safe_log(diag_real(bc.omega0, 1));

  if (mode == OracleMode::FullEnumeration) {
    model.bits = static_cast<int>(volume_size(n + 1, k));
    if (model.bits > cap)
      throw UnsupportedSize("full enumeration of Lambda_" + std::to_string(n + 1) + " needs " +
                            std::to_string(model.bits) + " bits; cap is " + std::to_string(cap));
    model.cell_parents = range_indices(0, n, k);
    for (int y : level_indices(n + 1, k)) {
      model.leaf_vertices.push_back(y);
      const auto& h = bc.at(y);
      model.log_leaf.push_back({safe_log(diag_real(h, 0)), safe_log(diag_real(h, 1))});
    }
  } else {
    model.bits = lambda_n;
    if (model.bits > cap)
      throw UnsupportedSize("enumeration of Lambda_" + std::to_string(n) + " needs " + std::to_string(model.bits) +
                            " bits; cap is " + std::to_string(cap));
    if (n >= 1) model.cell_parents = range_indices(0, n - 1, k);
    // each x in W_n: f(s) = 2^{-k} sum_c |a(s,c)|^2 prod_i h^{(x,i)}(c_i)
    const double norm = std::ldexp(1.0, -k);
    for (int x : level_indices(n, k)) {
      std::array<double, 2> f{0.0, 0.0};
      for (int s = 0; s < 2; ++s) {
        double acc = 0.0;
        for (int c = 0; c < (1 << k); ++c) {
          double w = std::exp(model.log_cell[static_cast<std::size_t>((s << k) | c)]);
          for (int i = 1; i <= k; ++i) {
            const int spin = (c >> (k - i)) & 1;
            w *= diag_real(bc.at(k * x + i), spin);
          }
          acc += w;
        }
        f[static_cast<std::size_t>(s)] = safe_log(acc * norm);
      }
      model.leaf_vertices.push_back(x);
      model.log_leaf.push_back(f);
    }
  }
  return enumerate(model, obs, resolve_threads(opts.threads));
}

// ---------------------------------------------------------------------------
// Quasi-conditional expectations

LocalOperator quasi_conditional_expectation(int stage, const LocalOperator& x, const ModelParams& p,
                                            const BoundaryCondition& bc, int truncation) {
  p.validate();
  if (stage < 1 || stage > truncation) throw InvalidArgument("need 1 <= stage <= truncation");
  const int k = p.k;
  const int lo = static_cast<int>(level_offset(stage - 1, k));
  const int hi = static_cast<int>(volume_size(truncation, k));
  for (int v : x.support())
    if (v < lo || v >= hi)
      throw InvalidArgument("input must be supported in Lambda_[" + std::to_string(stage - 1) + "," +
                            std::to_string(truncation) + "]");

  auto V = level_transfer(stage - 1, p);
  if (stage == 1) V = multiply(LocalOperator::at(0, positive_sqrt(bc.omega0)), V);
  const auto y = multiply(multiply(adjoint(V), x), V);

  std::vector<int> keep;
  for (int v : y.support())
    if (v >= static_cast<int>(level_offset(stage, k))) keep.push_back(v);
  return partial_trace(y, keep);
}

Complex compose_quasi_conditional(int n, const LocalOperator& a, const ModelParams& p, const BoundaryCondition& bc) {
  if (n < 0) throw InvalidArgument("n must be >= 0");
  LocalOperator y = a;
  for (int stage = 1; stage <= n + 1; ++stage) y = quasi_conditional_expectation(stage, y, p, bc, n + 1);
  auto H = LocalOperator::identity(level_indices(n + 1, p.k));
  for (int v : level_indices(n + 1, p.k)) H = multiply(H, LocalOperator::at(v, bc.at(v)));
  return normalized_trace(multiply(H, y));
}

}  // namespace qmc
