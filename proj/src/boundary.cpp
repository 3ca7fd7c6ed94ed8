#include "qmc/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qmc/errors.hpp"

namespace qmc {

std::string to_string(SolutionTag tag) {
  switch (tag) {
    case SolutionTag::Symmetric: return "symmetric";
    case SolutionTag::Plus: return "plus";
    case SolutionTag::Minus: return "minus";
    case SolutionTag::Numeric: return "numeric";
  }
  return "unknown";
}

SolutionTag solution_tag_from_string(const std::string& s) {
  if (s == "symmetric" || s == "alpha") return SolutionTag::Symmetric;
  if (s == "plus" || s == "phi1") return SolutionTag::Plus;
  if (s == "minus" || s == "phi2") return SolutionTag::Minus;
  if (s == "numeric") return SolutionTag::Numeric;
  throw InvalidArgument("unknown solution tag '" + s + "'");
}

std::string to_string(Regime r) { return r == Regime::Unique ? "unique" : "coexistence"; }

double BoundarySolution::trace_h() const { return normalized_trace(h).real(); }

double BoundarySolution::trace_sigma_h() const { return normalized_trace(SiteOperator(site::sigma() * h)).real(); }

namespace {

void require_order_two(const ModelParams& p) {
  p.validate();
  if (p.k != 2) throw InvalidArgument("closed-form boundary solutions are defined for k = 2 only");
}

BoundarySolution from_traces(double t, double s, SolutionTag tag) {
  BoundarySolution sol;
  sol.tag = tag;
  sol.h = site::diagonal(t + s, t - s);
  sol.omega0 = site::identity() * (1.0 / t);
  return sol;
}

}  // namespace

BoundarySolution symmetric_solution(const ModelParams& p) {
  require_order_two(p);
  const auto c = coefficients<long double>(p);
  const long double alpha = 1.0L / c.tau1;
  auto sol = from_traces(static_cast<double>(alpha), 0.0, SolutionTag::Symmetric);
  sol.omega0 = site::identity() * static_cast<double>(c.tau1);
  sol.alpha = static_cast<double>(alpha);
  sol.xi0 = sol.alpha;
  return sol;
}

std::optional<std::pair<BoundarySolution, BoundarySolution>> broken_solutions(const ModelParams& p) {
  require_order_two(p);
  const auto c = coefficients<long double>(p);
  if (!(c.Delta > static_cast<long double>(kCriticalBand))) return std::nullopt;
  const long double xi0 = 1.0L / c.tau3;
  const long double xi3 = std::sqrt(c.Delta / 4.0L) / (c.tau3 * std::sqrt(c.tau2));

  auto make = [&](SolutionTag tag, long double sign) {
    auto sol = from_traces(static_cast<double>(xi0), static_cast<double>(sign * xi3), tag);
    sol.omega0 = site::identity() * static_cast<double>(c.tau3);
    sol.xi0 = static_cast<double>(xi0);
    sol.xi3 = static_cast<double>(xi3);
    return sol;
  };
  return std::make_pair(make(SolutionTag::Plus, 1.0L), make(SolutionTag::Minus, -1.0L));
}

std::vector<BoundarySolution> closed_form_solutions(const ModelParams& p) {
  std::vector<BoundarySolution> out{symmetric_solution(p)};
  if (auto b = broken_solutions(p)) {
    out.push_back(b->first);
    out.push_back(b->second);
  }
  return out;
}

BoundarySolution closed_form_solution(const ModelParams& p, SolutionTag tag) {
  if (tag == SolutionTag::Symmetric) return symmetric_solution(p);
  if (tag == SolutionTag::Numeric) throw InvalidArgument("numeric solutions come from solve_numeric");
  auto b = broken_solutions(p);
  if (!b) throw NoBrokenPhase("Delta(theta) <= 0: the Plus/Minus solutions do not exist");
  return tag == SolutionTag::Plus ? b->first : b->second;
}

NumericSolveResult solve_numeric(const ModelParams& p, const std::vector<Seed>& seeds, const NewtonOptions& opts) {
  require_order_two(p);
  const auto c = coefficients<double>(p);
  const auto residual = [&](double t, double s) {
    return Eigen::Vector2d(c.tau1 * t * t + c.tau2 * s * s - t, c.tau3 * t * s - s);
  };

  NumericSolveResult result;
  std::vector<std::pair<Eigen::Vector2d, double>> roots;
  for (const Seed& seed : seeds) {
    Eigen::Vector2d x(seed.t, seed.s);
    Eigen::Vector2d F = residual(x(0), x(1));
    int it = 0;
    std::string failure;
    while (F.cwiseAbs().maxCoeff() > opts.tol) {
      if (it >= opts.max_iterations) {
        failure = "no convergence within " + std::to_string(opts.max_iterations) + " iterations";
        break;
      }
      Eigen::Matrix2d jac;
      jac << 2.0 * c.tau1 * x(0) - 1.0, 2.0 * c.tau2 * x(1), c.tau3 * x(1), c.tau3 * x(0) - 1.0;
      const double det = jac.determinant();
      if (!std::isfinite(det) || std::abs(det) < 1e-300) {
        failure = "singular Jacobian";
        break;
      }
      const Eigen::Vector2d step = jac.partialPivLu().solve(-F);
      double lambda = 1.0;
      Eigen::Vector2d trial = x + step;
      Eigen::Vector2d Ft = residual(trial(0), trial(1));
      while (!(Ft.norm() < F.norm()) && lambda > opts.min_step) {
        lambda *= opts.damping;
        trial = x + lambda * step;
        Ft = residual(trial(0), trial(1));
      }
      if (!(Ft.norm() < F.norm())) {
        failure = "line search stalled";
        break;
      }
      x = trial;
      F = Ft;
      ++it;
    }
    result.iterations.push_back(it);
    if (!failure.empty()) {
      result.failures.push_back({seed, failure, it});
      continue;
    }
    const double t = x(0), s = x(1);
    if (std::abs(t) <= opts.dedup_radius && std::abs(s) <= opts.dedup_radius) {
      ++result.degenerate;
      continue;
    }
    if (!(t > 0.0) || !(t + s > 0.0) || !(t - s > 0.0)) {
      result.failures.push_back({seed, "converged to a root with non-positive h", it});
      continue;
    }
    // At a singular Jacobian (Delta = 0) the roots merge and Newton only gets
    // within sqrt(tol) of them, so the dedup radius widens accordingly.
    Eigen::Matrix2d jac;
    jac << 2.0 * c.tau1 * t - 1.0, 2.0 * c.tau2 * s, c.tau3 * s, c.tau3 * t - 1.0;
    const Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2d>(jac).singularValues();
    const bool singular = sv(1) <= 1e-5 * std::max(1.0, sv(0));
    const double radius = singular ? 100.0 * std::sqrt(opts.tol) * std::max(1.0, t) : opts.dedup_radius;
    if (singular && std::abs(s) <= radius) x(1) = 0.0;
    bool known = false;
    for (auto& r : roots) {
      if ((r.first - x).cwiseAbs().maxCoeff() <= std::max(radius, r.second)) {
        known = true;
        r.second = std::max(r.second, radius);
        if (std::abs(x(1)) < std::abs(r.first(1))) r.first = x;
        break;
      }
    }
    if (!known) roots.emplace_back(x, radius);
  }

  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.first(1) > b.first(1); });
  for (const auto& [r, radius] : roots) {
    auto sol = from_traces(r(0), r(1), SolutionTag::Numeric);
    sol.xi0 = r(0);
    sol.xi3 = std::abs(r(1));
    if (std::abs(r(1)) <= opts.dedup_radius) sol.alpha = r(0);
    result.solutions.push_back(sol);
  }
  return result;
}

std::vector<Seed> default_seeds(const ModelParams& p, int per_axis) {
  require_order_two(p);
  const double scale = 1.0 / coefficients<double>(p).tau1;
  std::vector<Seed> seeds;
  const int m = std::max(per_axis, 2);
  for (int i = 0; i < m; ++i) {
    const double t = scale * (0.25 + 2.75 * i / (m - 1));
    for (int j = 0; j < m; ++j) {
      const double s = scale * (-2.0 + 4.0 * j / (m - 1));
      seeds.push_back({t, s});
    }
  }
  return seeds;
}

std::vector<Seed> random_seeds(std::uint64_t rng_seed, int count, double hi) {
  std::mt19937_64 rng(rng_seed);
  std::vector<Seed> seeds;
  seeds.reserve(static_cast<std::size_t>(count));
  // 53-bit uniform in [0,1) from the raw engine output; (0, hi] after reflection
  const auto uniform = [&] { return hi * (1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53); };
  for (int i = 0; i < count; ++i) {
    const double t = uniform();
    const double s = uniform();
    seeds.push_back({t, s});
  }
  return seeds;
}

Regime classify(const ModelParams& p) {
  require_order_two(p);
  return coefficients<long double>(p).Delta <= static_cast<long double>(kCriticalBand) ? Regime::Unique : Regime::Coexistence;
}

}  // namespace qmc
