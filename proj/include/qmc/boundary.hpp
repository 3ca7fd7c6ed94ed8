#ifndef QMC_BOUNDARY_HPP
#define QMC_BOUNDARY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmc/finite_volume.hpp"
#include "qmc/model.hpp"

namespace qmc {

enum class SolutionTag { Symmetric, Plus, Minus, Numeric };

std::string to_string(SolutionTag tag);
SolutionTag solution_tag_from_string(const std::string& s);

/// A translation-invariant solution (omega0, h) of the boundary equations.
struct BoundarySolution {
  SolutionTag tag = SolutionTag::Symmetric;
  SiteOperator omega0 = site::identity();
  SiteOperator h = site::identity();
  /// h = xi0 1 + xi3 sigma (Plus), xi0 1 - xi3 sigma (Minus).
  double xi0 = 0.0;
  double xi3 = 0.0;
  /// h = alpha 1 (Symmetric).
  double alpha = 0.0;

  BoundaryCondition condition() const { return BoundaryCondition::uniform(omega0, h); }
  /// Tr(h) and Tr(sigma h).
  double trace_h() const;
  double trace_sigma_h() const;
};

/// h_alpha = (1/tau1) 1, omega0 = tau1 1. Exists for every theta >= 1.
BoundarySolution symmetric_solution(const ModelParams& p);

/// (Plus, Minus) when Delta(theta) > 0, otherwise nullopt.
std::optional<std::pair<BoundarySolution, BoundarySolution>> broken_solutions(const ModelParams& p);

/// Every closed-form solution at p: symmetric first, then Plus and Minus if present.
std::vector<BoundarySolution> closed_form_solutions(const ModelParams& p);

/// Solution selected by tag; throws NoBrokenPhase for Plus/Minus when Delta <= 0.
BoundarySolution closed_form_solution(const ModelParams& p, SolutionTag tag);

/// A starting point (t, s) = (Tr h, Tr sigma h) for the Newton iteration.
struct Seed {
  double t = 0.0;
  double s = 0.0;
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 200;
  double damping = 0.5;
  double dedup_radius = 1e-8;
  /// Minimum damping factor before a seed is declared stalled.
  double min_step = 1e-12;
};

struct SeedFailure {
  Seed seed;
  std::string reason;
  int iterations = 0;
};

struct NumericSolveResult {
  /// Distinct solutions with positive h, ordered by decreasing Tr(sigma h).
  std::vector<BoundarySolution> solutions;
  std::vector<SeedFailure> failures;
  /// Seeds that converged to the degenerate root t = s = 0 (h = 0).
  int degenerate = 0;
  /// Iterations used by each seed, in seed order.
  std::vector<int> iterations;
};

/// Damped Newton on t = tau1 t^2 + tau2 s^2, s = tau3 t s.
NumericSolveResult solve_numeric(const ModelParams& p, const std::vector<Seed>& seeds, const NewtonOptions& opts = {});

/// Deterministic seed lattice scaled by 1/tau1, covering both signs of s.
std::vector<Seed> default_seeds(const ModelParams& p, int per_axis = 7);

/// `count` seeds uniform in (0, hi]^2 from a fixed-seed generator.
std::vector<Seed> random_seeds(std::uint64_t rng_seed, int count, double hi = 2.0);

enum class Regime { Unique, Coexistence };
std::string to_string(Regime r);

/// Unique iff Delta(theta) <= 0.
Regime classify(const ModelParams& p);

}  // namespace qmc

#endif  // QMC_BOUNDARY_HPP
