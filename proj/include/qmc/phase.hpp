#ifndef QMC_PHASE_HPP
#define QMC_PHASE_HPP

#include <string>
#include <vector>

#include "qmc/model.hpp"

namespace qmc {

/// Delta(theta) = theta^J (theta^2 - 3) - 2 theta.
double delta(double theta, double J);

/// Root theta_c > 1 of Delta on (1, theta_max]; throws NoRoot without a sign change.
double critical_theta(double J, double theta_max = 100.0, double tol = 1e-12);

enum class Region { Unique, Critical, Coexistence };
std::string to_string(Region r);
Region region_of(double Delta, double band = kCriticalBand);

struct PhasePoint {
  double beta = 0.0;
  double J = 0.0;
  double theta = 0.0;
  double Delta = 0.0;
  Region region = Region::Unique;
  /// Closed-form count, or the Newton count when the cross-check is on.
  int solution_count = 0;
  /// Newton count disagrees with the closed-form classification.
  bool mismatch = false;
};

/// Inclusive lo:hi grid with `count` points (count = 1 gives lo).
std::vector<double> linspace(double lo, double hi, int count);

struct ScanOptions {
  bool cross_check = false;
  int threads = 0;
};

/// Row-major over beta (outer) and J (inner).
std::vector<PhasePoint> scan(const std::vector<double>& betas, const std::vector<double>& Js,
                             const ScanOptions& opts = {});

}  // namespace qmc

#endif  // QMC_PHASE_HPP
