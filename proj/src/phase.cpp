#include "qmc/phase.hpp"

#include <cmath>

#include "qmc/boundary.hpp"
#include "qmc/parallel.hpp"

namespace qmc {

double delta(double theta, double J) { return delta_of_theta<double>(theta, J); }

namespace {

double delta_prime(double theta, double J) {
  // d/dtheta [theta^J (theta^2 - 3)] - 2
  return J * std::pow(theta, J - 1) * (theta * theta - 3) + 2 * std::pow(theta, J + 1) - 2;
}

}  // namespace

double critical_theta(double J, double theta_max, double tol) {
  if (!(J >= 0)) throw InvalidArgument("J must be >= 0");
  if (!(theta_max > 1)) throw InvalidArgument("theta_max must exceed 1");
  double lo = 1.0, hi = theta_max;
  // Delta(1) = -4 for every J.
  if (!(delta(hi, J) > 0)) throw NoRoot("Delta has no sign change on (1, theta_max]");
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (delta(mid, J) > 0 ? hi : lo) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 50; ++i) {
    const double step = delta(x, J) / delta_prime(x, J);
    const double next = x - step;
    if (!(next > lo && next < hi)) break;
    x = next;
    if (std::fabs(step) <= tol * x) break;
  }
  return x;
}

std::string to_string(Region r) {
  switch (r) {
    case Region::Unique: return "Unique";
    case Region::Critical: return "Critical";
    case Region::Coexistence: return "Coexistence";
  }
  return "?";
}

Region region_of(double Delta, double band) {
  if (Delta > band) return Region::Coexistence;
  if (Delta < -band) return Region::Unique;
  return Region::Critical;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw InvalidArgument("grid count must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return v;
}

std::vector<PhasePoint> scan(const std::vector<double>& betas, const std::vector<double>& Js, const ScanOptions& opts) {
  std::vector<PhasePoint> out(betas.size() * Js.size());
  for_each_chunk(
      out.size(), resolve_threads(opts.threads),
      [&](std::size_t, std::uint64_t b, std::uint64_t e) {
        for (std::uint64_t i = b; i < e; ++i) {
          PhasePoint& pt = out[i];
          const ModelParams p{betas[i / Js.size()], Js[i % Js.size()], 2};
          p.validate();
          pt.beta = p.beta;
          pt.J = p.J;
          pt.theta = p.theta();
          pt.Delta = delta(pt.theta, pt.J);
          pt.region = region_of(pt.Delta);
          pt.solution_count = pt.region == Region::Coexistence ? 3 : 1;
          if (opts.cross_check && pt.theta > 1) {
            const auto res = solve_numeric(p, default_seeds(p));
            const int count = static_cast<int>(res.solutions.size());
            pt.mismatch = count != pt.solution_count;
            pt.solution_count = count;
          }
        }
      },
      1);
  return out;
}

}  // namespace qmc
