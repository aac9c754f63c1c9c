// Finite-difference discretization of the radial Rayleigh quotient
//   Q(phi) = int (phi'^2 - H' phi^2) J / int phi^2 J,  phi(0) = 0,
// kept independent of the shooting path: first differences for phi' with J at
// midpoints, trapezoid (lumped) weights for the potential and mass terms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "ross/errors.hpp"
#include "ross/radial_solver.hpp"

namespace ross {

namespace {

// Symmetric tridiagonal matrix: diag[0..n), off[i] couples i and i+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

// Number of eigenvalues strictly below x (Sturm count via LDL^T pivots).
std::size_t sturm_count(const Tridiagonal& t, double x) {
  std::size_t count = 0;
  double d = 1.0;
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
    d = t.diag[i] - x - (i == 0 ? 0.0 : b2 / d);
    if (d == 0.0) d = -tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

double smallest_eigenvalue(const Tridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const std::size_t n = t.diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::abs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(t.off[i]) : 0.0);
    lo = std::min(lo, t.diag[i] - radius);
    hi = std::max(hi, t.diag[i] + radius);
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sturm_count(t, mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Inverse iteration at a shift just below `lambda`, Thomas algorithm.
std::vector<double> eigenvector(const Tridiagonal& t, double lambda) {
  const std::size_t n = t.diag.size();
  const double shift = lambda - 1e-10 * std::max(1.0, std::abs(lambda));
  std::vector<double> y(n, 1.0);
  std::vector<double> c(n);
  std::vector<double> d(n);
  for (int sweep = 0; sweep < 3; ++sweep) {
    // Forward elimination of (T - shift I) x = y.
    double denom = t.diag[0] - shift;
    c[0] = n > 1 ? t.off[0] / denom : 0.0;
    d[0] = y[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = t.diag[i] - shift - t.off[i - 1] * c[i - 1];
      c[i] = i + 1 < n ? t.off[i] / denom : 0.0;
      d[i] = (y[i] - t.off[i - 1] * d[i - 1]) / denom;
    }
    y[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) y[i] = d[i] - c[i] * y[i + 1];
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : y) v /= norm;
  }
  return y;
}

}  // namespace

BallEig solve_ball_rayleigh(const Space& space, double R, std::size_t intervals) {
  if (intervals < 100) {
    throw std::invalid_argument("Rayleigh discretization needs N >= 100 intervals, got " +
                                std::to_string(intervals));
  }
  if (!(R > 0.0) || (space.compact() && R > kQuarterPi * (1.0 + 1e-15))) {
    std::ostringstream os;
    os.precision(17);
    os << "radius constraint violated: R=" << R << " in " << space.to_string();
    throw RangeError(os.str());
  }
  const std::size_t n = intervals;  // unknowns phi_1 .. phi_N
  const double h = R / static_cast<double>(n);
  const auto node = [&](std::size_t i) { return i == n ? R : h * static_cast<double>(i); };

  // A phi = mu B phi, B = diag(w_i J(r_i)) lumped.
  std::vector<double> a_diag(n, 0.0);
  std::vector<double> a_off(n - 1, 0.0);
  std::vector<double> mass(n, 0.0);
  for (std::size_t e = 1; e <= n; ++e) {
    const double mid = 0.5 * (node(e - 1) + node(e));
    const double k = density(space, mid) / h;
    // element e joins unknowns e-1 (dropped when e == 1) and e
    a_diag[e - 1] += k;
    if (e >= 2) {
      a_diag[e - 2] += k;
      a_off[e - 2] -= k;
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = i == n ? 0.5 * h : h;
    const double r = node(i);
    const double J = density(space, r);
    a_diag[i - 1] -= w * curvature_trace_deriv(space, r) * J;
    mass[i - 1] = w * J;
  }

  Tridiagonal t;
  t.diag.resize(n);
  t.off.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = a_diag[i] / mass[i];
  for (std::size_t i = 0; i + 1 < n; ++i) t.off[i] = a_off[i] / std::sqrt(mass[i] * mass[i + 1]);

  const double mu = smallest_eigenvalue(t);
  std::vector<double> y = eigenvector(t, mu);

  std::vector<double> grid(n + 1);
  std::vector<double> phi(n + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = node(i);
  for (std::size_t i = 1; i <= n; ++i) phi[i] = y[i - 1] / std::sqrt(mass[i - 1]);
  const double scale = h / phi[1];  // g'(0) = 1
  for (double& v : phi) v *= scale;

  return BallEig{space, R, mu, RadialProfile(std::move(grid), std::move(phi), "g"),
                 SolverTag::rayleigh_fd, 0.0, n + 1};
}

}  // namespace ross
