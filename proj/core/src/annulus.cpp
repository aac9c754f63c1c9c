#include "ross/annulus.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ross/errors.hpp"

namespace ross {

namespace odeint = boost::numeric::odeint;

namespace {

// Pruefer angle for (J f')' + (mu + c H') J f = 0 with c = mode:
// f = rho sin(theta), (J/J_ref) f' = rho cos(theta). f'(r_in) = 0 gives
// theta(r_in) = pi/2; the n-th eigenvalue (n = 0, 1, ...) of the mode has
// theta(r_out) = pi/2 + n pi, and theta(r_out) increases with mu.
class PruferShooter {
 public:
  PruferShooter(const Space& space, double r_in, double r_out, int mode, double tol)
      : space_(space), r_in_(r_in), r_out_(r_out), mode_(mode), tol_(tol) {
    j_ref_ = density(space, 0.5 * (r_in + r_out));
  }

  double end_angle(double mu) const {
    using State1 = std::array<double, 1>;
    const auto rhs = [&](const State1& x, State1& dx, double r) {
      const double p = density(space_, r) / j_ref_;
      const double q = mu + (mode_ == 1 ? curvature_trace_deriv(space_, r) : 0.0);
      const double s = std::sin(x[0]);
      const double c = std::cos(x[0]);
      dx[0] = c * c / p + q * p * s * s;
    };
    State1 x{std::numbers::pi / 2.0};
    const double span = r_out_ - r_in_;
    odeint::integrate_adaptive(
        odeint::make_controlled(1e-2 * tol_, tol_, span / 16.0, odeint::runge_kutta_dopri5<State1>()),
        rhs, x, r_in_, r_out_, 1e-3 * span);
    return x[0];
  }

  // f with f(r_in) = 1, f'(r_in) = 0 sampled on `grid`.
  void profile(double mu, const std::vector<double>& grid, std::vector<double>& f,
               std::vector<double>& df) const {
    using State2 = std::array<double, 2>;
    const auto rhs = [&](const State2& x, State2& dx, double r) {
      const double q = mu + (mode_ == 1 ? curvature_trace_deriv(space_, r) : 0.0);
      dx[0] = x[1];
      dx[1] = -curvature_trace(space_, r) * x[1] - q * x[0];
    };
    State2 x{1.0, 0.0};
    f.assign(grid.size(), 0.0);
    df.assign(grid.size(), 0.0);
    std::size_t i = 0;
    const double span = r_out_ - r_in_;
    odeint::integrate_times(
        odeint::make_dense_output(1e-2 * tol_, tol_, span / 16.0, odeint::runge_kutta_dopri5<State2>()),
        rhs, x, grid.begin(), grid.end(), 1e-3 * span, [&](const State2& s, double) {
          f[i] = s[0];
          df[i] = s[1];
          ++i;
        });
  }

 private:
  Space space_;
  double r_in_;
  double r_out_;
  int mode_;
  double tol_;
  double j_ref_ = 1.0;
};

}  // namespace

std::vector<double> AnnulusModes::candidate_spectrum(std::size_t count) const {
  std::vector<double> out;
  for (const auto& mode : modes) {
    for (int j = 0; j < mode.multiplicity && out.size() < count; ++j) out.push_back(mode.eigenvalue);
    if (out.size() >= count) break;
  }
  return out;
}

AnnulusModes solve_annulus(const Space& space, double r_in, double r_out,
                           const std::vector<int>& modes, int count,
                           const AnnulusOptions& options) {
  if (!(r_in > 0.0 && r_out > r_in)) throw RangeError("annulus needs 0 < r_in < r_out");
  if (space.compact() && r_out > kQuarterPi * (1.0 + 1e-15)) {
    throw RangeError("radius constraint violated: annulus r_out exceeds pi/4 in " + space.to_string());
  }
  if (count < 1) throw std::invalid_argument("annulus eigenvalue count must be positive");
  const double tol = std::clamp(0.1 * options.tol, 1e-13, 1e-9);
  const int m = space.real_dim();
  const double span = r_out - r_in;

  std::vector<double> grid(options.grid_points);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = r_in + span * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
  }
  grid.back() = r_out;

  AnnulusModes result{space, r_in, r_out, {}};
  for (int mode : modes) {
    if (mode != 0 && mode != 1) throw std::invalid_argument("only angular modes 0 and 1 are supported");
    const PruferShooter shooter(space, r_in, r_out, mode, tol);
    // The zero mode of mode 0 is the constant function; skip it.
    const int first = mode == 0 ? 1 : 0;
    double lo = 0.0;
    for (int n = first; n < first + count; ++n) {
      const double target = std::numbers::pi / 2.0 + n * std::numbers::pi;
      const auto f = [&](double mu) { return shooter.end_angle(mu) - target; };
      double f_lo = f(lo);
      double hi = std::max(2.0 * lo, std::pow((n + 1) * std::numbers::pi / span, 2));
      double f_hi = f(hi);
      std::ostringstream trace;
      for (int i = 0; f_hi <= 0.0; ++i) {
        trace << " mu=" << hi << " theta-gap=" << f_hi << ";";
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = f(hi);
        if (i > 100) {
          throw ConvergenceError("solve_annulus: no bracket for mode " + std::to_string(mode) +
                                 " index " + std::to_string(n) + ";" + trace.str());
        }
      }
      if (f_lo > 0.0) {
        throw ConvergenceError("solve_annulus: Pruefer angle above target at lower bracket");
      }
      boost::uintmax_t iters = 200;
      const auto [a, b] = boost::math::tools::toms748_solve(
          f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iters);
      const double mu = 0.5 * (a + b);
      lo = mu * (1.0 + 1e-9);

      std::vector<double> values;
      std::vector<double> slopes;
      shooter.profile(mu, grid, values, slopes);
      double scale = 0.0;
      for (double s : slopes) scale = std::max(scale, std::abs(s));
      AnnulusMode entry;
      entry.mode = mode;
      entry.radial_index = n;
      entry.eigenvalue = mu;
      entry.multiplicity = mode == 0 ? 1 : m;
      entry.neumann_residual = scale > 0.0 ? std::abs(slopes.back()) / scale : 0.0;
      entry.profile = RadialProfile(grid, std::move(values), mode == 0 ? "f0" : "f1", std::move(slopes));
      result.modes.push_back(std::move(entry));
    }
  }

  auto& list = result.modes;
  std::sort(list.begin(), list.end(), [](const AnnulusMode& a, const AnnulusMode& b) {
    return a.eigenvalue != b.eigenvalue ? a.eigenvalue < b.eigenvalue : a.mode < b.mode;
  });
  // Entries within 1e-9 relative form a multiplet, ordered by mode index.
  int multiplet = 0;
  for (std::size_t begin = 0; begin < list.size();) {
    std::size_t end = begin + 1;
    while (end < list.size() &&
           std::abs(list[end].eigenvalue - list[end - 1].eigenvalue) <=
               1e-9 * std::max(list[end].eigenvalue, list[end - 1].eigenvalue)) {
      ++end;
    }
    std::stable_sort(list.begin() + static_cast<std::ptrdiff_t>(begin),
                     list.begin() + static_cast<std::ptrdiff_t>(end),
                     [](const AnnulusMode& a, const AnnulusMode& b) { return a.mode < b.mode; });
    for (std::size_t i = begin; i < end; ++i) list[i].multiplet = multiplet;
    ++multiplet;
    begin = end;
  }
  if (list.size() > static_cast<std::size_t>(count)) list.resize(static_cast<std::size_t>(count));
  return result;
}

}  // namespace ross
