#include "ross/radial_solver.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "ross/errors.hpp"

namespace ross {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;  // (g, g')

struct ShotOutcome {
  double g_end = 0.0;
  double dg_end = 0.0;
  bool turned = false;  // g' <= 0 somewhere in (0, R]
};

// Integrates g'' + H g' + (mu + H') g = 0 from the Frobenius start r0 to R.
class BallShooter {
 public:
  BallShooter(const Space& space, double R, double tol)
      : space_(space), R_(R), r0_(std::max(1e-6, 1e-6 * R)) {
    rtol_ = std::clamp(0.1 * tol, 1e-13, 1e-10);
    atol_ = 1e-2 * rtol_ * R;
  }

  double start_radius() const { return r0_; }

  State start_state(double mu) const {
    const double c = frobenius_c3(space_, mu);
    return {r0_ + c * r0_ * r0_ * r0_, 1.0 + 3.0 * c * r0_ * r0_};
  }

  // When `samples` is non-empty (ascending, within [r0, R]) the solution is
  // written there; otherwise integration stops as soon as g' <= 0.
  ShotOutcome run(double mu, const std::vector<double>& samples = {},
                  std::vector<double>* g = nullptr, std::vector<double>* dg = nullptr) const {
    const auto rhs = [&](const State& x, State& dx, double r) {
      const double H = curvature_trace(space_, r);
      const double dH = curvature_trace_deriv(space_, r);
      dx[0] = x[1];
      dx[1] = -H * x[1] - (mu + dH) * x[0];
    };
    auto stepper = odeint::make_dense_output(atol_, rtol_, R_ / 8.0, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(start_state(mu), r0_, r0_);
    const bool stop_early = samples.empty();
    std::size_t next = 0;
    ShotOutcome out;
    State x{};
    while (stepper.current_time() < R_) {
      const auto [t0, t1] = stepper.do_step(rhs);
      (void)t0;
      while (next < samples.size() && samples[next] <= std::min(t1, R_)) {
        stepper.calc_state(samples[next], x);
        (*g)[next] = x[0];
        (*dg)[next] = x[1];
        ++next;
      }
      if (t1 < R_ && stepper.current_state()[1] <= 0.0) {
        out.turned = true;
        if (stop_early) {
          out.g_end = stepper.current_state()[0];
          out.dg_end = stepper.current_state()[1];
          return out;
        }
      }
    }
    stepper.calc_state(R_, x);
    out.g_end = x[0];
    out.dg_end = x[1];
    if (x[1] <= 0.0) out.turned = true;
    return out;
  }

 private:
  Space space_;
  double R_;
  double r0_;
  double rtol_ = 1e-11;
  double atol_ = 1e-13;
};

}  // namespace

std::string to_string(SolverTag tag) {
  return tag == SolverTag::shooting ? "shooting" : "rayleigh_fd";
}

double euclidean_neumann_constant(int m) {
  const double nu = 0.5 * m;
  const auto f = [nu, m](double x) {
    return x * boost::math::cyl_bessel_j(nu - 1.0, x) + (1.0 - m) * boost::math::cyl_bessel_j(nu, x);
  };
  double lo = 1e-3;
  double hi = lo;
  double f_lo = f(lo);
  for (;;) {
    hi = lo + 0.05;
    const double f_hi = f(hi);
    if ((f_lo > 0) != (f_hi > 0)) break;
    lo = hi;
    f_lo = f_hi;
    if (lo > 100.0) throw ConvergenceError("no Bessel derivative root below 100");
  }
  boost::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double x = 0.5 * (a + b);
  return x * x;
}

double frobenius_c3(const Space& space, double mu) {
  // H = (m-1)/r + sigma*a*r + O(r^3), H' = -(m-1)/r^2 + sigma*a; matching the
  // r^1 coefficient of the ODE for g = r + c r^3 gives c (2m + 4) = -(mu + 2 sigma a).
  const int m = space.real_dim();
  const int k = space.field_dim();
  const double a = (m - 1) / 3.0 + (k - 1);
  const double sigma = space.compact() ? -1.0 : 1.0;
  return -(mu + 2.0 * sigma * a) / (2.0 * (m + 2));
}

BallEig solve_ball(const Space& space, double R, const ShootingOptions& options) {
  if (!(R > 0.0) || !std::isfinite(R)) throw RangeError("ball radius must be positive");
  if (space.compact() && R > kQuarterPi * (1.0 + 1e-15)) {
    std::ostringstream os;
    os.precision(17);
    os << "radius constraint violated: R=" << R << " exceeds pi/4 in " << space.to_string();
    throw RangeError(os.str());
  }
  if (!(options.tol >= 1e-12 && options.tol <= 1e-4)) {
    throw std::invalid_argument("shooting tolerance must lie in [1e-12, 1e-4]");
  }
  if (options.grid_points < 3) throw std::invalid_argument("need at least 3 grid points");

  const BallShooter shooter(space, R, options.tol);
  std::ostringstream trace;
  trace.precision(10);
  const auto turned = [&](double mu) {
    const auto out = shooter.run(mu);
    trace << " mu=" << mu << (out.turned ? " turned" : " monotone") << ";";
    return out.turned;
  };
  const auto fail = [&](const std::string& what) {
    throw ConvergenceError("solve_ball(" + space.to_string() + "): " + what + "; scan:" + trace.str());
  };

  // Bracket scan from the flat estimate: lo keeps g' > 0 on (0, R], hi does not.
  const double estimate = euclidean_neumann_constant(space.real_dim()) / (R * R);
  double lo = 0.25 * estimate;
  for (int i = 0; turned(lo); ++i) {
    lo *= 0.5;
    if (i > 60) fail("no monotone lower bracket");
  }
  double hi = 1.5 * lo;
  for (int i = 0; !turned(hi); ++i) {
    lo = hi;
    hi *= 1.5;
    if (i > 200) fail("no upper bracket");
  }
  const auto dg_end = [&](double mu) {
    const std::vector<double> sample{R};
    std::vector<double> gv(1), dgv(1);
    shooter.run(mu, sample, &gv, &dgv);
    return dgv[0];
  };
  // hi may have turned and recovered (past a higher radial mode); tighten
  // until g'(R) changes sign across [lo, hi].
  double f_hi = dg_end(hi);
  for (int i = 0; !(f_hi < 0.0); ++i) {
    if (i > 200) fail("bracket did not tighten");
    const double mid = 0.5 * (lo + hi);
    if (turned(mid)) hi = mid; else lo = mid;
    f_hi = dg_end(hi);
  }
  const double f_lo = dg_end(lo);
  if (!(f_lo > 0.0 && f_hi < 0.0)) fail("g'(R) does not change sign across the bracket");
  boost::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      dg_end, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(50), iters);
  const double mu = 0.5 * (a + b);

  // Sample g on a uniform grid; points inside (0, r0) use the Frobenius series.
  const std::size_t n = options.grid_points;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = R * static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = R;
  std::vector<double> g(n, 0.0);
  std::vector<double> dg(n, 1.0);
  const double r0 = shooter.start_radius();
  const double c3 = frobenius_c3(space, mu);
  std::vector<double> samples;
  std::size_t first = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (grid[i] < r0) {
      g[i] = grid[i] + c3 * grid[i] * grid[i] * grid[i];
      dg[i] = 1.0 + 3.0 * c3 * grid[i] * grid[i];
      first = i + 1;
    }
  }
  samples.assign(grid.begin() + static_cast<std::ptrdiff_t>(first), grid.end());
  std::vector<double> gs(samples.size());
  std::vector<double> dgs(samples.size());
  shooter.run(mu, samples, &gs, &dgs);
  std::copy(gs.begin(), gs.end(), g.begin() + static_cast<std::ptrdiff_t>(first));
  std::copy(dgs.begin(), dgs.end(), dg.begin() + static_cast<std::ptrdiff_t>(first));

  double max_slope = 0.0;
  for (double d : dg) max_slope = std::max(max_slope, std::abs(d));
  if (!(std::abs(dg.back()) < options.tol * max_slope)) {
    std::ostringstream os;
    os.precision(6);
    os << "terminal slope |g'(R)|=" << std::abs(dg.back()) << " above tol*max|g'|";
    fail(os.str());
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(g[i] > 0.0)) fail("g not positive on (0, R]");
    if (i + 1 < n && !(dg[i] > 0.0)) fail("g' not positive on [0, R)");
  }
  dg.back() = 0.0;  // the Neumann condition holds to tol; store it exactly

  BallEig ball{space, R, mu, RadialProfile(std::move(grid), std::move(g), "g", std::move(dg)),
               SolverTag::shooting, options.tol, n};
  return ball;
}

ExtendedProfile::ExtendedProfile(RadialProfile g, double radius, double r_max)
    : g_(std::move(g)), radius_(radius), r_max_(r_max) {
  if (!(r_max_ >= radius_)) throw std::invalid_argument("r_max must be >= R");
  g_end_ = g_.values().back();
}

double ExtendedProfile::value(double r) const {
  if (r < 0.0 || r > r_max_) throw RangeError("G evaluated outside [0, r_max]");
  return r < radius_ ? g_(r) : g_end_;
}

double ExtendedProfile::derivative(double r) const {
  if (r < 0.0 || r > r_max_) throw RangeError("G' evaluated outside [0, r_max]");
  return r < radius_ ? g_.derivative(r) : 0.0;
}

RadialProfile ExtendedProfile::sampled(std::size_t tail_points) const {
  std::vector<double> grid = g_.grid();
  std::vector<double> values = g_.values();
  std::vector<double> slopes = g_.slopes();
  slopes.back() = 0.0;
  if (r_max_ > radius_) {
    for (std::size_t i = 1; i <= tail_points; ++i) {
      grid.push_back(radius_ + (r_max_ - radius_) * static_cast<double>(i) / static_cast<double>(tail_points));
      values.push_back(g_end_);
      slopes.push_back(0.0);
    }
  }
  return RadialProfile(std::move(grid), std::move(values), "G", std::move(slopes));
}

ExtendedProfile extend_G(const BallEig& ball, std::optional<double> r_max) {
  const double limit = r_max.value_or(ball.space.compact() ? std::numbers::pi / 2.0 - 1e-9
                                                            : ball.radius + 10.0);
  return ExtendedProfile(ball.g, ball.radius, limit);
}

SignFunction sign_function(const BallEig& ball) {
  const auto& grid = ball.g.grid();
  const auto& g = ball.g.values();
  const auto& dg = ball.g.slopes();
  SignFunction out;
  std::vector<double> r;
  std::vector<double> s;
  out.max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.slope_scale = std::max(out.slope_scale, std::abs(dg[i]));
    if (grid[i] <= 0.0 || i + 1 == grid.size()) continue;
    const double x = grid[i];
    const double weight = ball.space.compact() ? 2.0 / std::tan(2.0 * x) : 1.0 / std::tanh(x);
    const double value = dg[i] - weight * g[i];
    r.push_back(x);
    s.push_back(value);
    if (value > out.max_value) {
      out.max_value = value;
      out.argmax = x;
    }
  }
  const double R = ball.radius;
  const double weight = ball.space.compact() ? 2.0 / std::tan(2.0 * R) : 1.0 / std::tanh(R);
  out.at_radius = -weight * g.back();
  out.s = RadialProfile(std::move(r), std::move(s), "s");
  return out;
}

}  // namespace ross
