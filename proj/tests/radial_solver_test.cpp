#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "ross/annulus.hpp"
#include "ross/errors.hpp"
#include "ross/geometry.hpp"
#include "ross/radial_profile.hpp"
#include "ross/radial_solver.hpp"

using ross::Space;

namespace {

constexpr double kPi = std::numbers::pi;

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  const bool s_lo = std::signbit(f(lo));
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::signbit(f(mid)) == s_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double first_sign_change(const std::function<double(double)>& f, double a, double b, int scan) {
  double x0 = a;
  double f0 = f(a);
  for (int i = 1; i <= scan; ++i) {
    const double x1 = a + (b - a) * i / scan;
    const double f1 = f(x1);
    if (std::signbit(f0) != std::signbit(f1)) return bisect(f, x0, x1);
    x0 = x1;
    f0 = f1;
  }
  return std::nan("");
}

}  // namespace

TEST(EuclideanConstant, MatchesBesselDerivativeZeros) {
  // m = 2: first zero of J_1'. m = 3: first zero of j_1'.
  const double x2 = first_sign_change(
      [](double x) { return std::cyl_bessel_j(0.0, x) - std::cyl_bessel_j(2.0, x); }, 0.5, 4.0, 400);
  EXPECT_NEAR(ross::euclidean_neumann_constant(2), x2 * x2, 1e-9);
  const double x3 = first_sign_change(
      [](double x) { return std::sph_bessel(0, x) - 2.0 * std::sph_bessel(1, x) / x; }, 0.5, 4.0, 400);
  EXPECT_NEAR(ross::euclidean_neumann_constant(3), x3 * x3, 1e-9);
}

TEST(SolveBall, SmallHyperbolicDiskApproachesFlatDisk) {
  const Space h2 = Space::make(1, 2, false);
  const double R = 0.05;
  const auto ball = ross::solve_ball(h2, R);
  EXPECT_NEAR(ball.mu1 * R * R, 3.390, 0.01);
  const auto fd = ross::solve_ball_rayleigh(h2, R, 4000);
  EXPECT_NEAR(fd.mu1 / ball.mu1, 1.0, 1e-5);
}

TEST(SolveBall, QuarterPiBallsMeetLowerBound) {
  const Space cp2 = Space::make(2, 2, true);
  EXPECT_GE(ross::solve_ball(cp2, ross::kQuarterPi).mu1, 12.0 - 1e-8);
  // At R = pi/4 the eigenfunction is sin r cos r with mu = 2(m + k).
  for (const Space& s : {Space::make(2, 1, true), Space::make(2, 2, true), Space::make(4, 1, true)}) {
    const auto ball = ross::solve_ball(s, ross::kQuarterPi);
    EXPECT_NEAR(ball.mu1, 2.0 * (s.real_dim() + s.field_dim()), 1e-7) << s.to_string();
    for (double r : {0.1, 0.4, 0.7}) EXPECT_NEAR(ball.g(r), std::sin(r) * std::cos(r), 1e-7);
  }
}

TEST(SolveBall, ProfileContract) {
  for (const Space& s : {Space::make(1, 3, false), Space::make(2, 2, true), Space::make(4, 2, false)}) {
    const double R = s.compact() ? 0.6 : 1.3;
    const auto ball = ross::solve_ball(s, R, {1e-10, 2001});
    EXPECT_EQ(ball.solver, ross::SolverTag::shooting);
    EXPECT_EQ(ball.g.size(), 2001u);
    EXPECT_EQ(ball.g.values().front(), 0.0);
    EXPECT_NEAR(ball.g.derivative(ball.g.front_radius()), 1.0, 1e-6);
    double max_slope = 0.0;
    for (double r : ball.g.grid()) max_slope = std::max(max_slope, std::abs(ball.g.derivative(r)));
    EXPECT_LT(std::abs(ball.g.derivative(R)), 1e-10 * max_slope * 10.0);
    const auto& grid = ball.g.grid();
    for (std::size_t i = 1; i < grid.size(); ++i) ASSERT_GT(ball.g.values()[i], 0.0);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) ASSERT_GT(ball.g.derivative(grid[i]), 0.0);
  }
}

TEST(SolveBall, EigenvalueDecreasesWithRadius) {
  for (const Space& s : {Space::make(1, 2, false), Space::make(2, 1, true), Space::make(4, 2, false)}) {
    double previous = std::numeric_limits<double>::infinity();
    const double top = s.compact() ? ross::kQuarterPi : 3.0;
    for (int i = 1; i <= 12; ++i) {
      const double mu = ross::solve_ball(s, top * i / 12.0).mu1;
      EXPECT_LT(mu, previous) << s.to_string();
      previous = mu;
    }
  }
}

TEST(SolveBall, RejectsBadInput) {
  EXPECT_THROW(ross::solve_ball(Space::make(2, 2, true), 0.9), ross::RangeError);
  EXPECT_ANY_THROW(ross::solve_ball(Space::make(1, 2, false), 1.0, {1e-3 * 10, 2001}));
  EXPECT_ANY_THROW(ross::solve_ball(Space::make(1, 2, false), 1.0, {1e-14, 2001}));
  EXPECT_ANY_THROW(ross::solve_ball(Space::make(1, 2, false), -1.0));
}

TEST(RayleighOracle, ConvergesQuadraticallyToShooting) {
  const Space h3 = Space::make(1, 3, false);
  const double R = 1.0;
  const double exact = ross::solve_ball(h3, R, {1e-12, 2001}).mu1;
  std::vector<double> err;
  for (std::size_t n : {500u, 1000u, 2000u}) {
    const double mu = ross::solve_ball_rayleigh(h3, R, n).mu1;
    err.push_back(std::abs(mu - exact));
    EXPECT_LE(err.back() / exact, 5.0 * (R / n) * (R / n) * 100.0);
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.2);
  EXPECT_NEAR(std::log2(err[1] / err[2]), 2.0, 0.2);
}

TEST(RayleighOracle, AgreesAtQuarterPi) {
  const Space cp1 = Space::make(2, 1, true);
  const double shoot = ross::solve_ball(cp1, ross::kQuarterPi, {1e-10, 2001}).mu1;
  const auto fd = ross::solve_ball_rayleigh(cp1, ross::kQuarterPi, 2000);
  EXPECT_EQ(fd.solver, ross::SolverTag::rayleigh_fd);
  EXPECT_LT(std::abs(fd.mu1 - shoot) / shoot, 1e-5);
}

TEST(RayleighOracle, EigenvectorHasNoInteriorSignChange) {
  const auto fd = ross::solve_ball_rayleigh(Space::make(2, 2, false), 1.2, 800);
  const auto& v = fd.g.values();
  for (std::size_t i = 1; i < v.size(); ++i) ASSERT_GT(v[i], 0.0);
}

TEST(RayleighOracle, RejectsCoarseGrid) {
  EXPECT_ANY_THROW(ross::solve_ball_rayleigh(Space::make(1, 2, false), 1.0, 50));
}

TEST(ExtendedProfile, ConstantBeyondRadius) {
  const auto ball = ross::solve_ball(Space::make(1, 2, false), 0.8);
  const auto G = ross::extend_G(ball);
  const double gR = ball.g(0.8);
  EXPECT_DOUBLE_EQ(G.value(0.8 + 1.0), gR);
  EXPECT_NEAR(G.value(0.8 - 1e-9), gR, 1e-8);
  EXPECT_EQ(G.value(0.0), 0.0);
  EXPECT_EQ(G.derivative(1.5), 0.0);
  const auto sampled = G.sampled();
  for (std::size_t i = 1; i < sampled.size(); ++i) ASSERT_GE(sampled.values()[i], sampled.values()[i - 1]);
}

TEST(ExtendedProfile, CompactReachesCutLocus) {
  const auto ball = ross::solve_ball(Space::make(2, 1, true), 0.5);
  const auto G = ross::extend_G(ball);
  EXPECT_GT(G.r_max(), 1.57);
  EXPECT_DOUBLE_EQ(G.value(1.5), ball.g(0.5));
}

TEST(SignFunction, EndpointsAndSign) {
  const Space cp2 = Space::make(2, 2, true);
  const double R = 0.6;
  const auto ball = ross::solve_ball(cp2, R);
  const auto s = ross::sign_function(ball);
  EXPECT_NEAR(s.at_radius, -2.0 / std::tan(2.0 * R) * ball.g(R), 1e-8);
  EXPECT_LT(s.at_radius, 0.0);
  EXPECT_LE(s.max_value, 1e-10 * s.slope_scale);
  EXPECT_NEAR(s.s.values().front(), 0.0, 1e-3);

  const auto h = ross::sign_function(ross::solve_ball(Space::make(1, 3, false), 2.0));
  EXPECT_LE(h.max_value, 1e-8 * h.slope_scale);
  EXPECT_NEAR(h.s.values().front(), 0.0, 1e-3);
}

TEST(RadialProfile, InterpolationAndCsv) {
  std::vector<double> r, v;
  for (int i = 0; i <= 200; ++i) {
    r.push_back(i / 100.0);
    v.push_back(std::sin(r.back()));
  }
  const ross::RadialProfile p(r, v, "sin");
  EXPECT_EQ(p(0.37), v[37]);
  EXPECT_EQ(p(1.0), std::sin(1.0));
  EXPECT_NEAR(p(0.375), std::sin(0.375), 1e-8);
  EXPECT_NEAR(p.derivative(0.375), std::cos(0.375), 1e-5);
  EXPECT_THROW(p(2.5), ross::RangeError);

  std::stringstream ss;
  ss << "# comment line\n";
  p.write_csv(ss);
  const auto back = ross::RadialProfile::read_csv(ss, "sin");
  ASSERT_EQ(back.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(back.grid()[i], p.grid()[i]);
    EXPECT_EQ(back.values()[i], p.values()[i]);
  }
}

TEST(Annulus, ThinHoleRecoversBallEigenvalue) {
  const Space h3 = Space::make(1, 3, false);
  const double r_out = 1.0;
  const auto modes = ross::solve_annulus(h3, r_out / 100.0, r_out, {1}, 1);
  ASSERT_FALSE(modes.modes.empty());
  const double ball = ross::solve_ball(h3, r_out).mu1;
  EXPECT_NEAR(modes.modes.front().eigenvalue / ball, 1.0, 0.01);
}

TEST(Annulus, OrderedPositiveAndNeumann) {
  const auto modes = ross::solve_annulus(Space::make(1, 3, false), 0.5, 1.5, {0, 1}, 3);
  ASSERT_GE(modes.modes.size(), 2u);
  for (std::size_t i = 0; i < modes.modes.size(); ++i) {
    EXPECT_GT(modes.modes[i].eigenvalue, 0.0);
    EXPECT_LT(modes.modes[i].neumann_residual, 1e-6);
    if (i > 0) {
      EXPECT_GE(modes.modes[i].eigenvalue, modes.modes[i - 1].eigenvalue);
    }
  }
  // Mode 1 counts m times in the candidate spectrum.
  const auto spectrum = modes.candidate_spectrum(6);
  ASSERT_EQ(spectrum.size(), 6u);
  for (std::size_t i = 1; i < spectrum.size(); ++i) EXPECT_GE(spectrum[i], spectrum[i - 1]);
}

TEST(Annulus, ModeZeroMatchesSubstitutionOracle) {
  // On H^3, f = u / sinh r turns f'' + 2 coth r f' + mu f = 0 into
  // u'' + (mu - 1) u = 0; Neumann for f is u' = coth(r) u at both ends.
  const double a = 0.5, b = 1.5, L = b - a;
  const auto mismatch = [&](double kappa) {
    const double phi = std::atan(kappa * std::tanh(a));
    const double t = kappa * L + phi;
    return (kappa * std::cos(t) - std::sin(t) / std::tanh(b)) / kappa;
  };
  const double kappa = first_sign_change(mismatch, 1e-3, 10.0, 2000);
  const auto modes = ross::solve_annulus(Space::make(1, 3, false), a, b, {0}, 1);
  ASSERT_FALSE(modes.modes.empty());
  EXPECT_NEAR(modes.modes.front().eigenvalue, kappa * kappa + 1.0, 1e-7);
}

TEST(Annulus, CompactOuterRadiusLimited) {
  EXPECT_THROW(ross::solve_annulus(Space::make(2, 1, true), 0.2, 1.0, {0, 1}, 2), ross::RangeError);
}
