#pragma once

// First nonzero Neumann eigenvalue of geodesic balls through the singular
// radial problem g'' + H g' + (mu + H') g = 0, g(0) = 0, g'(0) = 1,
// g'(R) = 0, plus the derived profiles used by the trial-function argument.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ross/geometry.hpp"
#include "ross/radial_profile.hpp"

namespace ross {

enum class SolverTag { shooting, rayleigh_fd };

std::string to_string(SolverTag tag);

struct BallEig {
  Space space;
  double radius = 0.0;
  double mu1 = 0.0;
  RadialProfile g;
  SolverTag solver = SolverTag::shooting;
  double tol = 0.0;
  std::size_t grid_size = 0;
};

struct ShootingOptions {
  double tol = 1e-10;              // in [1e-12, 1e-4]
  std::size_t grid_points = 2001;  // samples of g on [0, R]
};

/// mu * R^2 of the unit flat m-ball: first positive root of
/// x J_{m/2-1}(x) + (1 - m) J_{m/2}(x) = 0, squared.
double euclidean_neumann_constant(int m);

/// Frobenius coefficient c in g(r) = r + c r^3 + O(r^5) for given (space, mu).
double frobenius_c3(const Space& space, double mu);

/// Shooting with bracket scan + root polish on g'(R).
BallEig solve_ball(const Space& space, double R, const ShootingOptions& options = {});

/// Independent oracle: discretized Rayleigh quotient with phi(0) = 0 on a
/// uniform grid of N intervals, smallest eigenvalue by Sturm bisection.
BallEig solve_ball_rayleigh(const Space& space, double R, std::size_t intervals);

/// G(r) = g(r) for r < R and g(R) beyond, represented on [0, r_max].
/// r_max defaults to pi/2 - 1e-9 (compact) or R + 10 (noncompact).
class ExtendedProfile {
 public:
  ExtendedProfile() = default;
  ExtendedProfile(RadialProfile g, double radius, double r_max);

  double radius() const { return radius_; }
  double r_max() const { return r_max_; }
  const RadialProfile& inner() const { return g_; }

  double value(double r) const;
  double derivative(double r) const;

  /// Sampled on the ball grid plus `tail_points` equally spaced past R.
  RadialProfile sampled(std::size_t tail_points = 64) const;

 private:
  RadialProfile g_;
  double radius_ = 0.0;
  double r_max_ = 0.0;
  double g_end_ = 0.0;
};

ExtendedProfile extend_G(const BallEig& ball, std::optional<double> r_max = std::nullopt);

/// s(r) = g' - 2 cot(2r) g (compact) or g' - coth(r) g (noncompact) on the
/// interior grid points of (0, R).
struct SignFunction {
  RadialProfile s;
  double max_value = 0.0;
  double argmax = 0.0;
  double slope_scale = 0.0;  // max |g'| on the grid
  double at_radius = 0.0;    // s(R)
};

SignFunction sign_function(const BallEig& ball);

}  // namespace ross
