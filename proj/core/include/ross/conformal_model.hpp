#pragma once

// Conformal charts of the four two-dimensional models. Metric is
// lambda(z)^2 |dz|^2 with
//   hyperbolic, curvature -a^2: lambda = (2/a) / (1 - |z|^2), |z| < 1
//   spherical,  curvature  a^2: lambda = (2/a) / (1 + |z|^2)
// where a = 1 for k = 1 (S^2, H^2) and a = 2 for k = 2 (CP^1, CH^1).

#include <complex>

#include "ross/geometry.hpp"

namespace ross {

using Point = std::complex<double>;

class ConformalModel {
 public:
  const Space& space() const { return space_; }
  double curvature_scale() const { return a_; }
  bool spherical() const { return space_.compact(); }

  double conformal_factor(Point z) const;

  /// Geodesic distance from the chart origin to a point at chart radius rho.
  double geodesic_radius(double rho) const;
  double chart_radius(double geodesic) const;

  /// Largest chart radius of the admissible region: the pi/4 geodesic ball
  /// for compact spaces, the open unit disk otherwise.
  double chart_limit() const;

  /// Isometry sending `center` to the chart origin (a Moebius map with
  /// positive real derivative at `center`, so directions at the center are
  /// preserved).
  Point to_origin(Point center, Point z) const;
  Point from_origin(Point center, Point w) const;

  /// Geodesic distance between two chart points.
  double distance(Point a, Point b) const;

  /// Exponential map at the chart origin: a tangent vector (in geodesic
  /// normal coordinates) to its chart point.
  Point exp_origin(Point v) const;

 private:
  friend ConformalModel build_model(const Space& space);
  ConformalModel(const Space& space, double a) : space_(space), a_(a) {}

  Space space_;
  double a_;
};

/// Throws UnsupportedSpaceError unless m = 2.
ConformalModel build_model(const Space& space);

}  // namespace ross
