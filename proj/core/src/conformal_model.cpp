#include "ross/conformal_model.hpp"

#include <cmath>

#include "ross/errors.hpp"

namespace ross {

ConformalModel build_model(const Space& space) {
  if (space.real_dim() != 2) {
    throw UnsupportedSpaceError("conformal FEM models exist only for m = 2, got " + space.to_string());
  }
  return ConformalModel(space, space.field_dim() == 1 ? 1.0 : 2.0);
}

double ConformalModel::conformal_factor(Point z) const {
  const double rho2 = std::norm(z);
  if (spherical()) return (2.0 / a_) / (1.0 + rho2);
  if (rho2 >= 1.0) throw RangeError("point outside the hyperbolic unit disk");
  return (2.0 / a_) / (1.0 - rho2);
}

double ConformalModel::geodesic_radius(double rho) const {
  if (spherical()) return (2.0 / a_) * std::atan(rho);
  if (rho >= 1.0) throw RangeError("chart radius outside the hyperbolic unit disk");
  return (2.0 / a_) * std::atanh(rho);
}

double ConformalModel::chart_radius(double geodesic) const {
  if (spherical()) return std::tan(0.5 * a_ * geodesic);
  return std::tanh(0.5 * a_ * geodesic);
}

double ConformalModel::chart_limit() const {
  return spherical() ? chart_radius(kQuarterPi) : 1.0;
}

Point ConformalModel::to_origin(Point center, Point z) const {
  const double eps = spherical() ? 1.0 : -1.0;
  return (z - center) / (1.0 + eps * std::conj(center) * z);
}

Point ConformalModel::from_origin(Point center, Point w) const {
  const double eps = spherical() ? 1.0 : -1.0;
  return (w + center) / (1.0 - eps * std::conj(center) * w);
}

double ConformalModel::distance(Point a, Point b) const {
  return geodesic_radius(std::abs(to_origin(a, b)));
}

Point ConformalModel::exp_origin(Point v) const {
  const double r = std::abs(v);
  if (r == 0.0) return {0.0, 0.0};
  return v * (chart_radius(r) / r);
}

}  // namespace ross
