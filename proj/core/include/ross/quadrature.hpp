#pragma once

// Curved-area quadrature on chart triangulations and radial integrals over
// geodesic balls.

#include <functional>
#include <optional>
#include <vector>

#include "ross/conformal_model.hpp"
#include "ross/mesh.hpp"

namespace ross {

struct QuadPoint {
  Point z;
  double weight;  // metric area weight, lambda^2 included
};

// Triangles that meet the geodesic circle of `radius` about `center`, or lie
// near `center` itself, are split recursively: integrands built from G(r_o)
// have a curvature jump at r_o = R and directions are singular at o.
struct RefineSpec {
  Point center{0.0, 0.0};
  double radius = 0.0;
  int circle_depth = 7;
  int center_depth = 6;
};

/// Seven-point degree-5 rule on every (possibly subdivided) triangle.
std::vector<QuadPoint> mesh_quadrature(const ConformalModel& model, const Mesh& mesh,
                                       const std::optional<RefineSpec>& refine = std::nullopt);

double integrate(const std::vector<QuadPoint>& rule, const std::function<double(Point)>& f);

/// Metric area of the mesh polygon.
double mesh_area(const ConformalModel& model, const Mesh& mesh);

/// Integral of a radial function over the geodesic ball B_R:
/// |S^{m-1}| * int_0^R f(r) J(r) dr, adaptive Gauss-Kronrod.
double ball_integral(const Space& space, double R, const std::function<double(double)>& f);

/// The same over the annulus r_in < r < r_out.
double shell_integral(const Space& space, double r_in, double r_out, const std::function<double(double)>& f);

}  // namespace ross
