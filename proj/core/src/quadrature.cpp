#include "ross/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace ross {

namespace {

struct Rule {
  std::array<double, 3> bary;
  double weight;
};

// Dunavant degree-5 rule, weights sum to one.
const std::array<Rule, 7> kRule{{
    {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.225},
    {{0.059715871789770, 0.470142064105115, 0.470142064105115}, 0.132394152788506},
    {{0.470142064105115, 0.059715871789770, 0.470142064105115}, 0.132394152788506},
    {{0.470142064105115, 0.470142064105115, 0.059715871789770}, 0.132394152788506},
    {{0.797426985353087, 0.101286507323456, 0.101286507323456}, 0.125939180544827},
    {{0.101286507323456, 0.797426985353087, 0.101286507323456}, 0.125939180544827},
    {{0.101286507323456, 0.101286507323456, 0.797426985353087}, 0.125939180544827},
}};

double chart_area(Point a, Point b, Point c) {
  const Point u = b - a;
  const Point v = c - a;
  return 0.5 * std::abs(u.real() * v.imag() - u.imag() * v.real());
}

void emit(const ConformalModel& model, Point a, Point b, Point c, std::vector<QuadPoint>& out) {
  const double area = chart_area(a, b, c);
  for (const auto& rule : kRule) {
    const Point z = rule.bary[0] * a + rule.bary[1] * b + rule.bary[2] * c;
    const double lam = model.conformal_factor(z);
    out.push_back({z, area * rule.weight * lam * lam});
  }
}

void refine_triangle(const ConformalModel& model, const RefineSpec& spec, Point a, Point b, Point c, int depth,
                     std::vector<QuadPoint>& out) {
  const double ra = model.distance(spec.center, a);
  const double rb = model.distance(spec.center, b);
  const double rc = model.distance(spec.center, c);
  const double diam = std::max({model.distance(a, b), model.distance(b, c), model.distance(c, a)});
  const double lo = std::min({ra, rb, rc});
  const double hi = std::max({ra, rb, rc});
  const bool near_circle = lo - 0.5 * diam <= spec.radius && spec.radius <= hi + 0.5 * diam;
  const bool near_center = lo <= diam;
  const bool split = (near_circle && depth < spec.circle_depth) || (near_center && depth < spec.center_depth);
  if (!split) {
    emit(model, a, b, c, out);
    return;
  }
  const Point ab = 0.5 * (a + b);
  const Point bc = 0.5 * (b + c);
  const Point ca = 0.5 * (c + a);
  refine_triangle(model, spec, a, ab, ca, depth + 1, out);
  refine_triangle(model, spec, ab, b, bc, depth + 1, out);
  refine_triangle(model, spec, ca, bc, c, depth + 1, out);
  refine_triangle(model, spec, ab, bc, ca, depth + 1, out);
}

}  // namespace

std::vector<QuadPoint> mesh_quadrature(const ConformalModel& model, const Mesh& mesh,
                                       const std::optional<RefineSpec>& refine) {
  std::vector<QuadPoint> out;
  out.reserve(7 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const Point a = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Point b = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Point c = mesh.vertices[static_cast<std::size_t>(t[2])];
    if (refine) {
      refine_triangle(model, *refine, a, b, c, 0, out);
    } else {
      emit(model, a, b, c, out);
    }
  }
  return out;
}

double integrate(const std::vector<QuadPoint>& rule, const std::function<double(Point)>& f) {
  // Kahan summation.
  double sum = 0.0;
  double comp = 0.0;
  for (const auto& q : rule) {
    const double y = q.weight * f(q.z) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

double mesh_area(const ConformalModel& model, const Mesh& mesh) {
  return integrate(mesh_quadrature(model, mesh), [](Point) { return 1.0; });
}

double shell_integral(const Space& space, double r_in, double r_out, const std::function<double(double)>& f) {
  using boost::math::quadrature::gauss_kronrod;
  const double radial = gauss_kronrod<double, 61>::integrate(
      [&](double r) { return f(r) * density(space, r); }, r_in, r_out, 12, 1e-12);
  return unit_sphere_area(space.real_dim()) * radial;
}

double ball_integral(const Space& space, double R, const std::function<double(double)>& f) {
  return shell_integral(space, 0.0, R, f);
}

}  // namespace ross
