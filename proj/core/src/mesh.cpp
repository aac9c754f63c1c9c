#include "ross/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "ross/errors.hpp"

namespace ross {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinAngleDeg = 15.0;

Point polar(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }

Point shape_to_chart(const ConformalModel& model, Point shape, double angle, Point offset, double rotation) {
  const Point v = (shape * std::polar(1.0, angle) + offset) * std::polar(1.0, rotation);
  return model.exp_origin(v);
}

double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }

double signed_area(const std::vector<Point>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * s;
}

bool inside_polygon(const std::vector<Point>& poly, Point p) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point a = poly[i];
    const Point b = poly[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (p.real() < x) in = !in;
    }
  }
  return in;
}

double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

bool segments_cross(Point a, Point b, Point c, Point d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

void check_simple(const std::vector<Point>& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
        throw GeometryError("boundary curve self-intersects near samples " + std::to_string(i) + " and " +
                            std::to_string(j));
      }
    }
  }
}

void check_admissible(const ConformalModel& model, const Mesh& mesh) {
  const double limit = model.chart_limit();
  for (const auto& z : mesh.vertices) {
    const double rho = std::abs(z);
    if (model.spherical() ? rho > limit * (1.0 + 1e-12) : rho >= 1.0) {
      std::ostringstream os;
      os.precision(17);
      os << "radius constraint violated: vertex at geodesic radius "
         << (model.spherical() ? model.geodesic_radius(rho) : rho) << " outside the admissible region of "
         << model.space().to_string();
      throw RangeError(os.str());
    }
  }
}

double triangle_min_angle(Point a, Point b, Point c) {
  const auto angle = [](Point p, Point q, Point r) {
    return std::abs(std::arg((q - p) / (r - p)));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)}) * 180.0 / std::numbers::pi;
}

Mesh ring_mesh(const ConformalModel& model, const GeodesicDisk& disk, int rings) {
  const double rho = model.chart_radius(disk.radius);
  Mesh mesh;
  mesh.vertices.push_back(model.from_origin(disk.center, {0.0, 0.0}));
  std::vector<int> start(static_cast<std::size_t>(rings) + 1, 0);
  for (int j = 1; j <= rings; ++j) {
    start[static_cast<std::size_t>(j)] = static_cast<int>(mesh.vertices.size());
    const double r = rho * j / rings;
    for (int i = 0; i < 6 * j; ++i) {
      mesh.vertices.push_back(model.from_origin(disk.center, polar(r, disk.phase + kTwoPi * i / (6 * j))));
    }
  }
  for (int i = 0; i < 6; ++i) mesh.triangles.push_back({0, 1 + i, 1 + (i + 1) % 6});
  for (int j = 2; j <= rings; ++j) {
    const int n0 = 6 * (j - 1);
    const int n1 = 6 * j;
    const int s0 = start[static_cast<std::size_t>(j - 1)];
    const int s1 = start[static_cast<std::size_t>(j)];
    int i0 = 0;
    int i1 = 0;
    while (i0 < n0 || i1 < n1) {
      // advance along whichever ring has the next vertex at the smaller angle
      const bool outer = i0 == n0 || (i1 < n1 && static_cast<long>(i1 + 1) * n0 <= static_cast<long>(i0 + 1) * n1);
      if (outer) {
        mesh.triangles.push_back({s0 + i0 % n0, s1 + i1, s1 + (i1 + 1) % n1});
        ++i1;
      } else {
        mesh.triangles.push_back({s0 + i0, s1 + i1 % n1, s0 + (i0 + 1) % n0});
        ++i0;
      }
    }
  }
  const int outer_start = start[static_cast<std::size_t>(rings)];
  for (int i = 0; i < 6 * rings; ++i) mesh.boundary.push_back(outer_start + i);
  mesh.boundary.push_back(outer_start);
  return mesh;
}

Mesh mesh_disk(const ConformalModel& model, const GeodesicDisk& disk, double target_h) {
  if (!(disk.radius > 0.0)) throw GeometryError("geodesic disk radius must be positive");
  const double rho = model.chart_radius(disk.radius);
  double lambda_max = 0.0;
  for (int i = 0; i < 64; ++i) {
    lambda_max = std::max(lambda_max, model.conformal_factor(model.from_origin(disk.center, polar(rho, kTwoPi * i / 64))));
  }
  lambda_max = std::max(lambda_max, model.conformal_factor(disk.center));
  int rings = std::max(2, static_cast<int>(std::ceil(rho * lambda_max / target_h)));
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mesh mesh = ring_mesh(model, disk, rings);
    check_admissible(model, mesh);
    const MeshStats stats = mesh_stats(model, mesh);
    if (stats.h_max <= target_h) return mesh;
    rings = std::max(rings + 1, static_cast<int>(std::ceil(rings * stats.h_max / target_h)));
  }
  throw GeometryError("ring mesh refinement did not reach the target size");
}

std::vector<Point> sample_boundary(const ConformalModel& model, const BoundaryCurve& curve, double spacing_hint,
                                   double* length_out) {
  if (const auto* poly = std::get_if<Polyline>(&curve)) {
    if (poly->points.size() < 3) throw GeometryError("polyline boundary needs at least 3 points");
  }
  constexpr int kDense = 8192;
  std::vector<Point> dense(kDense + 1);
  std::vector<double> arclength(kDense + 1, 0.0);
  for (int i = 0; i <= kDense; ++i) {
    dense[static_cast<std::size_t>(i)] = curve_point(model, curve, static_cast<double>(i % kDense) / kDense);
    if (i > 0) {
      arclength[static_cast<std::size_t>(i)] =
          arclength[static_cast<std::size_t>(i - 1)] + std::abs(dense[static_cast<std::size_t>(i)] - dense[static_cast<std::size_t>(i - 1)]);
    }
  }
  const double length = arclength.back();
  *length_out = length;
  const int count = std::max(8, static_cast<int>(std::ceil(length / spacing_hint)));
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  std::size_t seg = 0;
  for (int i = 0; i < count; ++i) {
    const double target = length * i / count;
    while (seg + 1 < arclength.size() && arclength[seg + 1] < target) ++seg;
    const double span = arclength[seg + 1] - arclength[seg];
    const double f = span > 0.0 ? (target - arclength[seg]) / span : 0.0;
    // refine on the curve itself rather than the chord
    double t = (static_cast<double>(seg) + f) / kDense;
    if (std::holds_alternative<Polyline>(curve)) {
      out.push_back(dense[seg] + f * (dense[seg + 1] - dense[seg]));
    } else {
      out.push_back(curve_point(model, curve, t));
    }
  }
  return out;
}

struct Attempt {
  Mesh mesh;
  MeshStats stats;
};

Mesh lattice_mesh(const ConformalModel& model, const BoundaryCurve& curve, double target_h,
                  const MeshOptions& options) {
  // Upper bound on lambda over the domain: on the boundary, or at the chart
  // origin when a spherical domain contains it.
  double length = 0.0;
  std::vector<Point> probe = sample_boundary(model, curve, 1e9, &length);
  probe = sample_boundary(model, curve, length / 512.0, &length);
  double lambda_max = 0.0;
  for (const auto& z : probe) lambda_max = std::max(lambda_max, model.conformal_factor(z));
  if (model.spherical() && inside_polygon(probe, {0.0, 0.0})) {
    lambda_max = std::max(lambda_max, model.conformal_factor({0.0, 0.0}));
  }

  double factor = 0.8;
  std::string last_problem;
  for (int attempt = 0; attempt < 12; ++attempt) {
    const double s = factor * target_h / lambda_max;
    std::vector<Point> boundary = sample_boundary(model, curve, s, &length);
    if (signed_area(boundary) < 0.0) std::reverse(boundary.begin() + 1, boundary.end());
    check_simple(boundary);
    const std::size_t nb = boundary.size();

    // Canonical frame anchored at sample 0, x axis along the central tangent
    // there, so a curve symmetric about sample 0 gets a symmetric lattice.
    const Point origin = boundary[0];
    const Point dir = (boundary[1] - boundary[nb - 1]) / std::abs(boundary[1] - boundary[nb - 1]);
    std::vector<Point> local(nb);
    for (std::size_t i = 0; i < nb; ++i) local[i] = (boundary[i] - origin) * std::conj(dir);

    double min_x = local[0].real(), max_x = min_x, min_y = local[0].imag(), max_y = min_y;
    for (const auto& p : local) {
      min_x = std::min(min_x, p.real());
      max_x = std::max(max_x, p.real());
      min_y = std::min(min_y, p.imag());
      max_y = std::max(max_y, p.imag());
    }
    std::vector<Point> points = local;
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double row = s * std::sqrt(3.0) / 2.0;
    const double keep = 0.55 * s;
    for (int j = static_cast<int>(std::floor(min_y / row)); j * row <= max_y; ++j) {
      const double shift = (j % 2 != 0) ? 0.5 * s : 0.0;
      for (int i = static_cast<int>(std::floor(min_x / s)) - 1; i * s + shift <= max_x; ++i) {
        Point p{i * s + shift, j * row};
        if (options.jitter > 0.0) p += Point{unit(rng), unit(rng)} * (options.jitter * s);
        if (!inside_polygon(local, p)) continue;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < nb && d >= keep; ++k) d = std::min(d, segment_distance(p, local[k], local[(k + 1) % nb]));
        if (d >= keep) points.push_back(p);
      }
    }

    std::vector<std::array<int, 3>> tris;
    const auto triangulate = [&] {
      tris.clear();
      for (const auto& t : detail::delaunay(points)) {
        const Point c = (points[static_cast<std::size_t>(t[0])] + points[static_cast<std::size_t>(t[1])] +
                         points[static_cast<std::size_t>(t[2])]) / 3.0;
        if (inside_polygon(local, c)) tris.push_back(t);
      }
    };
    triangulate();
    for (int sweep = 0; sweep < 3; ++sweep) {
      std::vector<Point> sum(points.size(), {0.0, 0.0});
      std::vector<int> degree(points.size(), 0);
      std::map<std::pair<int, int>, bool> seen;
      for (const auto& t : tris) {
        for (int e = 0; e < 3; ++e) {
          const int a = std::min(t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)]);
          const int b = std::max(t[static_cast<std::size_t>(e)], t[static_cast<std::size_t>((e + 1) % 3)]);
          if (!seen.emplace(std::make_pair(a, b), true).second) continue;
          sum[static_cast<std::size_t>(a)] += points[static_cast<std::size_t>(b)];
          sum[static_cast<std::size_t>(b)] += points[static_cast<std::size_t>(a)];
          ++degree[static_cast<std::size_t>(a)];
          ++degree[static_cast<std::size_t>(b)];
        }
      }
      for (std::size_t v = nb; v < points.size(); ++v) {
        if (degree[v] == 0) continue;
        const Point moved = sum[v] / static_cast<double>(degree[v]);
        if (inside_polygon(local, moved)) points[v] = moved;
      }
      triangulate();
    }

    Mesh mesh;
    mesh.vertices.resize(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) mesh.vertices[i] = points[i] * dir + origin;
    for (std::size_t i = 0; i < nb; ++i) mesh.vertices[i] = boundary[i];
    // drop lattice points no triangle uses (possible after filtering)
    std::vector<int> remap(points.size(), -1);
    for (const auto& t : tris) for (int v : t) remap[static_cast<std::size_t>(v)] = 0;
    for (std::size_t i = 0; i < nb; ++i) remap[i] = 0;
    Mesh compact;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (remap[i] < 0) continue;
      remap[i] = static_cast<int>(compact.vertices.size());
      compact.vertices.push_back(mesh.vertices[i]);
    }
    for (const auto& t : tris) {
      compact.triangles.push_back({remap[static_cast<std::size_t>(t[0])], remap[static_cast<std::size_t>(t[1])],
                                   remap[static_cast<std::size_t>(t[2])]});
    }
    check_admissible(model, compact);

    std::vector<int> loop;
    try {
      loop = boundary_loop(compact);
    } catch (const GeometryError& e) {
      last_problem = e.what();
      factor *= 0.92;
      continue;
    }
    bool conforming = loop.size() == nb + 1;
    for (std::size_t i = 0; conforming && i < nb; ++i) conforming = loop[i] == static_cast<int>(i);
    if (!conforming) {
      last_problem = "boundary samples are not joined by mesh edges";
      factor *= 0.92;
      continue;
    }
    compact.boundary = std::move(loop);
    const MeshStats stats = mesh_stats(model, compact);
    if (stats.h_max > target_h) {
      // Edge length is linear in the spacing, so shrink by the measured overshoot.
      factor *= std::min(0.98, 0.99 * target_h / stats.h_max);
      last_problem = "h_max " + std::to_string(stats.h_max) + " above target";
      continue;
    }
    if (stats.min_angle_deg < kMinAngleDeg) {
      last_problem = "minimum angle " + std::to_string(stats.min_angle_deg) + " degrees";
      factor *= 0.92;
      continue;
    }
    return compact;
  }
  throw GeometryError("mesh generation failed: " + last_problem);
}

}  // namespace

double metric_edge_length(const ConformalModel& model, Point a, Point b) {
  return model.conformal_factor(0.5 * (a + b)) * std::abs(b - a);
}

MeshStats mesh_stats(const ConformalModel& model, const Mesh& mesh) {
  MeshStats stats;
  stats.vertex_count = mesh.vertices.size();
  stats.triangle_count = mesh.triangles.size();
  stats.min_angle_deg = 180.0;
  for (const auto& t : mesh.triangles) {
    const Point a = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Point b = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Point c = mesh.vertices[static_cast<std::size_t>(t[2])];
    for (const auto& [p, q] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, a}}) {
      stats.h_max = std::max(stats.h_max, metric_edge_length(model, p, q));
      stats.h_max_chart = std::max(stats.h_max_chart, std::abs(q - p));
    }
    stats.min_angle_deg = std::min(stats.min_angle_deg, triangle_min_angle(a, b, c));
  }
  return stats;
}

Point curve_point(const ConformalModel& model, const BoundaryCurve& curve, double t) {
  const double theta = kTwoPi * t;
  return std::visit(
      [&](const auto& c) -> Point {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GeodesicDisk>) {
          return model.from_origin(c.center, polar(model.chart_radius(c.radius), c.phase + theta));
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return shape_to_chart(model, {c.semi_a * std::cos(theta), c.semi_b * std::sin(theta)}, c.angle, c.offset,
                                c.rotation);
        } else if constexpr (std::is_same_v<T, Peanut>) {
          const double rho = c.semi_a * (1.0 + c.delta * std::cos(2.0 * theta)) / (1.0 + c.delta);
          return shape_to_chart(model, polar(rho, theta), c.angle, c.offset, c.rotation);
        } else {
          const std::size_t n = c.points.size();
          const double x = t * static_cast<double>(n);
          const auto i = static_cast<std::size_t>(std::floor(x)) % n;
          const double f = x - std::floor(x);
          return c.points[i] + f * (c.points[(i + 1) % n] - c.points[i]);
        }
      },
      curve);
}

Mesh mesh_domain(const ConformalModel& model, const BoundaryCurve& curve, double target_h,
                 const MeshOptions& options) {
  if (!(target_h > 0.0)) throw std::invalid_argument("mesh size must be positive");
  if (const auto* disk = std::get_if<GeodesicDisk>(&curve)) return mesh_disk(model, *disk, target_h);
  if (const auto* e = std::get_if<Ellipse>(&curve)) {
    if (!(e->semi_a > 0.0 && e->semi_b > 0.0)) throw GeometryError("ellipse semi-axes must be positive");
  }
  if (const auto* p = std::get_if<Peanut>(&curve)) {
    if (!(p->semi_a > 0.0) || !(p->delta >= 0.0 && p->delta < 1.0)) {
      throw GeometryError("peanut needs a > 0 and 0 <= delta < 1");
    }
  }
  // Sample the boundary first so that admissibility errors precede meshing.
  Mesh probe;
  for (int i = 0; i < 256; ++i) probe.vertices.push_back(curve_point(model, curve, i / 256.0));
  check_admissible(model, probe);
  return lattice_mesh(model, curve, target_h, options);
}

Mesh rotated(const Mesh& mesh, double angle) {
  Mesh out = mesh;
  const Point w = std::polar(1.0, angle);
  for (auto& z : out.vertices) z *= w;
  return out;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto old = os.precision(17);
  os << mesh.vertices.size() << ' ' << mesh.triangles.size() << '\n';
  for (const auto& z : mesh.vertices) os << z.real() << ' ' << z.imag() << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os.precision(old);
}

Mesh read_mesh(std::istream& is) {
  std::size_t nv = 0;
  std::size_t nt = 0;
  if (!(is >> nv >> nt)) throw GeometryError("mesh file: missing header");
  Mesh mesh;
  mesh.vertices.resize(nv);
  for (auto& z : mesh.vertices) {
    double x = 0.0;
    double y = 0.0;
    if (!(is >> x >> y)) throw GeometryError("mesh file: truncated vertex list");
    z = {x, y};
  }
  mesh.triangles.resize(nt);
  for (auto& t : mesh.triangles) {
    if (!(is >> t[0] >> t[1] >> t[2])) throw GeometryError("mesh file: truncated triangle list");
    for (int v : t) {
      if (v < 0 || static_cast<std::size_t>(v) >= nv) throw GeometryError("mesh file: vertex index out of range");
    }
  }
  mesh.boundary = boundary_loop(mesh);
  return mesh;
}

std::string mesh_text(const Mesh& mesh) {
  std::ostringstream os;
  write_mesh(os, mesh);
  return os.str();
}

std::vector<int> boundary_loop(const Mesh& mesh) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[static_cast<std::size_t>(e)];
      const int b = t[static_cast<std::size_t>((e + 1) % 3)];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::map<int, int> next;
  for (const auto& t : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      const int a = t[static_cast<std::size_t>(e)];
      const int b = t[static_cast<std::size_t>((e + 1) % 3)];
      if (count[{std::min(a, b), std::max(a, b)}] != 1) continue;
      if (!next.emplace(a, b).second) throw GeometryError("boundary is not a simple loop");
    }
  }
  if (next.empty()) throw GeometryError("mesh has no boundary");
  std::vector<int> loop{next.begin()->first};
  while (true) {
    const auto it = next.find(loop.back());
    if (it == next.end()) throw GeometryError("boundary loop is open");
    loop.push_back(it->second);
    if (it->second == loop.front()) break;
    if (loop.size() > next.size() + 1) throw GeometryError("boundary loop does not close");
  }
  if (loop.size() != next.size() + 1) throw GeometryError("boundary has more than one component");
  return loop;
}

}  // namespace ross
