#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "ross/conformal_model.hpp"

namespace ross {

struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<int> boundary;                  // closed loop, first == last

  std::size_t vertex_count() const { return vertices.size(); }
};

struct MeshStats {
  double h_max = 0.0;          // longest edge, metric length
  double h_max_chart = 0.0;    // longest edge, chart length
  double min_angle_deg = 0.0;  // smallest interior angle, chart
  std::size_t vertex_count = 0;
  std::size_t triangle_count = 0;
};

MeshStats mesh_stats(const ConformalModel& model, const Mesh& mesh);

/// Metric length of a chart segment, lambda at the midpoint times chart length.
double metric_edge_length(const ConformalModel& model, Point a, Point b);

// Boundary curves. Shape parameters are geodesic normal coordinates at the
// chart origin: a shape point v is placed at exp_origin(v). `angle` rotates
// the shape about its own center, `rotation` rotates the whole curve about
// the model origin.
struct GeodesicDisk {
  double radius = 0.5;
  Point center{0.0, 0.0};  // chart coordinates
  double phase = 0.0;      // angular offset of the ring vertices
};

struct Ellipse {
  double semi_a = 0.6;
  double semi_b = 0.3;
  double angle = 0.0;
  Point offset{0.0, 0.0};
  double rotation = 0.0;
};

// Two-lobe curve rho(t) = a (1 + delta cos 2t) / (1 + delta), non-convex for
// delta > 0.2, symmetric about its axis.
struct Peanut {
  double semi_a = 0.6;
  double delta = 0.3;
  double angle = 0.0;
  Point offset{0.0, 0.0};
  double rotation = 0.0;
};

struct Polyline {
  std::vector<Point> points;  // chart coordinates, open list (closure implied)
};

using BoundaryCurve = std::variant<GeodesicDisk, Ellipse, Peanut, Polyline>;

/// Chart point of the curve at parameter t in [0, 1).
Point curve_point(const ConformalModel& model, const BoundaryCurve& curve, double t);

struct MeshOptions {
  double jitter = 0.0;       // interior lattice jitter, fraction of spacing
  std::uint64_t seed = 0;
};

/// Conforming triangulation with metric h_max <= target_h and min angle
/// >= 15 degrees. Geodesic disks get a structured ring mesh; other curves a
/// Delaunay mesh of boundary samples plus an equilateral interior lattice,
/// built in a frame anchored at the first boundary sample so that rotating
/// the curve rotates the mesh.
Mesh mesh_domain(const ConformalModel& model, const BoundaryCurve& curve, double target_h,
                 const MeshOptions& options = {});

/// Rotation of every vertex about the chart origin.
Mesh rotated(const Mesh& mesh, double angle);

// Text format: "nv nt", nv lines "x y", nt lines "i j k" (0-based).
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);
std::string mesh_text(const Mesh& mesh);

/// Boundary loop recovered from edges used by exactly one triangle.
std::vector<int> boundary_loop(const Mesh& mesh);

namespace detail {
/// Unconstrained Delaunay triangulation (Bowyer-Watson). Triangles are CCW.
std::vector<std::array<int, 3>> delaunay(const std::vector<Point>& points);
}  // namespace detail

}  // namespace ross
