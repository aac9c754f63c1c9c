// Bowyer-Watson insertion with triangle adjacency and a visibility walk for
// point location.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "ross/mesh.hpp"

namespace ross::detail {

namespace {

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> nb;  // nb[i] lies across the edge opposite v[i]
  bool alive = true;
};

long double orient(Point a, Point b, Point c) {
  const long double abx = static_cast<long double>(b.real()) - a.real();
  const long double aby = static_cast<long double>(b.imag()) - a.imag();
  const long double acx = static_cast<long double>(c.real()) - a.real();
  const long double acy = static_cast<long double>(c.imag()) - a.imag();
  return abx * acy - aby * acx;
}

// > 0 when d lies strictly inside the circumcircle of CCW (a, b, c).
long double incircle(Point a, Point b, Point c, Point d) {
  const long double adx = static_cast<long double>(a.real()) - d.real();
  const long double ady = static_cast<long double>(a.imag()) - d.imag();
  const long double bdx = static_cast<long double>(b.real()) - d.real();
  const long double bdy = static_cast<long double>(b.imag()) - d.imag();
  const long double cdx = static_cast<long double>(c.real()) - d.real();
  const long double cdy = static_cast<long double>(c.imag()) - d.imag();
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Point>& input) {
  const int n = static_cast<int>(input.size());
  if (n < 3) throw std::invalid_argument("Delaunay triangulation needs at least 3 points");
  std::vector<Point> pts = input;

  double min_x = pts[0].real(), max_x = min_x, min_y = pts[0].imag(), max_y = min_y;
  for (const auto& p : pts) {
    min_x = std::min(min_x, p.real());
    max_x = std::max(max_x, p.real());
    min_y = std::min(min_y, p.imag());
    max_y = std::max(max_y, p.imag());
  }
  const double span = std::max(max_x - min_x, max_y - min_y);
  const Point mid{0.5 * (min_x + max_x), 0.5 * (min_y + max_y)};
  pts.push_back(mid + Point{-20.0 * span, -20.0 * span});
  pts.push_back(mid + Point{20.0 * span, -20.0 * span});
  pts.push_back(mid + Point{0.0, 20.0 * span});

  std::vector<Tri> tris;
  tris.reserve(static_cast<std::size_t>(4 * n + 16));
  tris.push_back(Tri{{n, n + 1, n + 2}, {-1, -1, -1}, true});
  int last = 0;

  std::vector<int> bad;
  std::vector<int> stack;
  std::vector<char> is_bad;

  for (int pi = 0; pi < n; ++pi) {
    const Point p = pts[static_cast<std::size_t>(pi)];

    // Locate a triangle containing p.
    int cur = last;
    bool found = false;
    for (int steps = 0; steps < 4 * n + 64; ++steps) {
      const Tri& t = tris[static_cast<std::size_t>(cur)];
      int next = -1;
      for (int e = 0; e < 3; ++e) {
        const Point a = pts[static_cast<std::size_t>(t.v[(e + 1) % 3])];
        const Point b = pts[static_cast<std::size_t>(t.v[(e + 2) % 3])];
        if (orient(a, b, p) < 0) {
          next = t.nb[e];
          break;
        }
      }
      if (next < 0) {
        found = true;
        break;
      }
      cur = next;
    }
    if (!found) {
      for (std::size_t ti = 0; ti < tris.size() && !found; ++ti) {
        const Tri& t = tris[ti];
        if (!t.alive) continue;
        bool inside = true;
        for (int e = 0; e < 3 && inside; ++e) {
          inside = orient(pts[static_cast<std::size_t>(t.v[(e + 1) % 3])],
                          pts[static_cast<std::size_t>(t.v[(e + 2) % 3])], p) >= 0;
        }
        if (inside) {
          cur = static_cast<int>(ti);
          found = true;
        }
      }
      if (!found) throw std::runtime_error("Delaunay point location failed");
    }

    // Cavity: connected set of triangles whose circumcircle contains p.
    is_bad.resize(tris.size(), 0);
    bad.clear();
    stack.assign(1, cur);
    is_bad[static_cast<std::size_t>(cur)] = 1;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      bad.push_back(t);
      for (int e = 0; e < 3; ++e) {
        const int nb = tris[static_cast<std::size_t>(t)].nb[e];
        if (nb < 0 || is_bad[static_cast<std::size_t>(nb)]) continue;
        const Tri& u = tris[static_cast<std::size_t>(nb)];
        if (incircle(pts[static_cast<std::size_t>(u.v[0])], pts[static_cast<std::size_t>(u.v[1])],
                     pts[static_cast<std::size_t>(u.v[2])], p) > 0) {
          is_bad[static_cast<std::size_t>(nb)] = 1;
          stack.push_back(nb);
        }
      }
    }

    // Re-triangulate the cavity as a fan around p.
    std::unordered_map<int, int> starts;  // first vertex -> new triangle
    std::unordered_map<int, int> ends;    // second vertex -> new triangle
    std::vector<int> created;
    for (int t : bad) {
      for (int e = 0; e < 3; ++e) {
        const Tri old = tris[static_cast<std::size_t>(t)];
        const int nb = old.nb[e];
        if (nb >= 0 && is_bad[static_cast<std::size_t>(nb)]) continue;
        const int a = old.v[(e + 1) % 3];
        const int b = old.v[(e + 2) % 3];
        const int id = static_cast<int>(tris.size());
        tris.push_back(Tri{{a, b, pi}, {-1, -1, nb}, true});
        is_bad.push_back(0);
        if (nb >= 0) {
          Tri& outer = tris[static_cast<std::size_t>(nb)];
          for (int f = 0; f < 3; ++f) {
            if (outer.nb[f] == t) outer.nb[f] = id;
          }
        }
        starts[a] = id;
        ends[b] = id;
        created.push_back(id);
      }
    }
    for (int id : created) {
      Tri& t = tris[static_cast<std::size_t>(id)];
      t.nb[0] = starts.at(t.v[1]);  // edge (b, p)
      t.nb[1] = ends.at(t.v[0]);    // edge (p, a)
    }
    for (int t : bad) {
      tris[static_cast<std::size_t>(t)].alive = false;
      is_bad[static_cast<std::size_t>(t)] = 0;
    }
    last = created.back();
  }

  std::vector<std::array<int, 3>> out;
  for (const auto& t : tris) {
    if (!t.alive) continue;
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    out.push_back(t.v);
  }
  // Canonical order: rotate so the smallest index leads, then sort.
  for (auto& t : out) {
    const auto it = std::min_element(t.begin(), t.end());
    std::rotate(t.begin(), it, t.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ross::detail
