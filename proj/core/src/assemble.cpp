#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <thread>

#include "ross/errors.hpp"
#include "ross/fem.hpp"

namespace ross {

namespace {

struct ElementBlock {
  std::array<std::array<double, 3>, 3> k{};
  std::array<std::array<double, 3>, 3> m{};
};

void flat_stiffness(const std::array<Point, 3>& p, std::array<std::array<double, 3>, 3>& k) {
  // Edge opposite vertex i, all traversed in the same rotational sense.
  const std::array<Point, 3> e{p[2] - p[1], p[0] - p[2], p[1] - p[0]};
  const double area = 0.5 * (e[2].real() * (-e[1]).imag() - e[2].imag() * (-e[1]).real());
  if (!(area > 0.0)) throw GeometryError("degenerate or clockwise triangle in mesh");
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          (e[static_cast<std::size_t>(i)] * std::conj(e[static_cast<std::size_t>(j)])).real() / (4.0 * area);
    }
  }
}

ElementBlock element(const ConformalModel* model, const std::array<Point, 3>& p) {
  ElementBlock block;
  flat_stiffness(p, block.k);
  if (model == nullptr) return block;
  const double area = 0.5 * ((p[1] - p[0]).real() * (p[2] - p[0]).imag() - (p[1] - p[0]).imag() * (p[2] - p[0]).real());
  // Edge-midpoint rule with weight lambda^2; w[l] sits opposite vertex l.
  std::array<double, 3> w{};
  for (std::size_t l = 0; l < 3; ++l) {
    const double lam = model->conformal_factor(0.5 * (p[(l + 1) % 3] + p[(l + 2) % 3]));
    w[l] = lam * lam;
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      if (i == j) {
        for (std::size_t l = 0; l < 3; ++l) {
          if (l != i) s += 0.25 * w[l];
        }
      } else {
        s = 0.25 * w[3 - i - j];
      }
      block.m[i][j] = area / 3.0 * s;
    }
  }
  return block;
}

FemSystem assemble_impl(const ConformalModel* model, const Mesh& mesh, unsigned threads) {
  const std::size_t nt = mesh.triangles.size();
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  if (model != nullptr) {
    const double limit = model->chart_limit();
    for (const auto& z : mesh.vertices) {
      if (model->spherical() ? std::abs(z) > limit * (1.0 + 1e-12) : std::abs(z) >= 1.0) {
        std::ostringstream os;
        os.precision(17);
        os << "radius constraint violated: mesh vertex (" << z.real() << ", " << z.imag()
           << ") outside the admissible chart region of " << model->space().to_string();
        throw RangeError(os.str());
      }
    }
  }

  std::vector<ElementBlock> blocks(nt);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, nt / 256)));
  std::vector<std::exception_ptr> errors(threads);
  const auto work = [&](unsigned id) {
    try {
      for (std::size_t t = id; t < nt; t += threads) {
        const auto& tri = mesh.triangles[t];
        const std::array<Point, 3> p{mesh.vertices[static_cast<std::size_t>(tri[0])],
                                     mesh.vertices[static_cast<std::size_t>(tri[1])],
                                     mesh.vertices[static_cast<std::size_t>(tri[2])]};
        blocks[t] = element(model, p);
      }
    } catch (...) {
      errors[id] = std::current_exception();
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Ordered reduction keeps the sums bitwise reproducible across thread counts.
  std::vector<Eigen::Triplet<double>> tk;
  std::vector<Eigen::Triplet<double>> tm;
  tk.reserve(9 * nt);
  if (model != nullptr) tm.reserve(9 * nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        tk.emplace_back(tri[i], tri[j], blocks[t].k[i][j]);
        if (model != nullptr) tm.emplace_back(tri[i], tri[j], blocks[t].m[i][j]);
      }
    }
  }
  FemSystem system;
  system.stiffness.resize(n, n);
  system.stiffness.setFromTriplets(tk.begin(), tk.end());
  if (model != nullptr) {
    system.mass.resize(n, n);
    system.mass.setFromTriplets(tm.begin(), tm.end());
  }
  return system;
}

}  // namespace

FemSystem assemble(const ConformalModel& model, const Mesh& mesh, const AssemblyOptions& options) {
  return assemble_impl(&model, mesh, options.threads);
}

SparseMatrix assemble_flat_stiffness(const Mesh& mesh) { return assemble_impl(nullptr, mesh, 1).stiffness; }

}  // namespace ross
