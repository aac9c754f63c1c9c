// Acceptance run: one line per criterion, exit status 1 if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ross/annulus.hpp"
#include "ross/conformal_model.hpp"
#include "ross/fem.hpp"
#include "ross/geometry.hpp"
#include "ross/lemmas.hpp"
#include "ross/mesh.hpp"
#include "ross/radial_solver.hpp"
#include "ross/verifier.hpp"

namespace {

using ross::Space;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<Space> all_spaces() {
  std::vector<Space> out;
  for (bool compact : {true, false}) {
    for (int n = 2; n <= 16; ++n) out.push_back(Space::make(1, n, compact));
    for (int n = 1; n <= 8; ++n) out.push_back(Space::make(2, n, compact));
    for (int n = 1; n <= 4; ++n) out.push_back(Space::make(4, n, compact));
    out.push_back(Space::make(8, 2, compact));
  }
  return out;
}

std::vector<double> open_grid(double top, std::size_t n) {
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = top * static_cast<double>(i + 1) / static_cast<double>(n);
  return r;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Outcome identity() {
  double worst = 0.0;
  for (const Space& s : all_spaces()) {
    const double top = s.compact() ? std::numbers::pi / 2.0 * 1000.0 / 1001.0 : 20.0;
    for (double r : open_grid(top, 1000)) {
      const double dh = ross::curvature_trace_deriv(s, r);
      worst = std::max(worst, std::abs(ross::gradient_sum(s, r) + dh) / std::abs(dh));
    }
  }
  return {worst <= 1e-12, fmt("max |sum + H'|/|H'| = %.2e over %g spaces", worst, all_spaces().size())};
}

Outcome bounds() {
  double worst = std::numeric_limits<double>::infinity();
  for (const Space& s : all_spaces()) {
    const auto mc = ross::mode_constants(s);
    const int L = s.compact() ? mc.l : mc.p;
    const double top = s.compact() ? ross::kQuarterPi : 20.0;
    for (double r : open_grid(top, 1000)) {
      const double minus_dh = -ross::curvature_trace_deriv(s, r);
      worst = std::min(worst, (minus_dh - L * ross::gradient_bound(s, r)) / minus_dh);
    }
  }
  return {worst >= -1e-12, fmt("min relative margin %.2e", worst)};
}

Outcome ball_lower_bound() {
  double worst = std::numeric_limits<double>::infinity();
  int count = 0;
  const std::vector<std::pair<int, int>> kn{{2, 1}, {2, 2}, {2, 3}, {2, 4}, {4, 1}, {4, 2}, {8, 2}};
  for (auto [k, n] : kn) {
    const Space s = Space::make(k, n, true);
    const double bound = 2.0 * (s.real_dim() + k);
    for (double R : open_grid(ross::kQuarterPi, 20)) {
      worst = std::min(worst, ross::solve_ball(s, R).mu1 - bound);
      ++count;
    }
  }
  return {worst >= -1e-6, fmt("min mu1 - 2(m+k) = %.6g over %g balls", worst, count)};
}

// s(r) recomputed from the stored profile g and its slopes.
double sign_ratio(const ross::BallEig& ball) {
  const auto& r = ball.g.grid();
  const auto& g = ball.g.values();
  double max_s = -std::numeric_limits<double>::infinity();
  double max_slope = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) max_slope = std::max(max_slope, std::abs(ball.g.derivative(r[i])));
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    const double dg = ball.g.derivative(r[i]);
    const double coef = ball.space.compact() ? 2.0 / std::tan(2.0 * r[i]) : 1.0 / std::tanh(r[i]);
    max_s = std::max(max_s, dg - coef * g[i]);
  }
  return max_s / max_slope;
}

Outcome sign_functions() {
  const std::vector<Space> compact{Space::make(1, 2, true), Space::make(2, 1, true), Space::make(2, 2, true),
                                   Space::make(4, 1, true), Space::make(4, 2, true)};
  const std::vector<Space> noncompact{Space::make(1, 2, false), Space::make(1, 3, false), Space::make(2, 1, false),
                                      Space::make(2, 2, false), Space::make(4, 2, false)};
  double worst = -std::numeric_limits<double>::infinity();
  int pairs = 0;
  for (const auto& s : compact) {
    for (double R : open_grid(ross::kQuarterPi, 4)) {
      worst = std::max(worst, sign_ratio(ross::solve_ball(s, R)));
      ++pairs;
    }
  }
  for (const auto& s : noncompact) {
    for (double R : {0.3, 1.0, 2.0, 3.5}) {
      worst = std::max(worst, sign_ratio(ross::solve_ball(s, R)));
      ++pairs;
    }
  }
  return {worst <= 1e-8, fmt("max s/max|g'| = %.3e over %g pairs", worst, pairs)};
}

Outcome cross_oracle() {
  const std::vector<std::pair<Space, double>> cases{{Space::make(1, 2, false), 1.0},
                                                    {Space::make(1, 3, false), 0.7},
                                                    {Space::make(2, 1, true), 0.6},
                                                    {Space::make(2, 2, true), ross::kQuarterPi},
                                                    {Space::make(4, 2, false), 1.5}};
  bool ok = true;
  double lo_order = 10.0, hi_order = 0.0, worst_gap = 0.0;
  for (const auto& [s, R] : cases) {
    const double exact = ross::solve_ball(s, R, {1e-12, 2001}).mu1;
    const double e500 = ross::solve_ball_rayleigh(s, R, 500).mu1;
    const double e1000 = ross::solve_ball_rayleigh(s, R, 1000).mu1;
    const double e2000 = ross::solve_ball_rayleigh(s, R, 2000).mu1;
    const double o1 = std::log2(std::abs(e500 - exact) / std::abs(e1000 - exact));
    const double o2 = std::log2(std::abs(e1000 - exact) / std::abs(e2000 - exact));
    const double extrapolated = (4.0 * e2000 - e1000) / 3.0;
    const double gap = std::abs(extrapolated - exact) / exact;
    lo_order = std::min({lo_order, o1, o2});
    hi_order = std::max({hi_order, o1, o2});
    worst_gap = std::max(worst_gap, gap);
    ok = ok && std::abs(o1 - 2.0) <= 0.2 && std::abs(o2 - 2.0) <= 0.2 && gap < 1e-6;
  }
  return {ok, fmt("orders in [%.3f, %.3f], extrapolated gap %.2e", lo_order, hi_order, worst_gap)};
}

// Flat m-ball Neumann constant: g'' + (m-1)/r g' + (mu - (m-1)/r^2) g = 0 on
// (0, 1] from the series start g = r (1 - mu r^2 / (4 + 2m)), root of g'(1) by
// bisection, classical RK4 with 20000 steps.
double flat_constant(int m) {
  const auto end_slope = [m](double mu) {
    const double r0 = 1e-4;
    const double c = -mu / (2.0 * (m + 2));
    double y = r0 + c * r0 * r0 * r0;
    double dy = 1.0 + 3.0 * c * r0 * r0;
    const int steps = 20000;
    const double h = (1.0 - r0) / steps;
    const auto f = [m, mu](double r, double g, double dg) { return -(m - 1) / r * dg - (mu - (m - 1) / (r * r)) * g; };
    double r = r0;
    for (int i = 0; i < steps; ++i) {
      const double k1y = dy, k1d = f(r, y, dy);
      const double k2y = dy + 0.5 * h * k1d, k2d = f(r + 0.5 * h, y + 0.5 * h * k1y, dy + 0.5 * h * k1d);
      const double k3y = dy + 0.5 * h * k2d, k3d = f(r + 0.5 * h, y + 0.5 * h * k2y, dy + 0.5 * h * k2d);
      const double k4y = dy + h * k3d, k4d = f(r + h, y + h * k3y, dy + h * k3d);
      y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
      dy += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
      r += h;
    }
    return dy;
  };
  // Scan for the first sign change of g'(1) in mu, then bisect.
  double lo = 0.1, hi = 0.1;
  const double f_lo = end_slope(lo);
  while (std::signbit(end_slope(hi)) == std::signbit(f_lo)) {
    lo = hi;
    hi += 0.25;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::signbit(end_slope(mid)) == std::signbit(f_lo) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome euclidean_limit() {
  double worst = 0.0;
  std::vector<double> constants(17, 0.0);
  for (const Space& s : all_spaces()) {
    const int m = s.real_dim();
    if (constants[static_cast<std::size_t>(m)] == 0.0) constants[static_cast<std::size_t>(m)] = flat_constant(m);
    const double R = 1e-3;
    const double scaled = ross::solve_ball(s, R).mu1 * R * R;
    worst = std::max(worst, std::abs(scaled - constants[static_cast<std::size_t>(m)]) /
                                constants[static_cast<std::size_t>(m)]);
  }
  return {worst < 0.02, fmt("max relative deviation %.2e (m=2 constant %.6f)", worst, constants[2])};
}

Outcome fem_disks() {
  struct Case {
    const char* space;
    double R;
  };
  bool ok = true;
  std::ostringstream detail;
  for (const Case& c : {Case{"K1_n2_nc", 0.8}, Case{"K2_n1_c", 0.5}}) {
    const Space s = Space::parse(c.space);
    const auto model = ross::build_model(s);
    const double exact = ross::solve_ball(s, c.R).mu1;
    std::vector<double> hs, errs;
    double gap = 0.0;
    for (double h : {0.08, 0.04, 0.02}) {
      const auto mesh = ross::mesh_domain(model, ross::GeodesicDisk{c.R, {0.0, 0.0}, 0.0}, h);
      const auto sys = ross::assemble(model, mesh);
      const auto spec = ross::solve_spectrum(sys.stiffness, sys.mass, 3);
      hs.push_back(ross::mesh_stats(model, mesh).h_max);
      errs.push_back(std::abs(spec.eigenvalues[1] - exact));
      gap = (spec.eigenvalues[2] - spec.eigenvalues[1]) / spec.eigenvalues[1];
    }
    const double o1 = std::log(errs[0] / errs[1]) / std::log(hs[0] / hs[1]);
    const double o2 = std::log(errs[1] / errs[2]) / std::log(hs[1] / hs[2]);
    ok = ok && std::abs(o1 - 2.0) <= 0.2 && std::abs(o2 - 2.0) <= 0.2;
    detail << c.space << " orders " << fmt("%.3f, %.3f", o1, o2);
    if (s.compact()) {
      ok = ok && gap < 1e-3;
      detail << fmt(" gap %.2e", gap);
    }
    detail << (s.compact() ? "" : "; ");
  }
  return {ok, detail.str()};
}

struct DomainRun {
  std::string space;
  std::string domain;
  ross::Report report;
  double seconds = 0.0;
};

std::vector<DomainRun>& theorem_runs() {
  static std::vector<DomainRun> runs;
  return runs;
}

Outcome main_theorems() {
  const std::vector<std::string> fem_spaces{"K1_n2_nc", "K1_n2_c", "K2_n1_c", "K2_n1_nc"};
  const std::vector<std::string> shapes{"ellipse:0.5,0.3", "peanut:0.45,0.3", "ellipse:0.45,0.3,0.7,0.1,0.05",
                                        "ball:0.5"};
  auto& runs = theorem_runs();
  runs.clear();
  bool ok = true;
  double min_margin = std::numeric_limits<double>::infinity();
  double ball_margin = 0.0;
  const auto run = [&](const std::string& space, const std::string& domain, double h) {
    const Space s = Space::parse(space);
    ross::VerifyOptions options;
    options.h = h;
    const auto start = Clock::now();
    auto result = ross::verify(s, ross::parse_domain(domain, s), options);
    runs.push_back({space, domain, result.report, std::chrono::duration<double>(Clock::now() - start).count()});
    return runs.back().report;
  };
  for (const auto& space : fem_spaces) {
    for (const auto& domain : shapes) {
      const bool ball = domain.rfind("ball:", 0) == 0;
      const auto report = run(space, domain, ball ? 0.02 : 0.03);
      const auto* c = report.find("main_inequality");
      if (c == nullptr) {
        ok = false;
        continue;
      }
      if (ball) {
        ok = ok && std::abs(c->margin) < 1e-3;
        ball_margin = std::max(ball_margin, std::abs(c->margin));
      } else {
        ok = ok && c->pass() && c->margin > 0.0;
        min_margin = std::min(min_margin, c->margin);
      }
    }
  }
  for (const std::string space : {"K1_n3_nc", "K2_n2_nc"}) {
    for (const std::string domain : {"annulus:0.5,1.5", "annulus:0.2,1.0", "annulus:1.0,2.0"}) {
      const auto report = run(space, domain, 0.0);
      const auto* c = report.find("main_inequality");
      ok = ok && c != nullptr && c->status == ross::Status::pass;
    }
  }
  double total = 0.0;
  for (const auto& r : runs) total += r.seconds;
  ok = ok && total < 900.0;
  return {ok, fmt("min FEM margin %.4g, max ball |margin| %.2e, FEM runs %.1f s", min_margin, ball_margin, total)};
}

Outcome proof_chain() {
  const auto& runs = theorem_runs();
  if (runs.empty()) return {false, "no domain runs"};
  bool ok = true;
  double worst_center = 0.0, worst_orth = 0.0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  double worst_chain = std::numeric_limits<double>::infinity();
  int domains = 0;
  for (const auto& run : runs) {
    if (run.domain.rfind("annulus:", 0) == 0) continue;
    ++domains;
    for (const auto& c : run.report.checks) {
      if (c.id == "center_condition") {
        worst_center = std::max(worst_center, std::abs(c.lhs));
        ok = ok && c.pass();
      } else if (c.id.rfind("orthogonality.", 0) == 0) {
        worst_orth = std::max(worst_orth, std::abs(c.lhs));
        ok = ok && std::abs(c.lhs) < 1e-6;
      } else if (c.id.rfind("trial_bound.", 0) == 0) {
        worst_ratio = std::min(worst_ratio, c.margin);
        ok = ok && c.margin >= -1e-6;
      } else if (c.id == "chain.potential_rearrangement" || c.id == "chain.mass_rearrangement") {
        worst_chain = std::min(worst_chain, c.margin);
        ok = ok && c.margin >= -1e-8;
      }
    }
    if (run.report.find("center_condition") == nullptr || run.report.find("chain.mass_rearrangement") == nullptr) {
      ok = false;
    }
  }
  return {ok, fmt("center %.1e, orthogonality %.1e, min ratio-1 %.1e", worst_center, worst_orth, worst_ratio) +
                  fmt(", min chain margin %.1e", worst_chain) + " over " + std::to_string(domains) + " domains"};
}

Outcome determinism() {
  const std::filesystem::path dir{ROSS_GOLDEN_DIR};
  int files = 0;
  bool ok = true;
  std::ostringstream sink;
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    ++files;
    ok = ok && ross::cli::replay(path.string(), sink, sink, 1e-12) == ross::cli::kExitOk;
  }
  return {ok && files > 0, std::to_string(files) + " golden reports replayed to 1e-12"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria{
      {1, "gradient-sum identity", identity, 1.0},
      {2, "per-mode gradient bounds", bounds, 1.0},
      {3, "ball lower bound within pi/4", ball_lower_bound, 30.0},
      {4, "sign of s(r)", sign_functions, 30.0},
      {5, "shooting vs Rayleigh oracle", cross_oracle, 0.0},
      {6, "Euclidean limit", euclidean_limit, 0.0},
      {7, "FEM disk convergence", fem_disks, 300.0},
      {8, "main inequalities", main_theorems, 900.0},
      {9, "trial-function chain", proof_chain, 0.0},
      {10, "golden replay", determinism, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_time = c.budget_seconds <= 0.0 || seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failures;
    std::cout << "criterion " << c.id << " [" << c.name << "]: " << (pass ? "PASS" : "FAIL") << " (" << outcome.detail
              << (in_time ? "" : "; over time budget") << fmt(", %.2f s)", seconds) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
