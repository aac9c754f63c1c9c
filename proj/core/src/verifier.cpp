#include "ross/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ross/errors.hpp"
#include "ross/hash.hpp"
#include "ross/qr.hpp"
#include "ross/quadrature.hpp"

namespace ross {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::vector<double> parse_numbers(std::string_view list, std::string_view kind) {
  std::vector<double> out;
  std::string item;
  std::istringstream is{std::string(list)};
  while (std::getline(is, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(value)) {
      throw std::invalid_argument("bad number '" + item + "' in " + std::string(kind) + " domain");
    }
    out.push_back(value);
  }
  return out;
}

Point to_point(const Eigen::Vector2d& v) { return {v(0), v(1)}; }

bool inside_loop(const Mesh& mesh, Point p) {
  bool in = false;
  const auto& b = mesh.boundary;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const Point a = mesh.vertices[static_cast<std::size_t>(b[i])];
    const Point c = mesh.vertices[static_cast<std::size_t>(b[i + 1])];
    if ((a.imag() > p.imag()) != (c.imag() > p.imag())) {
      const double x = a.real() + (p.imag() - a.imag()) * (c.real() - a.real()) / (c.imag() - a.imag());
      if (p.real() < x) in = !in;
    }
  }
  return in;
}

// Discrete first moments of G(r_o) omega and their scale.
struct Moments {
  Point value;
  double scale;
};

Moments moments(const ConformalModel& model, const Mesh& mesh, const Eigen::VectorXd& w, const ExtendedProfile& G,
                Point o) {
  Point f{0.0, 0.0};
  double s = 0.0;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const Point d = model.to_origin(o, mesh.vertices[v]);
    const double rho = std::abs(d);
    if (rho == 0.0) continue;
    const double g = G.value(model.geodesic_radius(rho));
    f += w(static_cast<Eigen::Index>(v)) * g * (d / rho);
    s += w(static_cast<Eigen::Index>(v)) * g;
  }
  return {f, s};
}

struct NewtonOutcome {
  Point center;
  Moments m;
  int iterations = 0;
  bool converged = false;
};

NewtonOutcome newton_center(const ConformalModel& model, const Mesh& mesh, const Eigen::VectorXd& w,
                            const ExtendedProfile& G, Point start, double step_scale, double tol_rel,
                            std::ostringstream& trace) {
  NewtonOutcome out{start, moments(model, mesh, w, G, start), 0, false};
  const double delta = 1e-6 * step_scale;
  for (int it = 0; it < 60; ++it) {
    out.iterations = it;
    const double res = std::abs(out.m.value);
    if (res <= 1e-14 * out.m.scale) break;
    const Point fxp = moments(model, mesh, w, G, out.center + Point{delta, 0.0}).value;
    const Point fxm = moments(model, mesh, w, G, out.center - Point{delta, 0.0}).value;
    const Point fyp = moments(model, mesh, w, G, out.center + Point{0.0, delta}).value;
    const Point fym = moments(model, mesh, w, G, out.center - Point{0.0, delta}).value;
    Eigen::Matrix2d jac;
    jac << (fxp - fxm).real(), (fyp - fym).real(), (fxp - fxm).imag(), (fyp - fym).imag();
    jac /= 2.0 * delta;
    const Eigen::Vector2d step = -jac.fullPivLu().solve(Eigen::Vector2d(out.m.value.real(), out.m.value.imag()));
    bool accepted = false;
    for (double damp = 1.0; damp > 1e-6; damp *= 0.5) {
      const Point trial = out.center + damp * to_point(step);
      if (!inside_loop(mesh, trial)) continue;
      const Moments mt = moments(model, mesh, w, G, trial);
      if (std::abs(mt.value) < res) {
        out.center = trial;
        out.m = mt;
        accepted = true;
        break;
      }
    }
    trace << " it" << it << ": |F|/S=" << res / out.m.scale;
    if (!accepted) break;
  }
  out.converged = std::abs(out.m.value) <= tol_rel * out.m.scale;
  return out;
}

double safe_potential(const Space& space, double r) {
  // -H'(r) G(r)^2 is bounded at r = 0 but each factor is not.
  return -curvature_trace_deriv(space, std::max(r, 1e-300));
}

}  // namespace

bool DomainSpec::is_ball() const {
  const auto* curve = std::get_if<BoundaryCurve>(&shape);
  return curve != nullptr && std::holds_alternative<GeodesicDisk>(*curve);
}

DomainSpec parse_domain(std::string_view text, const Space& space) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("domain '" + std::string(text) + "' must look like kind:params");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view params = text.substr(colon + 1);
  DomainSpec spec;
  spec.text = std::string(text);

  if (kind == "annulus") {
    const auto v = parse_numbers(params, kind);
    if (v.size() != 2) throw std::invalid_argument("annulus needs r_in,r_out");
    if (!(v[0] > 0.0 && v[1] > v[0])) throw std::invalid_argument("annulus needs 0 < r_in < r_out");
    spec.shape = AnnulusDomain{v[0], v[1]};
    return spec;
  }
  if (kind == "polyline") {
    std::ifstream in{std::string(params)};
    if (!in) throw std::invalid_argument("cannot open polyline file '" + std::string(params) + "'");
    Polyline poly;
    double x = 0.0;
    double y = 0.0;
    while (in >> x >> y) poly.points.emplace_back(x, y);
    if (poly.points.size() < 3) throw std::invalid_argument("polyline needs at least 3 points");
    spec.shape = BoundaryCurve{poly};
    return spec;
  }

  const auto v = parse_numbers(params, kind);
  const ConformalModel model = build_model(space);
  if (kind == "ball") {
    if (v.size() != 1 && v.size() != 3) throw std::invalid_argument("ball needs R or R,cx,cy");
    if (!(v[0] > 0.0)) throw std::invalid_argument("ball radius must be positive");
    GeodesicDisk disk;
    disk.radius = v[0];
    if (v.size() == 3) disk.center = model.exp_origin({v[1], v[2]});
    spec.shape = BoundaryCurve{disk};
    return spec;
  }
  if (kind == "ellipse") {
    if (v.size() != 2 && v.size() != 3 && v.size() != 5) {
      throw std::invalid_argument("ellipse needs a,b[,angle[,cx,cy]]");
    }
    Ellipse e;
    e.semi_a = v[0];
    e.semi_b = v[1];
    if (v.size() >= 3) e.angle = v[2];
    if (v.size() == 5) e.offset = {v[3], v[4]};
    if (!(e.semi_a > 0.0 && e.semi_b > 0.0)) throw std::invalid_argument("ellipse axes must be positive");
    spec.shape = BoundaryCurve{e};
    return spec;
  }
  if (kind == "peanut") {
    if (v.size() != 2 && v.size() != 3 && v.size() != 5) {
      throw std::invalid_argument("peanut needs a,delta[,angle[,cx,cy]]");
    }
    Peanut p;
    p.semi_a = v[0];
    p.delta = v[1];
    if (v.size() >= 3) p.angle = v[2];
    if (v.size() == 5) p.offset = {v[3], v[4]};
    if (!(p.semi_a > 0.0) || !(p.delta >= 0.0 && p.delta < 1.0)) {
      throw std::invalid_argument("peanut needs a > 0 and 0 <= delta < 1");
    }
    spec.shape = BoundaryCurve{p};
    return spec;
  }
  throw std::invalid_argument("unknown domain kind '" + std::string(kind) + "'");
}

CenterResult select_center(const ConformalModel& model, const Mesh& mesh, const Eigen::VectorXd& weights,
                           const ExtendedProfile& G, double tol_rel) {
  const double total = weights.sum();
  Point bary{0.0, 0.0};
  double min_x = mesh.vertices[0].real(), max_x = min_x, min_y = mesh.vertices[0].imag(), max_y = min_y;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    bary += weights(static_cast<Eigen::Index>(v)) * mesh.vertices[v];
    min_x = std::min(min_x, mesh.vertices[v].real());
    max_x = std::max(max_x, mesh.vertices[v].real());
    min_y = std::min(min_y, mesh.vertices[v].imag());
    max_y = std::max(max_y, mesh.vertices[v].imag());
  }
  bary /= total;
  const double extent = std::max(max_x - min_x, max_y - min_y);

  CenterResult result;
  std::ostringstream trace;
  std::vector<Point> starts{bary};
  for (const Point dir : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
    const Point s = bary + 0.2 * extent * dir;
    if (inside_loop(mesh, s)) starts.push_back(s);
  }
  std::optional<NewtonOutcome> chosen;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    trace << (i == 0 ? "" : " |") << " start" << i;
    const NewtonOutcome out = newton_center(model, mesh, weights, G, starts[i], extent, tol_rel, trace);
    if (!out.converged) continue;
    if (!chosen) chosen = out;
    const bool known = std::any_of(result.all_centers.begin(), result.all_centers.end(),
                                   [&](Point c) { return std::abs(c - out.center) <= 1e-7 * extent; });
    if (!known) result.all_centers.push_back(out.center);
  }
  result.method = "newton";
  if (!chosen) {
    // Coarse search over a subsample of vertices, then Newton from the best.
    const std::size_t stride = std::max<std::size_t>(1, mesh.vertices.size() / 400);
    std::vector<std::pair<double, Point>> ranked;
    for (std::size_t v = 0; v < mesh.vertices.size(); v += stride) {
      const Moments m = moments(model, mesh, weights, G, mesh.vertices[v]);
      ranked.emplace_back(std::abs(m.value) / m.scale, mesh.vertices[v]);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()) && !chosen; ++i) {
      trace << " | grid" << i;
      const NewtonOutcome out = newton_center(model, mesh, weights, G, ranked[i].second, extent, tol_rel, trace);
      if (out.converged) {
        chosen = out;
        result.all_centers.push_back(out.center);
      }
    }
    result.method = "grid+newton";
  }
  result.trace = trace.str();
  if (!chosen) throw ConvergenceError("center selection failed:" + result.trace);
  result.center = chosen->center;
  result.residual = std::abs(chosen->m.value);
  result.scale = chosen->m.scale;
  result.iterations = chosen->iterations;
  return result;
}

Eigen::MatrixXd trial_functions(const ConformalModel& model, const Mesh& mesh, const ExtendedProfile& G,
                                Point center) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(mesh.vertices.size()), 2);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Point d = model.to_origin(center, mesh.vertices[i]);
    const double rho = std::abs(d);
    if (rho == 0.0) continue;
    const double g = G.value(model.geodesic_radius(rho));
    v(static_cast<Eigen::Index>(i), 0) = g * d.real() / rho;
    v(static_cast<Eigen::Index>(i), 1) = g * d.imag() / rho;
  }
  return v;
}

Rotation orthogonalize(const Eigen::MatrixXd& q) {
  const QrFactors f = householder_qr(q);
  Rotation rot;
  if (f.rank_deficient) {
    rot.a = Eigen::MatrixXd::Identity(q.rows(), q.rows());
    rot.rank_deficient = true;
    rot.warning = "moment matrix q is rank deficient; using the identity rotation";
    return rot;
  }
  rot.a = f.q.transpose();
  return rot;
}

std::vector<Check> trial_bound_check(const TrialSetup& setup, const CheckContext& context) {
  const auto& K = setup.system.stiffness;
  const auto& M = setup.system.mass;
  const auto& U = setup.spectrum.eigenvectors;
  const Eigen::Index m = setup.rotated.cols();
  std::vector<Check> checks;
  const auto add = [&](Check c) {
    c.inputs = {context.space.to_string(), context.domain_hash, context.h, context.solver_tags};
    c.provenance = context.provenance;
    checks.push_back(std::move(c));
  };

  const double rel_center = setup.center.residual / setup.center.scale;
  add(make_check_with_margin("center_condition", "discrete first moments of G(r_o) omega_i vanish", Relation::leq,
                             rel_center, 0.0, -rel_center, 1e-8));

  const Eigen::MatrixXd t = setup.rotation.a * setup.q;
  double lower = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) lower = std::max(lower, std::abs(t(i, j)));
  }
  lower /= std::max(setup.q.norm(), std::numeric_limits<double>::min());
  add(make_check_with_margin("qr_upper_triangular", "rotated moment matrix a q is upper triangular",
                             Relation::leq, lower, 0.0, -lower, 1e-10));

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(K.rows());
  const double norm1 = std::sqrt(ones.dot(M * ones));
  double worst_const = 0.0;
  double worst_eigen = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::VectorXd vi = setup.rotated.col(i);
    const Eigen::VectorXd mv = M * vi;
    const double nv = std::sqrt(vi.dot(mv));
    worst_const = std::max(worst_const, std::abs(ones.dot(mv)) / (nv * norm1));
    for (Eigen::Index j = 1; j <= i; ++j) {
      const Eigen::VectorXd uj = U.col(j);
      worst_eigen = std::max(worst_eigen, std::abs(uj.dot(mv)) / (nv * std::sqrt(uj.dot(M * uj))));
    }
  }
  add(make_check_with_margin("orthogonality.constant", "rotated trial functions are orthogonal to constants",
                             Relation::leq, worst_const, 0.0, -worst_const, 1e-6));
  add(make_check_with_margin("orthogonality.eigenvectors", "trial function i is orthogonal to u_1..u_{i-1}",
                             Relation::leq, worst_eigen, 0.0, -worst_eigen, 1e-6));

  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::VectorXd vi = setup.rotated.col(i);
    const double mass = vi.dot(M * vi);
    const double energy = vi.dot(K * vi);
    const double mu = setup.spectrum.eigenvalues[static_cast<std::size_t>(i + 1)];
    const double rhs = energy / mu;
    add(make_check_with_margin("trial_bound." + std::to_string(i + 1),
                               "int v_i^2 <= (1/mu_i) int |grad v_i|^2 (discrete)", Relation::leq, mass, rhs,
                               rhs / mass - 1.0, 1e-6));
  }
  return checks;
}

Check check_main_inequality(const Space& space, double area, const std::vector<double>& mu,
                            const CheckContext& context, bool ball_domain, std::optional<double> mu1_ball) {
  const int L = inequality_terms(space);
  if (mu.size() < static_cast<std::size_t>(L)) {
    throw std::invalid_argument("main inequality needs " + std::to_string(L) + " eigenvalues");
  }
  double radius = 0.0;
  try {
    radius = radius_from_volume(space, area);
  } catch (const RangeError& e) {
    throw HypothesisError(std::string("hypothesis violated: ") + e.what());
  }
  const double mu_ball = mu1_ball ? *mu1_ball : solve_ball(space, radius).mu1;
  double lhs = 0.0;
  for (int i = 0; i < L; ++i) lhs += 1.0 / mu[static_cast<std::size_t>(i)];
  const double rhs = L / mu_ball;
  const std::string claim = "sum_{i<=" + std::to_string(L) + "} 1/mu_i(Omega) >= " + std::to_string(L) +
                            "/mu_1(B), |B| = |Omega|";
  Check c = ball_domain
                ? make_check_with_margin("main_inequality", claim + " (ball: equality case)", Relation::equal, lhs,
                                         rhs, lhs - rhs, 1e-3)
                : make_check_with_margin("main_inequality", claim, Relation::geq, lhs, rhs, lhs - rhs, 1e-8 * rhs);
  c.inputs = {space.to_string(), context.domain_hash, context.h, context.solver_tags};
  c.provenance = context.provenance;
  return c;
}

std::vector<Check> check_chain(const ConformalModel& model, const TrialSetup& setup, const CheckContext& context) {
  const Space& space = model.space();
  const int m = space.real_dim();
  const int L = inequality_terms(space);
  const double R = setup.ball.radius;
  const ExtendedProfile& G = setup.G;
  const Point o = setup.center.center;
  const Eigen::MatrixXd& a = setup.rotation.a;
  std::vector<double> mu(setup.spectrum.eigenvalues.begin() + 1, setup.spectrum.eigenvalues.end());

  const auto rule = mesh_quadrature(model, setup.mesh, RefineSpec{o, R, 7, 6});
  double omega_g2 = 0.0;
  double omega_pot = 0.0;
  std::vector<double> omega_radial(static_cast<std::size_t>(m), 0.0);
  std::vector<double> omega_angular(static_cast<std::size_t>(m), 0.0);
  for (const auto& qp : rule) {
    const Point d = model.to_origin(o, qp.z);
    const double rho = std::abs(d);
    const double r = model.geodesic_radius(rho);
    const double g = G.value(r);
    const double dg = G.derivative(r);
    const double pot = r > 0.0 ? g * g * safe_potential(space, r) : 1.0;
    const Eigen::Vector2d omega = rho > 0.0 ? Eigen::Vector2d(d.real() / rho, d.imag() / rho) : Eigen::Vector2d(1, 0);
    omega_g2 += qp.weight * g * g;
    omega_pot += qp.weight * pot;
    for (int i = 0; i < m; ++i) {
      const double w = a.row(i).dot(omega);
      omega_radial[static_cast<std::size_t>(i)] += qp.weight * dg * dg * w * w;
      // On a circle, |grad^{S_r} w|^2 = (-H')(1 - w^2) for a unit linear combination.
      omega_angular[static_cast<std::size_t>(i)] += qp.weight * pot * (1.0 - w * w);
    }
  }
  const double ball_g2 = ball_integral(space, R, [&](double r) { return std::pow(G.value(r), 2); });
  const double ball_dg2 = ball_integral(space, R, [&](double r) { return std::pow(G.derivative(r), 2); });
  const double ball_pot =
      ball_integral(space, R, [&](double r) { return std::pow(G.value(r), 2) * safe_potential(space, r); });

  std::vector<Check> checks;
  const auto add = [&](Check c, const std::string& provenance) {
    c.inputs = {space.to_string(), context.domain_hash, context.h, context.solver_tags};
    c.provenance = provenance;
    checks.push_back(std::move(c));
  };

  // Discrete sum of the trial bounds.
  double trial_lhs = 0.0;
  double trial_rhs = 0.0;
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd vi = setup.rotated.col(i);
    trial_lhs += vi.dot(setup.system.mass * vi);
    trial_rhs += vi.dot(setup.system.stiffness * vi) / mu[static_cast<std::size_t>(i)];
  }
  add(make_check("chain.trial_sum", "sum_i int v_i^2 <= sum_i (1/mu_i) int |grad v_i|^2 (discrete)", Relation::leq,
                 trial_lhs, trial_rhs, 1e-6, true),
      context.provenance);

  for (int i = 0; i < m; ++i) {
    add(make_check("chain.radial_part." + std::to_string(i + 1),
                   "int_Omega G'^2 omega_i^2 <= (1/m) int_B G'^2", Relation::leq,
                   omega_radial[static_cast<std::size_t>(i)], ball_dg2 / m, 1e-6, true),
        "quadrature");
  }

  double inv_sum_L = 0.0;
  for (int i = 0; i < L; ++i) inv_sum_L += 1.0 / mu[static_cast<std::size_t>(i)];
  double inv_sum_m = 0.0;
  for (int i = 0; i < m; ++i) inv_sum_m += 1.0 / mu[static_cast<std::size_t>(i)];
  double angular_lhs = 0.0;
  for (int i = 0; i < m; ++i) angular_lhs += omega_angular[static_cast<std::size_t>(i)] / mu[static_cast<std::size_t>(i)];
  add(make_check("chain.angular_part",
                 "sum_i (1/mu_i) int G^2 |grad^S omega_i|^2 <= (1/L) sum_{i<=L} (1/mu_i) int_Omega G^2 (-H')",
                 Relation::leq, angular_lhs, inv_sum_L / L * omega_pot, 1e-8, true),
      context.provenance);

  add(make_check("chain.combined",
                 "int_Omega G^2 <= sum_i int_B G'^2 / (m mu_i) + (1/L) sum_{i<=L} (1/mu_i) int_Omega G^2 (-H')",
                 Relation::leq, omega_g2, inv_sum_m / m * ball_dg2 + inv_sum_L / L * omega_pot, 1e-2, true),
      context.provenance);

  add(make_check("chain.potential_rearrangement", "int_Omega G^2 (-H') <= int_B G^2 (-H')", Relation::leq,
                 omega_pot, ball_pot, 1e-8, true),
      "quadrature");
  add(make_check("chain.mass_rearrangement", "int_B G^2 <= int_Omega G^2", Relation::leq, ball_g2, omega_g2, 1e-8,
                 true),
      "quadrature");
  add(make_check("chain.closing", "int_B G^2 <= (1/L) sum_{i<=L} (1/mu_i) int_B (G'^2 - G^2 H')", Relation::leq,
                 ball_g2, inv_sum_L / L * (ball_dg2 + ball_pot), 1e-2, true),
      context.provenance);
  add(make_check("ball.rayleigh_identity", "int_B (G'^2 - G^2 H') / int_B G^2 = mu_1(B)", Relation::equal,
                 (ball_dg2 + ball_pot) / ball_g2, setup.ball.mu1, 1e-8, true),
      "ball");
  return checks;
}

namespace {

// G^2 (-H') nonincreasing along the profile grid (up to pi/4 when compact).
Check profile_monotone_check(const Space& space, const ExtendedProfile& G, const CheckContext& context) {
  const RadialProfile sampled = G.sampled(256);
  const double limit = space.compact() ? kQuarterPi : G.r_max();
  double prev = std::numeric_limits<double>::quiet_NaN();
  double peak = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    const double r = sampled.grid()[i];
    if (r <= 0.0 || r > limit) continue;
    const double f = std::pow(sampled.values()[i], 2) * safe_potential(space, r);
    peak = std::max(peak, f);
    if (!std::isnan(prev)) worst = std::max(worst, f - prev);
    prev = f;
  }
  const double rel = worst / peak;
  Check c = make_check_with_margin("profile.monotone_potential", "G^2 (-H') is nonincreasing on the profile grid",
                                   Relation::leq, rel, 0.0, -rel, 1e-12);
  c.inputs = {space.to_string(), context.domain_hash, context.h, context.solver_tags};
  c.provenance = "ball";
  return c;
}

Json point_json(Point p) { return Json::array({p.real(), p.imag()}); }

Json matrix_json(const Eigen::MatrixXd& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

VerifyResult verify_fem(const Space& space, const DomainSpec& domain, const VerifyOptions& options) {
  const ConformalModel model = build_model(space);
  const auto& curve = std::get<BoundaryCurve>(domain.shape);
  const int m = space.real_dim();

  VerifyResult result;
  Mesh mesh = mesh_domain(model, curve, options.h, MeshOptions{options.jitter, options.seed});
  const MeshStats stats = mesh_stats(model, mesh);
  result.domain_text = mesh_text(mesh);

  FemSystem system = assemble(model, mesh, AssemblyOptions{options.threads});
  const int count = std::max(options.count, m);
  SpectrumResult spectrum = solve_spectrum(system.stiffness, system.mass, count + 1);
  spectrum.h_max = stats.h_max;
  spectrum.model = space.to_string();

  const double area = mesh_area(model, mesh);
  double radius = 0.0;
  try {
    radius = radius_from_volume(space, area);
  } catch (const RangeError& e) {
    throw HypothesisError(std::string("hypothesis violated: ") + e.what());
  }
  TrialSetup setup(solve_ball(space, radius, ShootingOptions{options.shooting_tol, 2001}));
  setup.mesh = std::move(mesh);
  setup.system = std::move(system);
  setup.spectrum = std::move(spectrum);
  setup.area = area;
  setup.G = extend_G(setup.ball);

  const Eigen::VectorXd weights = setup.system.mass * Eigen::VectorXd::Ones(setup.system.mass.rows());
  setup.center = select_center(model, setup.mesh, weights, setup.G);
  setup.v = trial_functions(model, setup.mesh, setup.G, setup.center.center);
  const Eigen::MatrixXd u = setup.spectrum.eigenvectors.middleCols(1, m);
  setup.q = setup.v.transpose() * (setup.system.mass * u);
  setup.rotation = orthogonalize(setup.q);
  setup.rotated = setup.v * setup.rotation.a.transpose();

  const CheckContext context{space, sha256_hex(result.domain_text), stats.h_max, {"fem-p1", "shooting"}, "fem"};
  Report& report = result.report;
  if (setup.rotation.rank_deficient) report.warnings.push_back(setup.rotation.warning);
  if (setup.center.all_centers.size() > 1) {
    report.warnings.push_back("center selection found " + std::to_string(setup.center.all_centers.size()) +
                              " distinct centers; the one reached from the barycenter is used");
  }

  if (space.compact()) {
    double reach = 0.0;
    double spread = 0.0;
    for (const auto& z : setup.mesh.vertices) {
      reach = std::max(reach, model.geodesic_radius(std::abs(z)));
      spread = std::max(spread, model.distance(setup.center.center, z));
    }
    Check contained = make_check("hypothesis.contained", "domain lies in the pi/4 ball about the chart origin",
                                 Relation::leq, reach, kQuarterPi, 1e-12, true);
    Check range = make_check("hypothesis.monotone_range", "max r_o over the domain <= pi/4", Relation::leq, spread,
                             kQuarterPi, 1e-12, true);
    if (!range.pass()) {
      range.status = Status::inconclusive;
      range.note = "points beyond pi/4 from o fall outside the range where G^2(-H') is known to decrease";
    }
    for (Check* c : {&contained, &range}) {
      c->inputs = {space.to_string(), context.domain_hash, context.h, context.solver_tags};
      c->provenance = "geometry";
      report.checks.push_back(*c);
    }
  }

  for (auto& c : trial_bound_check(setup, context)) report.checks.push_back(std::move(c));
  std::vector<double> mu(setup.spectrum.eigenvalues.begin() + 1, setup.spectrum.eigenvalues.end());
  report.checks.push_back(check_main_inequality(space, setup.area, mu, context, domain.is_ball(), setup.ball.mu1));
  for (auto& c : check_chain(model, setup, context)) report.checks.push_back(std::move(c));
  report.checks.push_back(profile_monotone_check(space, setup.G, context));

  Json centers = Json::array();
  for (const auto& c : setup.center.all_centers) centers.push_back(point_json(c));
  report.details = {
      {"space", space.to_string()},
      {"domain", domain.text},
      {"mesh", {{"vertices", stats.vertex_count}, {"triangles", stats.triangle_count}, {"h_max", stats.h_max},
                {"h_max_chart", stats.h_max_chart}, {"min_angle_deg", stats.min_angle_deg}}},
      {"area", setup.area},
      {"ball", {{"radius", setup.ball.radius}, {"mu1", setup.ball.mu1}, {"solver", to_string(setup.ball.solver)}}},
      {"eigenvalues", setup.spectrum.eigenvalues},
      {"eigen_residuals", setup.spectrum.residuals},
      {"center", {{"point", point_json(setup.center.center)}, {"residual", setup.center.residual},
                  {"scale", setup.center.scale}, {"method", setup.center.method}, {"all", centers}}},
      {"moments_q", matrix_json(setup.q)},
      {"rotation_a", matrix_json(setup.rotation.a)},
  };
  result.ball = setup.ball;
  result.setup = std::move(setup);
  return result;
}

VerifyResult verify_annulus(const Space& space, const AnnulusDomain& annulus, const VerifyOptions& options) {
  VerifyResult result;
  const int L = inequality_terms(space);
  AnnulusModes modes = solve_annulus(space, annulus.r_in, annulus.r_out, {0, 1}, std::max(options.annulus_modes, L),
                                     AnnulusOptions{options.shooting_tol, 1001});
  const std::vector<double> candidates = modes.candidate_spectrum(static_cast<std::size_t>(L));
  const double area = ball_volume(space, annulus.r_out) - ball_volume(space, annulus.r_in);
  double radius = 0.0;
  try {
    radius = radius_from_volume(space, area);
  } catch (const RangeError& e) {
    throw HypothesisError(std::string("hypothesis violated: ") + e.what());
  }
  const BallEig ball = solve_ball(space, radius, ShootingOptions{options.shooting_tol, 2001});
  const ExtendedProfile G = extend_G(ball, std::max(annulus.r_out, space.compact() ? kQuarterPi : radius + 10.0));

  result.domain_text = "annulus " + space.to_string() + " " + fmt(annulus.r_in) + " " + fmt(annulus.r_out);
  const CheckContext context{space, sha256_hex(result.domain_text), 0.0, {"annulus-pruefer", "shooting"},
                             "annulus-candidate"};
  Report& report = result.report;

  Check main = check_main_inequality(space, area, candidates, context, false, ball.mu1);
  main.note = std::string(kCandidateLabel) + "; candidate-based, a pass implies the theorem instance";
  if (!main.pass()) {
    main.status = Status::inconclusive;
    main.note = std::string(kCandidateLabel) + "; candidate data cannot refute the theorem";
  }
  report.checks.push_back(main);

  double worst_residual = 0.0;
  for (const auto& mode : modes.modes) worst_residual = std::max(worst_residual, mode.neumann_residual);
  Check neumann = make_check_with_margin("annulus.neumann_residual", "candidate modes satisfy f' = 0 at r_out",
                                         Relation::leq, worst_residual, 0.0, -worst_residual, 1e-6);
  neumann.inputs = main.inputs;
  neumann.provenance = "annulus-candidate";
  report.checks.push_back(neumann);

  const auto g2 = [&](double r) { return std::pow(G.value(r), 2); };
  const auto pot = [&](double r) { return g2(r) * safe_potential(space, r); };
  const auto dg2 = [&](double r) { return std::pow(G.derivative(r), 2); };
  const auto add = [&](Check c, const std::string& provenance) {
    c.inputs = main.inputs;
    c.provenance = provenance;
    report.checks.push_back(std::move(c));
  };
  const double ball_g2 = ball_integral(space, radius, g2);
  const double ball_pot = ball_integral(space, radius, pot);
  const double ball_dg2 = ball_integral(space, radius, dg2);
  const auto shell = [&](const std::function<double(double)>& f) {
    // split at R where G has its kink
    if (radius <= annulus.r_in || radius >= annulus.r_out) return shell_integral(space, annulus.r_in, annulus.r_out, f);
    return shell_integral(space, annulus.r_in, radius, f) + shell_integral(space, radius, annulus.r_out, f);
  };
  add(make_check("chain.potential_rearrangement", "int_A G^2 (-H') <= int_B G^2 (-H')", Relation::leq, shell(pot),
                 ball_pot, 1e-8, true),
      "quadrature");
  add(make_check("chain.mass_rearrangement", "int_B G^2 <= int_A G^2", Relation::leq, ball_g2, shell(g2), 1e-8, true),
      "quadrature");
  add(make_check("ball.rayleigh_identity", "int_B (G'^2 - G^2 H') / int_B G^2 = mu_1(B)", Relation::equal,
                 (ball_dg2 + ball_pot) / ball_g2, ball.mu1, 1e-8, true),
      "ball");
  report.checks.push_back(profile_monotone_check(space, G, context));

  Json list = Json::array();
  for (const auto& mode : modes.modes) {
    list.push_back({{"mode", mode.mode}, {"radial_index", mode.radial_index}, {"eigenvalue", mode.eigenvalue},
                    {"multiplicity", mode.multiplicity}, {"multiplet", mode.multiplet}});
  }
  report.details = {
      {"space", space.to_string()},
      {"domain", "annulus:" + fmt(annulus.r_in) + "," + fmt(annulus.r_out)},
      {"label", kCandidateLabel},
      {"volume", area},
      {"ball", {{"radius", ball.radius}, {"mu1", ball.mu1}, {"solver", to_string(ball.solver)}}},
      {"candidate_spectrum", candidates},
      {"modes", list},
  };
  result.ball = ball;
  result.annulus = std::move(modes);
  return result;
}

VerifyResult verify(const Space& space, const DomainSpec& domain, const VerifyOptions& options) {
  if (const auto* a = std::get_if<AnnulusDomain>(&domain.shape)) return verify_annulus(space, *a, options);
  return verify_fem(space, domain, options);
}

}  // namespace ross
