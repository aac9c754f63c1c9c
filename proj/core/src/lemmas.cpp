#include "ross/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ross/radial_solver.hpp"

namespace ross {

namespace {

Check tagged(Check c, const Space& space, std::vector<std::string> tags, std::string provenance) {
  c.inputs.space = space.to_string();
  c.inputs.solver_tags = std::move(tags);
  c.provenance = std::move(provenance);
  return c;
}

void require_grid(const LemmaOptions& options) {
  if (options.grid < 100) throw std::invalid_argument("lemma grids need at least 100 points");
}

}  // namespace

std::vector<double> lemma_grid(double max, std::size_t n) {
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = max * static_cast<double>(i + 1) / static_cast<double>(n);
  return r;
}

std::vector<double> lemma_radii(const Space& space, const LemmaOptions& options) {
  const double top = space.compact() ? kQuarterPi : options.noncompact_max_radius;
  return lemma_grid(top, options.radii);
}

Check check_identity(const Space& space, const LemmaOptions& options) {
  require_grid(options);
  // (0, pi/2) open: stop one step short of the cut locus.
  const double top = space.compact() ? std::numbers::pi / 2.0 * static_cast<double>(options.grid) /
                                           static_cast<double>(options.grid + 1)
                                     : options.noncompact_reach;
  double worst = 0.0;
  for (double r : lemma_grid(top, options.grid)) {
    const double dh = curvature_trace_deriv(space, r);
    worst = std::max(worst, std::abs(gradient_sum(space, r) + dh) / std::abs(dh));
  }
  return tagged(make_check_with_margin("identity.gradient_sum", "sum_i |grad^S omega_i|^2 = -H'", Relation::equal,
                                       worst, 0.0, worst, 1e-12),
                space, {"closed-form"}, "closed-form");
}

Check check_gradient_bound(const Space& space, const LemmaOptions& options) {
  require_grid(options);
  const int L = inequality_terms(space) + options.count_offset;
  const double top = space.compact() ? kQuarterPi : options.noncompact_reach;
  double worst = std::numeric_limits<double>::infinity();
  double at = 0.0;
  for (double r : lemma_grid(top, options.grid)) {
    const double minus_dh = -curvature_trace_deriv(space, r);
    const double rel = (minus_dh - L * gradient_bound(space, r)) / minus_dh;
    if (rel < worst) {
      worst = rel;
      at = r;
    }
  }
  Check c = make_check_with_margin("bound.gradient",
                                   std::to_string(L) + " * max_i |grad^S omega_i|^2 <= -H'", Relation::leq,
                                   L * gradient_bound(space, at), -curvature_trace_deriv(space, at), worst, 1e-12);
  return tagged(std::move(c), space, {"closed-form"}, "closed-form");
}

Check check_ball_lower_bound(const Space& space, const LemmaOptions& options) {
  if (!space.compact()) throw std::invalid_argument("the ball lower bound concerns compact spaces");
  const double bound = 2.0 * (space.real_dim() + space.field_dim());
  double lowest = std::numeric_limits<double>::infinity();
  for (double R : lemma_radii(space, options)) lowest = std::min(lowest, solve_ball(space, R).mu1);
  return tagged(make_check_with_margin("lemma.ball_lower_bound", "mu_1(B_R) >= 2(m+k) for R <= pi/4",
                                       Relation::geq, lowest, bound, lowest - bound, 1e-6),
                space, {"shooting"}, "ball");
}

Check check_sign_function(const Space& space, const LemmaOptions& options) {
  double worst = -std::numeric_limits<double>::infinity();
  double worst_abs = 0.0;
  for (double R : lemma_radii(space, options)) {
    const SignFunction s = sign_function(solve_ball(space, R));
    const double rel = s.max_value / s.slope_scale;
    if (rel > worst) {
      worst = rel;
      worst_abs = s.max_value;
    }
  }
  return tagged(make_check_with_margin("lemma.sign_function", "s(r) <= 0 on (0, R)", Relation::leq, worst_abs, 0.0,
                                       -worst, 1e-8),
                space, {"shooting"}, "ball");
}

}  // namespace ross
