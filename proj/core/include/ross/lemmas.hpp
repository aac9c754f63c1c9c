#pragma once

// Grid checks of the radial lemmas: the gradient-sum identity, the per-mode
// gradient bounds, the lower bound for mu_1 of balls within pi/4 and the sign
// of s(r).

#include <vector>

#include "ross/geometry.hpp"
#include "ross/report.hpp"

namespace ross {

struct LemmaOptions {
  std::size_t grid = 1000;     // radial grid size, >= 100
  std::size_t radii = 5;       // ball radii per space
  double noncompact_reach = 20.0;
  double noncompact_max_radius = 3.0;
  int count_offset = 0;  // added to l or p in the gradient bound; test hook
};

/// Equally spaced interior radii of (0, max] excluding 0.
std::vector<double> lemma_grid(double max, std::size_t n);

/// |gradient_sum + H'| <= 1e-12 |H'| on (0, pi/2) or (0, reach].
Check check_identity(const Space& space, const LemmaOptions& options);

/// L * gradient_bound <= -H' on (0, pi/4] or (0, reach], L = l or p.
Check check_gradient_bound(const Space& space, const LemmaOptions& options);

/// mu_1(B_R) >= 2(m + k) for R in (0, pi/4]; compact spaces only.
Check check_ball_lower_bound(const Space& space, const LemmaOptions& options);

/// max s(r) <= 1e-8 max |g'| on the solved profiles.
Check check_sign_function(const Space& space, const LemmaOptions& options);

/// Radii used by the ball checks for a space.
std::vector<double> lemma_radii(const Space& space, const LemmaOptions& options);

}  // namespace ross
