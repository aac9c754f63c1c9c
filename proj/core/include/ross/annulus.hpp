#pragma once

// Separated Neumann spectrum of geodesic annuli for angular modes 0 and 1:
//   mode 0: f'' + H f' + mu f = 0
//   mode 1: f'' + H f' + (mu + H') f = 0
// with f'(r_in) = f'(r_out) = 0. Higher angular modes are not computed, so the
// returned list is a subset of the true spectrum ("candidate" spectrum): its
// i-th entry dominates the true i-th eigenvalue.

#include <string_view>
#include <vector>

#include "ross/geometry.hpp"
#include "ross/radial_profile.hpp"

namespace ross {

inline constexpr std::string_view kCandidateLabel = "candidate (modes 0,1 only)";

struct AnnulusMode {
  int mode = 0;          // angular mode index, 0 or 1
  int radial_index = 0;  // number of interior zeros of the profile
  double eigenvalue = 0.0;
  int multiplicity = 1;  // 1 for mode 0, m for mode 1
  int multiplet = 0;     // entries within 1e-9 relative share an id
  double neumann_residual = 0.0;  // max(|f'(r_in)|, |f'(r_out)|) / max|f'|
  RadialProfile profile;
};

struct AnnulusModes {
  Space space;
  double r_in = 0.0;
  double r_out = 0.0;
  std::vector<AnnulusMode> modes;  // ascending, ties ordered by mode index

  /// mu_1 <= mu_2 <= ... of the candidate spectrum, expanded by multiplicity.
  std::vector<double> candidate_spectrum(std::size_t count) const;
};

struct AnnulusOptions {
  double tol = 1e-10;
  std::size_t grid_points = 1001;
};

AnnulusModes solve_annulus(const Space& space, double r_in, double r_out,
                           const std::vector<int>& modes, int count,
                           const AnnulusOptions& options = {});

}  // namespace ross
