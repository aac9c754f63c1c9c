#pragma once

// Closed-form radial geometry of the rank-one symmetric spaces in geodesic
// polar coordinates about a point. Compact spaces use the normalization with
// sectional curvature in [1, 4]; noncompact ones the dual [-4, -1].

#include <numbers>
#include <string>
#include <string_view>

namespace ross {

/// A rank-one symmetric space: K^n with K of real dimension k in {1,2,4,8}.
class Space {
 public:
  /// Validates the invariants (k in {1,2,4,8}, k=8 => n=2, m=k*n >= 2).
  static Space make(int field_dim, int quat_dim, bool compact);

  /// Parses "K<k>_n<n>_<c|nc>", e.g. "K2_n2_c" for CP^2.
  static Space parse(std::string_view text);

  int field_dim() const { return k_; }
  int quat_dim() const { return n_; }
  bool compact() const { return compact_; }
  int real_dim() const { return k_ * n_; }

  std::string to_string() const;

  /// Largest admissible geodesic ball radius (pi/4 compact, +inf otherwise).
  double max_ball_radius() const;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  Space(int k, int n, bool compact) : k_(k), n_(n), compact_(compact) {}
  int k_;
  int n_;
  bool compact_;
};

struct ModeConstants {
  int l;  // number of terms in the compact inequality
  int p;  // number of terms in the noncompact inequality
};

inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

// Radial functions. Domain: (0, pi/2) compact, (0, inf) noncompact; a
// RangeError names the offending radius otherwise.
double density(const Space& space, double r);
double curvature_trace(const Space& space, double r);
double curvature_trace_deriv(const Space& space, double r);

/// -H'(r) as the closed-form sum of |grad^{S_r} omega_i|^2 over i.
double gradient_sum(const Space& space, double r);

/// Case-split maximum of a single |grad^{S_r} omega_i|^2. Compact domain is
/// (0, pi/4].
double gradient_bound(const Space& space, double r);

ModeConstants mode_constants(const Space& space);

/// The count used by the space's main inequality: l if compact, p otherwise.
int inequality_terms(const Space& space);

/// |S^{m-1}|, the area of the unit sphere in R^m.
double unit_sphere_area(int m);

/// Volume of a geodesic ball of radius R (compact: 0 < R <= pi/4).
double ball_volume(const Space& space, double R);

/// Inverse of ball_volume by monotone bisection. Compact volumes above the
/// pi/4 ball raise RangeError("radius constraint violated ...").
double radius_from_volume(const Space& space, double volume);

}  // namespace ross
