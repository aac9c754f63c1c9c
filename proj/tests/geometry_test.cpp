#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ross/errors.hpp"
#include "ross/geometry.hpp"

using ross::Space;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Space> spaces_up_to_16() {
  std::vector<Space> out;
  for (bool compact : {true, false}) {
    for (int n = 2; n <= 16; ++n) out.push_back(Space::make(1, n, compact));
    for (int n = 1; n <= 8; ++n) out.push_back(Space::make(2, n, compact));
    for (int n = 1; n <= 4; ++n) out.push_back(Space::make(4, n, compact));
    out.push_back(Space::make(8, 2, compact));
  }
  return out;
}

double interior_top(const Space& s) { return s.compact() ? kPi / 2.0 * 0.999 : 20.0; }

}  // namespace

TEST(Space, ParsesAndPrints) {
  const Space s = Space::parse("K2_n2_c");
  EXPECT_EQ(s.field_dim(), 2);
  EXPECT_EQ(s.quat_dim(), 2);
  EXPECT_TRUE(s.compact());
  EXPECT_EQ(s.real_dim(), 4);
  EXPECT_EQ(s.to_string(), "K2_n2_c");
  EXPECT_EQ(Space::parse("K8_n2_nc").to_string(), "K8_n2_nc");
}

TEST(Space, RejectsInvalidCombinations) {
  EXPECT_ANY_THROW(Space::make(3, 2, true));
  EXPECT_ANY_THROW(Space::make(8, 3, false));
  EXPECT_ANY_THROW(Space::make(1, 1, false));
  EXPECT_ANY_THROW(Space::parse("K2_n2"));
  EXPECT_ANY_THROW(Space::parse("nonsense"));
}

TEST(Density, ClosedFormValues) {
  EXPECT_NEAR(ross::density(Space::make(1, 2, true), kPi / 2.0 - 1e-12), 1.0, 1e-12);
  EXPECT_NEAR(ross::density(Space::make(2, 1, true), kPi / 4.0), 0.5, 1e-15);
  const double s1 = std::sinh(1.0);
  EXPECT_NEAR(ross::density(Space::make(1, 3, false), 1.0), s1 * s1, 1e-14);
}

TEST(Density, RangeErrorNamesRadius) {
  try {
    ross::density(Space::make(2, 1, true), 2.0);
    FAIL() << "expected a range error";
  } catch (const ross::RangeError& e) {
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
  EXPECT_THROW(ross::density(Space::make(1, 2, false), -0.5), ross::RangeError);
  EXPECT_THROW(ross::curvature_trace(Space::make(1, 2, false), 0.0), ross::RangeError);
}

TEST(CurvatureTrace, ClosedFormValues) {
  EXPECT_NEAR(ross::curvature_trace(Space::make(1, 2, true), kPi / 4.0), 1.0, 1e-15);
  EXPECT_NEAR(-ross::curvature_trace_deriv(Space::make(2, 2, true), kPi / 4.0), 8.0, 1e-13);
}

TEST(CurvatureTrace, LeadingOrderAtOrigin) {
  for (const Space& s : spaces_up_to_16()) {
    const double r = 1e-6;
    EXPECT_NEAR(ross::curvature_trace(s, r) * r, s.real_dim() - 1, 1e-9) << s.to_string();
  }
}

TEST(CurvatureTrace, MatchesLogDerivativeOfDensity) {
  for (const Space& s : spaces_up_to_16()) {
    const double top = s.compact() ? 1.5 : 5.0;
    for (int i = 1; i <= 50; ++i) {
      const double r = top * i / 51.0;
      const double step = 1e-5 * r;
      const double fd = (std::log(ross::density(s, r + step)) - std::log(ross::density(s, r - step))) / (2.0 * step);
      const double h = ross::curvature_trace(s, r);
      EXPECT_NEAR(fd, h, 1e-8 * std::max(1.0, std::abs(h))) << s.to_string() << " r=" << r;
    }
  }
}

TEST(CurvatureTrace, DerivativeMatchesFiniteDifference) {
  for (const Space& s : spaces_up_to_16()) {
    const double top = s.compact() ? 1.5 : 8.0;
    for (int i = 1; i <= 40; ++i) {
      const double r = top * i / 41.0;
      const double step = 1e-5 * r;
      const double fd = (ross::curvature_trace(s, r + step) - ross::curvature_trace(s, r - step)) / (2.0 * step);
      const double dh = ross::curvature_trace_deriv(s, r);
      EXPECT_NEAR(fd, dh, 1e-6 * std::max(1.0, std::abs(dh))) << s.to_string() << " r=" << r;
    }
  }
}

TEST(CurvatureTrace, NoCancellationForLargeRadius) {
  // For k = m noncompact, -H' = (m-1) / (sinh^2 cosh^2) = 4 (m-1) / sinh^2(2r).
  for (int k : {2, 4}) {
    const Space s = Space::make(k, 1, false);
    for (double r : {5.0, 12.0, 19.5}) {
      const double sh = std::sinh(2.0 * r);
      const double expected = 4.0 * (k - 1) / (sh * sh);
      EXPECT_NEAR(-ross::curvature_trace_deriv(s, r) / expected, 1.0, 1e-13) << s.to_string() << " r=" << r;
    }
  }
}

TEST(ModeConstants, DocumentedExamples) {
  const auto a = ross::mode_constants(Space::make(1, 5, false));
  EXPECT_EQ(a.l, 4);
  EXPECT_EQ(a.p, 4);
  const auto b = ross::mode_constants(Space::make(2, 2, true));
  EXPECT_EQ(b.l, 1);
  EXPECT_EQ(b.p, 2);
  const auto c = ross::mode_constants(Space::make(2, 1, true));
  EXPECT_EQ(c.l, 1);
  EXPECT_EQ(c.p, 1);
}

TEST(ModeConstants, MatchCaseTableByEnumeration) {
  for (const Space& s : spaces_up_to_16()) {
    const int k = s.field_dim();
    const int m = s.real_dim();
    int l = 0;
    if (k == 1 || k == m) {
      l = m - 1;
    } else {
      while (2 * (l + 1) <= m - k + 1) ++l;  // largest integer not above (m-k+1)/2
    }
    const int p = k < m ? k * (s.quat_dim() - 1) : m - 1;
    const auto mc = ross::mode_constants(s);
    EXPECT_EQ(mc.l, l) << s.to_string();
    EXPECT_EQ(mc.p, p) << s.to_string();
    EXPECT_LE(mc.l, m - 1);
    EXPECT_LE(mc.p, m - 1);
    EXPECT_EQ(ross::inequality_terms(s), s.compact() ? l : p);
  }
}

TEST(GradientSum, ClosedFormValues) {
  EXPECT_NEAR(ross::gradient_sum(Space::make(2, 2, true), kPi / 4.0), 8.0, 1e-13);
  const double s1 = std::sinh(1.0);
  EXPECT_NEAR(ross::gradient_sum(Space::make(1, 3, false), 1.0), 2.0 / (s1 * s1), 1e-14);
  EXPECT_NEAR(ross::gradient_sum(Space::make(1, 3, false), 1.0), 1.4482, 1e-4);
}

TEST(GradientSum, EqualsMinusCurvatureDerivative) {
  for (const Space& s : spaces_up_to_16()) {
    const double top = interior_top(s);
    for (int i = 1; i <= 1000; ++i) {
      const double r = top * i / 1000.0;
      const double dh = ross::curvature_trace_deriv(s, r);
      ASSERT_LE(std::abs(ross::gradient_sum(s, r) + dh), 1e-12 * std::abs(dh)) << s.to_string() << " r=" << r;
    }
  }
}

TEST(GradientBound, DocumentedExamples) {
  const Space cp2 = Space::make(2, 2, true);
  EXPECT_NEAR(ross::gradient_bound(cp2, kPi / 4.0), 4.0, 1e-13);
  EXPECT_LE(ross::gradient_bound(cp2, kPi / 4.0), -ross::curvature_trace_deriv(cp2, kPi / 4.0) / 1.0);

  const Space h2 = Space::make(1, 2, false);
  EXPECT_NEAR(ross::gradient_bound(h2, 1.0), -ross::curvature_trace_deriv(h2, 1.0), 1e-14);

  const Space hh2 = Space::make(4, 2, false);
  EXPECT_LE(ross::gradient_bound(hh2, 2.0), -ross::curvature_trace_deriv(hh2, 2.0) / 4.0);
}

TEST(GradientBound, ClosesAgainstModeCount) {
  for (const Space& s : spaces_up_to_16()) {
    const auto mc = ross::mode_constants(s);
    const int L = s.compact() ? mc.l : mc.p;
    const double top = s.compact() ? ross::kQuarterPi : 20.0;
    for (int i = 1; i <= 1000; ++i) {
      const double r = top * i / 1000.0;
      const double minus_dh = ross::gradient_sum(s, r);
      ASSERT_GE(minus_dh - L * ross::gradient_bound(s, r), -1e-12 * minus_dh) << s.to_string() << " r=" << r;
    }
  }
}

TEST(GradientBound, CompactDomainIsQuarterPi) {
  EXPECT_THROW(ross::gradient_bound(Space::make(2, 1, true), 1.0), ross::RangeError);
}

TEST(BallVolume, ClosedForms) {
  const Space h2 = Space::make(1, 2, false);
  for (double R : {0.1, 0.7, 2.0, 5.0}) {
    EXPECT_NEAR(ross::ball_volume(h2, R) / (2.0 * kPi * (std::cosh(R) - 1.0)), 1.0, 1e-12);
  }
  EXPECT_NEAR(ross::ball_volume(Space::make(2, 1, true), kPi / 4.0), kPi / 2.0, 1e-13);
  // Round sphere S^3: |S^2| * int_0^R sin^2 = 2 pi (R - sin R cos R).
  const double R = 0.6;
  EXPECT_NEAR(ross::ball_volume(Space::make(1, 3, true), R), 2.0 * kPi * (R - std::sin(R) * std::cos(R)), 1e-13);
}

TEST(BallVolume, RadiusRoundTrip) {
  for (const Space& s : spaces_up_to_16()) {
    for (double R : {0.05, 0.3, 0.7}) {
      const double back = ross::radius_from_volume(s, ross::ball_volume(s, R));
      EXPECT_NEAR(back, R, 1e-10 * R) << s.to_string();
    }
  }
}

TEST(BallVolume, CompactVolumeBeyondQuarterPiIsRejected) {
  const Space cp1 = Space::make(2, 1, true);
  try {
    ross::radius_from_volume(cp1, 2.0);
    FAIL() << "expected a range error";
  } catch (const ross::RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("radius constraint violated"), std::string::npos);
  }
  EXPECT_THROW(ross::ball_volume(cp1, 0.9), ross::RangeError);
  EXPECT_THROW(ross::radius_from_volume(cp1, -1.0), ross::RangeError);
}
