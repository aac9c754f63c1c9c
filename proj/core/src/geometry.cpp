#include "ross/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "ross/errors.hpp"

namespace ross {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

std::string describe(const Space& space, double r, const char* domain) {
  std::ostringstream os;
  os.precision(17);
  os << "radius r=" << r << " outside admissible domain " << domain << " for "
     << space.to_string();
  return os.str();
}

void check_radius(const Space& space, double r) {
  if (space.compact()) {
    if (!(r > 0.0 && r < kHalfPi)) throw RangeError(describe(space, r, "(0, pi/2)"));
  } else if (!(r > 0.0) || !std::isfinite(r)) {
    throw RangeError(describe(space, r, "(0, inf)"));
  }
}

// The trigonometric (compact) or hyperbolic (noncompact) pair sn, cs.
struct SinCos {
  double sn;
  double cs;
};

SinCos radial_pair(const Space& space, double r) {
  if (space.compact()) return {std::sin(r), std::cos(r)};
  return {std::sinh(r), std::cosh(r)};
}

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed space string '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Space Space::make(int field_dim, int quat_dim, bool compact) {
  const int k = field_dim;
  const int n = quat_dim;
  if (k != 1 && k != 2 && k != 4 && k != 8) {
    throw std::invalid_argument("field dimension k must be 1, 2, 4 or 8, got " + std::to_string(k));
  }
  if (n < 1) throw std::invalid_argument("dimension n must be positive, got " + std::to_string(n));
  if (k == 8 && n != 2) throw std::invalid_argument("k=8 only exists as the Cayley plane (n=2)");
  if (k * n < 2) throw std::invalid_argument("real dimension m=k*n must be at least 2");
  return Space(k, n, compact);
}

Space Space::parse(std::string_view text) {
  // K<k>_n<n>_<c|nc>
  const auto first = text.find('_');
  const auto second = first == std::string_view::npos ? first : text.find('_', first + 1);
  if (text.size() < 6 || text[0] != 'K' || second == std::string_view::npos ||
      text[first + 1] != 'n') {
    throw std::invalid_argument("malformed space string '" + std::string(text) +
                                "' (expected K<k>_n<n>_<c|nc>)");
  }
  const int k = parse_int(text.substr(1, first - 1), text);
  const int n = parse_int(text.substr(first + 2, second - first - 2), text);
  const auto tag = text.substr(second + 1);
  if (tag != "c" && tag != "nc") {
    throw std::invalid_argument("malformed space string '" + std::string(text) +
                                "' (suffix must be c or nc)");
  }
  return make(k, n, tag == "c");
}

std::string Space::to_string() const {
  return "K" + std::to_string(k_) + "_n" + std::to_string(n_) + (compact_ ? "_c" : "_nc");
}

double Space::max_ball_radius() const {
  return compact_ ? kQuarterPi : std::numeric_limits<double>::infinity();
}

double density(const Space& space, double r) {
  check_radius(space, r);
  const auto [sn, cs] = radial_pair(space, r);
  const int m = space.real_dim();
  const int k = space.field_dim();
  return std::pow(sn, m - 1) * std::pow(cs, k - 1);
}

double curvature_trace(const Space& space, double r) {
  check_radius(space, r);
  const int m = space.real_dim();
  const int k = space.field_dim();
  if (space.compact()) return (m - 1) / std::tan(r) - (k - 1) * std::tan(r);
  return (m - 1) / std::tanh(r) + (k - 1) * std::tanh(r);
}

double curvature_trace_deriv(const Space& space, double r) {
  check_radius(space, r);
  const auto [sn, cs] = radial_pair(space, r);
  const int m = space.real_dim();
  const int k = space.field_dim();
  if (space.compact()) return -(m - 1) / (sn * sn) - (k - 1) / (cs * cs);
  if (r < 1.0) return -(m - 1) / (sn * sn) + (k - 1) / (cs * cs);
  // 1/sinh^2 - 1/cosh^2 = 1/(sinh^2 cosh^2) avoids the cancellation for large r.
  return -(m - k) / (sn * sn) - (k - 1) / (sn * sn * cs * cs);
}

double gradient_sum(const Space& space, double r) {
  check_radius(space, r);
  const auto [sn, cs] = radial_pair(space, r);
  const int m = space.real_dim();
  const int k = space.field_dim();
  const double sn2 = sn * sn;
  return (m - k) / sn2 + (k - 1) / (sn2 * cs * cs);
}

double gradient_bound(const Space& space, double r) {
  if (space.compact() && !(r > 0.0 && r <= kQuarterPi)) {
    throw RangeError(describe(space, r, "(0, pi/4]"));
  }
  check_radius(space, r);
  const auto [sn, cs] = radial_pair(space, r);
  const int m = space.real_dim();
  const int k = space.field_dim();
  const double sn2 = sn * sn;
  if (space.compact()) return k != 1 ? 1.0 / (sn2 * cs * cs) : 1.0 / sn2;
  return k < m ? 1.0 / sn2 : 1.0 / (sn2 * cs * cs);
}

ModeConstants mode_constants(const Space& space) {
  const int m = space.real_dim();
  const int k = space.field_dim();
  const int n = space.quat_dim();
  const int l = (k == 1 || k == m) ? m - 1 : (m - k + 1) / 2;
  const int p = k < m ? k * (n - 1) : m - 1;
  return {l, p};
}

int inequality_terms(const Space& space) {
  const auto c = mode_constants(space);
  return space.compact() ? c.l : c.p;
}

double unit_sphere_area(int m) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

double ball_volume(const Space& space, double R) {
  if (!(R > 0.0) || R > space.max_ball_radius()) {
    throw RangeError(describe(space, R, space.compact() ? "(0, pi/4]" : "(0, inf)"));
  }
  const auto integrand = [&](double r) { return r > 0.0 ? density(space, r) : 0.0; };
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, R, 12, 1e-13, &error);
  return unit_sphere_area(space.real_dim()) * integral;
}

double radius_from_volume(const Space& space, double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume)) {
    throw RangeError("volume must be positive and finite");
  }
  double lo = 0.0;
  double hi = 0.0;
  if (space.compact()) {
    hi = kQuarterPi;
    const double cap = ball_volume(space, hi);
    if (volume > cap * (1.0 + 1e-14)) {
      std::ostringstream os;
      os.precision(17);
      os << "radius constraint violated: volume " << volume << " exceeds the pi/4 ball volume "
         << cap << " in " << space.to_string();
      throw RangeError(os.str());
    }
    if (volume >= cap) return hi;
  } else {
    hi = 1.0;
    while (ball_volume(space, hi) < volume) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e3) throw RangeError("volume too large to invert");
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-16 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (ball_volume(space, mid) < volume ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ross
