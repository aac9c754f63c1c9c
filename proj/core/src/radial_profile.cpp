#include "ross/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "ross/errors.hpp"

namespace ross {

namespace {

// Second-order slopes on a nonuniform grid.
std::vector<double> estimate_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    d[i] = (-h1 / (h0 * (h0 + h1))) * y[i - 1] + ((h1 - h0) / (h0 * h1)) * y[i] +
           (h0 / (h1 * (h0 + h1))) * y[i + 1];
  }
  {
    const double h0 = x[1] - x[0];
    const double h1 = x[2] - x[1];
    d[0] = (-(2 * h0 + h1) / (h0 * (h0 + h1))) * y[0] + ((h0 + h1) / (h0 * h1)) * y[1] -
           (h0 / (h1 * (h0 + h1))) * y[2];
  }
  {
    const std::size_t k = n - 1;
    const double h0 = x[k - 1] - x[k - 2];
    const double h1 = x[k] - x[k - 1];
    d[k] = (h1 / (h0 * (h0 + h1))) * y[k - 2] - ((h0 + h1) / (h0 * h1)) * y[k - 1] +
           ((2 * h1 + h0) / (h1 * (h0 + h1))) * y[k];
  }
  return d;
}

}  // namespace

RadialProfile::RadialProfile(std::vector<double> grid, std::vector<double> values,
                             std::string meaning, std::vector<double> slopes)
    : grid_(std::move(grid)), values_(std::move(values)), slopes_(std::move(slopes)),
      meaning_(std::move(meaning)) {
  if (grid_.size() < 2 || grid_.size() != values_.size()) {
    throw std::invalid_argument("radial profile needs >= 2 samples with matching grid");
  }
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw std::invalid_argument("radial grid must be strictly increasing");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("radial profile values must be finite");
  }
  if (slopes_.empty()) {
    slopes_ = estimate_slopes(grid_, values_);
  } else if (slopes_.size() != grid_.size()) {
    throw std::invalid_argument("slope count does not match grid");
  } else {
    exact_slopes_ = true;
  }
}

std::size_t RadialProfile::locate(double r) const {
  if (r < grid_.front() || r > grid_.back()) {
    std::ostringstream os;
    os.precision(17);
    os << "radius " << r << " outside profile range [" << grid_.front() << ", " << grid_.back()
       << "]";
    throw RangeError(os.str());
  }
  auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  if (i == 0) i = 1;
  if (i >= grid_.size()) i = grid_.size() - 1;
  return i - 1;
}

double RadialProfile::operator()(double r) const {
  const std::size_t i = locate(r);
  const double h = grid_[i + 1] - grid_[i];
  const double t = (r - grid_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[i] + h10 * h * slopes_[i] + h01 * values_[i + 1] + h11 * h * slopes_[i + 1];
}

double RadialProfile::derivative(double r) const {
  const std::size_t i = locate(r);
  const double h = grid_[i + 1] - grid_[i];
  const double t = (r - grid_[i]) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h;
  const double d11 = 3 * t2 - 2 * t;
  return d00 * values_[i] + d10 * slopes_[i] + d01 * values_[i + 1] + d11 * slopes_[i + 1];
}

void RadialProfile::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  os << "r,value\n";
  for (std::size_t i = 0; i < grid_.size(); ++i) os << grid_[i] << ',' << values_[i] << '\n';
  os.precision(old_precision);
}

RadialProfile RadialProfile::read_csv(std::istream& is, std::string meaning) {
  std::vector<double> r;
  std::vector<double> v;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'r' || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("profile CSV line without comma: " + line);
    r.push_back(std::stod(line.substr(0, comma)));
    v.push_back(std::stod(line.substr(comma + 1)));
  }
  return RadialProfile(std::move(r), std::move(v), std::move(meaning));
}

}  // namespace ross
