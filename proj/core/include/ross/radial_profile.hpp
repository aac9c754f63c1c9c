#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ross {

/// A radial function sampled on a strictly increasing grid. Evaluation is a
/// cubic Hermite interpolant: exact at grid points, using the stored slopes
/// when the producer had them (ODE solutions) and second-order finite
/// difference slopes otherwise.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(std::vector<double> grid, std::vector<double> values, std::string meaning,
                std::vector<double> slopes = {});

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& slopes() const { return slopes_; }
  const std::string& meaning() const { return meaning_; }
  bool has_exact_slopes() const { return exact_slopes_; }
  std::size_t size() const { return grid_.size(); }
  bool empty() const { return grid_.empty(); }
  double front_radius() const { return grid_.front(); }
  double back_radius() const { return grid_.back(); }

  /// Throws RangeError outside [front_radius, back_radius].
  double operator()(double r) const;
  double derivative(double r) const;

  /// Two-column "r,value" CSV, 17 significant digits.
  void write_csv(std::ostream& os) const;
  static RadialProfile read_csv(std::istream& is, std::string meaning);

 private:
  std::size_t locate(double r) const;

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::string meaning_;
  bool exact_slopes_ = false;
};

}  // namespace ross
