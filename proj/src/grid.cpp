#include "maenv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maenv/errors.hpp"
#include "maenv/torus.hpp"

namespace maenv {

TorusGrid::TorusGrid(int n) : n_(n) {
  if (n < 8 || n % 2 != 0) {
    throw InvalidArgument("TorusGrid: N must be even and >= 8, got " + std::to_string(n));
  }
}

GridField::GridField(TorusGrid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

GridField::GridField(TorusGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("GridField: expected " + std::to_string(grid_.size()) + " values, got " +
                          std::to_string(values_.size()));
  }
}

GridField GridField::sample(TorusGrid grid, const std::function<double(double, double)>& f) {
  GridField out(grid);
  for (int i = 0; i < grid.n(); ++i) {
    for (int j = 0; j < grid.n(); ++j) out(i, j) = f(grid.x(i), grid.y(j));
  }
  return out;
}

double GridField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool GridField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const GridField& a, const GridField& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
}

GridField& GridField::operator+=(const GridField& o) {
  require_same_grid(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  require_same_grid(*this, o);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

GridField& GridField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

GridField& GridField::operator+=(double s) {
  for (double& v : values_) v += s;
  return *this;
}

GridField operator+(GridField a, const GridField& b) { return a += b; }
GridField operator-(GridField a, const GridField& b) { return a -= b; }
GridField operator*(double s, GridField a) { return a *= s; }
GridField operator+(GridField a, double s) { return a += s; }
GridField operator-(GridField a, double s) { return a += -s; }

GridField pointwise_min(const GridField& a, const GridField& b) {
  require_same_grid(a, b);
  GridField out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::min(a[k], b[k]);
  return out;
}

GridField pointwise_max(const GridField& a, const GridField& b) {
  require_same_grid(a, b);
  GridField out = a;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::max(a[k], b[k]);
  return out;
}

ThetaDensity::ThetaDensity(GridField density) : density_(std::move(density)) {
  if (!density_.all_finite()) throw InvalidArgument("ThetaDensity: non-finite values");
  volume_ = integrate(density_);
  if (!(volume_ > 0.0)) throw InvalidArgument("ThetaDensity: mean must be positive");
}

ThetaDensity ThetaDensity::constant(TorusGrid grid, double value) {
  return ThetaDensity(GridField(grid, value));
}

MeasureDensity::MeasureDensity(GridField density)
    : density_(std::move(density)), support_(density_.size(), 0) {
  bool any = false;
  for (std::size_t k = 0; k < density_.size(); ++k) {
    double v = density_[k];
    if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("MeasureDensity: values must be finite and >= 0");
    support_[k] = v > 0.0;
    any = any || v > 0.0;
  }
  if (!any) throw InvalidArgument("MeasureDensity: identically zero");
}

MeasureDensity MeasureDensity::constant(TorusGrid grid, double value) {
  return MeasureDensity(GridField(grid, value));
}

bool MeasureDensity::full_support() const noexcept {
  return std::all_of(support_.begin(), support_.end(), [](char c) { return c != 0; });
}

double MeasureDensity::total_mass() const { return integrate(density_); }

}  // namespace maenv
