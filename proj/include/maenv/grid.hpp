#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace maenv {

/// Uniform periodic grid on the flat torus [0,1)^2.
class TorusGrid {
 public:
  explicit TorusGrid(int n);

  int n() const noexcept { return n_; }
  double h() const noexcept { return 1.0 / n_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  /// Row-major flat index of (i, j); i runs along x, j along y. Wraps.
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(wrap(i)) * n_ + wrap(j);
  }
  int wrap(int i) const noexcept {
    int r = i % n_;
    return r < 0 ? r + n_ : r;
  }
  double x(int i) const noexcept { return i * h(); }
  double y(int j) const noexcept { return j * h(); }

  friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

 private:
  int n_;
};

using Mask = std::vector<char>;

/// Samples of a real function on a TorusGrid.
class GridField {
 public:
  explicit GridField(TorusGrid grid, double fill = 0.0);
  GridField(TorusGrid grid, std::vector<double> values);

  /// Samples f(x, y) at every grid point.
  static GridField sample(TorusGrid grid, const std::function<double(double, double)>& f);

  const TorusGrid& grid() const noexcept { return grid_; }
  int n() const noexcept { return grid_.n(); }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
  double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }
  double& operator[](std::size_t k) noexcept { return values_[k]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double min() const;
  double max() const;
  bool all_finite() const;

  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  GridField& operator*=(double s);
  GridField& operator+=(double s);

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

GridField operator+(GridField a, const GridField& b);
GridField operator-(GridField a, const GridField& b);
GridField operator*(double s, GridField a);
GridField operator+(GridField a, double s);
GridField operator-(GridField a, double s);

GridField pointwise_min(const GridField& a, const GridField& b);
GridField pointwise_max(const GridField& a, const GridField& b);
/// Throws InvalidArgument when the two fields live on different grids.
void require_same_grid(const GridField& a, const GridField& b);

/// Density of the reference form theta; its mean is the volume V > 0.
class ThetaDensity {
 public:
  explicit ThetaDensity(GridField density);
  static ThetaDensity constant(TorusGrid grid, double value);

  const GridField& density() const noexcept { return density_; }
  const TorusGrid& grid() const noexcept { return density_.grid(); }
  double volume() const noexcept { return volume_; }

 private:
  GridField density_;
  double volume_;
};

/// Nonnegative, not identically zero density of a measure mu.
class MeasureDensity {
 public:
  explicit MeasureDensity(GridField density);
  static MeasureDensity constant(TorusGrid grid, double value);

  const GridField& density() const noexcept { return density_; }
  const TorusGrid& grid() const noexcept { return density_.grid(); }
  const Mask& support() const noexcept { return support_; }
  bool full_support() const noexcept;
  double total_mass() const;

 private:
  GridField density_;
  Mask support_;
};

}  // namespace maenv
