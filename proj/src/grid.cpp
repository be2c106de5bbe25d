#include "sigmalab/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sigmalab {

void validate(const GridSpec& spec) {
  if (spec.dim < 1 || spec.dim > 3) {
    throw std::invalid_argument("grid dim must be 1, 2 or 3, got " + std::to_string(spec.dim));
  }
  const int n = spec.points;
  if (n < 8 || (n & (n - 1)) != 0) {
    throw std::invalid_argument("grid points per axis must be a power of two >= 8, got " +
                                std::to_string(n));
  }
  if (!(spec.length > 0.0) || !std::isfinite(spec.length)) {
    throw std::invalid_argument("grid box length must be positive and finite");
  }
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  validate(spec);
  const int n = spec.points;
  const int d = spec.dim;
  const double h = spec.length / n;

  size_ = 1;
  for (int a = 0; a < d; ++a) size_ *= n;
  cell_volume_ = std::pow(h, d);
  box_volume_ = std::pow(spec.length, d);

  axis_coords_.resize(n);
  axis_index_.resize(n);
  axis_xi_.resize(n);
  for (int i = 0; i < n; ++i) {
    axis_coords_[i] = i * h - 0.5 * spec.length;
    axis_index_[i] = i < n / 2 ? i : i - n;
    axis_xi_[i] = 2.0 * std::numbers::pi * axis_index_[i] / spec.length;
  }

  xi_.resize(d, size_);
  coords_.resize(d, size_);
  xi_abs_.resize(size_);
  max_abs_index_.resize(size_);
  phase_.resize(size_);
  for (Eigen::Index flat = 0; flat < size_; ++flat) {
    Eigen::Index rest = flat;
    double norm2 = 0.0;
    int jmax = 0;
    int jsum = 0;
    for (int a = d - 1; a >= 0; --a) {
      const int i = static_cast<int>(rest % n);
      rest /= n;
      const double xi = axis_xi_[i];
      xi_(a, flat) = xi;
      coords_(a, flat) = axis_coords_[i];
      norm2 += xi * xi;
      jmax = std::max(jmax, std::abs(axis_index_[i]));
      jsum += axis_index_[i];
    }
    xi_abs_[flat] = std::sqrt(norm2);
    max_abs_index_[flat] = jmax;
    phase_[flat] = (jsum % 2 == 0) ? 1.0 : -1.0;
  }
}

GridPtr build_grid(const GridSpec& spec) { return std::make_shared<const Grid>(spec); }

}  // namespace sigmalab
