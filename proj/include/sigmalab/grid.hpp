#pragma once

#include <Eigen/Dense>

#include <memory>
#include <stdexcept>

namespace sigmalab {

/// Periodic box [-L/2, L/2)^n sampled with N points per axis.
struct GridSpec {
  int dim = 1;
  int points = 8192;
  double length = 2.0 * 3.14159265358979323846;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws std::invalid_argument when the spec is unusable.
void validate(const GridSpec& spec);

/// Lattice coordinates and wavenumber tables of a GridSpec.
///
/// Flat storage is row-major over the axes (last axis fastest). Along each
/// axis the storage index i maps to the integer wavenumber j = i for i < N/2
/// and j = i - N otherwise, with physical wavenumber xi = 2*pi*j/L.
class Grid {
 public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  int points() const { return spec_.points; }
  double length() const { return spec_.length; }
  Eigen::Index size() const { return size_; }
  double spacing() const { return spec_.length / spec_.points; }
  double cell_volume() const { return cell_volume_; }
  double box_volume() const { return box_volume_; }

  /// Axis coordinates x_i = i*L/N - L/2.
  const Eigen::ArrayXd& axis_coordinates() const { return axis_coords_; }
  /// Integer wavenumbers along one axis, storage order.
  const Eigen::ArrayXi& axis_indices() const { return axis_index_; }
  /// Physical wavenumbers along one axis, storage order.
  const Eigen::ArrayXd& axis_wavenumbers() const { return axis_xi_; }

  /// |xi| for every flat index.
  const Eigen::ArrayXd& wavenumber_magnitude() const { return xi_abs_; }
  /// dim x size table of wavevector components.
  const Eigen::ArrayXXd& wavevectors() const { return xi_; }
  /// max_d |j_d| for every flat index.
  const Eigen::ArrayXi& max_abs_index() const { return max_abs_index_; }
  /// (-1)^(j_1+...+j_n), the phase that recentres the DFT on x = 0.
  const Eigen::ArrayXd& centring_phase() const { return phase_; }
  /// Physical coordinates of every flat index, dim x size.
  const Eigen::ArrayXXd& coordinates() const { return coords_; }

 private:
  GridSpec spec_;
  Eigen::Index size_ = 0;
  double cell_volume_ = 0.0;
  double box_volume_ = 0.0;
  Eigen::ArrayXd axis_coords_;
  Eigen::ArrayXi axis_index_;
  Eigen::ArrayXd axis_xi_;
  Eigen::ArrayXd xi_abs_;
  Eigen::ArrayXXd xi_;
  Eigen::ArrayXi max_abs_index_;
  Eigen::ArrayXd phase_;
  Eigen::ArrayXXd coords_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(const GridSpec& spec);

}  // namespace sigmalab
