#pragma once

#include "sigmalab/grid.hpp"

#include <Eigen/Dense>

#include <complex>
#include <filesystem>
#include <iosfwd>

namespace sigmalab {

/// Physical-space samples on the lattice of a Grid.
struct RealField {
  GridPtr grid;
  Eigen::ArrayXd values;

  RealField() = default;
  RealField(GridPtr g, Eigen::ArrayXd v);
  /// Zero field on `g`.
  explicit RealField(GridPtr g);

  Eigen::Index size() const { return values.size(); }
};

/// Fourier coefficients in storage order, scaled to approximate the
/// continuum transform  F(xi) = integral f(x) exp(-i xi.x) dx.
struct SpectralField {
  GridPtr grid;
  Eigen::ArrayXcd coeffs;

  SpectralField() = default;
  SpectralField(GridPtr g, Eigen::ArrayXcd c);
  explicit SpectralField(GridPtr g);

  Eigen::Index size() const { return coeffs.size(); }
};

/// Throws std::invalid_argument unless both fields live on the same grid spec.
void require_same_grid(const Grid& a, const Grid& b);

/// Flat binary layout: int64 dim, int64 N, float64 L (all little-endian),
/// followed by N^dim float64 samples in row-major order.
void write_field(std::ostream& out, const RealField& f);
void write_field(const std::filesystem::path& path, const RealField& f);
RealField read_field(std::istream& in);
RealField read_field(const std::filesystem::path& path);

}  // namespace sigmalab
