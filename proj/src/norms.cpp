#include "sigmalab/norms.hpp"

#include "sigmalab/transform.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sigmalab {

double lebesgue_norm(const RealField& f, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("Lebesgue exponent must be >= 1");
  if (std::isinf(r)) return f.values.abs().maxCoeff();
  const double w = f.grid->cell_volume();
  if (r == 1.0) return w * f.values.abs().sum();
  if (r == 2.0) return std::sqrt(w * f.values.square().sum());
  return std::pow(w * f.values.abs().pow(r).sum(), 1.0 / r);
}

double spectral_l2_norm(const SpectralField& F) {
  return std::sqrt(F.coeffs.abs2().sum() / F.grid->box_volume());
}

double sobolev_seminorm(const SpectralField& F, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("Sobolev order must be >= 0");
  if (s == 0.0) return spectral_l2_norm(F);
  const auto& xi = F.grid->wavenumber_magnitude();
  const double sum = (xi.pow(2.0 * s) * F.coeffs.abs2()).sum();
  return std::sqrt(sum / F.grid->box_volume());
}

double sobolev_seminorm(const RealField& f, double s) { return sobolev_seminorm(transform_forward(f), s); }

double sobolev_norm_inhom(const SpectralField& F, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("Sobolev order must be >= 0");
  const auto& xi = F.grid->wavenumber_magnitude();
  const double sum = ((1.0 + xi.square()).pow(s) * F.coeffs.abs2()).sum();
  return std::sqrt(sum / F.grid->box_volume());
}

double sobolev_norm_inhom(const RealField& f, double s) {
  return sobolev_norm_inhom(transform_forward(f), s);
}

}  // namespace sigmalab
