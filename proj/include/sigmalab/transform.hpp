#pragma once

#include "sigmalab/field.hpp"

namespace sigmalab {

/// Forward transform including the quadrature weight (L/N)^n and the
/// centring phase, so coefficients approximate the continuum integral.
SpectralField transform_forward(const RealField& f);

/// Inverse of transform_forward. Returns the real part; callers are expected
/// to pass conjugate-symmetric spectra.
RealField transform_inverse(const SpectralField& F);

/// Raw complex inverse, for checks of the imaginary residue.
Eigen::ArrayXcd transform_inverse_complex(const SpectralField& F);

}  // namespace sigmalab
