#pragma once

#include "sigmalab/field.hpp"

namespace sigmalab {

/// (sum |f_j|^r (L/N)^n)^(1/r); r = +inf gives the max norm.
double lebesgue_norm(const RealField& f, double r);

/// L2 norm of |xi|^s F(f) through Parseval.
double sobolev_seminorm(const RealField& f, double s);
double sobolev_seminorm(const SpectralField& F, double s);

/// L2 norm of (1+|xi|^2)^(s/2) F(f) through Parseval.
double sobolev_norm_inhom(const RealField& f, double s);
double sobolev_norm_inhom(const SpectralField& F, double s);

/// Spectral side of Parseval: sqrt(L^-n sum |F_j|^2).
double spectral_l2_norm(const SpectralField& F);

}  // namespace sigmalab
