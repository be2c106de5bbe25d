#pragma once

#include "sigmalab/field.hpp"

#include <functional>
#include <string>

namespace sigmalab {

/// Radial Fourier multiplier xi -> s(|xi|). The value at xi = 0 is always
/// stated explicitly; `rule` is only consulted for nonzero wavenumbers.
struct MultiplierSymbol {
  std::string name;
  std::function<double(double)> rule;
  double at_zero = 0.0;

  double operator()(double xi_abs) const { return xi_abs == 0.0 ? at_zero : rule(xi_abs); }
};

MultiplierSymbol identity_symbol();
/// |xi|^exponent with value 0 at the origin.
MultiplierSymbol power_symbol(double exponent);
/// Pointwise product of two symbols, including their origin values.
MultiplierSymbol operator*(const MultiplierSymbol& a, const MultiplierSymbol& b);

/// coeffs_j <- s(xi_j) coeffs_j. Throws std::domain_error on a non-finite symbol value.
SpectralField apply_symbol(const SpectralField& F, const MultiplierSymbol& s);

/// Inverse transform of |xi|^(2 sigma) F(f).
RealField fractional_laplacian(const RealField& f, double sigma);

/// Normalized Riesz potential: symbol |xi|^(-alpha), zero mode set to 0.
RealField riesz_potential(const RealField& f, double alpha);
SpectralField riesz_potential(const SpectralField& F, double alpha);

/// Gamma((n-alpha)/2) / (pi^(n/2) 2^alpha Gamma(alpha/2)).
double riesz_constant(int n, double alpha);

/// Integral of |z|^(alpha-n) over the cube [-h/2, h/2]^n.
double riesz_self_cell_integral(int n, double alpha, double h);

/// Largest grid accepted by riesz_oracle.
inline constexpr Eigen::Index kRieszOracleMaxPoints = Eigen::Index{1} << 16;

/// Direct O(M^2) quadrature of the normalized Riesz potential over the box
/// (free-space kernel, no periodic images). The singular self cell is
/// replaced by its analytic integral times f(x).
RealField riesz_oracle(const RealField& f, double alpha);

/// Relative L2 discrepancy of `a` against `b` over |x_d| <= L/4 for all axes,
/// after removing each field's mean over that window. The periodic Riesz
/// potential with a zeroed origin mode is determined only up to such a constant.
double central_discrepancy(const RealField& a, const RealField& b);

}  // namespace sigmalab
