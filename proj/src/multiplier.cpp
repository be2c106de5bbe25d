#include "sigmalab/multiplier.hpp"

#include "sigmalab/transform.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sigmalab {

MultiplierSymbol identity_symbol() {
  return {"identity", [](double) { return 1.0; }, 1.0};
}

MultiplierSymbol power_symbol(double exponent) {
  return {"|xi|^" + std::to_string(exponent), [exponent](double x) { return std::pow(x, exponent); },
          0.0};
}

MultiplierSymbol operator*(const MultiplierSymbol& a, const MultiplierSymbol& b) {
  return {a.name + "*" + b.name, [ra = a.rule, rb = b.rule](double x) { return ra(x) * rb(x); },
          a.at_zero * b.at_zero};
}

SpectralField apply_symbol(const SpectralField& F, const MultiplierSymbol& s) {
  const auto& xi = F.grid->wavenumber_magnitude();
  Eigen::ArrayXcd out(F.coeffs.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const double v = s(xi[i]);
    if (!std::isfinite(v)) {
      throw std::domain_error("symbol " + s.name + " is not finite at |xi| = " + std::to_string(xi[i]));
    }
    out[i] = v * F.coeffs[i];
  }
  return SpectralField(F.grid, std::move(out));
}

RealField fractional_laplacian(const RealField& f, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  return transform_inverse(apply_symbol(transform_forward(f), power_symbol(2.0 * sigma)));
}

namespace {
void check_alpha(int n, double alpha) {
  if (!(alpha > 0.0 && alpha < n)) {
    throw std::invalid_argument("alpha must lie in (0, n) = (0, " + std::to_string(n) + "), got " +
                                std::to_string(alpha));
  }
}
}  // namespace

SpectralField riesz_potential(const SpectralField& F, double alpha) {
  check_alpha(F.grid->dim(), alpha);
  return apply_symbol(F, power_symbol(-alpha));
}

RealField riesz_potential(const RealField& f, double alpha) {
  check_alpha(f.grid->dim(), alpha);
  return transform_inverse(riesz_potential(transform_forward(f), alpha));
}

double riesz_constant(int n, double alpha) {
  return std::tgamma(0.5 * (n - alpha)) /
         (std::pow(std::numbers::pi, 0.5 * n) * std::pow(2.0, alpha) * std::tgamma(0.5 * alpha));
}

double riesz_self_cell_integral(int n, double alpha, double h) {
  const double a = 0.5 * h;
  if (n == 1) return 2.0 * std::pow(a, alpha) / alpha;
  // Split the cube into 2n pyramids with apex at the origin; the radial
  // integral is exact, leaving a smooth integral over one face.
  using Gauss = boost::math::quadrature::gauss<double, 20>;
  const double e = 0.5 * (alpha - n);
  double face = 0.0;
  if (n == 2) {
    face = Gauss::integrate([&](double y) { return std::pow(a * a + y * y, e); }, -a, a);
  } else {
    face = Gauss::integrate(
        [&](double y) {
          return Gauss::integrate([&](double z) { return std::pow(a * a + y * y + z * z, e); }, -a, a);
        },
        -a, a);
  }
  return 2.0 * n * (a / alpha) * face;
}

RealField riesz_oracle(const RealField& f, double alpha) {
  const Grid& grid = *f.grid;
  const int n = grid.dim();
  check_alpha(n, alpha);
  if (grid.size() > kRieszOracleMaxPoints) {
    throw std::invalid_argument("riesz_oracle: grid has " + std::to_string(grid.size()) +
                                " points, limit is " + std::to_string(kRieszOracleMaxPoints));
  }
  const double c = riesz_constant(n, alpha);
  const double w = grid.cell_volume();
  const double self = riesz_self_cell_integral(n, alpha, grid.spacing());
  const double e = 0.5 * (alpha - n);
  const auto& x = grid.coordinates();
  const Eigen::Index m = grid.size();

  Eigen::ArrayXd out(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j == i) continue;
      double r2 = 0.0;
      for (int d = 0; d < n; ++d) {
        const double dx = x(d, i) - x(d, j);
        r2 += dx * dx;
      }
      sum += f.values[j] * std::pow(r2, e);
    }
    out[i] = c * (w * sum + self * f.values[i]);
  }
  return RealField(f.grid, std::move(out));
}

double central_discrepancy(const RealField& a, const RealField& b) {
  require_same_grid(*a.grid, *b.grid);
  const Grid& grid = *a.grid;
  const double quarter = 0.25 * grid.length();
  const auto& x = grid.coordinates();
  std::vector<Eigen::Index> window;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if ((x.col(i).abs() <= quarter).all()) window.push_back(i);
  }
  if (window.empty()) throw std::invalid_argument("empty comparison window");
  double mean_a = 0.0, mean_b = 0.0;
  for (auto i : window) {
    mean_a += a.values[i];
    mean_b += b.values[i];
  }
  mean_a /= window.size();
  mean_b /= window.size();
  double num = 0.0, den = 0.0;
  for (auto i : window) {
    const double da = a.values[i] - mean_a;
    const double db = b.values[i] - mean_b;
    num += (da - db) * (da - db);
    den += db * db;
  }
  return std::sqrt(num / den);
}

}  // namespace sigmalab
