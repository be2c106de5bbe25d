#pragma once

// Closed-form per-mode solution operator of
//
//   u'' + (1 + k) u' + k u = 0,   k = |xi|^(2 sigma) >= 0,
//
// whose characteristic polynomial factors as (lambda + 1)(lambda + k).
// K1 is the response to unit initial velocity, A the response to unit
// initial displacement; dA and dK1 are their time derivatives.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigmalab {

template <typename Scalar>
struct PropagatorKernels {
  Scalar k{};
  Scalar t{};
  Scalar A{};
  Scalar K1{};
  Scalar dA{};
  Scalar dK1{};
};

/// Width of the band |1 - k| <= switch handled by the double-root expansion.
inline constexpr double kDoubleRootSwitch = 1e-4;
/// Below this |z| phi1 is evaluated from its Taylor series.
inline constexpr double kPhi1SeriesRadius = 1e-3;

/// phi1(z) = (e^z - 1) / z, with phi1(0) = 1.
template <typename Scalar>
Scalar phi1(Scalar z) {
  using std::abs;
  using std::expm1;
  if (abs(z) < Scalar(kPhi1SeriesRadius)) {
    // sum_{i<8} z^i / (i+1)!, Horner form
    Scalar acc = Scalar(1);
    for (int i = 8; i >= 2; --i) acc = Scalar(1) + z * acc / Scalar(i);
    return acc;
  }
  return expm1(z) / z;
}

namespace detail {

template <typename Scalar>
void check_kernel_args(Scalar k, Scalar t) {
  if (!(k >= Scalar(0))) throw std::invalid_argument("kernel wavenumber weight k must be >= 0");
  if (!(t >= Scalar(0))) throw std::invalid_argument("kernel time t must be >= 0");
}

}  // namespace detail

/// Closed forms valid away from k = 1.
template <typename Scalar>
PropagatorKernels<Scalar> kernels_distinct_roots(Scalar k, Scalar t) {
  using std::exp;
  const Scalar ekt = exp(-k * t);
  const Scalar et = exp(-t);
  const Scalar gap = Scalar(1) - k;
  PropagatorKernels<Scalar> r{k, t};
  r.K1 = (ekt - et) / gap;
  r.A = (ekt - k * et) / gap;
  r.dK1 = (-k * ekt + et) / gap;
  r.dA = -k * r.K1;
  return r;
}

/// Expansion around the double root k = 1 through phi1((1 - k) t).
template <typename Scalar>
PropagatorKernels<Scalar> kernels_double_root(Scalar k, Scalar t) {
  using std::exp;
  const Scalar z = (Scalar(1) - k) * t;
  const Scalar tp = t * phi1(z);
  const Scalar et = exp(-t);
  PropagatorKernels<Scalar> r{k, t};
  r.K1 = et * tp;
  r.A = et * (Scalar(1) + tp);
  r.dK1 = et * (exp(z) - tp);
  r.dA = -k * r.K1;
  return r;
}

template <typename Scalar>
PropagatorKernels<Scalar> kernels(Scalar k, Scalar t) {
  using std::abs;
  detail::check_kernel_args(k, t);
  if (abs(Scalar(1) - k) <= Scalar(kDoubleRootSwitch)) return kernels_double_root(k, t);
  return kernels_distinct_roots(k, t);
}

/// Weights of the linear-in-time Duhamel increment over one step h.
///
/// With the forcing interpolated as f(s) = f0 + (f1 - f0) s/h on [0, h]:
///   u(h) = hom_u + u0 f0 + u1 (f1 - f0),
///   v(h) = hom_v + v0 f0 + v1 (f1 - f0),
/// where u0 = int_0^h K1, u1 = int_0^h K1(h-s) s/h ds, v0 = K1(h),
/// v1 = u0 / h.
template <typename Scalar>
struct DuhamelWeights {
  Scalar u0{};
  Scalar u1{};
  Scalar v0{};
  Scalar v1{};
};

namespace detail {

// int_0^1 e^(z s) ds
template <typename Scalar>
Scalar g1(Scalar z) {
  return phi1(z);
}

// int_0^1 s e^(z s) ds
template <typename Scalar>
Scalar g2(Scalar z) {
  using std::abs;
  using std::exp;
  using std::expm1;
  if (abs(z) < Scalar(0.1)) {
    // sum_j z^j / (j! (j+2))
    Scalar term = Scalar(1);
    Scalar acc = Scalar(0);
    for (int j = 0; j < 16; ++j) {
      acc += term / Scalar(j + 2);
      term *= z / Scalar(j + 1);
    }
    return acc;
  }
  return (z * exp(z) - expm1(z)) / (z * z);
}

}  // namespace detail

template <typename Scalar>
DuhamelWeights<Scalar> duhamel_weights(Scalar k, Scalar h) {
  using std::abs;
  using std::ceil;
  using std::max;
  detail::check_kernel_args(k, h);
  DuhamelWeights<Scalar> w;
  if (h == Scalar(0)) return w;

  Scalar i0{};  // int_0^h K1(r) dr
  Scalar i1{};  // int_0^h r K1(r) dr
  const Scalar stiff = max(k, Scalar(1)) * h;
  if (stiff <= Scalar(1) || abs(Scalar(1) - k) < Scalar(0.5)) {
    // Smooth integrand on each panel: composite Gauss-Legendre is exact to
    // rounding and avoids the cancellation of the closed form near k = 1.
    using Gauss = boost::math::quadrature::gauss<Scalar, 16>;
    const int panels = std::max(1, static_cast<int>(ceil(stiff)));
    const Scalar width = h / Scalar(panels);
    for (int q = 0; q < panels; ++q) {
      const Scalar a = width * Scalar(q);
      i0 += Gauss::integrate([&](Scalar r) { return kernels(k, r).K1; }, a, a + width);
      i1 += Gauss::integrate([&](Scalar r) { return r * kernels(k, r).K1; }, a, a + width);
    }
  } else {
    const Scalar gap = Scalar(1) - k;
    i0 = h * (detail::g1(-k * h) - detail::g1(-h)) / gap;
    i1 = h * h * (detail::g2(-k * h) - detail::g2(-h)) / gap;
  }
  w.u0 = i0;
  w.u1 = i0 - i1 / h;
  w.v0 = kernels(k, h).K1;
  w.v1 = i0 / h;
  return w;
}

}  // namespace sigmalab
