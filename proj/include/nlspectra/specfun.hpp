// Copyright 2026 The nlspectra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Gamma-family and Bessel J primitives used by the spectra formulas.
//
// Everything here is a pure function of its arguments. The domains are the
// ones the eigenvalue formulas need (small positive gamma arguments, integer
// and half-integer Bessel orders); see each function for the exact contract.

#ifndef NLSPECTRA_SPECFUN_HPP_
#define NLSPECTRA_SPECFUN_HPP_

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "nlspectra/errors.hpp"

namespace nlspectra {

/// Coefficients of the Lanczos approximation
///
///   Gamma(z+1) ~ sqrt(2 pi) (z+g+1/2)^(z+1/2) exp(-(z+g+1/2))
///                * (c_0 + sum_{i=1}^{n} c_i / (z+i)),   Re(z+1) > 0.
///
/// The set below is P. Godfrey's g = 607/128, n = 14 table (the one
/// distributed with the hyp_2F1 package of N. Michel and M. V. Stoitsov and
/// with Numerical Recipes, 3rd ed.). Its accuracy against an extended
/// precision gamma is checked in the test suite.
struct LanczosTable {
  double gamma_shift;
  std::array<double, 15> coeffs;
};

inline constexpr LanczosTable kLanczos{
    607.0 / 128.0,
    {0.99999999999999709182, 57.156235665862923517, -59.597960355475491248,
     14.136097974741747174, -0.49191381609762019978,
     0.33994649984811888699e-4, 0.46523628927048575665e-4,
     -0.98374475304879564677e-4, 0.15808870322491248884e-3,
     -0.21026444172410488319e-3, 0.21743961811521264320e-3,
     -0.16431810653676389022e-3, 0.84418223983852743293e-4,
     -0.26190838401581408670e-4, 0.36899182659531622704e-5}};

namespace detail {

template <std::floating_point Real>
Real lanczos_series(Real z) {
  const auto& c = kLanczos.coeffs;
  Real sum = 0;
  // Smallest coefficients first.
  for (std::size_t i = c.size() - 1; i >= 1; --i) sum += Real(c[i]) / (z + Real(i));
  return Real(c[0]) + sum;
}

// Gamma(z+1) from the Lanczos formula; z >= 0.
template <std::floating_point Real>
Real lanczos_gamma1p(Real z) {
  const Real t = z + Real(kLanczos.gamma_shift) + Real(0.5);
  const Real half_power = std::pow(t, (z + Real(0.5)) / 2);
  return std::sqrt(2 * std::numbers::pi_v<Real>) * half_power *
         (half_power * std::exp(-t)) * lanczos_series(z);
}

template <std::floating_point Real>
bool near_nonpositive_integer(Real x) {
  const Real r = std::round(x);
  return r <= 0 && std::abs(x - r) <= 64 * std::numeric_limits<Real>::epsilon() *
                                           std::max(Real(1), std::abs(x));
}

}  // namespace detail

/// Gamma function. Arguments below 1 are lifted with Gamma(x) = Gamma(x+1)/x
/// before the Lanczos formula is applied, so any x that is not a
/// nonpositive integer is accepted.
template <std::floating_point Real>
Real gamma(Real x) {
  if (!std::isfinite(x)) throw domain_error("gamma: non-finite argument");
  if (detail::near_nonpositive_integer(x))
    throw pole_error("gamma: pole at x = " + std::to_string(static_cast<double>(x)));
  Real divisor = 1;
  while (x < 1) {
    divisor *= x;
    x += 1;
  }
  return detail::lanczos_gamma1p(x - 1) / divisor;
}

/// log(Gamma(z+1+eps) / Gamma(z+1)) from the Lanczos formula rearranged so
/// that every term is O(eps): no cancellation as eps -> 0.
/// Requires z+1 > 0 and z+1+eps > 0.
template <std::floating_point Real>
Real log_gamma_ratio(Real z, Real eps) {
  if (!(z + 1 > 0) || !(z + 1 + eps > 0))
    throw domain_error("log_gamma_ratio: requires z+1 > 0 and z+1+eps > 0");
  if (eps == 0) return 0;
  const auto& c = kLanczos.coeffs;
  const Real t = z + Real(kLanczos.gamma_shift) + Real(0.5);
  Real shifted = 0;
  for (std::size_t i = c.size() - 1; i >= 1; --i)
    shifted += Real(c[i]) / ((z + Real(i)) * (z + Real(i) + eps));
  return (z + Real(0.5)) * std::log1p(eps / t) + eps * std::log(t + eps) - eps +
         std::log1p(-eps * shifted / detail::lanczos_series(z));
}

/// Digamma psi(z) for z > 0: upward recurrence to z >= 10, then the
/// Bernoulli asymptotic series.
template <std::floating_point Real>
Real digamma(Real z) {
  if (!(z > 0) || !std::isfinite(z)) throw domain_error("digamma: requires z > 0");
  Real shift = 0;
  while (z < 10) {
    shift += 1 / z;
    z += 1;
  }
  const Real w = 1 / (z * z);
  // B_{2k} / (2k), k = 1..7
  constexpr std::array<double, 7> b = {1.0 / 12,     -1.0 / 120, 1.0 / 252,
                                       -1.0 / 240,   1.0 / 132,  -691.0 / 32760,
                                       1.0 / 12};
  Real tail = 0;
  for (std::size_t i = b.size(); i-- > 0;) tail = (tail + Real(b[i])) * w;
  return std::log(z) - 1 / (2 * z) - tail - shift;
}

namespace detail {

inline constexpr int kFrobeniusTermCap = 200;

// J_nu(x) = sum_k (-1)^k (x/2)^(2k+nu) / (k! Gamma(k+nu+1)).
template <std::floating_point Real>
Real bessel_j_series(Real nu, Real x) {
  const Real half = x / 2;
  const Real q = -half * half;
  Real term = std::pow(half, nu) / gamma(nu + 1);
  Real sum = term;
  for (int k = 0; k < kFrobeniusTermCap; ++k) {
    term *= q / (Real(k + 1) * (Real(k + 1) + nu));
    sum += term;
    if (std::abs(term) <= std::numeric_limits<Real>::epsilon() / 4 * std::abs(sum))
      return sum;
  }
  throw internal_error("bessel_j: Frobenius series did not converge");
}

// Hankel expansion J_n(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi).
template <std::floating_point Real>
Real bessel_j_hankel(Real nu, Real x) {
  const Real mu = 4 * nu * nu;
  const Real eight_x = 8 * x;
  Real p = 1, q = 0, term = 1;
  Real prev_abs = std::numeric_limits<Real>::infinity();
  for (int k = 1; k < 200; ++k) {
    const Real odd = Real(2 * k - 1);
    term *= (mu - odd * odd) / (Real(k) * eight_x);
    const Real a = std::abs(term);
    if (odd * odd > mu) {
      if (a > prev_abs) break;  // smallest term passed
      prev_abs = a;
    }
    if (k % 2 == 1) {
      q += (k % 4 == 1) ? term : -term;
    } else {
      p += (k % 4 == 2) ? -term : term;
    }
    if (a <= std::numeric_limits<Real>::epsilon() / 8 * std::abs(p)) break;
  }
  const Real phase = (nu / 2 + Real(0.25)) * std::numbers::pi_v<Real>;
  const Real s = std::sin(x), c = std::cos(x);
  const Real cos_chi = c * std::cos(phase) + s * std::sin(phase);
  const Real sin_chi = s * std::cos(phase) - c * std::sin(phase);
  return std::sqrt(2 / (std::numbers::pi_v<Real> * x)) * (p * cos_chi - q * sin_chi);
}

// Miller's backward recurrence normalized by J_0 + 2 sum J_{2k} = 1.
template <std::floating_point Real>
Real bessel_j_miller(int n, Real x) {
  const int start = 2 * ((std::max(n, static_cast<int>(x)) + 40) / 2) + 2;
  constexpr Real kBig = Real(1e250), kSmall = Real(1e-250);
  Real next = 0, cur = Real(1e-30), result = 0, norm = 0;
  for (int j = start; j > 0; --j) {
    const Real prev = Real(2 * j) / x * cur - next;
    next = cur;
    cur = prev;  // now J_{j-1} (unnormalized)
    if (std::abs(cur) > kBig) {
      cur *= kSmall;
      next *= kSmall;
      result *= kSmall;
      norm *= kSmall;
    }
    const int order = j - 1;
    if (order == n) result = cur;
    if (order > 0 && order % 2 == 0) norm += 2 * cur;
  }
  norm += cur;
  return result / norm;
}

inline constexpr double kHankelCrossover = 25.0;

template <std::floating_point Real>
Real bessel_j_integer(int n, Real x) {
  if (n < 0) return (n % 2 == 0 ? 1 : -1) * bessel_j_integer(-n, x);
  if (x <= 1) return bessel_j_series(Real(n), x);
  if (x >= Real(kHankelCrossover) && x >= Real(n) * Real(n)) return bessel_j_hankel(Real(n), x);
  return bessel_j_miller(n, x);
}

// Half-integer order nu = l + 1/2 with l >= -2.
template <std::floating_point Real>
Real bessel_j_half(int l, Real x) {
  const Real nu = Real(l) + Real(0.5);
  if (x < std::max(Real(2), nu + 2)) return bessel_j_series(nu, x);
  const Real scale = std::sqrt(2 / (std::numbers::pi_v<Real> * x));
  Real lower = scale * std::cos(x);  // J_{-1/2}
  Real upper = scale * std::sin(x);  // J_{1/2}
  if (l == -1) return lower;
  if (l == -2) return -lower / x - upper;
  for (int j = 0; j < l; ++j) {  // J_{j+3/2} = (2j+1)/x J_{j+1/2} - J_{j-1/2}
    const Real next = Real(2 * j + 1) / x * upper - lower;
    lower = upper;
    upper = next;
  }
  return upper;
}

}  // namespace detail

/// Bessel function of the first kind J_nu(x) for x > 0 and nu an integer or
/// a half-integer >= -3/2. Integer orders: Frobenius series for x <= 1,
/// Miller's backward recurrence up to x = 25, Hankel's expansion beyond.
/// Half-integer orders: series for small x, else the trigonometric closed
/// forms of J_{+-1/2} with the three-term recurrence.
template <std::floating_point Real>
Real bessel_j(Real nu, Real x) {
  if (!(x > 0) || !std::isfinite(x)) throw domain_error("bessel_j: requires x > 0");
  const Real twice = 2 * nu;
  if (twice != std::round(twice) || !std::isfinite(nu))
    throw domain_error("bessel_j: order must be an integer or half-integer");
  const int two_nu = static_cast<int>(twice);
  if (two_nu % 2 == 0) return detail::bessel_j_integer(two_nu / 2, x);
  if (two_nu < -3) throw domain_error("bessel_j: half-integer order below -3/2");
  return detail::bessel_j_half((two_nu - 1) / 2, x);
}

}  // namespace nlspectra

#endif  // NLSPECTRA_SPECFUN_HPP_
