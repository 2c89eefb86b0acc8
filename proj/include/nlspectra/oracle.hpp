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

// Independent reference implementations in extended precision and exact
// rational arithmetic. These back the test suites and the CLI's --with-oracle
// columns. They share no code path with the double-precision evaluators:
// gamma and digamma come from Boost.Math, Bessel J from its Frobenius series,
// Drummond approximants from the finite-difference definition.

#ifndef NLSPECTRA_ORACLE_HPP_
#define NLSPECTRA_ORACLE_HPP_

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlspectra/spectra.hpp"

namespace nlspectra::oracle {

namespace mp = boost::multiprecision;

/// 256-bit binary significand; the precision reference values are reported in.
using BigReal = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;
/// Working precision for sums with heavy cancellation.
using WideReal = mp::number<mp::cpp_bin_float<640, mp::digit_base_2>, mp::et_off>;
/// Working precisions for finite-difference Drummond tables. The quadratic
/// form loses digits roughly in proportion to the order: 1280 bits are
/// enough through order 1000, 2560 bits through order 2000.
using HugeReal = mp::number<mp::cpp_bin_float<1280, mp::digit_base_2>, mp::et_off>;
using GiantReal = mp::number<mp::cpp_bin_float<2560, mp::digit_base_2>, mp::et_off>;
using Rational = mp::cpp_rational;

class oracle_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class R>
R pi() {
  return boost::math::constants::pi<R>();
}

inline BigReal gamma(const BigReal& x) { return boost::math::tgamma(x); }
inline BigReal lgamma(const BigReal& x) { return boost::math::lgamma(x); }
inline BigReal digamma(const BigReal& x) { return boost::math::digamma(x); }

/// log(Gamma(z+1+eps) / Gamma(z+1)) by direct log-gamma differences.
inline BigReal log_gamma_ratio(const BigReal& z, const BigReal& eps) {
  return lgamma(z + 1 + eps) - lgamma(z + 1);
}

/// J_nu(x) from the Frobenius series in 640-bit arithmetic; x <= 200.
inline BigReal bessel_j(const BigReal& nu, const BigReal& x) {
  if (x <= 0 || x > 200) throw oracle_error("oracle bessel_j: need 0 < x <= 200");
  if (nu < 0 && nu == floor(nu)) {
    const BigReal pos = bessel_j(BigReal(-nu), x);
    return fmod(-nu, BigReal(2)) == 0 ? pos : BigReal(-pos);
  }
  const WideReal xw(x), nw(nu);
  const WideReal half = xw / 2;
  const WideReal q = -half * half;
  WideReal term = pow(half, nw) / boost::math::tgamma(nw + 1);
  WideReal sum = term;
  const WideReal tiny = pow(WideReal(2), -400);
  for (int k = 0; k < 100000; ++k) {
    term *= q / (WideReal(k + 1) * (WideReal(k + 1) + nw));
    sum += term;
    if (k > xw && abs(term) < tiny * abs(sum)) return BigReal(sum);
  }
  throw oracle_error("oracle bessel_j: series did not converge");
}

/// Maclaurin series of lambda_delta(k) summed in 640-bit arithmetic until the
/// next term is below 2^-180 of the partial sum. Requires k*delta <= 200.
inline BigReal lambda_maclaurin(const KernelParams& params, double k_mod) {
  params.validate();
  if (k_mod == 0) return BigReal(0);
  const WideReal k(k_mod), delta(params.delta), alpha(params.alpha);
  const WideReal kd = k * delta;
  if (kd > 200) throw oracle_error("oracle lambda_maclaurin: k*delta > 200");
  const WideReal w = -kd * kd / 4;
  const WideReal half_d = WideReal(params.d) / 2;
  const WideReal base = WideReal(params.d) - alpha;
  const WideReal threshold = pow(WideReal(2), -180);
  WideReal term = 1, sum = 0;
  for (int n = 1; n <= 100000; ++n) {
    sum += term;
    term *= w / ((n + 1) * (n + half_d)) * (base + 2 * n) / (base + 2 * n + 2);
    if (abs(term) < threshold * abs(sum)) return BigReal(-k * k * sum);
  }
  throw oracle_error("oracle lambda_maclaurin: term cap reached");
}

/// Elementary closed form for d = 1, alpha = 0:
///   lambda = 6 sin(k delta) / (k delta^3) - 6 / delta^2.
inline BigReal closed_form_d1_a0(double delta, double k_mod) {
  if (!(k_mod > 0)) throw oracle_error("oracle closed form: requires k > 0");
  const WideReal k(k_mod), dl(delta);
  return BigReal(6 * sin(k * dl) / (k * dl * dl * dl) - 6 / (dl * dl));
}

/// The unrearranged quotient [y^(2x) Gamma(x+1) Gamma(z)/Gamma(z-x) - 1]/x.
inline BigReal stable_prefactor_direct(const BigReal& x, const BigReal& y, const BigReal& z) {
  if (x == 0) return 2 * log(y) + digamma(BigReal(1)) + digamma(z);
  const BigReal ratio = (z - x == 0) ? BigReal(0) : gamma(z) / gamma(z - x);
  return (pow(y, 2 * x) * gamma(x + 1) * ratio - 1) / x;
}

/// The gamma-ratio part of the asymptotic formula in its original form,
///   (kd/2)^(alpha-d) Gamma((d-alpha)/2) / Gamma(alpha/2) - 2 / ((d-alpha) Gamma(d/2)),
/// or its limit at alpha = d.
inline BigReal gamma_part_direct(int d, double alpha, double kd) {
  const BigReal a(alpha), dd(d), x(kd);
  const BigReal half_d = dd / 2;
  if (a == dd) return (2 * log(2 / x) + digamma(BigReal(1)) + digamma(half_d)) / gamma(half_d);
  const BigReal first = (a == 0) ? BigReal(0) : pow(x / 2, a - dd) * gamma((dd - a) / 2) / gamma(a / 2);
  return first - 2 / ((dd - a) * gamma(half_d));
}

/// T_n^(k) of a_j = (alpha)_j (beta)_j / (-z)^j from the finite-difference
/// definition in Real arithmetic, rounded to BigReal.
template <class Real>
BigReal drummond_bigfloat_in(double alpha, double beta, double z, std::size_t n, std::size_t k) {
  const Real a(alpha), b(beta), zz(z);
  std::vector<Real> num(k + 1), den(k + 1);
  Real term = 1, partial = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    partial += term;
    term *= -(a + j) * (b + j) / zz;
  }
  // term is now a_{n+1}
  for (std::size_t j = 0; j <= k; ++j) {
    if (term == 0) return BigReal(partial);  // terminating series
    den[j] = 1 / term;
    num[j] = partial * den[j];
    partial += term;
    term *= -(a + (n + j + 1)) * (b + (n + j + 1)) / zz;
  }
  for (std::size_t level = 1; level <= k; ++level)
    for (std::size_t j = 0; j + level <= k; ++j) {
      num[j] = num[j + 1] - num[j];
      den[j] = den[j + 1] - den[j];
    }
  return BigReal(num[0] / den[0]);
}

/// drummond_bigfloat_in at a precision chosen from the order; k <= 2000.
inline BigReal drummond_bigfloat(double alpha, double beta, double z, std::size_t n,
                                 std::size_t k) {
  if (k > 2000) throw oracle_error("oracle drummond: order above 2000");
  if (k <= 1000) return drummond_bigfloat_in<HugeReal>(alpha, beta, z, n, k);
  return drummond_bigfloat_in<GiantReal>(alpha, beta, z, n, k);
}

/// High-order "true solution" T_0^(k) with a self-consistency check against
/// T_0^(k-1); raises if the two differ by more than `consistency` relative.
inline BigReal drummond_antilimit(double alpha, double beta, double z, std::size_t k = 500,
                                  double consistency = 1e-30) {
  const BigReal hi = drummond_bigfloat(alpha, beta, z, 0, k);
  const BigReal lo = drummond_bigfloat(alpha, beta, z, 0, k - 1);
  if (abs(hi - lo) > BigReal(consistency) * abs(hi))
    throw oracle_error("oracle drummond: self-consistency target not met at order " +
                       std::to_string(k));
  return hi;
}

/// S_{mu,nu}(x) by high-order extended-precision resummation of its
/// asymptotic series.
inline BigReal lommel_s(double mu, double nu, double x, std::size_t order = 200) {
  const BigReal t = drummond_bigfloat((1 - mu + nu) / 2, (1 - mu - nu) / 2, x * x / 4, 0, order);
  return pow(BigReal(x), BigReal(mu) - 1) * t;
}

/// Exact coefficients (by ascending power of z) of Delta^k(1/a_{n+1}) for
/// a_j = (alpha)_j (beta)_j / (-z)^j: each 1/a_j is expanded as a monomial and
/// the finite differences are taken by polynomial subtraction.
inline std::vector<Rational> denominator_poly(const Rational& alpha, const Rational& beta,
                                              std::size_t n, std::size_t k) {
  using Poly = std::vector<Rational>;
  const std::size_t degree = n + k + 1;
  std::vector<Poly> table;
  Rational poch = 1;  // (alpha)_j (beta)_j
  for (std::size_t j = 0; j <= degree; ++j) {
    if (j >= n + 1) {
      Poly p(degree + 1, Rational(0));
      p[j] = ((j % 2 == 0) ? Rational(1) : Rational(-1)) / poch;  // (-z)^j / poch
      table.push_back(std::move(p));
    }
    poch *= (alpha + j) * (beta + j);
  }
  for (std::size_t level = 1; level <= k; ++level)
    for (std::size_t j = 0; j + level <= k; ++j)
      for (std::size_t c = 0; c <= degree; ++c) table[j][c] = table[j + 1][c] - table[j][c];
  return table.front();
}

/// Double-precision rounding helper.
inline double to_double(const BigReal& x) { return x.convert_to<double>(); }

}  // namespace nlspectra::oracle

#endif  // NLSPECTRA_ORACLE_HPP_
