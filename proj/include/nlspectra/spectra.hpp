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

// Eigenvalues lambda_delta(k) of the nonlocal diffusion operator with the
// algebraic kernel
//
//   rho_delta(r) = 2 Gamma(d/2+1) (d+2-alpha) / (pi^(d/2) delta^(d+2-alpha) r^alpha)
//
// on [0, delta], acting on the plane wave exp(i k.x). The eigenvalue depends
// on the wavevector only through k = |k|, and on (k, delta) mostly through
// the product k*delta.
//
// Two evaluation paths:
//  * Maclaurin: lambda = -k^2 2F3(1, (d+2-alpha)/2; 2, (d+2)/2, (d+4-alpha)/2;
//    -(k delta)^2/4), summed term by term; accurate for small k*delta.
//  * Asymptotic: a gamma-ratio part plus products of Bessel J and second
//    Lommel functions, the latter resummed with Drummond's transformation;
//    accurate for large k*delta.
// lambda_hybrid switches between them at k*delta = 6.

#ifndef NLSPECTRA_SPECTRA_HPP_
#define NLSPECTRA_SPECTRA_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "nlspectra/drummond.hpp"
#include "nlspectra/errors.hpp"
#include "nlspectra/specfun.hpp"

namespace nlspectra {

inline constexpr double kHybridSwitch = 6.0;
inline constexpr int kMaclaurinTermCap = 4000;

/// Dimension d, singularity strength alpha and horizon delta of the kernel.
struct KernelParams {
  int d = 1;
  double alpha = 0.0;
  double delta = 1.0;

  static constexpr int kMaxDimension = 10;

  bool valid() const {
    return d >= 1 && d <= kMaxDimension && alpha >= 0 && alpha < d + 2 && delta > 0 &&
           std::isfinite(delta);
  }

  void validate() const {
    if (valid()) return;
    std::ostringstream os;
    os << "invalid kernel parameters (d=" << d << ", alpha=" << alpha << ", delta=" << delta
       << "): need 1 <= d <= " << kMaxDimension << ", 0 <= alpha < d+2, 0 < delta < inf";
    throw domain_error(os.str());
  }
};

enum class Method { maclaurin, asymptotic, zero };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::maclaurin: return "maclaurin";
    case Method::asymptotic: return "asymptotic";
    case Method::zero: return "zero";
  }
  return "unknown";
}

struct EvalResult {
  double lambda = 0.0;
  Method method = Method::zero;
  int terms = 0;  // series terms or Drummond order
  double est_rel_err = 0.0;
};

namespace detail {

inline void check_wavenumber(double k_mod) {
  if (!(k_mod >= 0) || !std::isfinite(k_mod))
    throw domain_error("wavenumber must be finite and nonnegative");
}

inline void check_tolerance(double tol) {
  if (!(tol >= std::numeric_limits<double>::epsilon()))
    throw domain_error("tolerance below machine epsilon");
}

}  // namespace detail

/// Sums the Maclaurin series with the ratio recurrence
///   u_1 = 1,  u_{n+1} = u_n (-(k delta)^2/4) / ((n+1)(n+d/2))
///                       * (d+2n-alpha) / (d+2n+2-alpha),
/// lambda = -k^2 sum u_n, stopping once |u_{n+1}| < tol |sum|.
inline EvalResult lambda_maclaurin(const KernelParams& params, double k_mod,
                                   double tol = kDefaultTolerance) {
  params.validate();
  detail::check_wavenumber(k_mod);
  detail::check_tolerance(tol);
  if (k_mod == 0) return {};
  const double kd = k_mod * params.delta;
  const double w = -kd * kd / 4;
  const double half_d = params.d / 2.0;
  const double base = params.d - params.alpha;

  double term = 1, sum = 0, largest = 0;
  for (int n = 1; n <= kMaclaurinTermCap; ++n) {
    sum += term;
    largest = std::max(largest, std::abs(term));
    term *= w / ((n + 1) * (n + half_d)) * (base + 2 * n) / (base + 2 * n + 2);
    if (std::abs(term) < tol * std::abs(sum)) {
      const double cancellation = std::numeric_limits<double>::epsilon() * largest;
      return {-k_mod * k_mod * sum, Method::maclaurin, n,
              (std::abs(term) + cancellation) / std::abs(sum)};
    }
  }
  throw convergence_error("lambda_maclaurin: term cap reached at k*delta = " +
                          std::to_string(kd));
}

/// f(x, y, z) = [y^(2x) Gamma(x+1) Gamma(z) / Gamma(z-x) - 1] / x, evaluated
/// as expm1 of a sum of cancellation-free log-gamma ratios. At x = 0 the
/// removable singularity is replaced by its limit 2 log y + psi(1) + psi(z).
/// At x = z the gamma ratio vanishes (1/Gamma(0) = 0) and f = -1/x.
inline double stable_prefactor(double x, double y, double z) {
  if (!(y > 0) || !(z > 0)) throw domain_error("stable_prefactor: requires y > 0, z > 0");
  if (!(x > -1) || !(x <= z)) throw domain_error("stable_prefactor: requires -1 < x <= z");
  if (x == 0) return 2 * std::log(y) + digamma(1.0) + digamma(z);
  if (x == z) return -1 / x;
  const double log_ratio =
      2 * x * std::log(y) + log_gamma_ratio(0.0, x) - log_gamma_ratio(z - 1, -x);
  return std::expm1(log_ratio) / x;
}

/// Asymptotic formula. With x = (d-alpha)/2, z = d/2 and kd = k*delta,
///   delta^2 lambda / (2 Gamma(d/2+1) (d+2-alpha))
///     = f(x, 2/kd, z) / Gamma(z)
///     + 2^(d/2) kd^(alpha+1-d) [(d-2-alpha) J_{(d-2)/2}(kd) S_{(d-2-2alpha)/2,(d-4)/2}(kd)
///                               - J_{(d-4)/2}(kd) S_{(d-2alpha)/2,(d-2)/2}(kd)].
/// The first line is the gamma-ratio part with its removable singularity at
/// alpha = d folded into stable_prefactor.
inline EvalResult lambda_asymptotic(const KernelParams& params, double k_mod,
                                    double tol = kDefaultTolerance,
                                    int k_max = kDefaultMaxOrder) {
  params.validate();
  detail::check_wavenumber(k_mod);
  if (k_mod == 0) throw domain_error("lambda_asymptotic: requires k > 0");
  const double d = params.d;
  const double alpha = params.alpha;
  const double kd = k_mod * params.delta;
  const double half_d = d / 2;

  const double gamma_part = stable_prefactor((d - alpha) / 2, 2 / kd, half_d) / gamma(half_d);

  const auto s1 = lommel_s(LommelOrder{(d - 2 - 2 * alpha) / 2, (d - 4) / 2}, kd, tol, k_max);
  const auto s2 = lommel_s(LommelOrder{(d - 2 * alpha) / 2, (d - 2) / 2}, kd, tol, k_max);
  if (!s1.converged || !s2.converged) {
    throw convergence_error("lambda_asymptotic: Lommel resummation did not converge at k*delta = " +
                            std::to_string(kd));
  }
  const double j_hi = bessel_j((d - 2) / 2, kd);
  const double j_lo = bessel_j((d - 4) / 2, kd);
  const double bessel_part = std::pow(2.0, half_d) * std::pow(kd, alpha + 1 - d) *
                             ((d - 2 - alpha) * j_hi * s1.value - j_lo * s2.value);

  const double scale =
      2 * gamma(half_d + 1) * (d + 2 - alpha) / (params.delta * params.delta);
  const double total = gamma_part + bessel_part;
  const double eps = std::numeric_limits<double>::epsilon();
  const double spread = (std::abs(gamma_part) + std::abs(bessel_part)) / std::abs(total);
  EvalResult out;
  out.lambda = scale * total;
  out.method = Method::asymptotic;
  out.terms = std::max(s1.order, s2.order);
  out.est_rel_err = spread * (std::max(s1.est_rel_err, s2.est_rel_err) + 8 * eps);
  return out;
}

/// Maclaurin below k*delta = 6, asymptotic formula from there on.
inline EvalResult lambda_hybrid(const KernelParams& params, double k_mod,
                                double tol = kDefaultTolerance) {
  params.validate();
  detail::check_wavenumber(k_mod);
  detail::check_tolerance(tol);
  if (k_mod == 0) return {};
  if (k_mod * params.delta < kHybridSwitch) return lambda_maclaurin(params, k_mod, tol);
  return lambda_asymptotic(params, k_mod, tol);
}

}  // namespace nlspectra

#endif  // NLSPECTRA_SPECTRA_HPP_
