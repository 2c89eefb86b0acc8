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

// Drummond's sequence transformation
//
//   T_n^(k) = Delta^k(s_n / a_{n+1}) / Delta^k(1 / a_{n+1}),
//
// where s_n = a_0 + ... + a_n. Two evaluation routes are provided:
//
//  * drummond_generic: the finite-difference quotient for an arbitrary
//    sequence of terms, O(k^2) work per approximant;
//  * DrummondState / drummond_2f0: for terms a_k = (alpha)_k (beta)_k / (-z)^k
//    both N_n^(k) and D_n^(k) obey the four-term recurrence
//
//      (alpha+n+k+1)(beta+n+k+1) Q^(k+1)
//        + [z + k(alpha+beta+2n+2k+1) + (alpha+n+k+1)(beta+n+k+1)] Q^(k)
//        + k(alpha+beta+2n+3k) Q^(k-1) + k(k-1) Q^(k-2) = 0,
//
//    with D^(0) = 1/a_{n+1}, D^(-1) = D^(-2) = 0, N^(0) = s_n D^(0),
//    N^(-1) = 0, and an inhomogeneous first step
//    N^(1) = s_n D^(1) + a_{n+1}/a_{n+2}. Each order costs O(1).
//
// The recurrence is valid for complex alpha, beta and z, so the scalar type
// may be a real floating-point type or std::complex of one.

#ifndef NLSPECTRA_DRUMMOND_HPP_
#define NLSPECTRA_DRUMMOND_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "nlspectra/errors.hpp"

namespace nlspectra {

template <class T>
struct scalar_traits {
  using real_type = T;
};
template <class R>
struct scalar_traits<std::complex<R>> {
  using real_type = R;
};
template <class T>
using real_t = typename scalar_traits<T>::real_type;

namespace detail {

template <class T>
bool is_nonpositive_integer(const T& p) {
  if constexpr (std::is_floating_point_v<T>) {
    return p <= 0 && p == std::round(p);
  } else {
    return p.imag() == 0 && is_nonpositive_integer(p.real());
  }
}

}  // namespace detail

/// Terms a_k = (alpha)_k (beta)_k / (-z)^k of a 2F0-type series; a_0 = 1.
template <class T>
struct HypTerm2F0 {
  T alpha;
  T beta;
  T z;

  /// a_{k+1} / a_k
  T ratio(std::size_t k) const {
    const T kk = T(static_cast<real_t<T>>(k));
    return -(alpha + kk) * (beta + kk) / z;
  }

  /// a_0 .. a_{count-1}
  std::vector<T> terms(std::size_t count) const {
    std::vector<T> out;
    out.reserve(count);
    T a = T(1);
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back(a);
      a *= ratio(k);
    }
    return out;
  }

  /// True when alpha or beta is a nonpositive integer: the series is a
  /// polynomial in 1/z.
  bool terminates() const {
    return detail::is_nonpositive_integer(alpha) || detail::is_nonpositive_integer(beta);
  }

  /// Sum of all terms of a terminating series.
  T finite_sum() const {
    T a = T(1), s = T(1);
    for (std::size_t k = 0;; ++k) {
      a *= ratio(k);
      if (a == T(0)) return s;
      s += a;
    }
  }
};

template <class T>
struct TransformResult {
  T value{};
  int order = 0;
  bool converged = false;
  double est_rel_err = std::numeric_limits<double>::infinity();
};

inline constexpr double kDefaultTolerance = 10 * std::numeric_limits<double>::epsilon();
inline constexpr int kDefaultMaxOrder = 500;

/// T_n^(k) of an explicit term sequence a_0..a_m by the finite-difference
/// quotient. Needs m >= n+k+1. A zero among a_{n+1}..a_{n+k+1} marks the end
/// of a terminating series; the transformation then returns the exact sum.
template <class T>
T drummond_generic(std::span<const T> terms, std::size_t n, std::size_t k) {
  if (terms.size() < n + k + 2)
    throw domain_error("drummond_generic: need terms a_0 .. a_{n+k+1}");
  T partial = T(0);
  for (std::size_t j = 0; j <= n; ++j) partial += terms[j];

  std::vector<T> num(k + 1), den(k + 1);
  for (std::size_t j = 0; j <= k; ++j) {
    const T next = terms[n + j + 1];
    if (next == T(0)) return partial;
    den[j] = T(1) / next;
    num[j] = partial * den[j];
    partial += next;
  }
  for (std::size_t level = 1; level <= k; ++level) {
    for (std::size_t j = 0; j + level <= k; ++j) {
      num[j] = num[j + 1] - num[j];
      den[j] = den[j + 1] - den[j];
    }
  }
  if (den[0] == T(0)) throw domain_error("drummond_generic: zero denominator difference");
  return num[0] / den[0];
}

namespace detail {

// Which middle coefficient the recurrence uses. `literal` squares the alpha
// factor instead; it is kept only so the tests can show that it disagrees
// with the finite-difference definition when alpha != beta.
enum class Bracket { symmetric, literal };

}  // namespace detail

/// Rolling window of the linear-complexity Drummond recurrence for a
/// HypTerm2F0 sequence. Starts at order k = 0; advance() moves to k+1.
template <class T>
class DrummondState {
 public:
  using Real = real_t<T>;

  DrummondState(const HypTerm2F0<T>& term, std::size_t n,
                detail::Bracket bracket = detail::Bracket::symmetric)
      : term_(term), n_(n), bracket_(bracket) {
    T a = T(1), s = T(1);
    for (std::size_t j = 0; j < n; ++j) {
      a *= term_.ratio(j);
      s += a;
    }
    partial_ = s;
    const T next = a * term_.ratio(n);  // a_{n+1}
    if (next == T(0)) {
      terminate_with(s);
      return;
    }
    D_cur_ = T(1) / next;
    N_cur_ = s * D_cur_;
    T_cur_ = s;
  }

  /// Advances one order; returns false once the sequence has terminated.
  bool advance() {
    if (terminated_) return false;
    const Real kr = static_cast<Real>(k_);
    const T nk = T(static_cast<Real>(n_)) + T(kr) + T(1);
    const T lead = (term_.alpha + nk) * (term_.beta + nk);
    if (lead == T(0)) {
      // a_{n+k+2} = 0: T^(k+1) is the exact sum of the terminating series.
      ++k_;
      terminate_with(term_.finite_sum());
      return true;
    }
    const T ab = term_.alpha + term_.beta + T(2 * static_cast<Real>(n_));
    const T square = bracket_ == detail::Bracket::symmetric
                         ? lead
                         : (term_.alpha + nk) * (term_.alpha + nk);
    const T c0 = term_.z + T(kr) * (ab + T(2 * kr + 1)) + square;
    const T c1 = T(kr) * (ab + T(3 * kr));
    const T c2 = T(kr * (kr - 1));

    const T D_next = -(c0 * D_cur_ + c1 * D_prev_ + c2 * D_prev2_) / lead;
    T N_next = -(c0 * N_cur_ + c1 * N_prev_ + c2 * N_prev2_) / lead;
    if (k_ == 0) N_next -= term_.z / lead;

    D_prev2_ = D_prev_;
    D_prev_ = D_cur_;
    D_cur_ = D_next;
    N_prev2_ = N_prev_;
    N_prev_ = N_cur_;
    N_cur_ = N_next;
    ++k_;
    rescale();
    T_prev2_ = T_prev_;
    T_prev_ = T_cur_;
    T_cur_ = N_cur_ / D_cur_;
    return true;
  }

  std::size_t order() const { return k_; }
  std::size_t base() const { return n_; }
  bool terminated() const { return terminated_; }
  T partial_sum() const { return partial_; }
  T numerator() const { return N_cur_; }
  T denominator() const { return D_cur_; }
  T value() const { return T_cur_; }
  T previous() const { return T_prev_; }
  T previous2() const { return T_prev2_; }

 private:
  void terminate_with(const T& exact) {
    terminated_ = true;
    T_prev2_ = T_prev_ = T_cur_ = exact;
  }

  // N and D grow factorially; a common power-of-two rescale leaves every
  // quotient unchanged.
  void rescale() {
    constexpr int kExp = std::numeric_limits<Real>::max_exponent / 2;
    const Real big = std::ldexp(Real(1), kExp);
    const Real magnitude =
        std::max({std::abs(N_cur_), std::abs(N_prev_), std::abs(N_prev2_),
                  std::abs(D_cur_), std::abs(D_prev_), std::abs(D_prev2_)});
    if (!(magnitude > big) && !(magnitude < 1 / big && magnitude > 0)) return;
    const Real factor = std::ldexp(Real(1), magnitude > big ? -kExp : kExp);
    for (T* q : {&N_cur_, &N_prev_, &N_prev2_, &D_cur_, &D_prev_, &D_prev2_}) *q *= factor;
  }

  HypTerm2F0<T> term_;
  std::size_t n_;
  detail::Bracket bracket_;
  std::size_t k_ = 0;
  bool terminated_ = false;
  T partial_{};
  T N_cur_{}, N_prev_{}, N_prev2_{};
  T D_cur_{}, D_prev_{}, D_prev2_{};
  T T_cur_{}, T_prev_{}, T_prev2_{};
};

/// Resums the 2F0-type series with the linear recurrence. Stops when two
/// consecutive relative increments fall below tol; if k_max is reached the
/// result carries converged = false and the best approximant seen.
template <class T>
TransformResult<T> drummond_2f0(const HypTerm2F0<T>& term, std::size_t n = 0,
                                double tol = kDefaultTolerance,
                                int k_max = kDefaultMaxOrder) {
  using Real = real_t<T>;
  if (term.z == T(0)) throw domain_error("drummond_2f0: z = 0 is a singular point");
  if (!(tol >= std::numeric_limits<Real>::epsilon()))
    throw domain_error("drummond_2f0: tol below machine epsilon");
  if (k_max < 2) throw domain_error("drummond_2f0: k_max must be at least 2");

  DrummondState<T> state(term, n);
  TransformResult<T> best;
  best.value = state.value();
  auto rel = [](const T& a, const T& b) {
    return static_cast<double>(std::abs(a - b) / std::abs(a));
  };
  while (!state.terminated() && static_cast<int>(state.order()) < k_max) {
    state.advance();
    if (state.terminated()) break;
    const double inc = rel(state.value(), state.previous());
    if (std::isfinite(inc) && inc <= best.est_rel_err) {
      best.value = state.value();
      best.order = static_cast<int>(state.order());
      best.est_rel_err = inc;
    }
    if (state.order() >= 2 && inc < tol && rel(state.previous(), state.previous2()) < tol) {
      return {state.value(), static_cast<int>(state.order()), true, inc};
    }
  }
  if (state.terminated()) return {state.value(), static_cast<int>(state.order()), true, 0.0};
  best.converged = false;
  return best;
}

/// T_n^(K) at a fixed order (no convergence test); an earlier termination
/// yields the exact sum.
template <class T>
T drummond_2f0_at_order(const HypTerm2F0<T>& term, std::size_t n, std::size_t order) {
  DrummondState<T> state(term, n);
  while (state.order() < order && state.advance()) {
  }
  return state.value();
}

/// Orders (mu, nu) of the second Lommel function S_{mu,nu}.
struct LommelOrder {
  double mu;
  double nu;

  double series_alpha() const { return (1 - mu + nu) / 2; }
  double series_beta() const { return (1 - mu - nu) / 2; }
};

/// S_{mu,nu}(x) from its divergent large-x expansion
///   x^(mu-1) sum_n (-1)^n ((1-mu+nu)/2)_n ((1-mu-nu)/2)_n (2/x)^(2n),
/// resummed with drummond_2f0 at z = x^2/4.
template <std::floating_point Real = double>
TransformResult<Real> lommel_s(const LommelOrder& order, Real x,
                               double tol = kDefaultTolerance,
                               int k_max = kDefaultMaxOrder) {
  if (!(x > 0) || !std::isfinite(x)) throw domain_error("lommel_s: requires x > 0");
  const HypTerm2F0<Real> term{Real(order.series_alpha()), Real(order.series_beta()),
                              x * x / 4};
  auto result = drummond_2f0(term, 0, tol, k_max);
  result.value *= std::pow(x, Real(order.mu) - 1);
  return result;
}

}  // namespace nlspectra

#endif  // NLSPECTRA_DRUMMOND_HPP_
