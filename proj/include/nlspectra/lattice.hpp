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

// Lattice batch surfaces: the spectrum over all distinct squared norms of a
// block of integer wavevectors, and diagonal application of the operator to
// a set of Fourier coefficients.
//
// Eigenvalues are independent of each other, so distinct norms are spread
// over worker threads. Results are keyed by the squared norm m and written
// to fixed slots; output never depends on the number of workers.

#ifndef NLSPECTRA_LATTICE_HPP_
#define NLSPECTRA_LATTICE_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "nlspectra/errors.hpp"
#include "nlspectra/spectra.hpp"

namespace nlspectra {

inline constexpr int kMaxLatticeExtent = 4096;

/// Squared lattice norm m = |k|^2 of an integer wavevector.
struct WavenumberKey {
  std::uint64_t m = 0;

  double k_mod() const { return std::sqrt(static_cast<double>(m)); }
  friend auto operator<=>(const WavenumberKey&, const WavenumberKey&) = default;
};

struct SpectrumTable {
  KernelParams params;
  int kmax = 0;
  std::map<std::uint64_t, EvalResult> entries;

  const EvalResult& at(std::uint64_t m) const { return entries.at(m); }
};

using LatticeVector = std::vector<std::int64_t>;
using FourierCoeffs = std::map<LatticeVector, std::complex<double>>;

/// Every m = k_1^2 + ... + k_d^2 with |k_i| <= kmax, ascending. Built one
/// coordinate at a time as a shift-or over a bitset of reachable sums.
inline std::vector<std::uint64_t> achievable_squared_norms(int d, int kmax) {
  if (d < 1 || kmax < 0 || kmax > kMaxLatticeExtent)
    throw domain_error("achievable_squared_norms: need d >= 1 and 0 <= kmax <= " +
                       std::to_string(kMaxLatticeExtent));
  const std::uint64_t top = static_cast<std::uint64_t>(d) * kmax * kmax;
  const std::size_t words = top / 64 + 1;
  std::vector<std::uint64_t> reach(words, 0), next(words);
  reach[0] = 1;
  for (int axis = 0; axis < d; ++axis) {
    std::fill(next.begin(), next.end(), 0);
    for (std::int64_t c = 0; c <= kmax; ++c) {
      const std::uint64_t shift = static_cast<std::uint64_t>(c * c);
      const std::size_t word_shift = shift / 64;
      const unsigned bit_shift = shift % 64;
      for (std::size_t w = words; w-- > word_shift;) {
        const std::size_t src = w - word_shift;
        std::uint64_t v = reach[src] << bit_shift;
        if (bit_shift != 0 && src > 0) v |= reach[src - 1] >> (64 - bit_shift);
        next[w] |= v;
      }
    }
    reach.swap(next);
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 0; m <= top; ++m)
    if ((reach[m / 64] >> (m % 64)) & 1U) out.push_back(m);
  return out;
}

namespace detail {

inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  return std::max(1U, std::thread::hardware_concurrency());
}

// Calls fn(i) for i in [0, count), striped over `jobs` threads (0 = all
// hardware threads). fn must only write to slots owned by index i.
template <class Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(resolve_jobs(jobs), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t)
    pool.emplace_back([&fn, t, workers, count] {
      for (std::size_t i = t; i < count; i += workers) fn(i);
    });
}

// Evaluates lambda_hybrid at sqrt(m) for each m, striping indices over
// workers. The first failing m (in input order) is rethrown, annotated.
inline std::vector<EvalResult> evaluate_norms(const KernelParams& params,
                                              const std::vector<std::uint64_t>& norms,
                                              double tol, unsigned jobs) {
  std::vector<EvalResult> results(norms.size());
  std::vector<std::exception_ptr> errors(norms.size());
  parallel_for(norms.size(), jobs, [&](std::size_t i) {
    try {
      results[i] = lambda_hybrid(params, WavenumberKey{norms[i]}.k_mod(), tol);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (!errors[i]) continue;
    const std::string where = "at m = " + std::to_string(norms[i]) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const convergence_error& e) {
      throw convergence_error(where + e.what());
    } catch (const domain_error& e) {
      throw domain_error(where + e.what());
    }
  }
  return results;
}

}  // namespace detail

/// lambda for every distinct squared norm in the block {-kmax..kmax}^d.
/// jobs = 0 uses all hardware threads.
inline SpectrumTable lattice_spectrum(const KernelParams& params, int kmax,
                                      double tol = kDefaultTolerance, unsigned jobs = 1) {
  params.validate();
  const auto norms = achievable_squared_norms(params.d, kmax);
  const auto results = detail::evaluate_norms(params, norms, tol, jobs);
  SpectrumTable table{params, kmax, {}};
  for (std::size_t i = 0; i < norms.size(); ++i) table.entries.emplace(norms[i], results[i]);
  return table;
}

/// Multiplies each Fourier amplitude by lambda(|k|): L e^{ik.x} = lambda e^{ik.x}.
inline FourierCoeffs apply_to_fourier_coeffs(const KernelParams& params,
                                             const FourierCoeffs& coeffs,
                                             double tol = kDefaultTolerance, unsigned jobs = 1) {
  params.validate();
  std::vector<std::uint64_t> norms;
  norms.reserve(coeffs.size());
  for (const auto& [k, amplitude] : coeffs) {
    if (k.size() != static_cast<std::size_t>(params.d))
      throw domain_error("apply_to_fourier_coeffs: wavevector length differs from d");
    std::uint64_t m = 0;
    for (auto c : k) {
      if (c < -kMaxLatticeExtent || c > kMaxLatticeExtent)
        throw domain_error("apply_to_fourier_coeffs: |k|_inf above " +
                           std::to_string(kMaxLatticeExtent));
      m += static_cast<std::uint64_t>(c * c);
    }
    norms.push_back(m);
  }
  std::vector<std::uint64_t> distinct = norms;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const auto results = detail::evaluate_norms(params, distinct, tol, jobs);

  FourierCoeffs out;
  std::size_t i = 0;
  for (const auto& [k, amplitude] : coeffs) {
    const auto pos = std::lower_bound(distinct.begin(), distinct.end(), norms[i++]);
    out.emplace(k, amplitude * results[pos - distinct.begin()].lambda);
  }
  return out;
}

}  // namespace nlspectra

#endif  // NLSPECTRA_LATTICE_HPP_
