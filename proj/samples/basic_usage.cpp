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

// Applies the nonlocal diffusion operator to a few Fourier modes on the
// 2-torus and prints the lattice spectrum of a small block.

#include <complex>
#include <cstdio>
#include <string>

#include "nlspectra/nlspectra.hpp"

int main() {
  const nlspectra::KernelParams params{2, 1.0, 0.5};

  for (double k : {0.5, 5.0, 11.9, 12.0, 40.0}) {
    const auto r = nlspectra::lambda_hybrid(params, k);
    std::printf("k = %-5g lambda = %.16e  (%s, %d terms)\n", k, r.lambda,
                std::string(nlspectra::to_string(r.method)).c_str(), r.terms);
  }

  const nlspectra::FourierCoeffs u = {
      {{0, 0}, {1.0, 0.0}}, {{3, 4}, {0.5, 0.0}}, {{5, 0}, {0.0, 0.5}}, {{1, -2}, {0.25, 0.25}}};
  for (const auto& [k, amp] : nlspectra::apply_to_fourier_coeffs(params, u))
    std::printf("(%lld, %lld) -> %.12f%+.12fi\n", static_cast<long long>(k[0]),
                static_cast<long long>(k[1]), amp.real(), amp.imag());

  const auto table = nlspectra::lattice_spectrum(params, 3);
  for (const auto& [m, r] : table.entries) std::printf("m = %2llu  lambda = %.16e\n",
                                                       static_cast<unsigned long long>(m), r.lambda);
}
