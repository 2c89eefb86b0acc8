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

#ifndef NLSPECTRA_ERRORS_HPP_
#define NLSPECTRA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace nlspectra {

// Argument outside the domain of an operation (bad kernel parameters,
// nonpositive Bessel argument, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Gamma function evaluated at (or numerically on top of) a pole.
class pole_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// An iterative evaluation hit its term or order cap.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal consistency check; never expected on the supported domain.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nlspectra

#endif  // NLSPECTRA_ERRORS_HPP_
