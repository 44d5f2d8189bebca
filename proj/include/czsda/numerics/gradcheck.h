// czsda/numerics/gradcheck.h

// Copyright 2026  czsda authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CZSDA_NUMERICS_GRADCHECK_H_
#define CZSDA_NUMERICS_GRADCHECK_H_

#include <functional>
#include <span>
#include <vector>

namespace czsda {
namespace numerics {

struct GradCheckOffender {
  int index = -1;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  // Worst coordinates, largest relative error first (up to 5).
  std::vector<GradCheckOffender> worst;

  bool Passed(double tol) const { return max_rel_err < tol; }
};

// Central-difference check of an analytic gradient. For each coordinate
// the numeric derivative is (f(p+h) - f(p-h)) / 2h and the relative
// error denominator is max(|analytic|, |numeric|, 1e-3 * gmax, 1e-10)
// where gmax is the largest magnitude seen in either gradient. The
// floor keeps coordinates that are tiny relative to the gradient scale
// from amplifying rounding noise in f into spurious failures.
GradCheckReport FiniteDiffCheck(
    const std::function<double(std::span<const double>)> &loss,
    std::span<const double> params, std::span<const double> analytic_grad,
    double step);

}  // namespace numerics
}  // namespace czsda

#endif  // CZSDA_NUMERICS_GRADCHECK_H_
