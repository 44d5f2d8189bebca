// czsda/numerics/gradcheck.cc

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

#include "czsda/numerics/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "czsda/base/error.h"

namespace czsda {
namespace numerics {

GradCheckReport FiniteDiffCheck(
    const std::function<double(std::span<const double>)> &loss,
    std::span<const double> params, std::span<const double> analytic_grad,
    double step) {
  if (params.size() != analytic_grad.size()) {
    throw ShapeError("gradcheck: " + std::to_string(params.size()) +
                     " params vs " + std::to_string(analytic_grad.size()) +
                     " gradient entries");
  }

  std::vector<double> work(params.begin(), params.end());
  std::vector<double> numeric(params.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    const double saved = work[i];
    work[i] = saved + step;
    const double up = loss(work);
    work[i] = saved - step;
    const double down = loss(work);
    work[i] = saved;
    numeric[i] = (up - down) / (2.0 * step);
  }

  double gmax = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    gmax = std::max(gmax, std::fabs(analytic_grad[i]));
    gmax = std::max(gmax, std::fabs(numeric[i]));
  }
  const double floor = std::max(1e-3 * gmax, 1e-10);

  GradCheckReport report;
  std::vector<GradCheckOffender> all(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) {
    const double a = analytic_grad[i];
    const double n = numeric[i];
    const double denom = std::max({std::fabs(a), std::fabs(n), floor});
    all[i] = {static_cast<int>(i), a, n, std::fabs(a - n) / denom};
    report.max_rel_err = std::max(report.max_rel_err, all[i].rel_err);
  }
  std::sort(all.begin(), all.end(),
            [](const GradCheckOffender &x, const GradCheckOffender &y) {
              return x.rel_err > y.rel_err;
            });
  all.resize(std::min<std::size_t>(all.size(), 5));
  report.worst = std::move(all);
  return report;
}

}  // namespace numerics
}  // namespace czsda
