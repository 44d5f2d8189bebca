// czsda/numerics/eigen.cc

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

#include "czsda/numerics/eigen.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "czsda/base/error.h"

namespace czsda {
namespace numerics {

EigenDecomposition SymmetricEigen(const Matrix &sym) {
  if (sym.Rows() != sym.Cols()) {
    throw ShapeError("symmetric eigen on " + std::to_string(sym.Rows()) + "x" +
                     std::to_string(sym.Cols()));
  }
  const int n = sym.Rows();
  Matrix a = sym;
  Matrix q(n, n);
  for (int i = 0; i < n; ++i) q(i, i) = 1.0;

  double frob = 0.0;
  for (double v : a.Flat()) frob += v * v;
  frob = std::sqrt(frob);
  const double stop = std::max(1e-14 * frob, 1e-300);

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
    }
    if (std::sqrt(2.0 * off) <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int r = p + 1; r < n; ++r) {
        const double apq = a(p, r);
        if (std::fabs(apq) <= 1e-300) continue;
        const double app = a(p, p);
        const double aqq = a(r, r);
        const double theta = (aqq - app) / (2.0 * apq);
        // Smaller-angle root of t^2 + 2 theta t - 1 = 0.
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, r);
          a(k, p) = c * akp - s * akq;
          a(k, r) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(r, k);
          a(p, k) = c * apk - s * aqk;
          a(r, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double qkp = q(k, p);
          const double qkq = q(k, r);
          q(k, p) = c * qkp - s * qkq;
          q(k, r) = s * qkp + c * qkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&a](int i, int j) { return a(i, i) > a(j, j); });

  EigenDecomposition result;
  result.eigenvalues.resize(n);
  result.eigenvectors = Matrix(n, n);
  for (int col = 0; col < n; ++col) {
    const int src = order[col];
    result.eigenvalues[col] = a(src, src);
    int peak = 0;
    for (int k = 1; k < n; ++k) {
      if (std::fabs(q(k, src)) > std::fabs(q(peak, src))) peak = k;
    }
    const double sign = q(peak, src) < 0.0 ? -1.0 : 1.0;
    for (int k = 0; k < n; ++k) result.eigenvectors(k, col) = sign * q(k, src);
  }
  return result;
}

std::vector<double> SingularValues(const Matrix &a) {
  const bool tall = a.Rows() >= a.Cols();
  const Matrix gram = tall ? MatTransMul(a, a) : MatMulTransB(a, a);
  EigenDecomposition eig = SymmetricEigen(gram);
  std::vector<double> sigma(eig.eigenvalues.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    sigma[i] = std::sqrt(std::max(0.0, eig.eigenvalues[i]));
  }
  return sigma;
}

double ConditionNumber(const Matrix &a) {
  const std::vector<double> sigma = SingularValues(a);
  if (sigma.empty() || sigma.back() <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return sigma.front() / sigma.back();
}

}  // namespace numerics
}  // namespace czsda
