// czsda/numerics/eigen.h

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

#ifndef CZSDA_NUMERICS_EIGEN_H_
#define CZSDA_NUMERICS_EIGEN_H_

#include <vector>

#include "czsda/numerics/matrix.h"

namespace czsda {
namespace numerics {

struct EigenDecomposition {
  // Eigenvalues in descending order; eigenvectors(:, i) matches
  // eigenvalues[i]. Each eigenvector's largest-magnitude entry is made
  // positive so the decomposition is reproducible bit for bit.
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Sizes in this
// repository stay at or below 64×64 (encoder widths, feature dims), for
// which Jacobi is accurate and plenty fast.
EigenDecomposition SymmetricEigen(const Matrix &sym);

// Singular values of a general matrix, descending, via the eigenvalues
// of the smaller Gram matrix.
std::vector<double> SingularValues(const Matrix &a);

// sigma_max / sigma_min; +inf if the smallest singular value is zero.
double ConditionNumber(const Matrix &a);

}  // namespace numerics
}  // namespace czsda

#endif  // CZSDA_NUMERICS_EIGEN_H_
