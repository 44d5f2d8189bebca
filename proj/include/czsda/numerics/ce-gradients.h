// czsda/numerics/ce-gradients.h

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

#ifndef CZSDA_NUMERICS_CE_GRADIENTS_H_
#define CZSDA_NUMERICS_CE_GRADIENTS_H_

#include "czsda/numerics/matrix.h"

namespace czsda {
namespace numerics {

// Gradient of -y·log softmax(v) with respect to the logits v:
// softmax(v) - y. |y| may be one-hot or a soft target; entries of the
// result sum to 1 - sum(y), i.e. to zero for any proper distribution.
Matrix SoftmaxCeGrad(const Matrix &logits, const Matrix &target);

struct CeLayerGrads {
  Matrix d_classifier;  // C×E
  Matrix d_extractor;   // E×N
};

// Analytic gradients of the two-layer cross-entropy loss
// L(o, y; W_e, W_c) = -y·log softmax(W_c W_e o) for a single frame:
//   dW_c = (softmax(W_c z) - y) zᵀ          with z = W_e o,
//   dW_e = W_cᵀ (softmax(W_c W_e o) - y) oᵀ.
CeLayerGrads CeLayerGradients(const Matrix &input, const Matrix &target,
                              const Matrix &extractor, const Matrix &classifier);

// The loss value itself, used by the finite-difference verification.
double CeLayerLoss(const Matrix &input, const Matrix &target,
                   const Matrix &extractor, const Matrix &classifier);

}  // namespace numerics
}  // namespace czsda

#endif  // CZSDA_NUMERICS_CE_GRADIENTS_H_
