// czsda/numerics/ce-gradients.cc

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

#include "czsda/numerics/ce-gradients.h"

#include <cmath>

#include "czsda/base/error.h"

namespace czsda {
namespace numerics {

Matrix SoftmaxCeGrad(const Matrix &logits, const Matrix &target) {
  CheckSameShape(logits, target, "softmax-ce grad");
  if (logits.Cols() != 1) {
    throw ShapeError("softmax-ce grad expects column vectors");
  }
  Matrix grad = Softmax(logits);
  for (int i = 0; i < grad.Rows(); ++i) grad(i, 0) -= target(i, 0);
  return grad;
}

CeLayerGrads CeLayerGradients(const Matrix &input, const Matrix &target,
                              const Matrix &extractor,
                              const Matrix &classifier) {
  if (input.Cols() != 1 || target.Cols() != 1 ||
      extractor.Cols() != input.Rows() ||
      classifier.Cols() != extractor.Rows() ||
      classifier.Rows() != target.Rows()) {
    throw ShapeError("ce layer grads: inconsistent shapes o=" +
                     std::to_string(input.Rows()) + " W_e=" +
                     std::to_string(extractor.Rows()) + "x" +
                     std::to_string(extractor.Cols()) + " W_c=" +
                     std::to_string(classifier.Rows()) + "x" +
                     std::to_string(classifier.Cols()));
  }
  const Matrix hidden = MatMul(extractor, input);          // z = W_e o
  const Matrix logits = MatMul(classifier, hidden);        // v = W_c z
  const Matrix delta = SoftmaxCeGrad(logits, target);      // softmax(v) - y

  CeLayerGrads grads;
  grads.d_classifier = MatMul(delta, Transpose(hidden));   // (softmax - y) zᵀ
  grads.d_extractor =
      MatMul(MatMul(Transpose(classifier), delta), Transpose(input));
  return grads;
}

double CeLayerLoss(const Matrix &input, const Matrix &target,
                   const Matrix &extractor, const Matrix &classifier) {
  const Matrix logits = MatMul(classifier, MatMul(extractor, input));
  Matrix logp(logits.Rows(), 1);
  double hi = logits(0, 0);
  for (int i = 1; i < logits.Rows(); ++i) hi = std::max(hi, logits(i, 0));
  double acc = 0.0;
  for (int i = 0; i < logits.Rows(); ++i) acc += std::exp(logits(i, 0) - hi);
  const double lz = hi + std::log(acc);
  double loss = 0.0;
  for (int i = 0; i < logits.Rows(); ++i) {
    loss -= target(i, 0) * (logits(i, 0) - lz);
  }
  return loss;
}

}  // namespace numerics
}  // namespace czsda
