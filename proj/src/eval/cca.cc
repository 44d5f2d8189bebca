// czsda/eval/cca.cc

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

#include "czsda/eval/cca.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "czsda/base/error.h"
#include "czsda/numerics/eigen.h"

namespace czsda {
namespace eval {

using numerics::Matrix;

namespace {

// Pool one layer across utterances, thinning to the cap with a uniform
// stride so the selection is deterministic.
Matrix PoolLayer(const std::vector<model::LayerActivations> &acts,
                 std::size_t layer, int sample_cap) {
  long total = 0;
  const int width = acts.front().layers[layer].Cols();
  for (const auto &a : acts) total += a.layers[layer].Rows();

  const long keep = sample_cap > 0 ? std::min<long>(total, sample_cap) : total;
  Matrix pooled(static_cast<int>(keep), width);
  // Row r of the pooled output takes global frame floor(r * total / keep).
  long next_global = 0;
  long emitted = 0;
  long seen = 0;
  for (const auto &a : acts) {
    const Matrix &m = a.layers[layer];
    for (int t = 0; t < m.Rows(); ++t, ++seen) {
      if (emitted < keep && seen == next_global) {
        std::copy(m.RowData(t), m.RowData(t) + width,
                  pooled.RowData(static_cast<int>(emitted)));
        ++emitted;
        next_global = emitted * total / keep;
      }
    }
  }
  return pooled;
}

void CenterColumns(Matrix *m) {
  for (int j = 0; j < m->Cols(); ++j) {
    double mean = 0.0;
    for (int i = 0; i < m->Rows(); ++i) mean += (*m)(i, j);
    mean /= m->Rows();
    for (int i = 0; i < m->Rows(); ++i) (*m)(i, j) -= mean;
  }
}

// Inverse square root of a symmetric PSD matrix after adding the ridge.
// Returns false when the matrix has collapsed (non-finite or zero trace).
bool InverseSqrt(const Matrix &cov, double epsilon, Matrix *out) {
  if (!cov.AllFinite()) return false;
  const auto eig = numerics::SymmetricEigen(cov);
  Matrix scaled = eig.eigenvectors;  // columns scaled by lambda^{-1/2}
  for (int j = 0; j < scaled.Cols(); ++j) {
    const double lambda = eig.eigenvalues[j] + epsilon;
    if (lambda <= 0.0) return false;
    const double inv = 1.0 / std::sqrt(lambda);
    for (int i = 0; i < scaled.Rows(); ++i) scaled(i, j) *= inv;
  }
  *out = numerics::MatMulTransB(scaled, eig.eigenvectors);
  return true;
}

}  // namespace

CcaReport CcaSimilarity(const std::vector<model::LayerActivations> &a,
                        const std::vector<model::LayerActivations> &b,
                        int sample_cap) {
  if (a.empty() || b.empty() || a.size() != b.size()) {
    throw UsageError("cca needs the same utterances on both sides");
  }
  const std::size_t layer_count = a.front().layers.size();
  if (b.front().layers.size() != layer_count) {
    throw UsageError("cca inputs disagree on layer count");
  }

  CcaReport report;
  for (std::size_t layer = 0; layer < layer_count; ++layer) {
    Matrix x = PoolLayer(a, layer, sample_cap);
    Matrix y = PoolLayer(b, layer, sample_cap);
    if (x.Rows() != y.Rows()) {
      throw UsageError("cca pooled frame counts differ on layer " +
                       std::to_string(layer));
    }
    CcaLayerResult result;
    result.label = a.front().labels[layer];
    result.samples = x.Rows();

    CenterColumns(&x);
    CenterColumns(&y);
    const double inv_n = 1.0 / x.Rows();
    Matrix sxx = numerics::MatTransMul(x, x);
    Matrix syy = numerics::MatTransMul(y, y);
    Matrix sxy = numerics::MatTransMul(x, y);
    numerics::ScaleInPlace(&sxx, inv_n);
    numerics::ScaleInPlace(&syy, inv_n);
    numerics::ScaleInPlace(&sxy, inv_n);

    double trace_x = 0.0, trace_y = 0.0;
    for (int j = 0; j < sxx.Cols(); ++j) trace_x += sxx(j, j);
    for (int j = 0; j < syy.Cols(); ++j) trace_y += syy(j, j);
    const double eps_x = 1e-6 * trace_x / sxx.Cols();
    const double eps_y = 1e-6 * trace_y / syy.Cols();
    result.epsilon = eps_x;

    Matrix wx, wy;
    if (trace_x <= 0.0 || trace_y <= 0.0 || !InverseSqrt(sxx, eps_x, &wx) ||
        !InverseSqrt(syy, eps_y, &wy)) {
      report.layers.push_back(std::move(result));  // collapsed: no similarity
      continue;
    }

    const Matrix m = numerics::MatMul(numerics::MatMul(wx, sxy), wy);
    const std::vector<double> sigma = numerics::SingularValues(m);
    const std::size_t corr_count =
        std::min<std::size_t>(sxx.Cols(), syy.Cols());
    double mean = 0.0;
    for (std::size_t i = 0; i < corr_count; ++i) {
      mean += std::clamp(sigma[i], 0.0, 1.0);
    }
    result.similarity = mean / corr_count;
    report.layers.push_back(std::move(result));
  }
  return report;
}

std::vector<model::LayerActivations> CollectActivations(
    const model::Checkpoint &ckpt, const pipeline::LoadedCorpus &corpus) {
  std::vector<model::LayerActivations> acts;
  acts.reserve(corpus.utterances.size());
  for (const pipeline::LoadedUtterance &utt : corpus.utterances) {
    acts.push_back(
        Forward(ckpt.params, utt.frames, model::Head::kTarget).Activations());
  }
  return acts;
}

std::string CcaCsv(const CcaReport &report) {
  std::string csv = "layer,similarity,samples,epsilon,config\n";
  for (const CcaLayerResult &layer : report.layers) {
    char line[256];
    if (layer.similarity) {
      std::snprintf(line, sizeof(line), "%s,%.6f,%d,%.3e,%s\n",
                    layer.label.c_str(), *layer.similarity, layer.samples,
                    layer.epsilon, report.config_hash.c_str());
    } else {
      std::snprintf(line, sizeof(line), "%s,-,%d,%.3e,%s\n",
                    layer.label.c_str(), layer.samples, layer.epsilon,
                    report.config_hash.c_str());
    }
    csv += line;
  }
  return csv;
}

}  // namespace eval
}  // namespace czsda
