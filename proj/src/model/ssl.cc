// czsda/model/ssl.cc

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

#include "czsda/model/ssl.h"

#include <cmath>
#include <limits>

#include "czsda/base/error.h"

namespace czsda {
namespace model {

using numerics::Matrix;

namespace {

double SquaredDistance(const double *a, const double *b, int dim) {
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

Matrix PoolFrames(const std::vector<const Matrix *> &utterances) {
  if (utterances.empty()) throw ConfigError("ssl targets need utterances");
  const int dim = utterances.front()->Cols();
  long total = 0;
  for (const Matrix *u : utterances) {
    if (u->Cols() != dim) throw ShapeError("mixed feature dims in ssl pool");
    total += u->Rows();
  }
  Matrix pooled(static_cast<int>(total), dim);
  int row = 0;
  for (const Matrix *u : utterances) {
    for (int t = 0; t < u->Rows(); ++t, ++row) {
      std::copy(u->RowData(t), u->RowData(t) + dim, pooled.RowData(row));
    }
  }
  return pooled;
}

}  // namespace

SslTargets ComputeSslTargets(const std::vector<const Matrix *> &utterances,
                             int clusters, int max_iters,
                             numerics::Rng *rng) {
  if (clusters < 1) throw ConfigError("cluster count must be >= 1");
  const Matrix pooled = PoolFrames(utterances);
  const int n = pooled.Rows();
  const int dim = pooled.Cols();
  if (n < clusters) {
    throw ClusteringError("requested " + std::to_string(clusters) +
                          " clusters from " + std::to_string(n) + " frames");
  }

  // k-means++ seeding. A zero total distance while centroids are still
  // missing means the data has fewer distinct frames than clusters.
  Matrix codebook(clusters, dim);
  const int first = rng->UniformInt(n);
  std::copy(pooled.RowData(first), pooled.RowData(first) + dim,
            codebook.RowData(0));
  std::vector<double> best_dist(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < clusters; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d =
          SquaredDistance(pooled.RowData(i), codebook.RowData(c - 1), dim);
      best_dist[i] = std::min(best_dist[i], d);
      total += best_dist[i];
    }
    if (total <= 0.0) {
      throw ClusteringError("fewer distinct frames than clusters (" +
                            std::to_string(clusters) + ")");
    }
    double pick = rng->Uniform() * total;
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      pick -= best_dist[i];
      if (pick <= 0.0) {
        chosen = i;
        break;
      }
    }
    std::copy(pooled.RowData(chosen), pooled.RowData(chosen) + dim,
              codebook.RowData(c));
  }

  std::vector<int> assignment(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = SquaredDistance(pooled.RowData(i), codebook.RowData(0), dim);
      for (int c = 1; c < clusters; ++c) {
        const double d =
            SquaredDistance(pooled.RowData(i), codebook.RowData(c), dim);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    Matrix sums(clusters, dim);
    std::vector<int> counts(clusters, 0);
    for (int i = 0; i < n; ++i) {
      double *sum = sums.RowData(assignment[i]);
      const double *row = pooled.RowData(i);
      for (int d = 0; d < dim; ++d) sum[d] += row[d];
      ++counts[assignment[i]];
    }
    for (int c = 0; c < clusters; ++c) {
      if (counts[c] == 0) continue;  // keep the stale centroid
      double *dst = codebook.RowData(c);
      const double *sum = sums.RowData(c);
      for (int d = 0; d < dim; ++d) dst[d] = sum[d] / counts[c];
    }
  }

  SslTargets targets;
  targets.codebook = std::move(codebook);
  for (const Matrix *u : utterances) {
    targets.labels.push_back(AssignClusters(targets.codebook, *u));
  }
  return targets;
}

std::vector<int> AssignClusters(const Matrix &codebook, const Matrix &frames) {
  if (codebook.Cols() != frames.Cols()) {
    throw ShapeError("codebook dim " + std::to_string(codebook.Cols()) +
                     " vs frame dim " + std::to_string(frames.Cols()));
  }
  std::vector<int> labels(frames.Rows());
  for (int t = 0; t < frames.Rows(); ++t) {
    int best = 0;
    double best_d = SquaredDistance(frames.RowData(t), codebook.RowData(0),
                                    frames.Cols());
    for (int c = 1; c < codebook.Rows(); ++c) {
      const double d = SquaredDistance(frames.RowData(t), codebook.RowData(c),
                                       frames.Cols());
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[t] = best;
  }
  return labels;
}

SslLossResult SslLoss(const ModelParams &params, const Matrix &frames,
                      const std::vector<int> &targets, const MaskSpec &spec,
                      numerics::Rng *rng) {
  if (static_cast<int>(targets.size()) != frames.Rows()) {
    throw ShapeError("ssl targets length " + std::to_string(targets.size()) +
                     " vs " + std::to_string(frames.Rows()) + " frames");
  }
  const int clusters = params.head_ssl.Out();
  for (int label : targets) {
    if (label < 0 || label >= clusters) {
      throw VocabError("ssl target " + std::to_string(label) +
                       " outside [0, " + std::to_string(clusters) + ")");
    }
  }

  SslLossResult result;
  result.grads = ZerosLike(params);

  const MaskedFrames masked = MaskAugmentTracked(frames, spec, rng);
  result.masked_frames = masked.TimeMaskedCount();
  if (result.masked_frames == 0) return result;

  const ForwardTrace trace = Forward(params, masked.frames, Head::kSsl);
  const Matrix logp = numerics::LogSoftmaxRows(trace.logits);

  Matrix dlogits(trace.logits.Rows(), trace.logits.Cols());
  const double inv = 1.0 / result.masked_frames;
  for (int t = 0; t < frames.Rows(); ++t) {
    if (!masked.time_masked[t]) continue;
    result.loss -= logp(t, targets[t]) * inv;
    double *drow = dlogits.RowData(t);
    const double *lrow = logp.RowData(t);
    for (int k = 0; k < clusters; ++k) drow[k] = std::exp(lrow[k]) * inv;
    drow[targets[t]] -= inv;
  }
  Backward(params, trace, dlogits, &result.grads);
  return result;
}

}  // namespace model
}  // namespace czsda
