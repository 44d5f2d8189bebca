// czsda/eval/pca.cc

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

#include "czsda/eval/pca.h"

#include <cmath>
#include <cstdio>

#include "czsda/base/error.h"
#include "czsda/numerics/eigen.h"

namespace czsda {
namespace eval {

using numerics::Matrix;

PcaResult PcaOnPoints(const Matrix &pooled, const std::vector<int> &tokens,
                      const std::vector<std::string> &domains) {
  const int total = pooled.Rows();
  const int width = pooled.Cols();
  if (total < 3) throw UsageError("pca needs at least 3 frames");
  if (static_cast<int>(tokens.size()) != total ||
      static_cast<int>(domains.size()) != total) {
    throw ShapeError("pca labels must match the pooled row count");
  }

  // Column-centered covariance, top-2 eigenvectors.
  Matrix centered = pooled;
  for (int j = 0; j < width; ++j) {
    double mean = 0.0;
    for (int i = 0; i < total; ++i) mean += centered(i, j);
    mean /= total;
    for (int i = 0; i < total; ++i) centered(i, j) -= mean;
  }
  Matrix cov = numerics::MatTransMul(centered, centered);
  numerics::ScaleInPlace(&cov, 1.0 / total);
  const auto eig = numerics::SymmetricEigen(cov);

  double trace = 0.0;
  for (double lambda : eig.eigenvalues) trace += std::max(0.0, lambda);

  PcaResult result;
  result.components = Matrix(2, width);
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j < width; ++j) {
      result.components(c, j) = eig.eigenvectors(j, c);
    }
    result.explained.push_back(
        trace > 0.0 ? std::max(0.0, eig.eigenvalues[c]) / trace : 0.0);
  }

  result.points.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    PcaPoint point;
    const double *row = centered.RowData(i);
    for (int j = 0; j < width; ++j) {
      point.x += result.components(0, j) * row[j];
      point.y += result.components(1, j) * row[j];
    }
    point.token = tokens[i];
    point.domain = domains[i];
    result.points.push_back(std::move(point));
  }
  return result;
}

PcaResult PcaProject(const model::Checkpoint &ckpt,
                     const pipeline::LoadedCorpus &corpus, model::Head head,
                     int layer_index) {
  if (corpus.Empty()) throw UsageError("pca needs a non-empty corpus");

  std::vector<Matrix> layers;
  std::vector<int> tokens;
  std::vector<std::string> domains;
  long total = 0;
  for (const pipeline::LoadedUtterance &utt : corpus.utterances) {
    const model::ForwardTrace trace = Forward(ckpt.params, utt.frames, head);
    const int layer =
        layer_index < 0 ? static_cast<int>(trace.post.size()) - 1 : layer_index;
    if (layer < 0 || layer >= static_cast<int>(trace.post.size())) {
      throw UsageError("pca layer index " + std::to_string(layer_index) +
                       " out of range");
    }
    const std::vector<int> frame_tokens = ctc::FrameArgmax(trace.logits);
    layers.push_back(trace.post[layer]);
    tokens.insert(tokens.end(), frame_tokens.begin(), frame_tokens.end());
    domains.insert(domains.end(), static_cast<std::size_t>(utt.frames.Rows()),
                   utt.domain);
    total += trace.post[layer].Rows();
  }

  const int width = layers.front().Cols();
  Matrix pooled(static_cast<int>(total), width);
  int row = 0;
  for (const Matrix &m : layers) {
    for (int t = 0; t < m.Rows(); ++t, ++row) {
      std::copy(m.RowData(t), m.RowData(t) + width, pooled.RowData(row));
    }
  }
  return PcaOnPoints(pooled, tokens, domains);
}

std::string PcaCsv(const PcaResult &result) {
  char header[128];
  std::snprintf(header, sizeof(header),
                "# explained_variance,%.6f,%.6f\nx,y,token,domain\n",
                result.explained[0], result.explained[1]);
  std::string csv = header;
  for (const PcaPoint &point : result.points) {
    char line[160];
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%d,%s\n", point.x, point.y,
                  point.token, point.domain.c_str());
    csv += line;
  }
  return csv;
}

}  // namespace eval
}  // namespace czsda
