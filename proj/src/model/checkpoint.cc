// czsda/model/checkpoint.cc

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

#include "czsda/model/checkpoint.h"

#include <fstream>
#include <map>
#include <utility>
#include <vector>

#include "czsda/base/error.h"
#include "czsda/base/io.h"

namespace czsda {
namespace model {

namespace {

constexpr const char kMagic[] = "CZSDA1";

using NamedTensor = std::pair<std::string, numerics::Matrix>;

std::vector<NamedTensor> Flatten(const Checkpoint &ckpt) {
  std::vector<NamedTensor> tensors;
  ForEachParam(ckpt.params,
               [&tensors](const std::string &name, const numerics::Matrix &m) {
                 tensors.emplace_back(name, m);
               });
  if (ckpt.ema) {
    ForEachParam(ckpt.ema->params, [&tensors](const std::string &name,
                                              const numerics::Matrix &m) {
      tensors.emplace_back("ema." + name, m);
    });
  }
  if (ckpt.ssl_codebook) {
    tensors.emplace_back("ssl_codebook", *ckpt.ssl_codebook);
  }
  return tensors;
}

}  // namespace

void SaveCheckpoint(const Checkpoint &ckpt, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write checkpoint " + path);

  os.write(kMagic, sizeof(kMagic) - 1);
  io::WriteU32(os, static_cast<std::uint32_t>(ckpt.params.feature_dim));
  io::WriteU32(os, static_cast<std::uint32_t>(ckpt.params.context_radius));
  io::WriteU32(os, static_cast<std::uint32_t>(ckpt.params.encoder.size()));
  io::WriteU32(os, static_cast<std::uint32_t>(ckpt.params.head_target.Out()));
  io::WriteU32(os, static_cast<std::uint32_t>(ckpt.params.head_source.Out()));
  io::WriteU32(os, static_cast<std::uint32_t>(ckpt.params.head_ssl.Out()));
  for (const AffineLayer &layer : ckpt.params.encoder) {
    io::WriteU32(os, static_cast<std::uint32_t>(layer.In()));
    io::WriteU32(os, static_cast<std::uint32_t>(layer.Out()));
  }
  os.put(ckpt.ema ? 1 : 0);
  if (ckpt.ema) io::WriteF64(os, ckpt.ema->decay);
  os.put(ckpt.ssl_codebook ? 1 : 0);
  if (ckpt.ssl_codebook) {
    io::WriteU32(os, static_cast<std::uint32_t>(ckpt.ssl_codebook->Rows()));
    io::WriteU32(os, static_cast<std::uint32_t>(ckpt.ssl_codebook->Cols()));
  }

  const std::vector<NamedTensor> tensors = Flatten(ckpt);
  io::WriteU32(os, static_cast<std::uint32_t>(tensors.size()));
  for (const auto &[name, tensor] : tensors) {
    io::WriteString(os, name);
    io::WriteU64(os, static_cast<std::uint64_t>(tensor.Rows()));
    io::WriteU64(os, static_cast<std::uint64_t>(tensor.Cols()));
    io::WriteMatrixPayload(os, tensor);
  }
  if (!os) throw IoError("write failed for checkpoint " + path);
}

Checkpoint LoadCheckpoint(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path);
  io::ExpectMagic(is, kMagic, path);

  ModelConfig config;
  config.feature_dim = static_cast<int>(io::ReadU32(is));
  config.context_radius = static_cast<int>(io::ReadU32(is));
  config.encoder_layers = static_cast<int>(io::ReadU32(is));
  config.vocab_target = static_cast<int>(io::ReadU32(is));
  config.vocab_source = static_cast<int>(io::ReadU32(is));
  config.ssl_clusters = static_cast<int>(io::ReadU32(is));
  std::vector<std::pair<int, int>> layer_shapes(config.encoder_layers);
  for (auto &[in, out] : layer_shapes) {
    in = static_cast<int>(io::ReadU32(is));
    out = static_cast<int>(io::ReadU32(is));
  }

  const bool has_ema = is.get() == 1;
  double ema_decay = 0.0;
  if (has_ema) ema_decay = io::ReadF64(is);
  const bool has_codebook = is.get() == 1;
  int codebook_rows = 0, codebook_cols = 0;
  if (has_codebook) {
    codebook_rows = static_cast<int>(io::ReadU32(is));
    codebook_cols = static_cast<int>(io::ReadU32(is));
  }

  Checkpoint ckpt;
  ckpt.params.feature_dim = config.feature_dim;
  ckpt.params.context_radius = config.context_radius;
  for (const auto &[in, out] : layer_shapes) {
    AffineLayer layer;
    layer.weight = numerics::Matrix(out, in);
    layer.bias = numerics::Matrix(out, 1);
    ckpt.params.encoder.push_back(std::move(layer));
  }
  const int hidden = layer_shapes.empty() ? ckpt.params.StackedDim()
                                          : layer_shapes.back().second;
  auto make_head = [hidden](int out) {
    AffineLayer layer;
    layer.weight = numerics::Matrix(out, hidden);
    layer.bias = numerics::Matrix(out, 1);
    return layer;
  };
  ckpt.params.head_target = make_head(config.vocab_target);
  ckpt.params.head_source = make_head(config.vocab_source);
  ckpt.params.head_ssl = make_head(config.ssl_clusters);
  if (has_ema) {
    ckpt.ema = EmaShadow{ckpt.params, ema_decay};
  }
  if (has_codebook) {
    ckpt.ssl_codebook = numerics::Matrix(codebook_rows, codebook_cols);
  }

  // Index the destination tensors by name, then fill from the stream.
  std::map<std::string, numerics::Matrix *> slots;
  ForEachParam(&ckpt.params,
               [&slots](const std::string &name, numerics::Matrix *m) {
                 slots[name] = m;
               });
  if (ckpt.ema) {
    ForEachParam(&ckpt.ema->params,
                 [&slots](const std::string &name, numerics::Matrix *m) {
                   slots["ema." + name] = m;
                 });
  }
  if (ckpt.ssl_codebook) slots["ssl_codebook"] = &*ckpt.ssl_codebook;

  const std::uint32_t count = io::ReadU32(is);
  if (count != slots.size()) {
    throw IoError("checkpoint " + path + " has " + std::to_string(count) +
                  " tensors, header implies " + std::to_string(slots.size()));
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = io::ReadString(is);
    const int rows = static_cast<int>(io::ReadU64(is));
    const int cols = static_cast<int>(io::ReadU64(is));
    auto it = slots.find(name);
    if (it == slots.end()) {
      throw IoError("checkpoint " + path + " has unexpected tensor " + name);
    }
    if (it->second->Rows() != rows || it->second->Cols() != cols) {
      throw IoError("checkpoint " + path + " tensor " + name +
                    " has shape " + std::to_string(rows) + "x" +
                    std::to_string(cols) + ", header implies " +
                    std::to_string(it->second->Rows()) + "x" +
                    std::to_string(it->second->Cols()));
    }
    *it->second = io::ReadMatrixPayload(is, rows, cols);
  }
  return ckpt;
}

}  // namespace model
}  // namespace czsda
