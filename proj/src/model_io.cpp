/* Copyright 2026 The segcrf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <zlib.h>

#include <cstring>

#include "byte_stream.hpp"
#include "segcrf/data_io.hpp"

namespace segcrf {

namespace {

std::uint32_t crc_of(const std::uint8_t* data, std::size_t n) {
  return static_cast<std::uint32_t>(
      crc32(crc32(0L, Z_NULL, 0), data, static_cast<uInt>(n)));
}

void put_matrix_values(internal::ByteWriter& w, const Matrix& m) {
  for (double v : m.data()) w.put_f64(v);
}

void get_matrix_values(internal::ByteReader& r, Matrix& m) {
  r.need(m.size() * 8);
  for (double& v : m.data()) v = r.get_f64();
}

}  // namespace

std::vector<std::uint8_t> encode_model(const SegmenterModel& model) {
  SegmenterModel copy = model;
  internal::ByteWriter w;
  w.put_bytes(kModelMagic, 4);
  w.put_u32(kModelVersion);
  w.put_u32(static_cast<std::uint32_t>(copy.family));
  w.put_u32(static_cast<std::uint32_t>(copy.encoder.input_dim()));
  w.put_u32(static_cast<std::uint32_t>(copy.encoder.hidden_dim()));
  w.put_u32(static_cast<std::uint32_t>(copy.encoder.num_layers()));
  w.put_u32(static_cast<std::uint32_t>(copy.num_labels()));
  for (const auto& view : parameter_views(copy.encoder, copy.crf)) {
    for (double v : view.values) w.put_f64(v);
  }

  const auto& hmm = copy.hmm;
  w.put_u32(hmm.fitted() ? 1 : 0);
  if (hmm.fitted()) {
    w.put_u32(static_cast<std::uint32_t>(hmm.mode));
    w.put_u32(static_cast<std::uint32_t>(hmm.num_labels));
    w.put_u32(static_cast<std::uint32_t>(hmm.feature_dim));
    for (double v : hmm.initial) w.put_f64(v);
    put_matrix_values(w, hmm.transition);
    if (hmm.mode == baselines::ObservationModel::kGaussian) {
      put_matrix_values(w, hmm.means);
      put_matrix_values(w, hmm.variances);
    } else {
      put_matrix_values(w, hmm.symbol_probs);
    }
  }
  const auto& memm = copy.memm;
  w.put_u32(memm.fitted() ? 1 : 0);
  if (memm.fitted()) {
    w.put_u32(static_cast<std::uint32_t>(memm.num_labels));
    w.put_u32(static_cast<std::uint32_t>(memm.feature_dim));
    for (const auto& m : memm.weights) put_matrix_values(w, m);
  }
  auto& bytes = w.bytes();
  w.put_u32(crc_of(bytes.data(), bytes.size()));
  return std::move(w.bytes());
}

SegmenterModel decode_model(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12) throw FormatError("model file: truncated (checksum missing)");
  if (std::memcmp(bytes.data(), kModelMagic, 4) != 0) {
    throw FormatError("model file: bad magic bytes");
  }
  internal::ByteReader head(bytes.data() + 4, 4, "model file");
  const std::uint32_t version = head.get_u32();
  if (version != kModelVersion) {
    throw FormatError("model file: version " + std::to_string(version) +
                      " does not match supported version " +
                      std::to_string(kModelVersion));
  }
  const std::size_t body = bytes.size() - 4;
  internal::ByteReader tail(bytes.data() + body, 4, "model file");
  if (tail.get_u32() != crc_of(bytes.data(), body)) {
    throw FormatError("model file: checksum mismatch (corrupt or truncated)");
  }

  internal::ByteReader r(bytes.data() + 8, body - 8, "model file");
  SegmenterModel model;
  const std::uint32_t family = r.get_u32();
  if (family > static_cast<std::uint32_t>(DecoderFamily::kMemm)) {
    throw FormatError("model file: unknown decoder family");
  }
  model.family = static_cast<DecoderFamily>(family);
  const std::uint32_t input_dim = r.get_u32();
  const std::uint32_t hidden = r.get_u32();
  const std::uint32_t layers = r.get_u32();
  const std::uint32_t labels = r.get_u32();
  if (input_dim == 0 || hidden == 0 || layers == 0 || labels == 0) {
    throw FormatError("model file: zero dimension");
  }
  model.encoder = BiGruParams::zeros(input_dim, hidden, layers, labels);
  model.crf = crf::CrfParams(labels);
  for (auto& view : parameter_views(model.encoder, model.crf)) {
    r.need(view.values.size() * 8);
    for (double& v : view.values) v = r.get_f64();
  }

  if (r.get_u32() == 1) {
    auto& hmm = model.hmm;
    hmm.mode = static_cast<baselines::ObservationModel>(r.get_u32());
    hmm.num_labels = r.get_u32();
    hmm.feature_dim = r.get_u32();
    const std::size_t L = hmm.num_labels, F = hmm.feature_dim;
    hmm.initial.resize(L);
    r.need(L * 8);
    for (double& v : hmm.initial) v = r.get_f64();
    hmm.transition = Matrix(L, L);
    get_matrix_values(r, hmm.transition);
    if (hmm.mode == baselines::ObservationModel::kGaussian) {
      hmm.means = Matrix(L, F);
      hmm.variances = Matrix(L, F);
      get_matrix_values(r, hmm.means);
      get_matrix_values(r, hmm.variances);
    } else {
      if (F > baselines::kMaxCategoricalFeatures) {
        throw FormatError("model file: bad categorical feature count");
      }
      hmm.symbol_probs = Matrix(L, std::size_t{1} << F);
      get_matrix_values(r, hmm.symbol_probs);
    }
  }
  if (r.get_u32() == 1) {
    const std::size_t L = r.get_u32();
    const std::size_t F = r.get_u32();
    model.memm = baselines::memm_zeros(L, F);
    for (auto& m : model.memm.weights) get_matrix_values(r, m);
  }
  if (r.remaining() != 0) throw FormatError("model file: trailing bytes");
  return model;
}

void save_model(const SegmenterModel& model, const std::string& path) {
  write_file_bytes(path, encode_model(model));
}

SegmenterModel load_model(const std::string& path) {
  return decode_model(read_file_bytes(path));
}

}  // namespace segcrf
