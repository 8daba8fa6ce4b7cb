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

#ifndef SEGCRF_EMISSIONS_HPP_
#define SEGCRF_EMISSIONS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segcrf/core.hpp"
#include "segcrf/crf.hpp"
#include "segcrf/matrix.hpp"

namespace segcrf {

// Frozen token representations. File-backed tables hold whole sequences keyed
// by record (or single-row entries keyed by token); hashed-random tables derive
// a Gaussian vector from each token string and the seed.
class EmbeddingTable {
 public:
  enum class Source { kFileBacked, kHashedRandom };

  static EmbeddingTable hashed_random(std::size_t dim, std::uint64_t seed);
  static EmbeddingTable file_backed(std::size_t dim,
                                    std::map<std::string, Matrix> entries);

  std::size_t dim() const { return dim_; }
  Source source() const { return source_; }
  std::uint64_t seed() const { return seed_; }
  const std::map<std::string, Matrix>& entries() const { return entries_; }

  // Deterministic vector for a token in hashed-random mode.
  std::vector<double> hashed_vector(const std::string& token) const;

 private:
  std::size_t dim_ = 0;
  Source source_ = Source::kHashedRandom;
  std::uint64_t seed_ = 0;
  std::map<std::string, Matrix> entries_;
};

// n x dim matrix for a token sequence. In file-backed mode a sequence stored
// under `key` is used when present; otherwise every token must have its own
// single-row entry. Throws DataError on a missing key or count mismatch.
Matrix lookup_embeddings(const TokenSequence& tokens, const EmbeddingTable& table,
                         const std::optional<std::string>& key = std::nullopt);

// fan_in x fan_out matrix, uniform in [-b, b] with b = sqrt(6 / (fan_in + fan_out)).
Matrix xavier_init(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed);
// Uniform in [-bound, bound].
Matrix uniform_init(std::size_t rows, std::size_t cols, double bound,
                    std::uint64_t seed);

struct DropoutPolicy {
  enum class Mode { kOff, kPerLayerLinear };
  double p_min = 0.0;
  double p_max = 0.0;
  Mode mode = Mode::kOff;
  std::uint64_t seed = 0;
};

// Rate for stacked layer `layer_index`, interpolated linearly from p_min at the
// bottom layer to p_max at the top one.
double dropout_rate(std::size_t layer_index, std::size_t num_layers,
                    const DropoutPolicy& policy);

struct GruCellParams {
  Matrix w_z, w_r, w_h;  // input_dim x hidden
  Matrix u_z, u_r, u_h;  // hidden x hidden
  Matrix b_z, b_r, b_h;  // 1 x hidden

  friend bool operator==(const GruCellParams&, const GruCellParams&) = default;
};

struct GruLayerParams {
  GruCellParams forward;
  GruCellParams backward;

  friend bool operator==(const GruLayerParams&, const GruLayerParams&) = default;
};

struct BiGruParams {
  std::vector<GruLayerParams> layers;
  Matrix head_weights;  // (2 * hidden) x num_labels
  Matrix head_bias;     // 1 x num_labels

  std::size_t input_dim() const;
  std::size_t hidden_dim() const;
  std::size_t num_layers() const { return layers.size(); }
  std::size_t num_labels() const { return head_bias.cols(); }

  static BiGruParams zeros(std::size_t input_dim, std::size_t hidden_dim,
                           std::size_t num_layers, std::size_t num_labels);

  friend bool operator==(const BiGruParams&, const BiGruParams&) = default;
};

struct InitScheme {
  // Xavier-uniform head; otherwise uniform(+-1/sqrt(fan_in)) like the usual
  // framework default for linear layers.
  bool xavier_head = true;
};

// GRU weights and biases use uniform(+-1/sqrt(hidden)); head per scheme; head
// bias zero.
BiGruParams init_bigru(std::size_t input_dim, std::size_t hidden_dim,
                       std::size_t num_layers, std::size_t num_labels,
                       const InitScheme& scheme, std::uint64_t seed);

// Activations kept by bigru_forward for the backward pass.
struct GruDirectionCache {
  Matrix z, r, candidate, h;  // n x hidden, indexed by token position
};

struct BiGruCache {
  bool valid = false;
  bool training = false;
  std::size_t length = 0;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::vector<Matrix> layer_inputs;     // input seen by each layer
  std::vector<GruDirectionCache> fwd;   // per layer
  std::vector<GruDirectionCache> bwd;   // per layer
  std::vector<Matrix> dropout_masks;    // per layer; empty when not training
  Matrix output;                        // n x 2*hidden fed to the head
};

// Stacked bidirectional GRU:
//   z = sigmoid(x W_z + h_prev U_z + b_z)
//   r = sigmoid(x W_r + h_prev U_r + b_r)
//   c = tanh(x W_h + (r * h_prev) U_h + b_h)
//   h = (1 - z) * h_prev + z * c
// Direction outputs are concatenated [forward, backward]. When training, each
// layer's output gets inverted dropout at dropout_rate(layer); masks are drawn
// from mask_seed.
Matrix bigru_forward(const Matrix& embeddings, const BiGruParams& params,
                     const DropoutPolicy& dropout, bool training,
                     std::uint64_t mask_seed, BiGruCache* cache = nullptr);

crf::EmissionScores head_forward(const Matrix& hidden, const BiGruParams& params);

struct EmissionGradients {
  BiGruParams params;  // same shapes as the model, holding gradients
  Matrix embeddings;   // n x input_dim
};

// Backpropagation through the head and both GRU directions of every layer.
// Reuses the forward dropout masks. Throws DataError on a missing or
// mismatched cache.
EmissionGradients emissions_backward(const Matrix& grad_emissions,
                                     const BiGruCache& cache,
                                     const BiGruParams& params);

}  // namespace segcrf

#endif  // SEGCRF_EMISSIONS_HPP_
