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

#include "segcrf/emissions.hpp"

#include <cmath>
#include <random>
#include <string>

#include "segcrf/random.hpp"

namespace segcrf {

EmbeddingTable EmbeddingTable::hashed_random(std::size_t dim,
                                             std::uint64_t seed) {
  if (dim == 0) throw DataError("embedding dim must be positive");
  EmbeddingTable t;
  t.dim_ = dim;
  t.source_ = Source::kHashedRandom;
  t.seed_ = seed;
  return t;
}

EmbeddingTable EmbeddingTable::file_backed(
    std::size_t dim, std::map<std::string, Matrix> entries) {
  if (dim == 0) throw DataError("embedding dim must be positive");
  for (const auto& [key, m] : entries) {
    if (m.cols() != dim) {
      throw DataError("embedding entry '" + key + "' has dim " +
                      std::to_string(m.cols()) + ", expected " +
                      std::to_string(dim));
    }
  }
  EmbeddingTable t;
  t.dim_ = dim;
  t.source_ = Source::kFileBacked;
  t.entries_ = std::move(entries);
  return t;
}

std::vector<double> EmbeddingTable::hashed_vector(
    const std::string& token) const {
  Rng rng(mix_seed(fnv1a64(token), seed_));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim_);
  for (double& x : v) x = normal(rng);
  return v;
}

Matrix lookup_embeddings(const TokenSequence& tokens, const EmbeddingTable& table,
                         const std::optional<std::string>& key) {
  const std::size_t n = tokens.size();
  Matrix out(n, table.dim());
  if (table.source() == EmbeddingTable::Source::kHashedRandom) {
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<double> v = table.hashed_vector(tokens[t]);
      std::copy(v.begin(), v.end(), out.row(t).begin());
    }
    return out;
  }
  if (key) {
    auto it = table.entries().find(*key);
    if (it != table.entries().end()) {
      if (it->second.rows() != n) {
        throw DataError("embedding sequence '" + *key + "' has " +
                        std::to_string(it->second.rows()) + " rows but " +
                        std::to_string(n) + " tokens");
      }
      return it->second;
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    auto it = table.entries().find(tokens[t]);
    if (it == table.entries().end() || it->second.rows() != 1) {
      throw DataError("no embedding for " +
                      (key ? "sequence '" + *key + "'" : "token '" + tokens[t] + "'"));
    }
    auto src = it->second.row(0);
    std::copy(src.begin(), src.end(), out.row(t).begin());
  }
  return out;
}

Matrix uniform_init(std::size_t rows, std::size_t cols, double bound,
                    std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = uniform(rng, -bound, bound);
  return m;
}

Matrix xavier_init(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed) {
  if (fan_in == 0 || fan_out == 0) throw DataError("xavier_init: zero fan");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return uniform_init(fan_in, fan_out, bound, seed);
}

double dropout_rate(std::size_t layer_index, std::size_t num_layers,
                    const DropoutPolicy& policy) {
  if (layer_index >= num_layers) throw DataError("dropout_rate: bad layer index");
  if (policy.mode == DropoutPolicy::Mode::kOff) return 0.0;
  if (num_layers == 1) return policy.p_min;
  return policy.p_min + (policy.p_max - policy.p_min) *
                            static_cast<double>(layer_index) /
                            static_cast<double>(num_layers - 1);
}

std::size_t BiGruParams::input_dim() const {
  return layers.empty() ? 0 : layers.front().forward.w_z.rows();
}

std::size_t BiGruParams::hidden_dim() const {
  return layers.empty() ? 0 : layers.front().forward.u_z.rows();
}

namespace {

GruCellParams zero_cell(std::size_t in, std::size_t h) {
  GruCellParams c;
  c.w_z = c.w_r = c.w_h = Matrix(in, h);
  c.u_z = c.u_r = c.u_h = Matrix(h, h);
  c.b_z = c.b_r = c.b_h = Matrix(1, h);
  return c;
}

GruCellParams random_cell(std::size_t in, std::size_t h, std::uint64_t seed) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(h));
  GruCellParams c;
  Matrix* parts[] = {&c.w_z, &c.w_r, &c.w_h, &c.u_z, &c.u_r,
                     &c.u_h, &c.b_z, &c.b_r, &c.b_h};
  const std::size_t rows[] = {in, in, in, h, h, h, 1, 1, 1};
  for (std::size_t i = 0; i < 9; ++i) {
    *parts[i] = uniform_init(rows[i], h, bound, mix_seed(seed, i));
  }
  return c;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// out(1 x cols) += v(1 x rows) * m(rows x cols)
void add_vec_mat(std::span<const double> v, const Matrix& m,
                 std::span<double> out) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    auto row = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += vi * row[j];
  }
}

// out(1 x rows) += m(rows x cols) * v(cols)
void add_mat_vec(const Matrix& m, std::span<const double> v,
                 std::span<double> out) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += row[j] * v[j];
    out[i] += s;
  }
}

// g(rows x cols) += a(rows)^T b(cols)
void add_outer(std::span<const double> a, std::span<const double> b, Matrix& g) {
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    auto row = g.row(i);
    for (std::size_t j = 0; j < g.cols(); ++j) row[j] += ai * b[j];
  }
}

void run_direction(const Matrix& x, const GruCellParams& p, bool reverse,
                   GruDirectionCache& c) {
  const std::size_t n = x.rows();
  const std::size_t h = p.u_z.rows();
  c.z = c.r = c.candidate = c.h = Matrix(n, h);
  std::vector<double> zero(h, 0.0), az(h), ar(h), ac(h), rh(h);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t t = reverse ? n - 1 - step : step;
    std::span<const double> prev =
        step == 0 ? std::span<const double>(zero)
                  : c.h.row(reverse ? t + 1 : t - 1);
    auto xt = x.row(t);
    std::copy(p.b_z.data().begin(), p.b_z.data().end(), az.begin());
    std::copy(p.b_r.data().begin(), p.b_r.data().end(), ar.begin());
    std::copy(p.b_h.data().begin(), p.b_h.data().end(), ac.begin());
    add_vec_mat(xt, p.w_z, az);
    add_vec_mat(prev, p.u_z, az);
    add_vec_mat(xt, p.w_r, ar);
    add_vec_mat(prev, p.u_r, ar);
    for (std::size_t k = 0; k < h; ++k) {
      c.z(t, k) = sigmoid(az[k]);
      c.r(t, k) = sigmoid(ar[k]);
      rh[k] = c.r(t, k) * prev[k];
    }
    add_vec_mat(xt, p.w_h, ac);
    add_vec_mat(rh, p.u_h, ac);
    for (std::size_t k = 0; k < h; ++k) {
      const double cand = std::tanh(ac[k]);
      c.candidate(t, k) = cand;
      c.h(t, k) = (1.0 - c.z(t, k)) * prev[k] + c.z(t, k) * cand;
    }
  }
}

// Backpropagation through time for one direction. grad_h holds the gradient
// arriving at each h_t from above; grad_x accumulates into the layer input.
void backprop_direction(const Matrix& x, const GruCellParams& p,
                        const GruDirectionCache& c, bool reverse,
                        const Matrix& grad_h, GruCellParams& g, Matrix& grad_x) {
  const std::size_t n = x.rows();
  const std::size_t h = p.u_z.rows();
  std::vector<double> zero(h, 0.0), carry(h, 0.0), dh(h), daz(h), dar(h),
      dac(h), drh(h), rh(h), next_carry(h);
  for (std::size_t step = n; step-- > 0;) {
    const std::size_t t = reverse ? n - 1 - step : step;
    std::span<const double> prev =
        step == 0 ? std::span<const double>(zero)
                  : c.h.row(reverse ? t + 1 : t - 1);
    auto xt = x.row(t);
    for (std::size_t k = 0; k < h; ++k) dh[k] = grad_h(t, k) + carry[k];
    for (std::size_t k = 0; k < h; ++k) {
      const double z = c.z(t, k), cand = c.candidate(t, k);
      daz[k] = dh[k] * (cand - prev[k]) * z * (1.0 - z);
      dac[k] = dh[k] * z * (1.0 - cand * cand);
      next_carry[k] = dh[k] * (1.0 - z);
      rh[k] = c.r(t, k) * prev[k];
    }
    std::fill(drh.begin(), drh.end(), 0.0);
    add_mat_vec(p.u_h, dac, drh);
    for (std::size_t k = 0; k < h; ++k) {
      const double r = c.r(t, k);
      dar[k] = drh[k] * prev[k] * r * (1.0 - r);
      next_carry[k] += drh[k] * r;
    }
    add_mat_vec(p.u_z, daz, next_carry);
    add_mat_vec(p.u_r, dar, next_carry);

    auto gx = grad_x.row(t);
    add_mat_vec(p.w_z, daz, gx);
    add_mat_vec(p.w_r, dar, gx);
    add_mat_vec(p.w_h, dac, gx);

    add_outer(xt, daz, g.w_z);
    add_outer(xt, dar, g.w_r);
    add_outer(xt, dac, g.w_h);
    add_outer(prev, daz, g.u_z);
    add_outer(prev, dar, g.u_r);
    add_outer(rh, dac, g.u_h);
    for (std::size_t k = 0; k < h; ++k) {
      g.b_z(0, k) += daz[k];
      g.b_r(0, k) += dar[k];
      g.b_h(0, k) += dac[k];
    }
    carry.swap(next_carry);
  }
}

}  // namespace

BiGruParams BiGruParams::zeros(std::size_t input_dim, std::size_t hidden_dim,
                               std::size_t num_layers, std::size_t num_labels) {
  BiGruParams p;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t in = l == 0 ? input_dim : 2 * hidden_dim;
    p.layers.push_back({zero_cell(in, hidden_dim), zero_cell(in, hidden_dim)});
  }
  p.head_weights = Matrix(2 * hidden_dim, num_labels);
  p.head_bias = Matrix(1, num_labels);
  return p;
}

BiGruParams init_bigru(std::size_t input_dim, std::size_t hidden_dim,
                       std::size_t num_layers, std::size_t num_labels,
                       const InitScheme& scheme, std::uint64_t seed) {
  if (input_dim == 0 || hidden_dim == 0 || num_layers == 0 || num_labels == 0) {
    throw DataError("init_bigru: all dimensions must be positive");
  }
  BiGruParams p;
  for (std::size_t l = 0; l < num_layers; ++l) {
    const std::size_t in = l == 0 ? input_dim : 2 * hidden_dim;
    p.layers.push_back({random_cell(in, hidden_dim, mix_seed(seed, 2 * l)),
                        random_cell(in, hidden_dim, mix_seed(seed, 2 * l + 1))});
  }
  const std::uint64_t head_seed = mix_seed(seed, 1000003);
  p.head_weights =
      scheme.xavier_head
          ? xavier_init(2 * hidden_dim, num_labels, head_seed)
          : uniform_init(2 * hidden_dim, num_labels,
                         1.0 / std::sqrt(2.0 * static_cast<double>(hidden_dim)),
                         head_seed);
  p.head_bias = Matrix(1, num_labels);
  return p;
}

Matrix bigru_forward(const Matrix& embeddings, const BiGruParams& params,
                     const DropoutPolicy& dropout, bool training,
                     std::uint64_t mask_seed, BiGruCache* cache) {
  const std::size_t n = embeddings.rows();
  if (n == 0) throw DataError("bigru_forward: empty sequence");
  if (params.layers.empty()) throw DataError("bigru_forward: no layers");
  if (embeddings.cols() != params.input_dim()) {
    throw DataError("bigru_forward: embedding dim " +
                    std::to_string(embeddings.cols()) + " != model input dim " +
                    std::to_string(params.input_dim()));
  }
  const std::size_t h = params.hidden_dim();
  const std::size_t L = params.num_layers();
  BiGruCache local;
  BiGruCache& c = cache ? *cache : local;
  c = BiGruCache{};
  c.training = training;
  c.length = n;
  c.input_dim = embeddings.cols();
  c.hidden_dim = h;
  c.fwd.resize(L);
  c.bwd.resize(L);

  Matrix input = embeddings;
  for (std::size_t l = 0; l < L; ++l) {
    run_direction(input, params.layers[l].forward, false, c.fwd[l]);
    run_direction(input, params.layers[l].backward, true, c.bwd[l]);
    Matrix out(n, 2 * h);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t k = 0; k < h; ++k) {
        out(t, k) = c.fwd[l].h(t, k);
        out(t, h + k) = c.bwd[l].h(t, k);
      }
    }
    if (training) {
      const double p = dropout_rate(l, L, dropout);
      Matrix mask(n, 2 * h, 1.0);
      if (p > 0.0) {
        Rng rng(mix_seed(mask_seed, l));
        const double keep_scale = 1.0 / (1.0 - p);
        for (double& m : mask.data()) m = uniform01(rng) < p ? 0.0 : keep_scale;
        for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= mask.data()[i];
      }
      c.dropout_masks.push_back(std::move(mask));
    }
    c.layer_inputs.push_back(std::move(input));
    input = std::move(out);
  }
  c.output = input;
  c.valid = true;
  return input;
}

crf::EmissionScores head_forward(const Matrix& hidden, const BiGruParams& params) {
  if (hidden.cols() != params.head_weights.rows()) {
    throw DataError("head_forward: hidden width does not match head weights");
  }
  Matrix scores(hidden.rows(), params.num_labels());
  for (std::size_t t = 0; t < hidden.rows(); ++t) {
    auto out = scores.row(t);
    std::copy(params.head_bias.data().begin(), params.head_bias.data().end(),
              out.begin());
    add_vec_mat(hidden.row(t), params.head_weights, out);
  }
  return crf::EmissionScores(std::move(scores));
}

EmissionGradients emissions_backward(const Matrix& grad_emissions,
                                     const BiGruCache& cache,
                                     const BiGruParams& params) {
  if (!cache.valid || !cache.training) {
    throw DataError("emissions_backward: missing or non-training forward cache");
  }
  if (cache.length != grad_emissions.rows() ||
      cache.input_dim != params.input_dim() ||
      cache.hidden_dim != params.hidden_dim() ||
      cache.fwd.size() != params.num_layers() ||
      grad_emissions.cols() != params.num_labels()) {
    throw DataError("emissions_backward: stale cache for these parameters");
  }
  const std::size_t n = cache.length;
  const std::size_t h = cache.hidden_dim;
  EmissionGradients g;
  g.params = BiGruParams::zeros(params.input_dim(), h, params.num_layers(),
                                params.num_labels());

  // Head: scores = H W + b.
  Matrix grad_out(n, 2 * h);
  for (std::size_t t = 0; t < n; ++t) {
    auto ge = grad_emissions.row(t);
    add_outer(cache.output.row(t), ge, g.params.head_weights);
    for (std::size_t y = 0; y < ge.size(); ++y) g.params.head_bias(0, y) += ge[y];
    add_mat_vec(params.head_weights, ge, grad_out.row(t));
  }

  for (std::size_t l = params.num_layers(); l-- > 0;) {
    const Matrix& mask = cache.dropout_masks[l];
    Matrix grad_fwd(n, h), grad_bwd(n, h);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t k = 0; k < h; ++k) {
        grad_fwd(t, k) = grad_out(t, k) * mask(t, k);
        grad_bwd(t, k) = grad_out(t, h + k) * mask(t, h + k);
      }
    }
    const Matrix& x = cache.layer_inputs[l];
    Matrix grad_x(n, x.cols());
    backprop_direction(x, params.layers[l].forward, cache.fwd[l], false,
                       grad_fwd, g.params.layers[l].forward, grad_x);
    backprop_direction(x, params.layers[l].backward, cache.bwd[l], true,
                       grad_bwd, g.params.layers[l].backward, grad_x);
    grad_out = std::move(grad_x);
  }
  g.embeddings = std::move(grad_out);
  return g;
}

}  // namespace segcrf
