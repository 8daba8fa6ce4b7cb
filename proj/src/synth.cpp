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

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "segcrf/data_io.hpp"
#include "segcrf/random.hpp"

namespace segcrf {

std::vector<std::string> validate_synth_config(const SynthConfig& c) {
  std::vector<std::string> out;
  if (c.min_length == 0 || c.max_length < c.min_length) {
    out.push_back("length range must satisfy 1 <= min_length <= max_length");
  }
  if (c.max_length > 512) out.push_back("max_length exceeds max_len 512");
  if (c.min_segment == 0) out.push_back("min_segment must be positive");
  if (c.dim == 0) out.push_back("dim must be positive");
  if (c.informative_dims > c.dim) out.push_back("informative_dims exceeds dim");
  if (!(c.separation >= 0.0)) out.push_back("separation must be non-negative");
  if (!(c.sigma > 0.0)) out.push_back("sigma must be positive");
  if (c.vocabulary == 0) out.push_back("vocabulary must be positive");
  double total = 0.0;
  for (const auto& [pattern, w] : c.pattern_weights) {
    if (!(w >= 0.0)) out.push_back("pattern weights must be non-negative");
    if (w > 0.0 && pattern_length(pattern) * c.min_segment > c.min_length) {
      out.push_back(fmt::format("pattern {} cannot fit in min_length {}",
                                pattern_name(pattern), c.min_length));
    }
    total += w;
  }
  if (!(total > 0.0)) out.push_back("at least one pattern needs positive weight");
  return out;
}

namespace {

Pattern sample_pattern(const std::map<Pattern, double>& weights, Rng& rng) {
  double total = 0.0;
  for (const auto& [p, w] : weights) total += w;
  double u = uniform01(rng) * total;
  Pattern last = weights.begin()->first;
  for (const auto& [p, w] : weights) {
    if (w <= 0.0) continue;
    last = p;
    if (u < w) return p;
    u -= w;
  }
  return last;
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

}  // namespace

SynthCorpus synth_generate(const SynthConfig& config) {
  if (auto bad = validate_synth_config(config); !bad.empty()) {
    throw DataError("synth config: " + bad.front());
  }
  SynthCorpus corpus;
  corpus.embeddings.dim = config.dim;
  const double half = 0.5 * config.separation * config.sigma;
  for (std::size_t i = 0; i < config.num_records; ++i) {
    Rng rng(mix_seed(config.seed, i));
    std::normal_distribution<double> noise(0.0, config.sigma);

    const Pattern pattern = sample_pattern(config.pattern_weights, rng);
    const std::vector<int> seg_labels = pattern_segment_labels(pattern);
    const std::size_t segments = seg_labels.size();
    const std::size_t n = uniform_index(rng, config.min_length, config.max_length);

    // Spread the slack beyond the minimum segment sizes with sorted cut points.
    const std::size_t slack = n - segments * config.min_segment;
    std::vector<std::size_t> cuts;
    for (std::size_t s = 0; s + 1 < segments; ++s) cuts.push_back(uniform_index(rng, 0, slack));
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(slack);
    std::vector<std::size_t> counts;
    for (std::size_t s = 0; s < segments; ++s) {
      counts.push_back(config.min_segment + cuts[s + 1] - cuts[s]);
    }

    MixedTextRecord r;
    r.id = fmt::format("{}-{:05d}", config.id_prefix, i);
    r.pattern = pattern;
    r.gold_labels = segment_labels_to_token_labels(seg_labels, counts);
    r.embedding_key = r.id;
    Matrix values(n, config.dim);
    for (std::size_t t = 0; t < n; ++t) {
      r.tokens.push_back(fmt::format("w{}", rng() % config.vocabulary));
      const double mean = r.gold_labels[t] == kMachine ? half : -half;
      for (std::size_t d = 0; d < config.dim; ++d) {
        const double mu = d < config.informative_dims ? mean : 0.0;
        values(t, d) = static_cast<float>(mu + noise(rng));
      }
    }
    corpus.embeddings.sequences.push_back({r.id, std::move(values)});
    corpus.records.push_back(std::move(r));
  }
  return corpus;
}

}  // namespace segcrf
