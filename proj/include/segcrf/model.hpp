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

#ifndef SEGCRF_MODEL_HPP_
#define SEGCRF_MODEL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segcrf/baselines.hpp"
#include "segcrf/crf.hpp"
#include "segcrf/emissions.hpp"
#include "segcrf/metrics.hpp"

namespace segcrf {

// Which sequence layer turns emission scores into labels.
enum class DecoderFamily { kCrf, kHmm, kMemm };

std::string_view decoder_family_name(DecoderFamily family);
std::optional<DecoderFamily> parse_decoder_family(std::string_view name);

// BiGRU + linear head producing emissions, a CRF on top, and optionally a
// baseline decoder fitted on the emission scores.
struct SegmenterModel {
  BiGruParams encoder;
  crf::CrfParams crf;
  DecoderFamily family = DecoderFamily::kCrf;
  baselines::HmmParams hmm;
  baselines::MemmParams memm;

  std::size_t input_dim() const { return encoder.input_dim(); }
  std::size_t num_labels() const { return crf.num_labels(); }

  friend bool operator==(const SegmenterModel&, const SegmenterModel&) = default;
};

// Learning-rate groups, ordered from the input side to the output side.
enum class ParamGroupId { kEmbeddings, kLowerEncoder, kUpperEncoderNn, kHeadCrf };
inline constexpr std::size_t kNumParamGroups = 4;
std::string_view param_group_name(ParamGroupId id);

// Decoupled weight decay applies to kWeight only.
enum class ParamKind { kWeight, kBias, kTransition };

struct ParamView {
  std::string name;
  std::span<double> values;
  ParamKind kind;
  ParamGroupId group;
};

// Trainable tensors of the encoder and CRF in a fixed order. The same call on
// a gradient-shaped pair yields views aligned index for index.
std::vector<ParamView> parameter_views(BiGruParams& encoder, crf::CrfParams& crf);

// Emissions for one sequence in inference mode.
crf::EmissionScores compute_emissions(const SegmenterModel& model,
                                      const Matrix& embeddings);

struct Prediction {
  std::string id;
  LabelSequence labels;
  BoundarySet boundaries;
  std::vector<ScoredBoundary> top_k;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

inline constexpr double kDefaultBoundaryThreshold = 0.5;

// Decodes with the model's family. Top-k boundaries come from CRF pairwise
// marginals for the CRF family and from the decoded labels otherwise.
Prediction predict(const SegmenterModel& model, const Matrix& embeddings,
                   std::size_t k = 3,
                   double min_confidence = kDefaultBoundaryThreshold);

}  // namespace segcrf

#endif  // SEGCRF_MODEL_HPP_
