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

#include "segcrf/model.hpp"

namespace segcrf {

std::string_view decoder_family_name(DecoderFamily family) {
  switch (family) {
    case DecoderFamily::kCrf:
      return "crf";
    case DecoderFamily::kHmm:
      return "hmm";
    case DecoderFamily::kMemm:
      return "memm";
  }
  return "?";
}

std::optional<DecoderFamily> parse_decoder_family(std::string_view name) {
  for (auto f : {DecoderFamily::kCrf, DecoderFamily::kHmm, DecoderFamily::kMemm}) {
    if (decoder_family_name(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view param_group_name(ParamGroupId id) {
  switch (id) {
    case ParamGroupId::kEmbeddings:
      return "embeddings";
    case ParamGroupId::kLowerEncoder:
      return "lower_encoder";
    case ParamGroupId::kUpperEncoderNn:
      return "upper_encoder_nn";
    case ParamGroupId::kHeadCrf:
      return "head_crf";
  }
  return "?";
}

std::vector<ParamView> parameter_views(BiGruParams& encoder, crf::CrfParams& crf) {
  std::vector<ParamView> views;
  const std::size_t layers = encoder.num_layers();
  for (std::size_t l = 0; l < layers; ++l) {
    const ParamGroupId group = l < layers / 2 ? ParamGroupId::kLowerEncoder
                                              : ParamGroupId::kUpperEncoderNn;
    const std::string prefix = "gru." + std::to_string(l) + ".";
    auto add_cell = [&](GruCellParams& c, const std::string& dir) {
      const std::string p = prefix + dir + ".";
      views.push_back({p + "w_z", c.w_z.data(), ParamKind::kWeight, group});
      views.push_back({p + "w_r", c.w_r.data(), ParamKind::kWeight, group});
      views.push_back({p + "w_h", c.w_h.data(), ParamKind::kWeight, group});
      views.push_back({p + "u_z", c.u_z.data(), ParamKind::kWeight, group});
      views.push_back({p + "u_r", c.u_r.data(), ParamKind::kWeight, group});
      views.push_back({p + "u_h", c.u_h.data(), ParamKind::kWeight, group});
      views.push_back({p + "b_z", c.b_z.data(), ParamKind::kBias, group});
      views.push_back({p + "b_r", c.b_r.data(), ParamKind::kBias, group});
      views.push_back({p + "b_h", c.b_h.data(), ParamKind::kBias, group});
    };
    add_cell(encoder.layers[l].forward, "fwd");
    add_cell(encoder.layers[l].backward, "bwd");
  }
  views.push_back({"head.weights", encoder.head_weights.data(), ParamKind::kWeight,
                   ParamGroupId::kHeadCrf});
  views.push_back({"head.bias", encoder.head_bias.data(), ParamKind::kBias,
                   ParamGroupId::kHeadCrf});
  views.push_back({"crf.transitions", crf.transitions.data(),
                   ParamKind::kTransition, ParamGroupId::kHeadCrf});
  views.push_back({"crf.start", crf.start_scores, ParamKind::kTransition,
                   ParamGroupId::kHeadCrf});
  views.push_back({"crf.end", crf.end_scores, ParamKind::kTransition,
                   ParamGroupId::kHeadCrf});
  return views;
}

crf::EmissionScores compute_emissions(const SegmenterModel& model,
                                      const Matrix& embeddings) {
  Matrix hidden = bigru_forward(embeddings, model.encoder, DropoutPolicy{},
                                /*training=*/false, 0);
  return head_forward(hidden, model.encoder);
}

Prediction predict(const SegmenterModel& model, const Matrix& embeddings,
                   std::size_t k, double min_confidence) {
  crf::EmissionScores em = compute_emissions(model, embeddings);
  Prediction out;
  switch (model.family) {
    case DecoderFamily::kCrf: {
      out.labels = crf::viterbi_decode(em, model.crf).labels;
      crf::Marginals m = crf::posterior_marginals(em, model.crf);
      out.top_k = top_k_boundaries(m, em.length(), k, min_confidence);
      break;
    }
    case DecoderFamily::kHmm:
      out.labels = baselines::hmm_decode(model.hmm, em.scores);
      out.top_k = top_k_boundaries(out.labels, k);
      break;
    case DecoderFamily::kMemm:
      out.labels = baselines::memm_decode(model.memm, em.scores);
      out.top_k = top_k_boundaries(out.labels, k);
      break;
  }
  out.boundaries = extract_boundaries(out.labels);
  return out;
}

}  // namespace segcrf
