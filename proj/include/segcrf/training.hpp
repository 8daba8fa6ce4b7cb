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

#ifndef SEGCRF_TRAINING_HPP_
#define SEGCRF_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "segcrf/core.hpp"
#include "segcrf/emissions.hpp"
#include "segcrf/model.hpp"

namespace segcrf {

struct ParamGroup {
  ParamGroupId id;
  double learning_rate = 0.0;
  std::vector<std::string> params;
  std::size_t num_values = 0;
};

struct LlrdGrouping {
  std::vector<ParamGroup> groups;
  std::vector<std::string> warnings;

  // Learning rate for a parameter group id.
  double rate_for(ParamGroupId id) const;
};

// Four rates map embeddings, lower encoder half, upper encoder half + NN, and
// head + CRF in that order. A single rate puts every parameter in one group.
// Throws DataError for any other count or for non-increasing rates.
LlrdGrouping build_llrd_groups(SegmenterModel& model,
                               const std::vector<double>& rates);

// Rescales all gradients in place when their global L2 norm exceeds max_norm
// and returns the norm observed before clipping. Throws NumericalError on a
// non-finite gradient.
double clip_gradients(std::span<const std::span<double>> grads, double max_norm);

enum class OptimizerKind { kAdamW, kSgd };

struct OptimizerOptions {
  OptimizerKind kind = OptimizerKind::kAdamW;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-2;
};

// Adaptive moment estimation with bias correction and decoupled weight decay
// (theta -= lr * wd * theta on weight matrices only); plain SGD when
// configured.
class Optimizer {
 public:
  explicit Optimizer(OptimizerOptions options) : options_(options) {}

  // params, grads and rates are aligned by index.
  void step(std::span<const ParamView> params, std::span<const ParamView> grads,
            std::span<const double> rates);

  std::size_t steps() const { return step_; }
  const OptimizerOptions& options() const { return options_; }

 private:
  OptimizerOptions options_;
  std::size_t step_ = 0;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
};

struct TrainConfig {
  Hyperparameters hp;
  OptimizerOptions optimizer;
  std::uint64_t seed = 42;
  DropoutPolicy dropout;
  bool use_llrd = true;
  // Used for every group when use_llrd is false.
  double uniform_learning_rate = 1e-5;
  bool xavier_init = true;
  DecoderFamily family = DecoderFamily::kCrf;
  baselines::MemmFitOptions memm;
  double hmm_smoothing = 1.0;
};

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;
  double dev_accuracy = 0.0;
  double seconds = 0.0;
};

std::string format_epoch_log(const EpochLog& log);

struct TrainingExample {
  std::string id;
  Matrix embeddings;
  LabelSequence labels;
};

struct TrainResult {
  SegmenterModel model;
  std::vector<EpochLog> logs;
};

SegmenterModel init_model(const TrainConfig& config, std::size_t input_dim);

// Summed CRF NLL of a set of examples under the model in inference mode.
double dataset_loss(const SegmenterModel& model,
                    const std::vector<TrainingExample>& data);
// Token accuracy of CRF Viterbi decoding.
double token_accuracy(const SegmenterModel& model,
                      const std::vector<TrainingExample>& data);

// Mini-batch training of BiGRU + head + CRF by NLL with clipping and the
// configured optimizer, then fits the baseline decoder when the family is HMM
// or MEMM. Deterministic given the config. Throws NumericalError naming the
// batch on a non-finite loss.
TrainResult train(const std::vector<TrainingExample>& train_set,
                  const std::vector<TrainingExample>& dev_set,
                  const TrainConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

// Fits HMM or MEMM parameters on the model's emission scores of the training
// examples and switches the model's decoder family.
void fit_decoder(SegmenterModel& model, const std::vector<TrainingExample>& data,
                 DecoderFamily family, const TrainConfig& config);

}  // namespace segcrf

#endif  // SEGCRF_TRAINING_HPP_
