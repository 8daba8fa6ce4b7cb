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

#include "segcrf/training.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "segcrf/random.hpp"

namespace segcrf {

double LlrdGrouping::rate_for(ParamGroupId id) const {
  for (const auto& g : groups) {
    if (g.id == id) return g.learning_rate;
  }
  // Degenerate single-group layout.
  return groups.front().learning_rate;
}

LlrdGrouping build_llrd_groups(SegmenterModel& model,
                               const std::vector<double>& rates) {
  if (rates.size() != 1 && rates.size() != kNumParamGroups) {
    throw DataError("llrd rates: expected 1 or 4 values, got " +
                    std::to_string(rates.size()));
  }
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] > 0.0) || !std::isfinite(rates[i])) {
      throw DataError("llrd rates: must be positive and finite");
    }
    if (i > 0 && !(rates[i] > rates[i - 1])) {
      throw DataError("llrd rates: must be strictly increasing");
    }
  }
  LlrdGrouping out;
  std::vector<ParamView> views = parameter_views(model.encoder, model.crf);
  if (rates.size() == 1) {
    ParamGroup all{ParamGroupId::kEmbeddings, rates[0], {}, 0};
    for (const auto& v : views) {
      all.params.push_back(v.name);
      all.num_values += v.values.size();
    }
    out.groups.push_back(std::move(all));
    return out;
  }
  for (std::size_t g = 0; g < kNumParamGroups; ++g) {
    out.groups.push_back({static_cast<ParamGroupId>(g), rates[g], {}, 0});
  }
  for (const auto& v : views) {
    ParamGroup& g = out.groups[static_cast<std::size_t>(v.group)];
    g.params.push_back(v.name);
    g.num_values += v.values.size();
  }
  for (const auto& g : out.groups) {
    if (g.params.empty()) {
      out.warnings.push_back(fmt::format(
          "parameter group '{}' is empty{}", param_group_name(g.id),
          g.id == ParamGroupId::kEmbeddings ? " (embeddings are frozen)" : ""));
    }
  }
  return out;
}

double clip_gradients(std::span<const std::span<double>> grads, double max_norm) {
  double sq = 0.0;
  for (auto g : grads) {
    for (double x : g) {
      if (!std::isfinite(x)) {
        throw NumericalError("non-finite gradient encountered; aborting");
      }
      sq += x * x;
    }
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto g : grads) {
      for (double& x : g) x *= scale;
    }
  }
  return norm;
}

void Optimizer::step(std::span<const ParamView> params,
                     std::span<const ParamView> grads,
                     std::span<const double> rates) {
  if (params.size() != grads.size() || params.size() != rates.size()) {
    throw DataError("optimizer: params, grads and rates differ in count");
  }
  if (first_moment_.empty()) {
    for (const auto& p : params) {
      first_moment_.emplace_back(p.values.size(), 0.0);
      second_moment_.emplace_back(p.values.size(), 0.0);
    }
  }
  if (first_moment_.size() != params.size()) {
    throw DataError("optimizer: parameter set changed between steps");
  }
  ++step_;
  const auto& o = options_;
  const double t = static_cast<double>(step_);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::span<double> theta = params[i].values;
    std::span<const double> g = grads[i].values;
    if (theta.size() != g.size() || theta.size() != first_moment_[i].size()) {
      throw DataError("optimizer: shape mismatch for " + params[i].name);
    }
    const double lr = rates[i];
    const bool decay = params[i].kind == ParamKind::kWeight && o.weight_decay > 0;
    auto& m = first_moment_[i];
    auto& v = second_moment_[i];
    for (std::size_t j = 0; j < theta.size(); ++j) {
      if (decay) theta[j] -= lr * o.weight_decay * theta[j];
      if (o.kind == OptimizerKind::kSgd) {
        theta[j] -= lr * g[j];
        continue;
      }
      m[j] = o.beta1 * m[j] + (1.0 - o.beta1) * g[j];
      v[j] = o.beta2 * v[j] + (1.0 - o.beta2) * g[j] * g[j];
      const double m_hat = m[j] / correction1;
      const double v_hat = v[j] / correction2;
      theta[j] -= lr * m_hat / (std::sqrt(v_hat) + o.epsilon);
    }
  }
}

std::string format_epoch_log(const EpochLog& log) {
  return fmt::format("epoch={} loss={:.6f} dev_accuracy={:.6f} seconds={:.3f}",
                     log.epoch, log.loss, log.dev_accuracy, log.seconds);
}

SegmenterModel init_model(const TrainConfig& config, std::size_t input_dim) {
  SegmenterModel model;
  model.encoder = init_bigru(input_dim, config.hp.hidden_dim, config.hp.num_layers,
                             config.hp.num_labels, InitScheme{config.xavier_init},
                             mix_seed(config.seed, 1));
  model.crf = crf::CrfParams(config.hp.num_labels);
  return model;
}

double dataset_loss(const SegmenterModel& model,
                    const std::vector<TrainingExample>& data) {
  double total = 0.0;
  for (const auto& ex : data) {
    total += crf::nll_loss(compute_emissions(model, ex.embeddings), model.crf,
                           ex.labels);
  }
  return total;
}

double token_accuracy(const SegmenterModel& model,
                      const std::vector<TrainingExample>& data) {
  std::size_t correct = 0, total = 0;
  for (const auto& ex : data) {
    LabelSequence pred =
        crf::viterbi_decode(compute_emissions(model, ex.embeddings), model.crf)
            .labels;
    for (std::size_t t = 0; t < pred.size(); ++t) {
      correct += pred[t] == ex.labels[t];
    }
    total += pred.size();
  }
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

namespace {

void check_examples(const std::vector<TrainingExample>& data,
                    const TrainConfig& config, std::size_t input_dim) {
  for (const auto& ex : data) {
    if (ex.labels.empty() || ex.labels.size() != ex.embeddings.rows()) {
      throw DataError("example '" + ex.id + "': labels and embeddings disagree");
    }
    if (ex.labels.size() > config.hp.max_len) {
      throw DataError("example '" + ex.id + "': longer than max_len");
    }
    if (ex.embeddings.cols() != input_dim) {
      throw DataError("example '" + ex.id + "': embedding dim mismatch");
    }
  }
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  return order;
}

void accumulate(std::vector<ParamView>& dst, const std::vector<ParamView>& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) {
    for (std::size_t j = 0; j < dst[i].values.size(); ++j) {
      dst[i].values[j] += src[i].values[j];
    }
  }
}

}  // namespace

TrainResult train(const std::vector<TrainingExample>& train_set,
                  const std::vector<TrainingExample>& dev_set,
                  const TrainConfig& config,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  if (train_set.empty()) throw DataError("train: empty training set");
  if (auto bad = validate_hyperparameters(config.hp); !bad.empty()) {
    throw DataError("train: invalid hyperparameters: " + bad.front());
  }
  const std::size_t input_dim = train_set.front().embeddings.cols();
  check_examples(train_set, config, input_dim);
  check_examples(dev_set, config, input_dim);

  TrainResult result;
  SegmenterModel& model = result.model;
  model = init_model(config, input_dim);
  const LlrdGrouping grouping = build_llrd_groups(
      model, config.use_llrd ? config.hp.llrd_rates
                             : std::vector<double>{config.uniform_learning_rate});
  std::vector<ParamView> views = parameter_views(model.encoder, model.crf);
  std::vector<double> rates;
  for (const auto& v : views) rates.push_back(grouping.rate_for(v.group));

  OptimizerOptions opt = config.optimizer;
  opt.weight_decay = config.hp.weight_decay;
  Optimizer optimizer(opt);

  const std::size_t L = config.hp.num_labels;
  const std::size_t batch_size = config.hp.batch_size;
  for (std::size_t epoch = 1; epoch <= config.hp.epochs; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    const auto order = shuffled_order(train_set.size(), mix_seed(config.seed, 100 + epoch));
    double epoch_loss = 0.0;
    for (std::size_t begin = 0, batch = 0; begin < order.size();
         begin += batch_size, ++batch) {
      const std::size_t end = std::min(order.size(), begin + batch_size);
      BiGruParams grad_encoder =
          BiGruParams::zeros(input_dim, config.hp.hidden_dim, config.hp.num_layers, L);
      crf::CrfParams grad_crf(L);
      std::vector<ParamView> grads = parameter_views(grad_encoder, grad_crf);
      for (std::size_t pos = begin; pos < end; ++pos) {
        const TrainingExample& ex = train_set[order[pos]];
        BiGruCache cache;
        const std::uint64_t mask_seed =
            mix_seed(mix_seed(config.dropout.seed ^ config.seed, epoch), pos);
        Matrix hidden = bigru_forward(ex.embeddings, model.encoder, config.dropout,
                                      /*training=*/true, mask_seed, &cache);
        crf::EmissionScores em = head_forward(hidden, model.encoder);
        const double loss = crf::nll_loss(em, model.crf, ex.labels);
        if (!std::isfinite(loss)) {
          throw NumericalError(fmt::format(
              "non-finite loss in epoch {} batch {} (example '{}')", epoch, batch, ex.id));
        }
        epoch_loss += loss;
        crf::CrfGradients cg = crf::grad_nll(em, model.crf, ex.labels);
        EmissionGradients eg = emissions_backward(cg.emissions, cache, model.encoder);
        crf::CrfParams crf_grad;
        crf_grad.transitions = std::move(cg.transitions);
        crf_grad.start_scores = std::move(cg.start_scores);
        crf_grad.end_scores = std::move(cg.end_scores);
        accumulate(grads, parameter_views(eg.params, crf_grad));
      }
      const double inv = 1.0 / static_cast<double>(end - begin);
      std::vector<std::span<double>> spans;
      for (auto& g : grads) {
        for (double& x : g.values) x *= inv;
        spans.push_back(g.values);
      }
      clip_gradients(spans, config.hp.gradient_clip);
      optimizer.step(views, grads, rates);
    }
    EpochLog log;
    log.epoch = epoch;
    log.loss = epoch_loss;
    log.dev_accuracy = dev_set.empty() ? 0.0 : token_accuracy(model, dev_set);
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                started)
                      .count();
    result.logs.push_back(log);
    if (on_epoch) on_epoch(log);
  }
  if (config.family != DecoderFamily::kCrf) {
    fit_decoder(model, train_set, config.family, config);
  }
  return result;
}

void fit_decoder(SegmenterModel& model, const std::vector<TrainingExample>& data,
                 DecoderFamily family, const TrainConfig& config) {
  model.family = family;
  if (family == DecoderFamily::kCrf) return;
  std::vector<baselines::LabeledSequence> features;
  for (const auto& ex : data) {
    features.push_back({compute_emissions(model, ex.embeddings).scores, ex.labels});
  }
  const std::size_t L = model.num_labels();
  if (family == DecoderFamily::kHmm) {
    model.hmm = baselines::hmm_fit(features, config.hmm_smoothing,
                                   baselines::ObservationModel::kGaussian, L);
  } else {
    model.memm = baselines::memm_fit(features, config.memm, L);
  }
}

}  // namespace segcrf
