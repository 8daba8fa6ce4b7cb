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

#include "segcrf/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "segcrf/data_io.hpp"
#include "segcrf/metrics.hpp"
#include "segcrf/model.hpp"
#include "segcrf/training.hpp"

namespace segcrf::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Layered settings: defaults < config file < environment < flags.

json train_defaults() {
  Hyperparameters hp;
  TrainConfig tc;
  return json{
      {"batch_size", hp.batch_size},
      {"epochs", hp.epochs},
      {"gradient_clip", hp.gradient_clip},
      {"hidden_dim", hp.hidden_dim},
      {"num_layers", hp.num_layers},
      {"num_labels", hp.num_labels},
      {"weight_decay", hp.weight_decay},
      {"max_len", hp.max_len},
      {"llrd_rates", "1e-6,5e-6,1e-5,1e-4"},
      {"use_llrd", true},
      {"uniform_lr", tc.uniform_learning_rate},
      {"dropout_mode", "off"},
      {"dropout_min", 0.1},
      {"dropout_max", 0.3},
      {"xavier", true},
      {"seed", tc.seed},
      {"optimizer", "adamw"},
      {"beta1", tc.optimizer.beta1},
      {"beta2", tc.optimizer.beta2},
      {"epsilon", tc.optimizer.epsilon},
      {"model", "crf"},
      {"hmm_smoothing", tc.hmm_smoothing},
      {"memm_iterations", 300},
      {"memm_lr", 0.05},
      {"embedding_dim", 64},
      {"embedding_seed", 0},
  };
}

json synth_defaults() {
  SynthConfig c;
  return json{
      {"seed", c.seed},
      {"n", c.num_records},
      {"pattern", "HM,MH,HMH,MHM,HMHMH,MHMHM"},
      {"min_length", c.min_length},
      {"max_length", c.max_length},
      {"min_segment", c.min_segment},
      {"dim", c.dim},
      {"informative_dims", c.informative_dims},
      {"separation", c.separation},
      {"sigma", c.sigma},
      {"name", "data"},
  };
}

// Parses a textual override with the type of the existing default.
json coerce(const json& like, const std::string& key, const std::string& text) {
  try {
    if (like.is_boolean()) {
      std::string t = text;
      std::transform(t.begin(), t.end(), t.begin(), ::tolower);
      if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
      if (t == "0" || t == "false" || t == "no" || t == "off") return false;
      throw UsageError("");
    }
    std::size_t used = 0;
    if (like.is_number_unsigned() || like.is_number_integer()) {
      if (!text.empty() && text.front() == '-') throw UsageError("");
      json v = std::stoull(text, &used);
      if (used != text.size()) throw UsageError("");
      return v;
    }
    if (like.is_number_float()) {
      json v = std::stod(text, &used);
      if (used != text.size()) throw UsageError("");
      return v;
    }
  } catch (const std::exception&) {
    throw UsageError("invalid value '" + text + "' for " + key);
  }
  return text;
}

void merge_object(json& settings, const json& layer, const std::string& origin) {
  if (!layer.is_object()) throw UsageError(origin + ": expected a JSON object");
  for (const auto& [key, value] : layer.items()) {
    if (!settings.contains(key)) {
      throw UsageError(origin + ": unknown key '" + key + "'");
    }
    const json& like = settings[key];
    if (value.is_string() && !like.is_string()) {
      settings[key] = coerce(like, key, value.get<std::string>());
    } else if (value.type() != like.type() &&
               !(value.is_number() && like.is_number())) {
      throw UsageError(origin + ": wrong type for '" + key + "'");
    } else {
      settings[key] = value;
    }
  }
}

std::string env_name(const std::string& key) {
  std::string out = "SEGCRF_";
  for (char c : key) out += static_cast<char>(::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string flag_name(const std::string& key) {
  std::string out = "--";
  for (char c : key) out += c == '_' ? '-' : c;
  return out;
}

// Registers one string-valued flag per settings key.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void add(CLI::App& app, const json& defaults) {
    for (const auto& [key, value] : defaults.items()) {
      options[key] = app.add_option(flag_name(key), values[key],
                                    fmt::format("default {}", value.dump()));
    }
  }
};

json resolve(const json& defaults, const std::string& config_path,
             const FlagSet& flags) {
  json settings = defaults;
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env && *env) path = env;
  }
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    json layer;
    try {
      layer = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError("config file '" + path + "': " + e.what());
    }
    merge_object(settings, layer, "config file '" + path + "'");
  }
  for (auto& [key, value] : settings.items()) {
    if (const char* env = std::getenv(env_name(key).c_str()); env && *env) {
      value = coerce(value, key, env);
    }
  }
  for (const auto& [key, opt] : flags.options) {
    if (opt->count() > 0) settings[key] = coerce(settings[key], key, flags.values.at(key));
  }
  return settings;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("invalid learning rate '" + item + "'");
    }
  }
  return out;
}

TrainConfig train_config_from(const json& s) {
  TrainConfig c;
  c.hp.batch_size = s["batch_size"];
  c.hp.epochs = s["epochs"];
  c.hp.gradient_clip = s["gradient_clip"];
  c.hp.hidden_dim = s["hidden_dim"];
  c.hp.num_layers = s["num_layers"];
  c.hp.num_labels = s["num_labels"];
  c.hp.weight_decay = s["weight_decay"];
  c.hp.max_len = s["max_len"];
  c.hp.llrd_rates = parse_rates(s["llrd_rates"]);
  c.use_llrd = s["use_llrd"];
  c.uniform_learning_rate = s["uniform_lr"];
  const std::string mode = s["dropout_mode"];
  if (mode == "off") {
    c.dropout.mode = DropoutPolicy::Mode::kOff;
  } else if (mode == "per-layer-linear") {
    c.dropout.mode = DropoutPolicy::Mode::kPerLayerLinear;
  } else {
    throw UsageError("dropout_mode must be off or per-layer-linear");
  }
  c.dropout.p_min = s["dropout_min"];
  c.dropout.p_max = s["dropout_max"];
  if (!(c.dropout.p_min >= 0 && c.dropout.p_min <= c.dropout.p_max &&
        c.dropout.p_max < 1)) {
    throw UsageError("dropout rates must satisfy 0 <= min <= max < 1");
  }
  c.xavier_init = s["xavier"];
  c.seed = s["seed"];
  c.dropout.seed = c.seed;
  const std::string opt = s["optimizer"];
  if (opt == "adamw") {
    c.optimizer.kind = OptimizerKind::kAdamW;
  } else if (opt == "sgd") {
    c.optimizer.kind = OptimizerKind::kSgd;
  } else {
    throw UsageError("optimizer must be adamw or sgd");
  }
  c.optimizer.beta1 = s["beta1"];
  c.optimizer.beta2 = s["beta2"];
  c.optimizer.epsilon = s["epsilon"];
  auto family = parse_decoder_family(s["model"].get<std::string>());
  if (!family) throw UsageError("model must be crf, hmm or memm");
  c.family = *family;
  c.hmm_smoothing = s["hmm_smoothing"];
  c.memm.iterations = s["memm_iterations"];
  c.memm.learning_rate = s["memm_lr"];
  if (auto bad = validate_hyperparameters(c.hp); !bad.empty()) {
    throw UsageError(bad.front());
  }
  return c;
}

// Embeddings from a file when given, else hashed-random vectors.
EmbeddingTable load_table(const std::string& path, std::size_t dim,
                          std::uint64_t seed) {
  if (!path.empty()) return table_from_embeddings(read_embeddings(path));
  return EmbeddingTable::hashed_random(dim, seed);
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw UsageError("missing " + what);
}

void require_parent_dir(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw UsageError("output directory '" + parent.string() + "' does not exist");
  }
}

// ---------------------------------------------------------------------------

int cmd_synth(const json& s, const std::string& out_dir, std::ostream& out) {
  if (out_dir.empty()) throw UsageError("missing --out-dir");
  if (!fs::is_directory(out_dir)) {
    throw UsageError("output directory '" + out_dir + "' does not exist");
  }
  SynthConfig c;
  c.seed = s["seed"];
  c.num_records = s["n"];
  c.min_length = s["min_length"];
  c.max_length = s["max_length"];
  c.min_segment = s["min_segment"];
  c.dim = s["dim"];
  c.informative_dims = s["informative_dims"];
  c.separation = s["separation"];
  c.sigma = s["sigma"];
  c.pattern_weights.clear();
  std::stringstream ss(s["pattern"].get<std::string>());
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto p = parse_pattern(item);
    if (!p) throw UsageError("unknown pattern '" + item + "'");
    c.pattern_weights[*p] = 1.0;
  }
  if (auto bad = validate_synth_config(c); !bad.empty()) throw UsageError(bad.front());
  SynthCorpus corpus = synth_generate(c);
  const std::string name = s["name"];
  const std::string data_path = (fs::path(out_dir) / (name + ".jsonl")).string();
  const std::string emb_path = (fs::path(out_dir) / (name + ".emb")).string();
  save_dataset(corpus.records, data_path);
  write_embeddings(emb_path, corpus.embeddings);
  out << fmt::format("wrote {} records to {} and {}\n", corpus.records.size(),
                     data_path, emb_path);
  return kExitOk;
}

struct TrainPaths {
  std::string train, train_embeddings, dev, dev_embeddings, out, log;
};

int cmd_train(const json& s, const TrainPaths& p, std::ostream& out) {
  require_file(p.train, "--train");
  if (p.out.empty()) throw UsageError("missing --out");
  require_parent_dir(p.out);
  const TrainConfig config = train_config_from(s);
  const std::size_t emb_dim = s["embedding_dim"];
  const std::uint64_t emb_seed = s["embedding_seed"];

  // Validation problems are all reported before any training starts.
  std::vector<std::string> problems;
  std::vector<MixedTextRecord> train_records, dev_records;
  try {
    train_records = load_dataset(p.train, config.hp.max_len);
  } catch (const DataError& e) {
    problems.push_back(e.what());
  }
  if (!p.dev.empty()) {
    try {
      dev_records = load_dataset(p.dev, config.hp.max_len);
    } catch (const DataError& e) {
      problems.push_back(e.what());
    }
  }
  std::vector<TrainingExample> train_set, dev_set;
  if (problems.empty()) {
    try {
      train_set = make_examples(train_records,
                                load_table(p.train_embeddings, emb_dim, emb_seed));
      if (!dev_records.empty()) {
        dev_set = make_examples(
            dev_records,
            load_table(p.dev_embeddings.empty() ? p.train_embeddings : p.dev_embeddings,
                       emb_dim, emb_seed));
      }
    } catch (const std::runtime_error& e) {
      problems.push_back(e.what());
    }
  }
  if (problems.empty() && train_set.empty()) problems.push_back("training set is empty");
  if (!problems.empty()) {
    std::string msg = "validation failed:";
    for (const auto& pr : problems) msg += "\n  " + pr;
    throw DataError(msg);
  }

  std::ofstream log_file;
  if (!p.log.empty()) {
    require_parent_dir(p.log);
    log_file.open(p.log, std::ios::trunc);
    if (!log_file) throw UsageError("cannot open log file '" + p.log + "'");
  }
  TrainResult result = train(train_set, dev_set, config, [&](const EpochLog& log) {
    const std::string line = format_epoch_log(log);
    out << line << '\n';
    if (log_file) log_file << line << '\n';
  });
  save_model(result.model, p.out);
  out << fmt::format("saved {} model to {}\n", decoder_family_name(result.model.family),
                     p.out);
  return kExitOk;
}

std::string prediction_to_json_line(const Prediction& p) {
  json j;
  j["id"] = p.id;
  j["labels"] = p.labels;
  j["boundaries"] = p.boundaries;
  json top = json::array();
  for (const auto& b : p.top_k) top.push_back({{"index", b.index}, {"confidence", b.confidence}});
  j["top_k"] = top;
  return j.dump();
}

std::vector<PredictedRecord> load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open predictions '" + path + "'");
  std::vector<PredictedRecord> out;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      PredictedRecord r;
      r.id = j.at("id").get<std::string>();
      r.labels = j.at("labels").get<LabelSequence>();
      for (const auto& b : j.at("top_k")) r.top_k.push_back(b.at("index").get<std::size_t>());
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& emb_path, std::size_t emb_dim,
                std::uint64_t emb_seed, const std::string& out_path, std::size_t k,
                double threshold, std::ostream& out) {
  require_file(model_path, "--model");
  require_file(data_path, "--data");
  if (out_path.empty()) throw UsageError("missing --out");
  require_parent_dir(out_path);
  const SegmenterModel model = load_model(model_path);
  const std::vector<MixedTextRecord> records = load_dataset(data_path);
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write '" + out_path + "'");
  if (!records.empty()) {
    const EmbeddingTable table = load_table(emb_path, emb_dim, emb_seed);
    if (table.dim() != model.input_dim()) {
      throw DataError(fmt::format(
          "embedding dim {} does not match the model input dim {}", table.dim(),
          model.input_dim()));
    }
    for (const auto& ex : make_examples(records, table)) {
      Prediction p = predict(model, ex.embeddings, k, threshold);
      p.id = ex.id;
      file << prediction_to_json_line(p) << '\n';
    }
  }
  out << fmt::format("wrote {} predictions to {}\n", records.size(), out_path);
  return kExitOk;
}

int cmd_eval(const std::string& pred_path, const std::string& gold_path,
             std::size_t k, std::size_t tolerance, const std::string& out_prefix,
             std::ostream& out) {
  require_file(pred_path, "--predictions");
  require_file(gold_path, "--gold");
  const auto predictions = load_predictions(pred_path);
  const auto gold = load_dataset(gold_path);
  const MetricsReport report = evaluate(predictions, gold, k, tolerance);
  const std::string text = format_report_text(report);
  out << text;
  if (!out_prefix.empty()) {
    require_parent_dir(out_prefix);
    std::ofstream txt(out_prefix + ".txt", std::ios::binary | std::ios::trunc);
    std::ofstream kv(out_prefix + ".kv", std::ios::binary | std::ios::trunc);
    if (!txt || !kv) throw UsageError("cannot write report files at '" + out_prefix + "'");
    txt << text;
    kv << format_report_kv(report);
  }
  return kExitOk;
}

int cmd_inspect(const std::string& model_path, const std::string& data_path,
                const std::string& emb_path, std::ostream& out) {
  if (model_path.empty() && data_path.empty() && emb_path.empty()) {
    throw UsageError("inspect needs --model, --dataset or --embeddings");
  }
  if (!model_path.empty()) {
    SegmenterModel model = load_model(model_path);
    out << fmt::format("model: family={} input_dim={} hidden_dim={} layers={} labels={}\n",
                       decoder_family_name(model.family), model.input_dim(),
                       model.encoder.hidden_dim(), model.encoder.num_layers(),
                       model.num_labels());
    LlrdGrouping groups = build_llrd_groups(model, Hyperparameters{}.llrd_rates);
    std::size_t total = 0;
    for (const auto& g : groups.groups) {
      out << fmt::format("  group {:<17} lr={:<8g} tensors={:<4} parameters={}\n",
                         param_group_name(g.id), g.learning_rate, g.params.size(),
                         g.num_values);
      total += g.num_values;
    }
    out << fmt::format("  total parameters={}\n", total);
    for (const auto& w : groups.warnings) out << "  note: " << w << '\n';
  }
  if (!data_path.empty()) {
    const auto records = load_dataset(data_path);
    std::map<std::string, std::size_t> patterns;
    std::map<std::size_t, std::size_t> bounds;
    std::size_t tokens = 0, machine = 0;
    for (const auto& r : records) {
      ++patterns[std::string(pattern_name(r.pattern))];
      ++bounds[extract_boundaries(r.gold_labels).size()];
      tokens += r.tokens.size();
      machine += static_cast<std::size_t>(
          std::count(r.gold_labels.begin(), r.gold_labels.end(), kMachine));
    }
    out << fmt::format("dataset: records={} tokens={} machine_token_share={:.4f}\n",
                       records.size(), tokens,
                       tokens ? static_cast<double>(machine) / tokens : 0.0);
    out << "  patterns:";
    for (const auto& [name, n] : patterns) out << fmt::format(" {}={}", name, n);
    out << "\n  boundaries:";
    for (const auto& [count, n] : bounds) out << fmt::format(" Bry={}:{}", count, n);
    out << '\n';
  }
  if (!emb_path.empty()) {
    const EmbeddingFileData data = read_embeddings(emb_path);
    double lo = 0.0, hi = 0.0;
    std::size_t rows = 0;
    bool first = true;
    for (const auto& seq : data.sequences) {
      rows += seq.values.rows();
      for (double v : seq.values.data()) {
        lo = first ? v : std::min(lo, v);
        hi = first ? v : std::max(hi, v);
        first = false;
      }
    }
    out << fmt::format("embeddings: dim={} sequences={} tokens={} range=[{:.4f}, {:.4f}]\n",
                       data.dim, data.sequences.size(), rows, lo, hi);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Token-level human/machine authorship segmentation"};
  app.require_subcommand(1);

  std::string config_path;

  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  FlagSet synth_flags;
  synth_flags.add(*synth, synth_defaults());
  std::string out_dir;
  synth->add_option("--out-dir", out_dir, "directory for <name>.jsonl and <name>.emb");
  synth->add_option("--config", config_path, "JSON config file");

  auto* train_cmd = app.add_subcommand("train", "train a segmentation model");
  FlagSet train_flags;
  train_flags.add(*train_cmd, train_defaults());
  TrainPaths paths;
  train_cmd->add_option("--train", paths.train, "training dataset (JSONL)");
  train_cmd->add_option("--train-embeddings", paths.train_embeddings,
                        "embedding file for the training set");
  train_cmd->add_option("--dev", paths.dev, "dev dataset (JSONL)");
  train_cmd->add_option("--dev-embeddings", paths.dev_embeddings,
                        "embedding file for the dev set");
  train_cmd->add_option("--out", paths.out, "model output path");
  train_cmd->add_option("--log", paths.log, "epoch log output path");
  train_cmd->add_option("--config", config_path, "JSON config file");

  auto* predict_cmd = app.add_subcommand("predict", "decode a dataset");
  std::string model_path, data_path, emb_path, pred_out;
  std::size_t k = 3, emb_dim = 64;
  std::uint64_t emb_seed = 0;
  double threshold = kDefaultBoundaryThreshold;
  predict_cmd->add_option("--model", model_path, "model file");
  predict_cmd->add_option("--data", data_path, "dataset (JSONL)");
  predict_cmd->add_option("--embeddings", emb_path, "embedding file");
  predict_cmd->add_option("--embedding-dim", emb_dim, "hashed-random embedding dim");
  predict_cmd->add_option("--embedding-seed", emb_seed, "hashed-random embedding seed");
  predict_cmd->add_option("--out", pred_out, "predictions output (JSONL)");
  predict_cmd->add_option("--k", k, "number of top boundaries");
  predict_cmd->add_option("--threshold", threshold, "minimum boundary confidence");

  auto* eval_cmd = app.add_subcommand("eval", "score predictions against gold");
  std::string eval_pred, eval_gold, eval_prefix;
  std::size_t eval_k = 3, tolerance = 0;
  eval_cmd->add_option("--predictions", eval_pred, "predictions (JSONL)");
  eval_cmd->add_option("--gold", eval_gold, "gold dataset (JSONL)");
  eval_cmd->add_option("--k", eval_k, "K for F1@K");
  eval_cmd->add_option("--tolerance", tolerance, "boundary match window in tokens");
  eval_cmd->add_option("--out-prefix", eval_prefix, "write <prefix>.txt and <prefix>.kv");

  auto* inspect_cmd = app.add_subcommand("inspect", "summarize a file");
  std::string insp_model, insp_data, insp_emb;
  inspect_cmd->add_option("--model", insp_model, "model file");
  inspect_cmd->add_option("--dataset", insp_data, "dataset (JSONL)");
  inspect_cmd->add_option("--embeddings", insp_emb, "embedding file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (synth->parsed()) {
      json s = resolve(synth_defaults(), config_path, synth_flags);
      out << "config: " << s.dump() << '\n';
      return cmd_synth(s, out_dir, out);
    }
    if (train_cmd->parsed()) {
      json s = resolve(train_defaults(), config_path, train_flags);
      out << "config: " << s.dump() << '\n';
      return cmd_train(s, paths, out);
    }
    if (predict_cmd->parsed()) {
      out << "config: "
          << json{{"model", model_path}, {"data", data_path}, {"embeddings", emb_path},
                  {"embedding_dim", emb_dim}, {"embedding_seed", emb_seed},
                  {"k", k}, {"threshold", threshold}}
                 .dump()
          << '\n';
      return cmd_predict(model_path, data_path, emb_path, emb_dim, emb_seed, pred_out,
                         k, threshold, out);
    }
    if (eval_cmd->parsed()) {
      out << "config: "
          << json{{"predictions", eval_pred}, {"gold", eval_gold}, {"k", eval_k},
                  {"tolerance", tolerance}}
                 .dump()
          << '\n';
      return cmd_eval(eval_pred, eval_gold, eval_k, tolerance, eval_prefix, out);
    }
    if (inspect_cmd->parsed()) {
      return cmd_inspect(insp_model, insp_data, insp_emb, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const FormatError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace segcrf::cli
