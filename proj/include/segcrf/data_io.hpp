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

#ifndef SEGCRF_DATA_IO_HPP_
#define SEGCRF_DATA_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "segcrf/core.hpp"
#include "segcrf/emissions.hpp"
#include "segcrf/matrix.hpp"
#include "segcrf/model.hpp"
#include "segcrf/training.hpp"

namespace segcrf {

// ---------------------------------------------------------------------------
// Datasets: one JSON object per line with keys id, tokens, labels, pattern,
// and optionally boundaries and embedding_key.

std::string record_to_json_line(const MixedTextRecord& record);
// Throws DataError when the line does not parse or violates an invariant.
MixedTextRecord record_from_json_line(const std::string& line);

// Errors name the offending line number (parse) or record id (invariants).
std::vector<MixedTextRecord> load_dataset(const std::string& path,
                                          std::size_t max_len = 512);
void save_dataset(const std::vector<MixedTextRecord>& records,
                  const std::string& path);

// ---------------------------------------------------------------------------
// Embedding files. Little-endian layout:
//   "SEQE" | u32 version | u32 sequence count | u32 dim
//   per sequence: u32 key length | key bytes | u32 token count |
//                 count * dim float32 values, row-major
inline constexpr char kEmbeddingMagic[4] = {'S', 'E', 'Q', 'E'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;

struct EmbeddingSequence {
  std::string key;
  Matrix values;  // tokens x dim

  friend bool operator==(const EmbeddingSequence&, const EmbeddingSequence&) = default;
};

struct EmbeddingFileData {
  std::size_t dim = 0;
  std::vector<EmbeddingSequence> sequences;

  friend bool operator==(const EmbeddingFileData&, const EmbeddingFileData&) = default;
};

// Throws FormatError on bad magic, unknown version, truncation or trailing
// bytes.
EmbeddingFileData read_embeddings(const std::string& path);
// Values are narrowed to float32. Throws DataError for inconsistent dims.
void write_embeddings(const std::string& path, const EmbeddingFileData& data);
std::vector<std::uint8_t> encode_embeddings(const EmbeddingFileData& data);
EmbeddingFileData decode_embeddings(const std::vector<std::uint8_t>& bytes);

EmbeddingTable table_from_embeddings(const EmbeddingFileData& data);

// ---------------------------------------------------------------------------
// Synthetic mixed-authorship corpora.

struct SynthConfig {
  std::uint64_t seed = 42;
  std::size_t num_records = 100;
  std::map<Pattern, double> pattern_weights = {
      {Pattern::kHM, 1.0},    {Pattern::kMH, 1.0},    {Pattern::kHMH, 1.0},
      {Pattern::kMHM, 1.0},   {Pattern::kHMHMH, 1.0}, {Pattern::kMHMHM, 1.0}};
  std::size_t min_length = 60;
  std::size_t max_length = 120;
  std::size_t min_segment = 5;
  std::size_t dim = 16;
  // Coordinates whose means differ between the two styles.
  std::size_t informative_dims = 4;
  // Per informative coordinate, the human and machine means sit at -delta/2
  // and +delta/2 (in units of sigma).
  double separation = 3.0;
  double sigma = 1.0;
  std::size_t vocabulary = 5000;
  std::string id_prefix = "doc";
};

// Empty when the config is usable.
std::vector<std::string> validate_synth_config(const SynthConfig& config);

struct SynthCorpus {
  std::vector<MixedTextRecord> records;
  EmbeddingFileData embeddings;
};

// Deterministic per seed. Every record's embedding_key is its id. Embeddings
// are rounded to float32 so that they survive the file format unchanged.
SynthCorpus synth_generate(const SynthConfig& config);

// Pairs records with their embeddings (by embedding_key, else id).
std::vector<TrainingExample> make_examples(
    const std::vector<MixedTextRecord>& records, const EmbeddingTable& table);

// ---------------------------------------------------------------------------
// Model files: "SEQM" | u32 version | payload | u32 CRC-32 of everything
// before it. Parameters are stored as float64 so round trips are exact.
inline constexpr char kModelMagic[4] = {'S', 'E', 'Q', 'M'};
inline constexpr std::uint32_t kModelVersion = 1;

std::vector<std::uint8_t> encode_model(const SegmenterModel& model);
SegmenterModel decode_model(const std::vector<std::uint8_t>& bytes);
void save_model(const SegmenterModel& model, const std::string& path);
SegmenterModel load_model(const std::string& path);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace segcrf

#endif  // SEGCRF_DATA_IO_HPP_
