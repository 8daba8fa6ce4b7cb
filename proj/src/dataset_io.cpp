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

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "byte_stream.hpp"
#include "segcrf/data_io.hpp"

namespace segcrf {

using nlohmann::json;

std::string record_to_json_line(const MixedTextRecord& record) {
  json j;
  j["id"] = record.id;
  j["tokens"] = record.tokens;
  j["labels"] = record.gold_labels;
  j["pattern"] = std::string(pattern_name(record.pattern));
  j["boundaries"] = extract_boundaries(record.gold_labels);
  if (record.embedding_key) j["embedding_key"] = *record.embedding_key;
  return j.dump();
}

MixedTextRecord record_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("record is not a JSON object");
  MixedTextRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.tokens = j.at("tokens").get<TokenSequence>();
    r.gold_labels = j.at("labels").get<LabelSequence>();
    const std::string pattern = j.at("pattern").get<std::string>();
    auto parsed = parse_pattern(pattern);
    if (!parsed) throw DataError("unknown pattern '" + pattern + "'");
    r.pattern = *parsed;
    if (j.contains("embedding_key") && !j["embedding_key"].is_null()) {
      r.embedding_key = j["embedding_key"].get<std::string>();
    }
    if (j.contains("boundaries") && !j["boundaries"].is_null()) {
      if (j["boundaries"].get<BoundarySet>() != extract_boundaries(r.gold_labels)) {
        throw DataError("record '" + r.id + "': boundaries disagree with labels");
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("bad record fields: ") + e.what());
  }
  return r;
}

std::vector<MixedTextRecord> load_dataset(const std::string& path,
                                          std::size_t max_len) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  std::vector<MixedTextRecord> out;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    MixedTextRecord r;
    try {
      r = record_from_json_line(line);
    } catch (const DataError& e) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    if (auto bad = validate_record(r, max_len); !bad.empty()) {
      throw DataError(path + ": record '" + r.id + "' (line " +
                      std::to_string(line_no) + "): " + bad.front());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void save_dataset(const std::vector<MixedTextRecord>& records,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write dataset '" + path + "'");
  for (const auto& r : records) out << record_to_json_line(r) << '\n';
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path,
                      const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<std::uint8_t> encode_embeddings(const EmbeddingFileData& data) {
  if (data.dim == 0 && !data.sequences.empty()) {
    throw DataError("embedding dim must be positive");
  }
  internal::ByteWriter w;
  w.put_bytes(kEmbeddingMagic, 4);
  w.put_u32(kEmbeddingVersion);
  w.put_u32(static_cast<std::uint32_t>(data.sequences.size()));
  w.put_u32(static_cast<std::uint32_t>(data.dim));
  for (const auto& seq : data.sequences) {
    if (seq.values.cols() != data.dim) {
      throw DataError("embedding sequence '" + seq.key + "' has inconsistent dim");
    }
    w.put_string(seq.key);
    w.put_u32(static_cast<std::uint32_t>(seq.values.rows()));
    for (double v : seq.values.data()) w.put_f32(static_cast<float>(v));
  }
  return std::move(w.bytes());
}

EmbeddingFileData decode_embeddings(const std::vector<std::uint8_t>& bytes) {
  internal::ByteReader r(bytes.data(), bytes.size(), "embedding file");
  char magic[4];
  r.get_bytes(magic, 4);
  if (std::memcmp(magic, kEmbeddingMagic, 4) != 0) {
    throw FormatError("embedding file: bad magic bytes");
  }
  const std::uint32_t version = r.get_u32();
  if (version != kEmbeddingVersion) {
    throw FormatError("embedding file: unsupported version " + std::to_string(version));
  }
  const std::uint32_t count = r.get_u32();
  EmbeddingFileData data;
  data.dim = r.get_u32();
  if (data.dim == 0 && count > 0) throw FormatError("embedding file: zero dim");
  for (std::uint32_t s = 0; s < count; ++s) {
    if (r.remaining() == 0) {
      throw FormatError("embedding file: declared " + std::to_string(count) +
                        " sequences but payload ends after " + std::to_string(s));
    }
    EmbeddingSequence seq;
    seq.key = r.get_string();
    const std::uint32_t n = r.get_u32();
    r.need(static_cast<std::size_t>(n) * data.dim * 4);
    seq.values = Matrix(n, data.dim);
    for (double& v : seq.values.data()) v = r.get_f32();
    data.sequences.push_back(std::move(seq));
  }
  if (r.remaining() != 0) {
    throw FormatError("embedding file: " + std::to_string(r.remaining()) +
                      " trailing bytes after declared sequences");
  }
  return data;
}

EmbeddingFileData read_embeddings(const std::string& path) {
  return decode_embeddings(read_file_bytes(path));
}

void write_embeddings(const std::string& path, const EmbeddingFileData& data) {
  write_file_bytes(path, encode_embeddings(data));
}

EmbeddingTable table_from_embeddings(const EmbeddingFileData& data) {
  std::map<std::string, Matrix> entries;
  for (const auto& seq : data.sequences) {
    if (!entries.emplace(seq.key, seq.values).second) {
      throw DataError("duplicate embedding key '" + seq.key + "'");
    }
  }
  return EmbeddingTable::file_backed(data.dim, std::move(entries));
}

std::vector<TrainingExample> make_examples(
    const std::vector<MixedTextRecord>& records, const EmbeddingTable& table) {
  std::vector<TrainingExample> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back({r.id,
                   lookup_embeddings(r.tokens, table, r.embedding_key.value_or(r.id)),
                   r.gold_labels});
  }
  return out;
}

}  // namespace segcrf
