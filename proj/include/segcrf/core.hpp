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

#ifndef SEGCRF_CORE_HPP_
#define SEGCRF_CORE_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace segcrf {

// Error categories. The CLI maps each to a distinct exit code.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kHuman = 0;
inline constexpr int kMachine = 1;

using TokenSequence = std::vector<std::string>;
using LabelSequence = std::vector<int>;
// Positions j with label(j) != label(j - 1); j is the first token of the new
// segment.
using BoundarySet = std::vector<std::size_t>;

enum class Pattern { kHM, kMH, kHMH, kMHM, kHMHMH, kMHMHM };

inline constexpr Pattern kAllPatterns[] = {Pattern::kHM,    Pattern::kMH,
                                           Pattern::kHMH,   Pattern::kMHM,
                                           Pattern::kHMHMH, Pattern::kMHMHM};

std::string_view pattern_name(Pattern pattern);
std::optional<Pattern> parse_pattern(std::string_view name);
// Segment labels implied by a pattern, e.g. HMH -> {0, 1, 0}.
std::vector<int> pattern_segment_labels(Pattern pattern);
inline std::size_t pattern_length(Pattern pattern) {
  return pattern_name(pattern).size();
}

struct MixedTextRecord {
  std::string id;
  TokenSequence tokens;
  LabelSequence gold_labels;
  Pattern pattern = Pattern::kHM;
  std::optional<std::string> embedding_key;

  friend bool operator==(const MixedTextRecord&,
                         const MixedTextRecord&) = default;
};

struct Hyperparameters {
  std::size_t batch_size = 32;
  std::size_t epochs = 3;
  double gradient_clip = 1.0;
  std::size_t hidden_dim = 512;
  std::size_t num_layers = 3;
  std::size_t num_labels = 2;
  double weight_decay = 1e-2;
  std::size_t max_len = 512;
  std::vector<double> llrd_rates = {1e-6, 5e-6, 1e-5, 1e-4};
};

// Empty when every invariant holds.
std::vector<std::string> validate_hyperparameters(const Hyperparameters& hp);

BoundarySet extract_boundaries(const LabelSequence& labels);

// Inverse of extract_boundaries given the first label (binary labels only).
LabelSequence labels_from_boundaries(int first_label, const BoundarySet& bounds,
                                     std::size_t length);

// Expands per-segment labels into per-token labels. Throws DataError on a
// length mismatch or a zero count.
LabelSequence segment_labels_to_token_labels(
    const std::vector<int>& segment_labels,
    const std::vector<std::size_t>& segment_token_counts);

// Number of maximal runs of equal labels.
std::size_t count_runs(const LabelSequence& labels);

// Each violation names the field and the broken rule.
std::vector<std::string> validate_record(const MixedTextRecord& record,
                                         std::size_t max_len = 512);

}  // namespace segcrf

#endif  // SEGCRF_CORE_HPP_
