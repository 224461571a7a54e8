/*
 * Copyright 2026 The socemo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/error.hpp"
#include "socemo/label.hpp"

namespace socemo {

// Edit distance (unit-cost insert, delete, substitute) over any equatable
// token type. Two-row dynamic programme.
template <class T>
std::size_t levenshtein(std::span<const T> source, std::span<const T> target) {
  if (source.size() < target.size()) std::swap(source, target);
  std::vector<std::size_t> prev(target.size() + 1), cur(target.size() + 1);
  for (std::size_t j = 0; j <= target.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= source.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= target.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (source[i - 1] == target[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[target.size()];
}

inline std::size_t levenshtein(const LabelSequence& a, const LabelSequence& b) {
  return levenshtein<Label>(std::span<const Label>(a), std::span<const Label>(b));
}

struct NlsResult {
  double value = 1.0;
  bool both_empty = false;
};

// 1 - LD / max(len). Two empty sequences are identical: value 1 with the
// both_empty flag raised.
template <class T>
NlsResult nls_detail(std::span<const T> source, std::span<const T> target) {
  const std::size_t longest = std::max(source.size(), target.size());
  if (longest == 0) return {1.0, true};
  const auto ld = levenshtein(source, target);
  return {1.0 - static_cast<double>(ld) / static_cast<double>(longest), false};
}

inline double nls(const LabelSequence& a, const LabelSequence& b) {
  return nls_detail<Label>(std::span<const Label>(a), std::span<const Label>(b)).value;
}

// |a & b| / |a | b|; both empty -> 1.
double jaccard(LabelSet a, LabelSet b);

template <class T>
double set_jaccard(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

// Similarity of two annotators' kept-sets for the same context.
inline double pairwise_list_jaccard(const std::set<std::string>& kept_a,
                                    const std::set<std::string>& kept_b) {
  return set_jaccard(kept_a, kept_b);
}

enum class Averaging { micro, macro, samples };

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricReport {
  double jaccard = 0.0;  // sample-averaged
  Prf micro;
  Prf macro;
  Prf samples;
  std::optional<double> nls;  // mean NLS, sequence-aware predictors only
  double mean_len = 0.0;
  std::size_t n_samples = 0;

  const Prf& prf(Averaging a) const {
    switch (a) {
      case Averaging::micro: return micro;
      case Averaging::macro: return macro;
      case Averaging::samples: return samples;
    }
    return micro;
  }
};

nlohmann::json to_json(const MetricReport& r);

// Multi-label precision/recall/F1 over the 11-label indicator matrix under
// all three averaging schemes, plus sample-averaged Jaccard. Undefined
// ratios (0/0) score 0, except Jaccard of two empty sets which is 1.
// Macro averages over labels that occur in at least one gold or predicted
// set. `mean_len` is filled with the mean predicted set size.
MetricReport multilabel_prf(std::span<const LabelSet> golds, std::span<const LabelSet> preds);

// Throws EmptyList.
double mean_sequence_length(std::span<const LabelSequence> seqs);

// ---------------------------------------------------------------------------
// Krippendorff's alpha

// units x annotators grid of optional values.
template <class V>
class AnnotationMatrix {
 public:
  AnnotationMatrix(std::size_t units, std::size_t annotators)
      : annotators_(annotators), cells_(units * annotators) {}

  void set(std::size_t unit, std::size_t annotator, V value) {
    cells_.at(unit * annotators_ + annotator) = std::move(value);
  }
  const std::optional<V>& at(std::size_t unit, std::size_t annotator) const {
    return cells_.at(unit * annotators_ + annotator);
  }
  std::size_t units() const { return annotators_ ? cells_.size() / annotators_ : 0; }
  std::size_t annotators() const { return annotators_; }

 private:
  std::size_t annotators_;
  std::vector<std::optional<V>> cells_;
};

inline double nominal_distance(const std::string& a, const std::string& b) {
  return a == b ? 0.0 : 1.0;
}

inline double jaccard_distance(LabelSet a, LabelSet b) { return 1.0 - jaccard(a, b); }

inline double jaccard_distance(const std::set<std::string>& a, const std::set<std::string>& b) {
  return 1.0 - set_jaccard(a, b);
}

// alpha = 1 - D_o / D_e over pairable values (units holding >= 2 values).
//   D_o = 1/n * sum_u 1/(m_u - 1) * sum_{i != j in u} d(v_i, v_j)
//   D_e = 1/(n (n - 1)) * sum_{i != j over all pairable values} d(v_i, v_j)
// Missing cells are skipped. Throws InsufficientData for fewer than two
// annotators, fewer than two pairable values, or D_e = 0.
template <class V, class Distance>
double krippendorff_alpha(const AnnotationMatrix<V>& matrix, Distance&& distance) {
  if (matrix.annotators() < 2)
    throw InsufficientData("krippendorff alpha needs at least two annotators");

  std::vector<const V*> pooled;
  double observed = 0.0;
  for (std::size_t u = 0; u < matrix.units(); ++u) {
    std::vector<const V*> vals;
    for (std::size_t a = 0; a < matrix.annotators(); ++a)
      if (const auto& c = matrix.at(u, a)) vals.push_back(&*c);
    if (vals.size() < 2) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
      for (std::size_t j = 0; j < vals.size(); ++j)
        if (i != j) sum += distance(*vals[i], *vals[j]);
    observed += sum / static_cast<double>(vals.size() - 1);
    pooled.insert(pooled.end(), vals.begin(), vals.end());
  }

  const double n = static_cast<double>(pooled.size());
  if (pooled.size() < 2) throw InsufficientData("fewer than two pairable values");
  observed /= n;

  double expected = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i)
    for (std::size_t j = i + 1; j < pooled.size(); ++j)
      expected += 2.0 * distance(*pooled[i], *pooled[j]);
  expected /= n * (n - 1.0);

  if (expected == 0.0) throw InsufficientData("expected disagreement is zero");
  if (observed == 0.0) return 1.0;
  return 1.0 - observed / expected;
}

}  // namespace socemo
