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

#include "socemo/metrics.hpp"

#include <array>

namespace socemo {

double jaccard(LabelSet a, LabelSet b) {
  const auto uni = (a | b).size();
  if (uni == 0) return 1.0;
  return static_cast<double>((a & b).size()) / static_cast<double>(uni);
}

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

Prf make_prf(double tp, double fp, double fn) {
  Prf p;
  p.precision = ratio(tp, tp + fp);
  p.recall = ratio(tp, tp + fn);
  p.f1 = ratio(2.0 * p.precision * p.recall, p.precision + p.recall);
  return p;
}

}  // namespace

MetricReport multilabel_prf(std::span<const LabelSet> golds, std::span<const LabelSet> preds) {
  if (golds.size() != preds.size())
    throw LengthMismatch(std::to_string(golds.size()) + " gold sets vs " +
                         std::to_string(preds.size()) + " predicted sets");
  if (golds.empty()) throw EmptyList("no samples to score");

  std::array<double, kLabelCount> tp{}, fp{}, fn{};
  std::array<bool, kLabelCount> present{};
  MetricReport r;
  r.n_samples = golds.size();
  double pred_len = 0.0;

  for (std::size_t i = 0; i < golds.size(); ++i) {
    const LabelSet g = golds[i], p = preds[i];
    for (Label l : kAllLabels) {
      const auto k = index_of(l);
      const bool in_g = g.contains(l), in_p = p.contains(l);
      present[k] = present[k] || in_g || in_p;
      if (in_g && in_p) tp[k] += 1;
      else if (in_p) fp[k] += 1;
      else if (in_g) fn[k] += 1;
    }
    const double inter = static_cast<double>((g & p).size());
    const Prf s = make_prf(inter, static_cast<double>(p.size()) - inter,
                           static_cast<double>(g.size()) - inter);
    r.samples.precision += s.precision;
    r.samples.recall += s.recall;
    r.samples.f1 += s.f1;
    r.jaccard += jaccard(g, p);
    pred_len += static_cast<double>(p.size());
  }

  const double n = static_cast<double>(golds.size());
  r.samples.precision /= n;
  r.samples.recall /= n;
  r.samples.f1 /= n;
  r.jaccard /= n;
  r.mean_len = pred_len / n;

  double TP = 0, FP = 0, FN = 0;
  std::size_t n_present = 0;
  for (std::size_t k = 0; k < kLabelCount; ++k) {
    TP += tp[k];
    FP += fp[k];
    FN += fn[k];
    if (!present[k]) continue;
    ++n_present;
    const Prf lp = make_prf(tp[k], fp[k], fn[k]);
    r.macro.precision += lp.precision;
    r.macro.recall += lp.recall;
    r.macro.f1 += lp.f1;
  }
  if (n_present) {
    r.macro.precision /= static_cast<double>(n_present);
    r.macro.recall /= static_cast<double>(n_present);
    r.macro.f1 /= static_cast<double>(n_present);
  }
  r.micro = make_prf(TP, FP, FN);
  return r;
}

double mean_sequence_length(std::span<const LabelSequence> seqs) {
  if (seqs.empty()) throw EmptyList("no sequences");
  double total = 0.0;
  for (const auto& s : seqs) total += static_cast<double>(s.size());
  return total / static_cast<double>(seqs.size());
}

nlohmann::json to_json(const MetricReport& r) {
  auto prf = [](const Prf& p) {
    return nlohmann::json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
  };
  nlohmann::json j{{"jaccard", r.jaccard},     {"micro", prf(r.micro)},
                   {"macro", prf(r.macro)},    {"samples", prf(r.samples)},
                   {"mean_len", r.mean_len},   {"n_samples", r.n_samples}};
  j["nls"] = r.nls ? nlohmann::json(*r.nls) : nlohmann::json(nullptr);
  return j;
}

}  // namespace socemo
