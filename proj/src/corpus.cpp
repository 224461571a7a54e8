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

#include "socemo/corpus.hpp"

#include <charconv>

#include "socemo/error.hpp"
#include "socemo/text.hpp"

namespace socemo {

std::string_view to_string(Speaker s) { return s == Speaker::A ? "A" : "B"; }

Speaker parse_speaker(std::string_view s) {
  if (s == "A") return Speaker::A;
  if (s == "B") return Speaker::B;
  throw MalformedCorpus(0, "unknown speaker '" + std::string(s) + "'");
}

CodeTable CodeTable::daily_dialog() {
  CodeTable t;
  t.acts = {{1, Label::inform}, {2, Label::question}, {3, Label::directive},
            {4, Label::commissive}};
  t.emotions = {{0, Label::neutral},   {1, Label::anger},   {2, Label::disgust},
                {3, Label::fear},      {4, Label::happiness},
                {5, Label::sadness},   {6, Label::surprise}};
  return t;
}

CodeTable CodeTable::from_json(const nlohmann::json& j) {
  CodeTable t;
  auto load = [](const nlohmann::json& obj, std::map<int, Label>& out,
                 LabelKind want) {
    for (const auto& [code, name] : obj.items()) {
      Label l = parse_label(name.get<std::string>());
      if (kind_of(l) != want)
        throw UnknownLabelCode("code " + code + " maps to '" +
                               std::string(to_string(l)) + "' of the wrong kind");
      out[std::stoi(code)] = l;
    }
  };
  load(j.at("acts"), t.acts, LabelKind::act);
  load(j.at("emotions"), t.emotions, LabelKind::emotion);
  return t;
}

nlohmann::json CodeTable::to_json() const {
  nlohmann::json j;
  for (const auto& [c, l] : acts) j["acts"][std::to_string(c)] = to_string(l);
  for (const auto& [c, l] : emotions) j["emotions"][std::to_string(c)] = to_string(l);
  return j;
}

namespace {

std::vector<int> parse_codes(std::string_view line, std::size_t line_no) {
  std::vector<int> out;
  for (auto tok : split_whitespace(line)) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
      throw MalformedCorpus(line_no, "non-integer code '" + std::string(tok) + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split_utterances(std::string_view line) {
  static constexpr std::string_view kEou = "__eou__";
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    auto next = line.find(kEou, pos);
    auto piece = line.substr(pos, next == std::string_view::npos ? line.npos : next - pos);
    out.emplace_back(trim(piece));
    if (next == std::string_view::npos) break;
    pos = next + kEou.size();
  }
  // The separator terminates every utterance, so the last piece is the
  // (usually empty) remainder after the final `__eou__`.
  if (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

Label lookup(const std::map<int, Label>& table, int code, std::size_t line_no,
             const char* stream) {
  auto it = table.find(code);
  if (it == table.end())
    throw UnknownLabelCode("line " + std::to_string(line_no) + ": unknown " +
                           stream + " code " + std::to_string(code));
  return it->second;
}

}  // namespace

std::vector<Conversation> parse_corpus(std::string_view dialogues,
                                       std::string_view acts,
                                       std::string_view emotions,
                                       const ParseOptions& options) {
  auto d_lines = split_lines(dialogues);
  auto a_lines = split_lines(acts);
  auto e_lines = split_lines(emotions);
  if (d_lines.size() != a_lines.size() || d_lines.size() != e_lines.size()) {
    throw MalformedCorpus(std::min({d_lines.size(), a_lines.size(), e_lines.size()}) + 1,
                          "streams have different line counts (" +
                              std::to_string(d_lines.size()) + " dialogues, " +
                              std::to_string(a_lines.size()) + " acts, " +
                              std::to_string(e_lines.size()) + " emotions)");
  }

  std::vector<Conversation> out;
  out.reserve(d_lines.size());
  for (std::size_t i = 0; i < d_lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto utts = split_utterances(d_lines[i]);
    auto a = parse_codes(a_lines[i], line_no);
    auto e = parse_codes(e_lines[i], line_no);
    if (utts.size() != a.size() || utts.size() != e.size()) {
      throw MalformedCorpus(line_no, std::to_string(utts.size()) + " utterances, " +
                                         std::to_string(a.size()) + " act codes, " +
                                         std::to_string(e.size()) + " emotion codes");
    }
    if (utts.empty()) throw MalformedCorpus(line_no, "conversation has no turns");

    Conversation c;
    c.id = options.id_prefix + std::to_string(i);
    c.turns.reserve(utts.size());
    for (std::size_t t = 0; t < utts.size(); ++t) {
      if (utts[t].empty())
        throw MalformedCorpus(line_no, "empty utterance at position " + std::to_string(t));
      c.turns.push_back({t % 2 == 0 ? Speaker::A : Speaker::B, std::move(utts[t]),
                         lookup(options.codes.acts, a[t], line_no, "act"),
                         lookup(options.codes.emotions, e[t], line_no, "emotion")});
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::array<std::string, 3> serialize_conversation(const Conversation& c,
                                                  const CodeTable& codes) {
  auto reverse = [](const std::map<int, Label>& table, Label l) {
    for (const auto& [code, label] : table)
      if (label == l) return code;
    throw UnknownLabelCode("no code for label '" + std::string(to_string(l)) + "'");
  };
  std::array<std::string, 3> out;
  for (std::size_t t = 0; t < c.turns.size(); ++t) {
    const auto& turn = c.turns[t];
    out[0] += turn.text + " __eou__";
    if (t + 1 < c.turns.size()) out[0] += ' ';
    if (t) {
      out[1] += ' ';
      out[2] += ' ';
    }
    out[1] += std::to_string(reverse(codes.acts, turn.act));
    out[2] += std::to_string(reverse(codes.emotions, turn.emotion));
  }
  return out;
}

void validate_conversation(const Conversation& c) {
  if (c.turns.empty()) throw MalformedCorpus(0, "conversation " + c.id + " has no turns");
  for (std::size_t t = 0; t < c.turns.size(); ++t) {
    const auto& turn = c.turns[t];
    const Speaker expected = t % 2 == 0 ? Speaker::A : Speaker::B;
    if (turn.speaker != expected)
      throw MalformedCorpus(0, "conversation " + c.id + ": speaker does not alternate at turn " +
                                   std::to_string(t));
    if (trim(turn.text).empty())
      throw MalformedCorpus(0, "conversation " + c.id + ": blank turn " + std::to_string(t));
    if (kind_of(turn.act) != LabelKind::act || kind_of(turn.emotion) != LabelKind::emotion)
      throw MalformedCorpus(0, "conversation " + c.id + ": label kind mismatch at turn " +
                                   std::to_string(t));
  }
}

LabelSequence turn_labels(const DialogueTurn& turn, bool suppress_neutral) {
  LabelSequence seq{turn.act};
  if (!(suppress_neutral && turn.emotion == Label::neutral)) seq.push_back(turn.emotion);
  return seq;
}

CorpusSplit build_samples(const std::vector<Conversation>& conversations,
                          const SampleOptions& options) {
  CorpusSplit split;
  split.name = options.split_name;
  const std::size_t w = options.window;
  if (w == 0) throw InvalidConfig("window must be >= 1");
  for (const auto& conv : conversations) {
    for (std::size_t i = 0; i + w < conv.turns.size(); ++i) {
      const auto& target = conv.turns[i + w];
      ContextSample s;
      s.conversation_id = conv.id;
      s.sample_id = conv.id + "#" + std::to_string(i + w);
      s.context.assign(conv.turns.begin() + static_cast<std::ptrdiff_t>(i),
                       conv.turns.begin() + static_cast<std::ptrdiff_t>(i + w));
      s.gold_labels = turn_labels(target, options.suppress_neutral);
      s.gold_response = target.text;
      split.samples.push_back(std::move(s));
    }
  }
  return split;
}

CorpusStats corpus_stats(const CorpusSplit& split) {
  CorpusStats st;
  std::size_t total = 0;
  for (const auto& s : split.samples) {
    if (!s.gold_labels) continue;
    ++st.n_samples;
    total += s.gold_labels->size();
    for (Label l : *s.gold_labels) ++st.label_frequency[index_of(l)];
  }
  if (st.n_samples == 0) throw EmptySplit("split '" + split.name + "' has no labelled samples");
  st.mean_length = static_cast<double>(total) / static_cast<double>(st.n_samples);
  return st;
}

nlohmann::json to_json(const DialogueTurn& t) {
  return {{"speaker", to_string(t.speaker)},
          {"text", t.text},
          {"act", to_string(t.act)},
          {"emotion", to_string(t.emotion)}};
}

DialogueTurn turn_from_json(const nlohmann::json& j) {
  DialogueTurn t;
  t.speaker = parse_speaker(j.at("speaker").get<std::string>());
  t.text = j.at("text").get<std::string>();
  t.act = parse_label(j.value("act", "inform"));
  t.emotion = parse_label(j.value("emotion", "neutral"));
  return t;
}

nlohmann::json to_json(const ContextSample& s) {
  nlohmann::json j;
  j["sample_id"] = s.sample_id;
  j["conversation_id"] = s.conversation_id;
  j["context"] = nlohmann::json::array();
  for (const auto& t : s.context) j["context"].push_back(to_json(t));
  if (s.gold_labels) {
    j["gold_labels"] = nlohmann::json::array();
    for (Label l : *s.gold_labels) j["gold_labels"].push_back(to_string(l));
  } else {
    j["gold_labels"] = nullptr;
  }
  j["gold_response"] = s.gold_response;
  return j;
}

ContextSample sample_from_json(const nlohmann::json& j) {
  ContextSample s;
  s.sample_id = j.at("sample_id").get<std::string>();
  s.conversation_id = j.value("conversation_id", "");
  for (const auto& t : j.at("context")) s.context.push_back(turn_from_json(t));
  if (j.contains("gold_labels") && !j["gold_labels"].is_null()) {
    LabelSequence seq;
    for (const auto& l : j["gold_labels"]) seq.push_back(parse_label(l.get<std::string>()));
    s.gold_labels = std::move(seq);
  }
  s.gold_response = j.value("gold_response", "");
  return s;
}

nlohmann::json to_json(const CorpusStats& s) {
  nlohmann::json freq = nlohmann::json::object();
  for (Label l : kAllLabels) freq[std::string(to_string(l))] = s.label_frequency[index_of(l)];
  return {{"n_samples", s.n_samples}, {"mean_length", s.mean_length}, {"label_frequency", freq}};
}

std::string write_samples_jsonl(const CorpusSplit& split) {
  std::string out;
  for (const auto& s : split.samples) {
    out += to_json(s).dump();
    out += '\n';
  }
  return out;
}

CorpusSplit read_samples_jsonl(std::string_view text, std::string split_name) {
  CorpusSplit split;
  split.name = std::move(split_name);
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      split.samples.push_back(sample_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw MalformedCorpus(line_no, e.what());
    }
  }
  return split;
}

}  // namespace socemo
