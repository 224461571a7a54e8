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

#include "socemo/tagging.hpp"

#include <optional>

#include "socemo/error.hpp"
#include "socemo/text.hpp"

namespace socemo {

TagMap TagMap::default_map() {
  return TagMap{{{"I", Label::inform},
                 {"Q", Label::question},
                 {"D", Label::directive},
                 {"C", Label::commissive}}};
}

namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }

struct RawTag {
  bool closing;
  std::string name;
  std::size_t begin;
  std::size_t end;  // one past '>'
};

// Tag-shaped token at `pos`: "<Name>" or "</Name>" with an alphabetic name.
std::optional<RawTag> tag_at(std::string_view s, std::size_t pos) {
  if (s[pos] != '<') return std::nullopt;
  std::size_t i = pos + 1;
  bool closing = i < s.size() && s[i] == '/';
  if (closing) ++i;
  std::size_t name_begin = i;
  while (i < s.size() && is_alpha(s[i])) ++i;
  if (i == name_begin || i >= s.size() || s[i] != '>') return std::nullopt;
  return RawTag{closing, std::string(s.substr(name_begin, i - name_begin)), pos, i + 1};
}

}  // namespace

TagMap TagMap::from_json(const nlohmann::json& j) {
  TagMap m;
  for (const auto& [tag, label] : j.items()) {
    if (tag.empty()) throw InvalidConfig("empty tag name");
    for (char c : tag)
      if (!is_alpha(c)) throw InvalidConfig("tag name '" + tag + "' must be alphabetic");
    m.tags.emplace(tag, parse_label(label.get<std::string>()));
  }
  if (m.tags.empty()) throw InvalidConfig("tag map is empty");
  return m;
}

nlohmann::json TagMap::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [tag, label] : tags) j[tag] = std::string(socemo::to_string(label));
  return j;
}

const std::string& TagMap::tag_for(Label l) const {
  for (const auto& [tag, label] : tags)
    if (label == l) return tag;
  throw UnknownLabel("no tag for label " + std::string(socemo::to_string(l)));
}

std::vector<Segment> parse_tagged_response(std::string_view text, const TagMap& map) {
  std::vector<Segment> out;
  std::optional<RawTag> open;
  std::size_t span_begin = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    auto tag = tag_at(text, i);
    if (!tag) {
      if (!open && !is_space(text[i])) throw UntaggedText(i, "text outside any tag");
      ++i;
      continue;
    }
    auto it = map.tags.find(tag->name);
    if (it == map.tags.end()) throw UnknownTag(tag->begin, "unknown tag '" + tag->name + "'");
    if (!tag->closing) {
      if (open) throw UnbalancedTags(tag->begin, "<" + tag->name + "> opened inside <" + open->name + ">");
      open = tag;
      span_begin = tag->end;
    } else {
      if (!open) throw UnbalancedTags(tag->begin, "</" + tag->name + "> without opening tag");
      if (open->name != tag->name)
        throw UnbalancedTags(tag->begin, "</" + tag->name + "> closes <" + open->name + ">");
      out.push_back(Segment{it->second, std::string(text.substr(span_begin, tag->begin - span_begin))});
      open.reset();
    }
    i = tag->end;
  }
  if (open) throw UnbalancedTags(text.size(), "<" + open->name + "> not closed");
  return out;
}

std::string serialize_segments(const std::vector<Segment>& segments, const TagMap& map) {
  std::string out;
  for (const auto& s : segments) {
    if (!out.empty()) out += ' ';
    const auto& tag = map.tag_for(s.act);
    out += "<" + tag + ">" + s.text + "</" + tag + ">";
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  text = trim(text);
  std::size_t begin = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '.' || c == '?' || c == '!') {
      std::size_t j = i;
      while (j < text.size() && (text[j] == '.' || text[j] == '?' || text[j] == '!')) ++j;
      if (j == text.size() || is_space(text[j])) {
        out.emplace_back(trim(text.substr(begin, j - begin)));
        while (j < text.size() && is_space(text[j])) ++j;
        begin = j;
      }
      i = j;
      continue;
    }
    ++i;
  }
  if (begin < text.size()) out.emplace_back(trim(text.substr(begin)));
  return out;
}

std::string pretag_response(std::string_view text, Classifier& classifier, const TagMap& map) {
  std::vector<Segment> segments;
  for (auto& sentence : split_sentences(text)) {
    const auto conf = classifier.classify(sentence);
    std::optional<Label> best;
    for (Label l : kAllLabels) {
      bool mapped = false;
      for (const auto& [_, tl] : map.tags) mapped = mapped || tl == l;
      if (!mapped) continue;
      if (!best || conf[index_of(l)] > conf[index_of(*best)]) best = l;
    }
    segments.push_back(Segment{*best, std::move(sentence)});
  }
  return serialize_segments(segments, map);
}

}  // namespace socemo
