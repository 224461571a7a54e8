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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "socemo/backend.hpp"
#include "socemo/label.hpp"

namespace socemo {

// Tag letters used in act-tagged text, e.g. "<I>Hi.</I>".
struct TagMap {
  std::map<std::string, Label> tags;

  bool operator==(const TagMap&) const = default;

  // I=inform, Q=question, D=directive, C=commissive.
  static TagMap default_map();
  static TagMap from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // Throws UnknownLabel when no tag maps to `l`.
  const std::string& tag_for(Label l) const;
};

struct Segment {
  Label act;
  std::string text;

  bool operator==(const Segment&) const = default;
};

// Parses a sequence of "<T>span</T>" segments. Whitespace between segments
// is allowed; tags do not nest. Span text is kept byte for byte.
// Throws UnbalancedTags, UnknownTag, or UntaggedText (non-blank text
// outside any segment); all carry the byte offset of the problem.
std::vector<Segment> parse_tagged_response(std::string_view text,
                                           const TagMap& map = TagMap::default_map());

// Segments joined by single spaces. Inverse of parse_tagged_response for
// spans that contain no tag-shaped text.
std::string serialize_segments(const std::vector<Segment>& segments,
                               const TagMap& map = TagMap::default_map());

// Sentence split used for classifier pre-annotation: breaks after runs of
// '.', '?' or '!' followed by whitespace.
std::vector<std::string> split_sentences(std::string_view text);

// Tags each sentence with the classifier's highest-scoring label among
// those in the tag map (lowest enumerator on ties).
std::string pretag_response(std::string_view text, Classifier& classifier,
                            const TagMap& map = TagMap::default_map());

}  // namespace socemo
