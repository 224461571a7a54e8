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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace socemo {

// Base of every error the library raises. `code()` is the stable,
// machine-readable name used in CLI and HTTP error payloads.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define SOCEMO_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// corpus
class MalformedCorpus : public Error {
 public:
  MalformedCorpus(std::size_t line, const std::string& message)
      : Error("MalformedCorpus",
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};
SOCEMO_DEFINE_ERROR(UnknownLabelCode);
SOCEMO_DEFINE_ERROR(UnknownLabel);
SOCEMO_DEFINE_ERROR(EmptySplit);
SOCEMO_DEFINE_ERROR(UnreadableFile);

// metrics
SOCEMO_DEFINE_ERROR(LengthMismatch);
SOCEMO_DEFINE_ERROR(EmptyList);
SOCEMO_DEFINE_ERROR(InsufficientData);

// planning / pipeline
SOCEMO_DEFINE_ERROR(MissingGold);
SOCEMO_DEFINE_ERROR(EmptyCandidateList);
SOCEMO_DEFINE_ERROR(BackendUnavailable);
SOCEMO_DEFINE_ERROR(ClassifierUnavailable);
SOCEMO_DEFINE_ERROR(BackendProtocolError);

// protocol
SOCEMO_DEFINE_ERROR(NoRecords);
SOCEMO_DEFINE_ERROR(NoJudgments);
SOCEMO_DEFINE_ERROR(MissingRating);
SOCEMO_DEFINE_ERROR(InvalidConfig);
SOCEMO_DEFINE_ERROR(InvalidBundle);

// Tag syntax errors carry the byte offset into the tagged text.
class TagError : public Error {
 public:
  TagError(std::string code, std::size_t offset, const std::string& message)
      : Error(std::move(code),
              message + " at byte " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnbalancedTags : public TagError {
 public:
  UnbalancedTags(std::size_t offset, const std::string& message)
      : TagError("UnbalancedTags", offset, message) {}
};

class UnknownTag : public TagError {
 public:
  UnknownTag(std::size_t offset, const std::string& message)
      : TagError("UnknownTag", offset, message) {}
};

class UntaggedText : public TagError {
 public:
  UntaggedText(std::size_t offset, const std::string& message)
      : TagError("UntaggedText", offset, message) {}
};

// service
SOCEMO_DEFINE_ERROR(NoTasksRemaining);
SOCEMO_DEFINE_ERROR(StaleTask);
SOCEMO_DEFINE_ERROR(Unauthorized);
SOCEMO_DEFINE_ERROR(NotFound);
SOCEMO_DEFINE_ERROR(Conflict);

struct FieldError {
  std::string field;
  std::string reason;
};

class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(std::vector<FieldError> fields)
      : Error("ValidationFailed", summarize(fields)),
        fields_(std::move(fields)) {}
  ValidationFailed(std::string field, std::string reason)
      : ValidationFailed(std::vector<FieldError>{{std::move(field), std::move(reason)}}) {}

  const std::vector<FieldError>& fields() const noexcept { return fields_; }

 private:
  static std::string summarize(const std::vector<FieldError>& fields) {
    std::string out = "validation failed";
    for (const auto& f : fields) out += "; " + f.field + ": " + f.reason;
    return out;
  }

  std::vector<FieldError> fields_;
};

#undef SOCEMO_DEFINE_ERROR

}  // namespace socemo
