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

#include <iosfwd>
#include <string>

#include "socemo/metrics.hpp"
#include "socemo/corpus.hpp"

namespace socemo {

// Exit codes of the socemo command.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,    // bad flags or configuration
  kExitInput = 3,    // unreadable or malformed input files
  kExitBackend = 4,  // model backend unreachable or misbehaving
  kExitDomain = 5,   // any other domain error
};

int exit_code_for(const std::string& error_code);

// Entry point behind tools/socemo. Tables go to `out` (JSON with --json);
// failures print {"error": {"code", "message"}} on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string format_metric_table(const std::string& name, const MetricReport& r, Averaging avg);
std::string format_stats_table(const CorpusStats& s);

}  // namespace socemo
