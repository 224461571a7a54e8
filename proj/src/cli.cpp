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

#include "socemo/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "socemo/bundle.hpp"
#include "socemo/campaign.hpp"
#include "socemo/error.hpp"
#include "socemo/event_store.hpp"
#include "socemo/http_backend.hpp"
#include "socemo/mock_backend.hpp"
#include "socemo/pipeline.hpp"
#include "socemo/planning.hpp"
#include "socemo/service.hpp"

namespace socemo {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::string& code) {
  if (code == "InvalidConfig" || code == "Usage") return kExitUsage;
  if (code == "UnreadableFile" || code == "MalformedCorpus" || code == "UnknownLabelCode" ||
      code == "UnknownLabel" || code == "InvalidBundle" || code == "InvalidInput")
    return kExitInput;
  if (code == "BackendUnavailable" || code == "BackendProtocolError" ||
      code == "ClassifierUnavailable")
    return kExitBackend;
  return kExitDomain;
}

std::string format_metric_table(const std::string& name, const MetricReport& r, Averaging avg) {
  const auto& p = r.prf(avg);
  const std::size_t w = std::max<std::size_t>(7, name.size());
  std::string out = fmt::format("{:<{}}  {:>7}  {:>9}  {:>6}  {:>5}  {:>5}  {:>8}  {:>7}\n",
                                "planner", w, "jaccard", "precision", "recall", "f1", "nls",
                                "mean_len", "samples");
  out += fmt::format("{:<{}}  {:>7.2f}  {:>9.2f}  {:>6.2f}  {:>5.2f}  {:>5}  {:>8.2f}  {:>7}\n",
                     name, w, r.jaccard, p.precision, p.recall, p.f1,
                     r.nls ? fmt::format("{:.2f}", *r.nls) : std::string("NA"), r.mean_len,
                     r.n_samples);
  return out;
}

std::string format_stats_table(const CorpusStats& s) {
  std::string out = fmt::format("{:<12}  {:>8}\n", "samples", s.n_samples);
  out += fmt::format("{:<12}  {:>8.4f}\n", "mean_length", s.mean_length);
  out += fmt::format("{:<12}  {:>8}\n", "label", "count");
  for (Label l : kAllLabels)
    out += fmt::format("{:<12}  {:>8}\n", to_string(l), s.label_frequency[index_of(l)]);
  return out;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableFile("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error("InvalidInput", path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UnreadableFile("cannot write " + path);
  f << text;
  if (!f) throw UnreadableFile("write to " + path + " failed");
}

struct Globals {
  std::uint64_t seed = 0;
  std::string config_path;
  bool json_out = false;
  std::size_t jobs = 1;
  json config = json::object();

  json section(const char* name) const {
    return config.contains(name) ? config[name] : json::object();
  }
};

HttpBackendConfig backend_config(const Globals& g, const std::string& url_flag) {
  HttpBackendConfig c;
  const auto sec = g.section("backend");
  c.base_url = sec.value("url", c.base_url);
  c.timeout_ms = sec.value("timeout_ms", c.timeout_ms);
  c.retries = sec.value("retries", c.retries);
  if (const char* v = std::getenv("SOCEMO_BACKEND_URL")) c.base_url = v;
  if (!url_flag.empty()) c.base_url = url_flag;
  return c;
}

CorpusSplit load_samples(const std::string& path) {
  const auto text = read_file(path);
  try {
    return read_samples_jsonl(text, fs::path(path).stem().string());
  } catch (const json::exception& e) {
    throw Error("InvalidInput", path + ": " + e.what());
  }
}

// Finds <dir>/[<split>/]dialogues[_act|_emotion]_<split>.txt.
std::array<std::string, 3> corpus_files(const std::string& dir, const std::string& split) {
  for (const auto& base : {fs::path(dir) / split, fs::path(dir)}) {
    std::array<std::string, 3> files = {
        (base / ("dialogues_" + split + ".txt")).string(),
        (base / ("dialogues_act_" + split + ".txt")).string(),
        (base / ("dialogues_emotion_" + split + ".txt")).string(),
    };
    if (fs::exists(files[0])) return files;
  }
  throw UnreadableFile("no dialogues_" + split + ".txt under " + dir);
}

struct Context {
  Globals& g;
  std::ostream& out;
  std::ostream& err;
};

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string dir, dialogues, acts, emotions, codes, out;
  std::string split = "test";
  std::size_t window = 3;
  bool keep_neutral = false;
};

void cmd_ingest(Context& c, const IngestArgs& a) {
  std::array<std::string, 3> files{a.dialogues, a.acts, a.emotions};
  if (!a.dir.empty()) {
    files = corpus_files(a.dir, a.split);
  } else if (a.dialogues.empty() || a.acts.empty() || a.emotions.empty()) {
    throw InvalidConfig("ingest needs --dir or all of --dialogues, --acts, --emotions");
  }
  ParseOptions opts;
  if (!a.codes.empty()) opts.codes = CodeTable::from_json(read_json_file(a.codes));
  opts.id_prefix = a.split + "-";
  const auto convs =
      parse_corpus(read_file(files[0]), read_file(files[1]), read_file(files[2]), opts);
  SampleOptions so;
  so.window = a.window;
  so.suppress_neutral = !a.keep_neutral;
  so.split_name = a.split;
  const auto split = build_samples(convs, so);
  write_output(a.out, write_samples_jsonl(split), c.out);
  if (!a.out.empty() && a.out != "-") {
    if (c.g.json_out)
      c.out << json{{"conversations", convs.size()}, {"samples", split.samples.size()}}.dump()
            << '\n';
    else
      c.out << fmt::format("{} conversations, {} samples -> {}\n", convs.size(),
                           split.samples.size(), a.out);
  }
}

void cmd_stats(Context& c, const std::string& samples) {
  const auto stats = corpus_stats(load_samples(samples));
  if (c.g.json_out)
    c.out << to_json(stats).dump() << '\n';
  else
    c.out << format_stats_table(stats);
}

struct PlanEvalArgs {
  std::string samples, planner = "oracle", backend = "mock", backend_url, average = "samples";
  double p_two = kRandomTwoLabelProbability;
};

Averaging parse_averaging(const std::string& s) {
  if (s == "micro") return Averaging::micro;
  if (s == "macro") return Averaging::macro;
  if (s == "samples") return Averaging::samples;
  throw InvalidConfig("unknown averaging '" + s + "'");
}

void cmd_plan_eval(Context& c, const PlanEvalArgs& a) {
  const auto split = load_samples(a.samples);
  const auto kind = parse_planner_kind(a.planner);
  const auto avg = parse_averaging(a.average);
  std::unique_ptr<LabelPredictor> predictor;
  std::unique_ptr<Planner> planner;
  switch (kind) {
    case PlannerKind::random: planner = std::make_unique<RandomPlanner>(c.g.seed, a.p_two); break;
    case PlannerKind::oracle: planner = std::make_unique<OraclePlanner>(); break;
    case PlannerKind::remote:
      if (a.backend == "mock")
        predictor = std::make_unique<MockLabelPredictor>(c.g.seed);
      else
        predictor = std::make_unique<HttpBackend>(backend_config(c.g, a.backend_url));
      planner = std::make_unique<RemotePlanner>(*predictor);
      break;
  }
  const auto report = evaluate_planner(*planner, split);
  if (c.g.json_out) {
    auto j = to_json(report);
    j["planner"] = a.planner;
    c.out << j.dump() << '\n';
  } else {
    c.out << format_metric_table(a.planner, report, avg);
  }
}

struct RunArgs {
  std::string samples, out, mode = "nocd", backend = "mock", backend_url, model, approach,
                            nocd_source, planner = "remote";
  std::size_t n = 0, limit = 0;
  double threshold = -1.0;
};

void cmd_run(Context& c, const RunArgs& a) {
  auto split = load_samples(a.samples);
  if (a.limit && split.samples.size() > a.limit) split.samples.resize(a.limit);

  GenerationConfig gc;
  const auto sec = c.g.section("generation");
  gc.model = sec.value("model", gc.model);
  gc.n_candidates = sec.value("n_candidates", gc.n_candidates);
  gc.window = sec.value("window", gc.window);
  gc.classifier_threshold = sec.value("classifier_threshold", gc.classifier_threshold);
  gc.suppress_neutral = sec.value("suppress_neutral", gc.suppress_neutral);
  if (sec.contains("approach")) gc.approach = parse_approach(sec["approach"].get<std::string>());
  if (sec.contains("nocd_source"))
    gc.nocd_source = sec["nocd_source"] == "pool" ? NoCdSource::pool : NoCdSource::separate;
  gc.mode = parse_mode(a.mode);
  if (!a.model.empty()) gc.model = a.model;
  if (a.n) gc.n_candidates = a.n;
  if (a.threshold >= 0) gc.classifier_threshold = a.threshold;
  if (!a.approach.empty()) gc.approach = parse_approach(a.approach);
  if (!a.nocd_source.empty()) {
    if (a.nocd_source != "pool" && a.nocd_source != "separate")
      throw InvalidConfig("--nocd-source must be pool or separate");
    gc.nocd_source = a.nocd_source == "pool" ? NoCdSource::pool : NoCdSource::separate;
  }
  gc.validate();

  std::unique_ptr<Generator> gen;
  std::unique_ptr<Classifier> cls;
  std::unique_ptr<LabelPredictor> pred;
  std::unique_ptr<HttpBackend> http;
  Backends b;
  if (a.backend == "mock") {
    gen = std::make_unique<TemplateGenerator>(c.g.seed);
    cls = std::make_unique<KeywordClassifier>();
    pred = std::make_unique<MockLabelPredictor>(c.g.seed);
    b.generator = gen.get();
    b.classifier = cls.get();
  } else if (a.backend == "http") {
    http = std::make_unique<HttpBackend>(backend_config(c.g, a.backend_url));
    b.generator = http.get();
    b.classifier = http.get();
  } else {
    throw InvalidConfig("--backend must be mock or http");
  }
  std::unique_ptr<Planner> planner;
  switch (parse_planner_kind(a.planner)) {
    case PlannerKind::random: planner = std::make_unique<RandomPlanner>(c.g.seed); break;
    case PlannerKind::oracle: planner = std::make_unique<OraclePlanner>(); break;
    case PlannerKind::remote:
      planner = std::make_unique<RemotePlanner>(pred ? *pred : static_cast<LabelPredictor&>(*http));
      break;
  }
  b.planner = planner.get();

  const auto records = run_split(split, gc, b, c.g.jobs);
  // Transport failures on every sample mean the backend is down, not that
  // the samples are bad.
  if (!records.empty() && std::all_of(records.begin(), records.end(), [](const auto& r) {
        return r.status == RunStatus::failed && r.cause.rfind("BackendUnavailable", 0) == 0;
      }))
    throw BackendUnavailable(records.front().cause.substr(records.front().cause.find(": ") + 2));
  write_output(a.out, write_records_jsonl(records), c.out);

  std::size_t ok = 0, failed = 0, unparsable = 0;
  for (const auto& r : records) {
    ok += r.status == RunStatus::ok;
    failed += r.status == RunStatus::failed;
    unparsable += r.status == RunStatus::unparsable;
  }
  if (!a.out.empty() && a.out != "-") {
    if (c.g.json_out)
      c.out << json{{"records", records.size()}, {"ok", ok}, {"failed", failed},
                    {"unparsable", unparsable}}.dump()
            << '\n';
    else
      c.out << fmt::format("{} records ({} ok, {} failed, {} unparsable) -> {}\n", records.size(),
                           ok, failed, unparsable, a.out);
  }
}

struct CampaignArgs {
  std::vector<std::string> records;
  std::string references, data_dir, id, salt;
  std::vector<std::string> annotators;
  std::optional<std::size_t> contexts, step3, practice;
};

void cmd_campaign_create(Context& c, const CampaignArgs& a) {
  json base = c.g.section("campaign");
  if (!base.contains("annotators")) base["annotators"] = json::array();
  auto cfgj = base;
  if (!a.annotators.empty()) cfgj["annotators"] = a.annotators;
  if (!a.id.empty()) cfgj["id"] = a.id;
  if (a.contexts) cfgj["n_contexts"] = *a.contexts;
  if (a.step3) cfgj["step3_contexts"] = *a.step3;
  if (a.practice) cfgj["practice_contexts"] = *a.practice;
  if (!a.salt.empty()) cfgj["token_salt"] = a.salt;
  if (!cfgj.contains("seed")) cfgj["seed"] = c.g.seed;
  auto config = CampaignConfig::from_json(cfgj);
  if (config.token_salt.empty()) {
    std::random_device rd;
    config.token_salt = fmt::format("{:08x}{:08x}{:08x}{:08x}", rd(), rd(), rd(), rd());
  }

  std::vector<PipelineRunRecord> records;
  for (const auto& path : a.records) {
    try {
      auto part = read_records_jsonl(read_file(path));
      records.insert(records.end(), part.begin(), part.end());
    } catch (const json::exception& e) {
      throw Error("InvalidInput", path + ": " + e.what());
    }
  }
  std::map<std::string, std::string> refs;
  if (!a.references.empty())
    refs = read_json_file(a.references).get<std::map<std::string, std::string>>();

  ServiceConfig sc = ServiceConfig::from_json(c.g.section("service"));
  sc.apply_env();
  if (!a.data_dir.empty()) sc.data_dir = a.data_dir;
  FileEventStore store(sc.data_dir);
  CampaignService service(store, nullptr, {sc.snapshot_every, {}});
  const auto campaign = service.create(records, refs, config);

  std::size_t step3 = 0, practice = 0;
  for (const auto& ctx : campaign.contexts) {
    step3 += ctx.step3;
    practice += ctx.practice;
  }
  if (c.g.json_out) {
    c.out << json{{"campaign_id", campaign.id},
                  {"data_dir", sc.data_dir},
                  {"contexts", campaign.contexts.size()},
                  {"practice_contexts", practice},
                  {"step3_contexts", step3},
                  {"tokens", campaign.tokens},
                  {"admin_token", campaign.admin_token}}
                 .dump()
          << '\n';
    return;
  }
  c.out << fmt::format("campaign {} in {}: {} contexts ({} practice, {} step 3)\n", campaign.id,
                       sc.data_dir, campaign.contexts.size(), practice, step3);
  for (const auto& [who, token] : campaign.tokens) c.out << fmt::format("{:<12}  {}\n", who, token);
  c.out << fmt::format("{:<12}  {}\n", "(admin)", campaign.admin_token);
}

struct ServeArgs {
  std::string host, data_dir, backend_url;
  int port = -1;
};

void cmd_serve(Context& c, const ServeArgs& a) {
  ServiceConfig sc = ServiceConfig::from_json(c.g.section("service"));
  sc.apply_env();
  if (!a.host.empty()) sc.host = a.host;
  if (a.port >= 0) sc.port = a.port;
  if (!a.data_dir.empty()) sc.data_dir = a.data_dir;
  if (!a.backend_url.empty()) sc.backend_url = a.backend_url;

  std::unique_ptr<HttpBackend> classifier;
  if (!sc.backend_url.empty())
    classifier = std::make_unique<HttpBackend>(
        HttpBackendConfig{sc.backend_url, sc.backend_timeout_ms, sc.backend_retries});
  FileEventStore store(sc.data_dir);
  CampaignService service(store, classifier.get(), {sc.snapshot_every, {}});
  HttpService http(service);
  const int port = http.start(sc.host, sc.port);
  c.err << fmt::format("socemo serving on http://{}:{} (data: {})\n", sc.host, port, sc.data_dir);
  c.err.flush();
  // start() runs the listener on its own thread; block until it exits.
  std::promise<void>().get_future().wait();
}

Bundle load_bundle(const std::string& path) { return read_bundle(read_file(path)); }

ScoreOptions score_options(const std::string& normalization, bool strict) {
  ScoreOptions o;
  o.normalization = parse_normalization(normalization);
  o.strict = strict;
  return o;
}

void cmd_score(Context& c, const std::string& bundle, const std::string& normalization,
               bool strict) {
  const auto data = load_bundle(bundle).annotation_data();
  if (!data.has_judgments()) throw NoJudgments("bundle holds no judgments");
  const auto report = score_campaign(data, score_options(normalization, strict));
  if (c.g.json_out)
    c.out << to_json(report).dump() << '\n';
  else
    c.out << format_score_table(report);
}

void cmd_agree(Context& c, const std::string& bundle) {
  const auto data = load_bundle(bundle).annotation_data();
  std::vector<Step1Judgment> scored;
  for (const auto& j : data.step1)
    if (!data.practice.count(j.context_id)) scored.push_back(j);
  const auto report = agreement_report(scored);
  if (c.g.json_out)
    c.out << to_json(report).dump() << '\n';
  else
    c.out << format_agreement_table(report);
}

void cmd_export(Context& c, const std::string& data_dir, const std::string& bundle,
                const std::string& out, const std::string& normalization) {
  if (data_dir.empty() == bundle.empty())
    throw InvalidConfig("export needs exactly one of --data-dir or --bundle");
  const auto opts = score_options(normalization, false);
  std::string text;
  if (!bundle.empty()) {
    text = write_bundle(load_bundle(bundle), opts);
  } else {
    if (!fs::exists(fs::path(data_dir) / "events.jsonl") &&
        !fs::exists(fs::path(data_dir) / "snapshot.json"))
      throw UnreadableFile("no event log under " + data_dir);
    FileEventStore store(data_dir);
    auto [base, tail] = store.load();
    const auto state = replay(tail, std::move(base));
    if (!state.campaign) throw NotFound("no campaign in " + data_dir);
    text = write_bundle(state.to_bundle(), opts);
  }
  write_output(out, text, c.out);
}

void print_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals g;
  CLI::App app{"socemo: socio-emotional response planning, reranking and human evaluation"};
  app.set_version_flag("--version", "socemo 0.1.0");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Seed for every random choice (default 0)");
  app.add_option("--config", g.config_path, "JSON config file with backend, generation, "
                                            "campaign and service sections")
      ->check(CLI::ExistingFile);
  app.add_flag("--json", g.json_out, "Emit JSON instead of text tables");
  app.add_option("--jobs", g.jobs, "Contexts processed concurrently by run")
      ->check(CLI::PositiveNumber);
  app.footer(
      "Environment: SOCEMO_BACKEND_URL overrides the backend URL; SOCEMO_PORT and "
      "SOCEMO_DATA_DIR override the service port and data directory.\n"
      "Exit codes: 0 ok, 2 usage, 3 input, 4 backend, 5 domain error.");

  IngestArgs ingest;
  auto* s_ingest = app.add_subcommand("ingest", "Parse a dialogue corpus into context samples");
  s_ingest->add_option("--dir", ingest.dir, "Corpus directory (dialogues_<split>.txt, ...)");
  s_ingest->add_option("--split", ingest.split, "Split name")->capture_default_str();
  s_ingest->add_option("--dialogues", ingest.dialogues, "Utterance file");
  s_ingest->add_option("--acts", ingest.acts, "Act code file");
  s_ingest->add_option("--emotions", ingest.emotions, "Emotion code file");
  s_ingest->add_option("--codes", ingest.codes, "JSON code table");
  s_ingest->add_option("--window", ingest.window, "Context turns per sample")->capture_default_str();
  s_ingest->add_flag("--keep-neutral", ingest.keep_neutral, "Keep neutral in gold sequences");
  s_ingest->add_option("-o,--out", ingest.out, "Sample JSONL output (default stdout)");

  std::string stats_samples;
  auto* s_stats = app.add_subcommand("stats", "Corpus statistics of a sample file");
  s_stats->add_option("--samples", stats_samples, "Sample JSONL")->required();

  PlanEvalArgs pe;
  auto* s_pe = app.add_subcommand("plan-eval", "Score a next-label planner against gold labels");
  s_pe->add_option("--samples", pe.samples, "Sample JSONL")->required();
  s_pe->add_option("--planner", pe.planner, "random | oracle | remote")
      ->check(CLI::IsMember({"random", "oracle", "remote"}))
      ->capture_default_str();
  s_pe->add_option("--backend", pe.backend, "Remote planner backend: mock | http")
      ->check(CLI::IsMember({"mock", "http"}))
      ->capture_default_str();
  s_pe->add_option("--backend-url", pe.backend_url, "Model server URL");
  s_pe->add_option("--p-two", pe.p_two, "Random planner two-label probability")
      ->capture_default_str();
  s_pe->add_option("--average", pe.average, "micro | macro | samples")
      ->check(CLI::IsMember({"micro", "macro", "samples"}))
      ->capture_default_str();

  RunArgs run;
  auto* s_run = app.add_subcommand("run", "Run the generation pipeline over a sample file");
  s_run->add_option("--samples", run.samples, "Sample JSONL")->required();
  s_run->add_option("--mode", run.mode, "nocd | cd-pred | cd-gt")
      ->check(CLI::IsMember({"nocd", "cd-pred", "cd-gt"}))
      ->capture_default_str();
  s_run->add_option("--backend", run.backend, "mock | http")->capture_default_str();
  s_run->add_option("--backend-url", run.backend_url, "Model server URL");
  s_run->add_option("--model", run.model, "Model name recorded in run records");
  s_run->add_option("--n", run.n, "Candidates per context (default 10)");
  s_run->add_option("--threshold", run.threshold, "Classifier confidence threshold (default 0.7)");
  s_run->add_option("--approach", run.approach, "reranking | prompt-based");
  s_run->add_option("--nocd-source", run.nocd_source, "separate | pool");
  s_run->add_option("--planner", run.planner, "Planner for cd-pred: random | oracle | remote")
      ->capture_default_str();
  s_run->add_option("--limit", run.limit, "Only the first N samples");
  s_run->add_option("-o,--out", run.out, "Run record JSONL output (default stdout)");

  CampaignArgs camp;
  auto* s_camp = app.add_subcommand("campaign-create", "Create an annotation campaign");
  s_camp->add_option("--records", camp.records, "Run record JSONL files")->required();
  s_camp->add_option("--references", camp.references, "JSON map sample id -> reference text");
  s_camp->add_option("--annotators", camp.annotators, "Annotator ids")->delimiter(',');
  s_camp->add_option("--contexts", camp.contexts, "Scored contexts (default all)");
  s_camp->add_option("--step3", camp.step3, "Step-3 contexts");
  s_camp->add_option("--practice", camp.practice, "Practice contexts");
  s_camp->add_option("--id", camp.id, "Campaign id");
  s_camp->add_option("--salt", camp.salt, "Token salt (default random)");
  s_camp->add_option("--data-dir", camp.data_dir, "Event log directory");

  ServeArgs serve;
  auto* s_serve = app.add_subcommand("serve", "Run the annotation service");
  s_serve->add_option("--host", serve.host, "Bind address");
  s_serve->add_option("--port", serve.port, "Port (default 8090)");
  s_serve->add_option("--data-dir", serve.data_dir, "Event log directory");
  s_serve->add_option("--backend-url", serve.backend_url, "Classifier for step-3 pre-tagging");

  std::string bundle_path, normalization = "per-annotator";
  bool strict = false;
  auto* s_score = app.add_subcommand("score", "Score report from an annotation bundle");
  s_score->add_option("--bundle", bundle_path, "Bundle JSONL")->required();
  s_score->add_option("--normalization", normalization, "per-annotator | global")
      ->check(CLI::IsMember({"per-annotator", "global"}))
      ->capture_default_str();
  s_score->add_flag("--strict", strict, "Fail on missing step-3 ratings");

  auto* s_agree = app.add_subcommand("agree", "Inter-annotator agreement from a bundle");
  s_agree->add_option("--bundle", bundle_path, "Bundle JSONL")->required();

  std::string export_dir, export_out;
  auto* s_export = app.add_subcommand("export", "Write the annotation bundle of a campaign");
  s_export->add_option("--data-dir", export_dir, "Event log directory");
  s_export->add_option("--bundle", bundle_path, "Re-export an existing bundle");
  s_export->add_option("--normalization", normalization, "per-annotator | global")
      ->check(CLI::IsMember({"per-annotator", "global"}));
  s_export->add_option("-o,--out", export_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "Usage", e.what());
    return kExitUsage;
  }

  Context ctx{g, out, err};
  try {
    if (!g.config_path.empty()) {
      g.config = read_json_file(g.config_path);
      if (!g.config.is_object()) throw InvalidConfig("config file must hold a JSON object");
    }
    if (*s_ingest) cmd_ingest(ctx, ingest);
    else if (*s_stats) cmd_stats(ctx, stats_samples);
    else if (*s_pe) cmd_plan_eval(ctx, pe);
    else if (*s_run) cmd_run(ctx, run);
    else if (*s_camp) cmd_campaign_create(ctx, camp);
    else if (*s_serve) cmd_serve(ctx, serve);
    else if (*s_score) cmd_score(ctx, bundle_path, normalization, strict);
    else if (*s_agree) cmd_agree(ctx, bundle_path);
    else if (*s_export) cmd_export(ctx, export_dir, bundle_path, export_out, normalization);
  } catch (const Error& e) {
    print_error(err, e.code(), e.what());
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    print_error(err, "InvalidInput", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    print_error(err, "InternalError", e.what());
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace socemo
