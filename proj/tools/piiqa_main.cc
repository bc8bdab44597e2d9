// Copyright 2026 The piiqa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Operator CLI. Exit status: 0 success, 1 validation failure, 2 I/O failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "piiqa/api.h"
#include "piiqa/config.h"
#include "piiqa/error.h"
#include "piiqa/exchange.h"
#include "piiqa/metrics.h"
#include "piiqa/rca.h"
#include "piiqa/reports.h"
#include "piiqa/simulation.h"
#include "piiqa/store.h"
#include "piiqa/synth.h"
#include "piiqa/workflow.h"

namespace {

namespace fs = std::filesystem;
using piiqa::Errc;
using piiqa::Error;

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct Common {
  std::uint64_t seed = 0;
  std::string config;
  std::vector<std::string> locales;
  std::string phase;
  std::string store = "piiqa-store";
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Seed for every pseudo-random draw");
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--locale", c.locales, "Restrict to these locales (repeatable)");
  app->add_option("--phase", c.phase, "Restrict to one phase");
  app->add_option("--store", c.store, "Store directory")->capture_default_str();
}

struct Context {
  piiqa::Config config;
  std::optional<piiqa::ReferenceData> loaded;
  const piiqa::ReferenceData* ref = nullptr;
  std::optional<piiqa::Phase> phase;
  std::optional<std::string> locale;
  std::vector<std::string> locales;
};

Context make_context(const Common& c) {
  Context ctx;
  if (!c.config.empty()) ctx.config = piiqa::Config::load(c.config);
  if (ctx.config.reference_data_dir) {
    ctx.loaded = piiqa::ReferenceData::load(*ctx.config.reference_data_dir);
    ctx.ref = &*ctx.loaded;
  } else {
    ctx.ref = &piiqa::ReferenceData::builtin();
  }
  if (!c.phase.empty()) ctx.phase = piiqa::parse_phase(c.phase);
  for (const auto& l : c.locales) ctx.locales.push_back(ctx.ref->locale(l).code);
  if (ctx.locales.size() == 1) ctx.locale = ctx.locales.front();
  if (ctx.locales.size() > 1) {
    // Reports filter on a single locale; several only make sense for gen.
    ctx.locale.reset();
  }
  return ctx;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kUnwritableFile, "cannot write " + path.string());
  out << content;
  if (!out.flush()) throw Error(Errc::kUnwritableFile, "write failed for " + path.string());
}

// Writes `name` under `dir`, or to stdout when no directory was given.
void emit(const std::string& dir, const std::string& name, const std::string& content) {
  if (dir.empty()) {
    std::cout << content;
    return;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::kUnwritableFile, "cannot create " + dir);
  write_file(fs::path(dir) / name, content);
}

std::unique_ptr<piiqa::Store> open_store(const Common& c, const Context& ctx) {
  return piiqa::Store::open(c.store, *ctx.ref);
}

piiqa::CorpusSpec build_spec(const Common& c, const Context& ctx, const std::string& spec_file,
                             std::size_t tasks, bool table_volumes) {
  piiqa::CorpusSpec spec;
  if (!spec_file.empty()) {
    std::ifstream in(spec_file);
    if (!in) throw Error(Errc::kUnreadableFile, "cannot read " + spec_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::kSpecInvalid, spec_file + ": " + e.what());
    }
    spec = piiqa::corpus_spec_from_json(j, *ctx.ref);
  } else {
    spec.profiles = piiqa::default_phase_profiles();
    std::vector<std::string> locales = ctx.locales;
    if (locales.empty()) {
      for (const auto& l : ctx.ref->locales()) locales.push_back(l.code);
    }
    for (const auto& l : locales) {
      piiqa::LocaleVolume v;
      v.locale = l;
      const auto published = piiqa::published_volumes(l);
      for (std::size_t p = 0; p < 3; ++p) {
        v.tasks[p] = table_volumes && published ? (*published)[p].lo : tasks;
      }
      if (table_volumes && published) spec.ranges[l] = *published;
      spec.locales.push_back(v);
    }
  }
  spec.seed = c.seed;
  spec.bins = ctx.config.bins;
  if (ctx.phase) {
    for (auto& v : spec.locales) {
      for (std::size_t p = 0; p < 3; ++p) {
        if (piiqa::kPhases[p] != *ctx.phase) v.tasks[p] = 0;
      }
    }
    spec.ranges.clear();
  }
  return spec;
}

piiqa::PipelineSummary route_all(piiqa::Corpus& corpus, const Context& ctx,
                                 std::uint64_t seed, std::int64_t& clock) {
  piiqa::PipelineSummary s;
  std::vector<std::string> ids;
  for (const auto& [id, t] : corpus.tasks()) {
    if (t.state.status() != piiqa::TaskStatus::kDualAnnotated) continue;
    if (ctx.phase && t.phase != *ctx.phase) continue;
    if (ctx.locale && t.locale != *ctx.locale) continue;
    ids.push_back(id);
  }
  for (const auto& id : ids) {
    piiqa::Task& t = *corpus.find_task(id);
    const auto subs = corpus.submissions_for(id);
    const double ira = piiqa::task_agreement(
        std::span<const piiqa::Submission* const>(subs), ctx.config.tau);
    const auto& policy = ctx.config.workflow.policy(t.locale, t.phase);
    piiqa::Rng sampler(piiqa::derive_seed(seed, "route:" + id));
    const auto d = piiqa::route(t, ira, policy, sampler, ++clock);
    ++s.routed;
    if (d.to == piiqa::TaskStatus::kAccepted) {
      ++s.accepted;
    } else if (d.audit) {
      ++s.audited;
    } else {
      ++s.below_threshold;
    }
  }
  return s;
}

std::string summary_line(const piiqa::PipelineSummary& s) {
  return "routed=" + std::to_string(s.routed) + " accepted=" + std::to_string(s.accepted) +
         " below_threshold=" + std::to_string(s.below_threshold) +
         " audited=" + std::to_string(s.audited) + " reviewed=" + std::to_string(s.reviewed) +
         "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piiqa: multilingual PII annotation quality pipeline"};
  app.require_subcommand(1);
  Common c;

  auto* ingest = app.add_subcommand("ingest", "Import an exchange file into the store");
  add_common(ingest, c);
  std::string ingest_file;
  ingest->add_option("file", ingest_file, "Exchange file (JSONL)")->required();

  auto* exp = app.add_subcommand("export", "Write the store as an exchange file");
  add_common(exp, c);
  std::string export_file;
  exp->add_option("file", export_file, "Output file")->required();

  auto* agree = app.add_subcommand("agree", "Per-task IRA and the annotator agreement matrix");
  add_common(agree, c);
  std::string agree_task;
  agree->add_option("--task", agree_task, "Only this task");
  agree->add_option("--out", c.out, "Write agreement.tsv and matrix.tsv here");

  auto* route = app.add_subcommand("route", "Route dual-annotated tasks by IRA and QA sampling");
  add_common(route, c);

  auto* report = app.add_subcommand("report", "Review verdicts per locale and quality scores");
  add_common(report, c);
  report->add_option("--out", c.out, "Write phase_report.tsv and quality.tsv here");

  auto* metrics = app.add_subcommand("metrics", "Recall and FPR per locale and phase");
  add_common(metrics, c);
  std::string grain = "both", reference = "review", fpr_mode, trend;
  metrics->add_option("--grain", grain, "fine, coarse or both")->capture_default_str();
  metrics->add_option("--reference", reference, "review or truth")->capture_default_str();
  metrics->add_option("--fpr-mode", fpr_mode, "row or type_instance");
  metrics->add_option("--trend", trend, "Phase trend table instead: recall or fpr");
  metrics->add_option("--out", c.out, "Write metrics.tsv here");

  auto* rca = app.add_subcommand("rca", "Root causes of disagreement and confusion pairs");
  add_common(rca, c);
  std::int64_t rca_from = 0, rca_to = -1;
  std::size_t top_k = 0;
  rca->add_option("--from", rca_from, "Window start (review timestamp)");
  rca->add_option("--to", rca_to, "Window end, exclusive (default: everything)");
  rca->add_option("--top-k", top_k, "Confusion pairs per phase");
  rca->add_option("--out", c.out, "Write rca.tsv and confusions.tsv here");

  auto* dist = app.add_subcommand("distributions", "Normalized domain, length or category mix");
  add_common(dist, c);
  std::string axis = "domain", grouping = "group";
  dist->add_option("--axis", axis, "domain, length_bin or pii_category")->capture_default_str();
  dist->add_option("--grouping", grouping, "group, locale or all")->capture_default_str();
  dist->add_option("--out", c.out, "Write distributions.tsv here");

  auto* gen = app.add_subcommand("gen", "Generate a synthetic annotated corpus");
  add_common(gen, c);
  std::string gen_out, spec_file;
  std::size_t tasks = 20;
  bool table_volumes = false;
  gen->add_option("--out", gen_out, "Exchange file to write (default stdout)");
  gen->add_option("--spec", spec_file, "Corpus spec JSON");
  gen->add_option("--tasks", tasks, "Tasks per locale and phase")->capture_default_str();
  gen->add_flag("--table-volumes", table_volumes, "Use the published per-locale volumes");

  auto* sim = app.add_subcommand("simulate", "Generate, route, review and report all phases");
  add_common(sim, c);
  sim->add_option("--out", c.out, "Report directory")->required();
  sim->add_option("--spec", spec_file, "Corpus spec JSON");
  sim->add_option("--tasks", tasks, "Tasks per locale and phase")->capture_default_str();
  sim->add_flag("--table-volumes", table_volumes, "Use the published per-locale volumes");

  auto* serve = app.add_subcommand("serve", "Serve the /v1 HTTP API over the store");
  add_common(serve, c);
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    Context ctx = make_context(c);

    if (*ingest) {
      auto store = open_store(c, ctx);
      const auto r = store->ingest(ingest_file);
      std::cout << "loaded " << r.loaded;
      for (const auto& [kind, n] : r.by_kind) std::cout << ' ' << kind << '=' << n;
      std::cout << " rejected " << r.rejected.size() << '\n';
      for (const auto& rej : r.rejected) {
        std::cerr << ingest_file << ':' << rej.line << ": " << rej.code << ": " << rej.message
                  << '\n';
      }
      return r.rejected.empty() ? 0 : kExitValidation;
    }
    if (*exp) {
      auto store = open_store(c, ctx);
      piiqa::exchange::export_corpus(store->corpus(), export_file, {ctx.phase, ctx.locale});
      return 0;
    }
    if (*agree) {
      auto store = open_store(c, ctx);
      std::vector<piiqa::reports::TaskAgreement> rows;
      if (!agree_task.empty()) {
        const piiqa::Task* t = store->corpus().find_task(agree_task);
        if (t == nullptr) throw Error(Errc::kUnknownTask, "no task " + agree_task);
        const auto subs = store->corpus().submissions_for(agree_task);
        if (subs.size() < 2) {
          throw Error(Errc::kInsufficientSubmissions,
                      "task " + agree_task + " has " + std::to_string(subs.size()) +
                          " submission(s)");
        }
        for (auto& r : piiqa::reports::task_agreements(store->corpus(), ctx.config.tau,
                                                       t->phase, t->locale)) {
          if (r.task_id == agree_task) rows.push_back(r);
        }
      } else {
        rows = piiqa::reports::task_agreements(store->corpus(), ctx.config.tau, ctx.phase,
                                               ctx.locale);
      }
      emit(c.out, "agreement.tsv", piiqa::reports::agreement_tsv(rows));
      if (agree_task.empty()) {
        emit(c.out, "matrix.tsv",
             piiqa::reports::matrix_tsv(piiqa::annotator_matrix(store->corpus(), ctx.config.tau)));
      }
      return 0;
    }
    if (*route) {
      auto store = open_store(c, ctx);
      const auto s = route_all(store->mutable_corpus(), ctx, c.seed, store->clock());
      store->persist_all();
      std::cout << summary_line(s);
      return 0;
    }
    if (*report) {
      auto store = open_store(c, ctx);
      std::vector<piiqa::PhaseReport> phases;
      for (auto p : piiqa::kPhases) {
        if (!ctx.phase || p == *ctx.phase) phases.push_back(piiqa::phase_report(store->corpus(), p));
      }
      emit(c.out, "phase_report.tsv", piiqa::reports::phase_report_tsv(phases));
      emit(c.out, "quality.tsv",
           piiqa::reports::quality_tsv(piiqa::quality_scores(
               store->corpus(), ctx.config.workflow.quality, ctx.phase)));
      return 0;
    }
    if (*metrics) {
      auto store = open_store(c, ctx);
      piiqa::MetricsOptions opt;
      opt.phase = ctx.phase;
      opt.locale = ctx.locale;
      opt.reference = piiqa::parse_reference(reference);
      opt.fpr_mode = fpr_mode.empty() ? ctx.config.fpr_mode : piiqa::parse_fpr_mode(fpr_mode);
      const auto rows = piiqa::metrics_report(store->corpus(), *ctx.ref, opt);
      if (!trend.empty()) {
        const bool fine = grain != "coarse";
        piiqa::TrendMetric m;
        if (trend == "recall") {
          m = fine ? piiqa::TrendMetric::kRecallFine : piiqa::TrendMetric::kRecallCoarse;
        } else if (trend == "fpr") {
          m = fine ? piiqa::TrendMetric::kFprFine : piiqa::TrendMetric::kFprCoarse;
        } else {
          throw Error(Errc::kInvalidArgument, "--trend takes recall or fpr");
        }
        emit(c.out, "trend_" + trend + ".tsv", piiqa::render_phase_trend(rows, m));
        return 0;
      }
      std::optional<piiqa::Grain> g;
      if (grain != "both") g = piiqa::parse_grain(grain);
      emit(c.out, "metrics.tsv", piiqa::reports::metrics_tsv(rows, g));
      return 0;
    }
    if (*rca) {
      auto store = open_store(c, ctx);
      const std::size_t k = top_k ? top_k : ctx.config.top_k;
      const std::int64_t to = rca_to >= 0 ? rca_to : store->clock() + 1;
      const auto r = piiqa::rca_report(store->corpus(), {rca_from, to}, ctx.config.tau, k);
      if (r.warning) std::cerr << *r.warning << '\n';
      emit(c.out, "rca.tsv", piiqa::reports::rca_tsv(r));
      emit(c.out, "confusions.tsv",
           piiqa::reports::confusions_tsv(
               piiqa::confusion_pairs(store->corpus(), k, ctx.config.tau)));
      return 0;
    }
    if (*dist) {
      auto store = open_store(c, ctx);
      piiqa::DistributionOptions opt;
      opt.grouping = piiqa::parse_grouping(grouping);
      opt.bins = ctx.config.bins;
      opt.merges = ctx.config.locale_merges;
      std::vector<std::string> warnings;
      const auto rows = piiqa::distributions(store->corpus(), piiqa::parse_axis(axis),
                                             *ctx.ref, opt, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
      emit(c.out, "distributions.tsv", piiqa::reports::distributions_tsv(rows));
      return 0;
    }
    if (*gen) {
      const auto spec = build_spec(c, ctx, spec_file, tasks, table_volumes);
      piiqa::Generator generator(*ctx.ref);
      const auto corpus = piiqa::gen_corpus(spec, generator);
      if (gen_out.empty()) {
        piiqa::exchange::export_stream(corpus, std::cout);
      } else {
        piiqa::exchange::export_corpus(corpus, gen_out);
      }
      return 0;
    }
    if (*sim) {
      const auto spec = build_spec(c, ctx, spec_file, tasks, table_volumes);
      piiqa::Generator generator(*ctx.ref);
      auto corpus = piiqa::gen_corpus(spec, generator);
      std::int64_t clock = 0;
      for (const auto& [id, t] : corpus.tasks()) {
        for (const auto& tr : t.state.history()) clock = std::max(clock, tr.at);
      }
      const auto summary = piiqa::run_pipeline(corpus, ctx.config.workflow, *ctx.ref, c.seed,
                                               clock, ctx.config.tau);
      std::error_code ec;
      fs::create_directories(c.out, ec);
      if (ec) throw Error(Errc::kUnwritableFile, "cannot create " + c.out);
      piiqa::exchange::export_corpus(corpus, fs::path(c.out) / "corpus.jsonl");
      emit(c.out, "summary.txt", summary_line(summary));

      piiqa::MetricsOptions opt;
      opt.fpr_mode = ctx.config.fpr_mode;
      opt.reference = piiqa::Reference::kSyntheticTruth;
      const auto truth_rows = piiqa::metrics_report(corpus, *ctx.ref, opt);
      emit(c.out, "metrics_truth.tsv", piiqa::reports::metrics_tsv(truth_rows));
      emit(c.out, "trend_recall.tsv",
           piiqa::render_phase_trend(truth_rows, piiqa::TrendMetric::kRecallFine));
      emit(c.out, "trend_fpr.tsv",
           piiqa::render_phase_trend(truth_rows, piiqa::TrendMetric::kFprFine));
      opt.reference = piiqa::Reference::kReview;
      emit(c.out, "metrics_review.tsv",
           piiqa::reports::metrics_tsv(piiqa::metrics_report(corpus, *ctx.ref, opt)));

      std::vector<piiqa::PhaseReport> phases;
      for (auto p : piiqa::kPhases) phases.push_back(piiqa::phase_report(corpus, p));
      emit(c.out, "phase_report.tsv", piiqa::reports::phase_report_tsv(phases));
      emit(c.out, "quality.tsv",
           piiqa::reports::quality_tsv(
               piiqa::quality_scores(corpus, ctx.config.workflow.quality)));
      emit(c.out, "rca.tsv",
           piiqa::reports::rca_tsv(
               piiqa::rca_report(corpus, {0, clock + 1}, ctx.config.tau, ctx.config.top_k)));
      emit(c.out, "confusions.tsv",
           piiqa::reports::confusions_tsv(
               piiqa::confusion_pairs(corpus, ctx.config.top_k, ctx.config.tau)));
      piiqa::DistributionOptions dopt;
      dopt.bins = ctx.config.bins;
      dopt.merges = ctx.config.locale_merges;
      for (auto a : {piiqa::Axis::kDomain, piiqa::Axis::kLengthBin, piiqa::Axis::kPiiCategory}) {
        emit(c.out, "distributions_" + std::string(piiqa::to_string(a)) + ".tsv",
             piiqa::reports::distributions_tsv(
                 piiqa::distributions(corpus, a, *ctx.ref, dopt)));
      }
      std::cout << summary_line(summary);
      return 0;
    }
    if (*serve) {
      auto store = open_store(c, ctx);
      piiqa::ApiService api(*store, ctx.config);
      httplib::Server server;
      api.bind(server);
      std::cerr << "serving /v1 on " << host << ':' << port << '\n';
      if (!server.listen(host, port)) {
        throw Error(Errc::kUnwritableFile, "cannot listen on " + host + ":" + std::to_string(port));
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << piiqa::to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == Errc::kUnreadableFile || e.code() == Errc::kUnwritableFile
               ? kExitIo
               : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
