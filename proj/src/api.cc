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

#include "piiqa/api.h"

#include <algorithm>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "httplib.h"
#include "piiqa/error.h"
#include "piiqa/exchange.h"
#include "piiqa/reports.h"

namespace piiqa {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultPage = 50;
constexpr std::size_t kMaxPage = 500;

ApiResponse failure(int status, std::string_view code, const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

int status_for(Errc code) {
  switch (code) {
    case Errc::kUnknownTask: return 404;
    case Errc::kInvalidState:
    case Errc::kConflict: return 409;
    default: return 422;
  }
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    const std::size_t j = path.find('/', i);
    const std::size_t end = j == std::string_view::npos ? path.size() : j;
    if (end > i) parts.emplace_back(path.substr(i, end - i));
    i = end;
  }
  return parts;
}

std::optional<std::string> param(const std::map<std::string, std::string>& q,
                                 const std::string& key) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

std::size_t size_param(const std::map<std::string, std::string>& q, const std::string& key,
                       std::size_t fallback) {
  auto v = param(q, key);
  if (!v) return fallback;
  std::size_t pos = 0;
  unsigned long n = 0;
  try {
    n = std::stoul(*v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v->size()) throw Error(Errc::kInvalidArgument, key + " must be a number");
  return n;
}

std::optional<Phase> phase_param(const std::map<std::string, std::string>& q) {
  auto v = param(q, "phase");
  if (!v) return std::nullopt;
  return parse_phase(*v);
}

std::int64_t entered_arbitration(const Task& t) {
  for (const auto& tr : t.state.history()) {
    if (tr.to == TaskStatus::kArbitration) return tr.at;
  }
  return 0;
}

}  // namespace

ApiResponse ApiService::handle(std::string_view method, std::string_view path,
                               const std::map<std::string, std::string>& query,
                               std::string_view body) {
  const auto parts = split_path(path);
  try {
    if (parts.empty() || parts[0] != "v1") {
      return failure(404, "not_found", "unknown path " + std::string(path));
    }
    const bool get = method == "GET";
    const bool post = method == "POST";
    if (parts.size() == 2 && parts[1] == "health" && get) {
      std::shared_lock lock(store_->mutex());
      return {200, {{"status", "ok"}, {"tasks", store_->corpus().tasks().size()}}};
    }
    if (parts.size() == 2 && parts[1] == "queue" && get) return queue(query);
    if (parts.size() == 3 && parts[1] == "tasks" && get) return task(parts[2]);
    if (parts.size() == 4 && parts[1] == "tasks" && parts[3] == "review" && post) {
      return review(parts[2], body);
    }
    if (parts.size() == 3 && parts[1] == "dashboard" && get) {
      if (parts[2] == "quality") return quality(query);
      if (parts[2] == "errors") return errors(query);
      if (parts[2] == "metrics") return metrics(query);
      if (parts[2] == "agreement") return agreement();
      if (parts[2] == "rca") return rca(query);
      if (parts[2] == "distributions") return distributions(query);
    }
    if (!get && !post) {
      return failure(405, "method_not_allowed", std::string(method) + " not supported");
    }
    return failure(404, "not_found", "unknown endpoint " + std::string(path));
  } catch (const Error& e) {
    return failure(status_for(e.code()), to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return failure(422, "schema_violation", e.what());
  }
}

ApiResponse ApiService::queue(const std::map<std::string, std::string>& query) {
  const auto locale = param(query, "locale");
  const auto phase = phase_param(query);
  const std::size_t offset = size_param(query, "offset", 0);
  const std::size_t limit = std::min(size_param(query, "limit", kDefaultPage), kMaxPage);
  std::shared_lock lock(store_->mutex());
  const Corpus& c = store_->corpus();
  std::vector<const Task*> items;
  for (const auto& [id, t] : c.tasks()) {
    if (t.state.status() != TaskStatus::kArbitration) continue;
    if (locale && t.locale != *locale) continue;
    if (phase && t.phase != *phase) continue;
    if (c.submissions_for(id).size() < 2) continue;
    items.push_back(&t);
  }
  std::sort(items.begin(), items.end(), [](const Task* a, const Task* b) {
    const auto ta = entered_arbitration(*a), tb = entered_arbitration(*b);
    return ta != tb ? ta < tb : a->id < b->id;
  });
  json rows = json::array();
  for (std::size_t i = offset; i < items.size() && i < offset + limit; ++i) {
    const Task& t = *items[i];
    rows.push_back({{"task_id", t.id},
                    {"locale", t.locale},
                    {"phase", to_string(t.phase)},
                    {"ira", t.ira ? json(*t.ira) : json(nullptr)},
                    {"submissions", c.submissions_for(t.id).size()},
                    {"entered_at", entered_arbitration(t)}});
  }
  return {200,
          {{"items", rows}, {"total", items.size()}, {"offset", offset}, {"limit", limit}}};
}

ApiResponse ApiService::task(const std::string& id) {
  std::shared_lock lock(store_->mutex());
  const Corpus& c = store_->corpus();
  const Task* t = c.find_task(id);
  if (t == nullptr) return failure(404, "unknown_task", "no task " + id);
  const auto subs = c.submissions_for(id);
  if (t->state.status() == TaskStatus::kArbitration && subs.size() < 2) {
    return failure(409, "invalid_state", "task " + id + " lacks a second submission");
  }
  json out;
  out["task"] = exchange::to_json(*t);
  out["submissions"] = json::array();
  for (const Submission* s : subs) out["submissions"].push_back(json(exchange::to_json(*s)));
  json agreement;
  agreement["ira"] = nullptr;
  agreement["pairs"] = json::array();
  if (subs.size() >= 2) {
    agreement["ira"] = task_agreement(std::span<const Submission* const>(subs), config_.tau);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      for (std::size_t k = i + 1; k < subs.size(); ++k) {
        const auto b = pair_agreement(*subs[i], *subs[k], config_.tau);
        agreement["pairs"].push_back({{"a", subs[i]->id},
                                      {"b", subs[k]->id},
                                      {"span", b.span_score},
                                      {"type", b.type_score},
                                      {"text", b.text_score},
                                      {"overall", b.overall}});
      }
    }
  }
  out["agreement"] = agreement;
  const Review* r = c.review_for(id);
  out["review"] = r ? json(exchange::to_json(*r)) : json(nullptr);
  const GroundTruth* g = c.ground_truth_for(id);
  out["ground_truth"] = g ? json(exchange::to_json(*g)) : json(nullptr);
  return {200, out};
}

ApiResponse ApiService::review(const std::string& id, std::string_view body) {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::parse_error& e) {
    return failure(422, "schema_violation", e.what());
  }
  if (!req.is_object()) return failure(422, "schema_violation", "body must be an object");
  if (!req.contains("request_id") || !req["request_id"].is_string() ||
      req["request_id"].get<std::string>().empty()) {
    return failure(422, "schema_violation", "request_id is required");
  }
  const std::string request_id = req["request_id"].get<std::string>();

  std::unique_lock lock(store_->mutex());
  Corpus& c = store_->mutable_corpus();
  const Task* t = c.find_task(id);
  if (t == nullptr) return failure(404, "unknown_task", "no task " + id);
  if (const Review* existing = c.review_for(id)) {
    if (existing->request_id == request_id) {
      return {200,
              {{"review", exchange::to_json(*existing)},
               {"task", {{"id", id}, {"status", to_string(t->state.status())}}},
               {"replayed", true}}};
    }
    return failure(409, "conflict", "task " + id + " was already reviewed");
  }

  const ReferenceData& ref = store_->reference();
  Review r;
  r.id = "r-" + id;
  r.task_id = id;
  r.request_id = request_id;
  try {
    if (!req.contains("reviewer_id") || !req["reviewer_id"].is_string()) {
      throw Error(Errc::kSchemaViolation, "reviewer_id is required");
    }
    r.reviewer_id = req["reviewer_id"].get<std::string>();
    if (!req.contains("chosen_submission_id") || !req["chosen_submission_id"].is_string()) {
      throw Error(Errc::kSchemaViolation, "chosen_submission_id is required");
    }
    r.chosen_submission_id = req["chosen_submission_id"].get<std::string>();
    if (!req.contains("ground_truth")) {
      throw Error(Errc::kSchemaViolation, "ground_truth is required");
    }
    r.ground_truth =
        exchange::annotations_from_json(exchange::Json(req["ground_truth"]), ref);
    if (req.contains("error_categories")) {
      for (const auto& cat : req["error_categories"]) {
        r.error_categories.insert(parse_error_category(cat.get<std::string>()));
      }
    }
    if (req.contains("verdict")) {
      r.verdict = parse_verdict(req["verdict"].get<std::string>());
    } else {
      r.verdict = r.error_categories.empty() ? Verdict::kAcceptedAsIs : Verdict::kCorrected;
    }
  } catch (const Error& e) {
    return failure(422, to_string(e.code()), e.what());
  }
  record_review(c, std::move(r), ref, store_->tick());
  store_->persist_task(id);
  store_->persist_review(id);
  const Task* after = c.find_task(id);
  return {200,
          {{"review", exchange::to_json(*c.review_for(id))},
           {"task", {{"id", id}, {"status", to_string(after->state.status())}}},
           {"replayed", false}}};
}

ApiResponse ApiService::quality(const std::map<std::string, std::string>& query) {
  const auto phase = phase_param(query);
  std::shared_lock lock(store_->mutex());
  const auto scores = quality_scores(store_->corpus(), config_.workflow.quality, phase);
  return {200, reports::quality_json(scores, config_.workflow.quality)};
}

ApiResponse ApiService::errors(const std::map<std::string, std::string>& query) {
  const auto phase = phase_param(query);
  std::shared_lock lock(store_->mutex());
  std::vector<PhaseReport> out;
  for (Phase p : kPhases) {
    if (phase && p != *phase) continue;
    out.push_back(phase_report(store_->corpus(), p));
  }
  return {200, {{"phases", reports::phase_report_json(out)}}};
}

ApiResponse ApiService::metrics(const std::map<std::string, std::string>& query) {
  MetricsOptions opt;
  opt.phase = phase_param(query);
  opt.locale = param(query, "locale");
  opt.fpr_mode = config_.fpr_mode;
  if (auto m = param(query, "fpr_mode")) opt.fpr_mode = parse_fpr_mode(*m);
  if (auto r = param(query, "reference")) opt.reference = parse_reference(*r);
  std::shared_lock lock(store_->mutex());
  const auto rows = metrics_report(store_->corpus(), store_->reference(), opt);
  return {200,
          {{"reference", to_string(opt.reference)},
           {"fpr_mode", to_string(opt.fpr_mode)},
           {"rows", reports::metrics_json(rows)}}};
}

ApiResponse ApiService::agreement() {
  std::shared_lock lock(store_->mutex());
  return {200, reports::matrix_json(annotator_matrix(store_->corpus(), config_.tau))};
}

ApiResponse ApiService::rca(const std::map<std::string, std::string>& query) {
  std::shared_lock lock(store_->mutex());
  ReviewWindow w;
  w.from = static_cast<std::int64_t>(size_param(query, "from", 0));
  w.to = static_cast<std::int64_t>(
      size_param(query, "to", static_cast<std::size_t>(store_->clock() + 1)));
  return {200, reports::rca_json(rca_report(store_->corpus(), w, config_.tau, config_.top_k))};
}

ApiResponse ApiService::distributions(const std::map<std::string, std::string>& query) {
  const Axis axis = parse_axis(param(query, "axis").value_or("domain"));
  DistributionOptions opt;
  opt.bins = config_.bins;
  opt.merges = config_.locale_merges;
  if (auto g = param(query, "grouping")) opt.grouping = parse_grouping(*g);
  std::shared_lock lock(store_->mutex());
  std::vector<std::string> warnings;
  const auto rows =
      piiqa::distributions(store_->corpus(), axis, store_->reference(), opt, &warnings);
  return {200, {{"reports", reports::distributions_json(rows)}, {"warnings", warnings}}};
}

void ApiService::bind(httplib::Server& server) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const ApiResponse r = handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get(R"(/v1/.*)", handler);
  server.Post(R"(/v1/.*)", handler);
}

}  // namespace piiqa
