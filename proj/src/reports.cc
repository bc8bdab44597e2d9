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

#include "piiqa/reports.h"

#include <cstdio>

#include "piiqa/error.h"

namespace piiqa::reports {

namespace {

json maybe(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

std::string opt_str(const std::optional<std::string>& s) { return s ? *s : "*"; }

std::string opt_phase(const std::optional<Phase>& p) {
  return p ? std::string(to_string(*p)) : "*";
}

std::string num(std::size_t n) { return std::to_string(n); }

}  // namespace

std::string ratio(std::optional<double> v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", *v);
  return buf;
}

std::string metrics_tsv(std::span<const MetricsReport> reports,
                        std::optional<Grain> grain) {
  std::string out =
      "locale\tphase\tgrain\trows\tnot_reviewed\ttp\tfn\tfp\ttn\trecall\tfpr\n";
  for (const auto& r : reports) {
    for (Grain g : {Grain::kFine, Grain::kCoarse}) {
      if (grain && g != *grain) continue;
      const ConfusionCounts& c = g == Grain::kFine ? r.fine : r.coarse;
      out += opt_str(r.locale) + '\t' + opt_phase(r.phase) + '\t' +
             std::string(to_string(g)) + '\t' + num(r.rows) + '\t' + num(r.not_reviewed) +
             '\t' + num(c.tp) + '\t' + num(c.fn) + '\t' + num(c.fp) + '\t' + num(c.tn) +
             '\t' + ratio(g == Grain::kFine ? r.recall_fine : r.recall_coarse) + '\t' +
             ratio(g == Grain::kFine ? r.fpr_fine : r.fpr_coarse) + '\n';
    }
  }
  return out;
}

json metrics_json(std::span<const MetricsReport> reports) {
  json rows = json::array();
  for (const auto& r : reports) {
    for (Grain g : {Grain::kFine, Grain::kCoarse}) {
      const ConfusionCounts& c = g == Grain::kFine ? r.fine : r.coarse;
      rows.push_back({{"locale", r.locale ? json(*r.locale) : json(nullptr)},
                      {"phase", r.phase ? json(to_string(*r.phase)) : json(nullptr)},
                      {"grain", to_string(g)},
                      {"rows", r.rows},
                      {"not_reviewed", r.not_reviewed},
                      {"tp", c.tp},
                      {"fn", c.fn},
                      {"fp", c.fp},
                      {"tn", c.tn},
                      {"recall", maybe(g == Grain::kFine ? r.recall_fine : r.recall_coarse)},
                      {"fpr", maybe(g == Grain::kFine ? r.fpr_fine : r.fpr_coarse)}});
    }
  }
  return rows;
}

std::vector<TaskAgreement> task_agreements(const Corpus& corpus, double tau,
                                           std::optional<Phase> phase,
                                           std::optional<std::string> locale) {
  std::vector<TaskAgreement> out;
  for (const auto& [id, task] : corpus.tasks()) {
    if (phase && task.phase != *phase) continue;
    if (locale && task.locale != *locale) continue;
    const auto subs = corpus.submissions_for(id);
    if (subs.empty()) continue;
    if (subs.size() < 2) {
      throw Error(Errc::kInsufficientSubmissions,
                  "task " + id + " has a single submission");
    }
    TaskAgreement row;
    row.task_id = id;
    row.locale = task.locale;
    row.phase = task.phase;
    row.submissions = subs.size();
    row.ira = task_agreement(std::span<const Submission* const>(subs), tau);
    row.first_pair = pair_agreement(*subs[0], *subs[1], tau);
    out.push_back(std::move(row));
  }
  return out;
}

std::string agreement_tsv(std::span<const TaskAgreement> rows) {
  std::string out = "task_id\tlocale\tphase\tsubmissions\tira\tspan\ttype\ttext\n";
  for (const auto& r : rows) {
    out += r.task_id + '\t' + r.locale + '\t' + std::string(to_string(r.phase)) + '\t' +
           num(r.submissions) + '\t' + ratio(r.ira) + '\t' + ratio(r.first_pair.span_score) +
           '\t' + ratio(r.first_pair.type_score) + '\t' + ratio(r.first_pair.text_score) +
           '\n';
  }
  return out;
}

std::string matrix_tsv(const AgreementMatrix& m) {
  std::string out = "annotator";
  for (const auto& a : m.annotators()) out += '\t' + a;
  out += '\n';
  for (const auto& a : m.annotators()) {
    out += a;
    for (const auto& b : m.annotators()) out += '\t' + ratio(m.cell(a, b));
    out += '\n';
  }
  return out;
}

json matrix_json(const AgreementMatrix& m) {
  json cells = json::array();
  for (const auto& a : m.annotators()) {
    for (const auto& b : m.annotators()) {
      if (!m.cell(a, b)) continue;
      cells.push_back({{"a", a}, {"b", b}, {"value", *m.cell(a, b)}, {"support", m.support(a, b)}});
    }
  }
  return {{"annotators", m.annotators()}, {"cells", cells}};
}

std::string quality_tsv(std::span<const QualityScore> scores) {
  std::string out = "annotator\tscore\treviewed\tqualified\n";
  for (const auto& q : scores) {
    out += q.annotator_id + '\t' + ratio(q.score) + '\t' + num(q.reviewed_count) + '\t' +
           (q.qualified ? "yes" : "no") + '\n';
  }
  return out;
}

json quality_json(std::span<const QualityScore> scores, const QualityPolicy& policy) {
  json rows = json::array();
  for (const auto& q : scores) {
    rows.push_back({{"annotator_id", q.annotator_id},
                    {"score", maybe(q.score)},
                    {"reviewed_count", q.reviewed_count},
                    {"qualified", q.qualified}});
  }
  return {{"threshold", policy.threshold},
          {"min_reviewed", policy.min_reviewed},
          {"lenient", policy.lenient},
          {"annotators", rows}};
}

namespace {

json stats_json(const LocaleReviewStats& s) {
  return {{"reviewed", s.reviewed()},
          {"accepted_as_is", s.accepted_as_is},
          {"corrected", s.corrected},
          {"rejected", s.rejected},
          {"missing_labels", s.categories[0]},
          {"wrong_labels_added", s.categories[1]},
          {"incorrect_span", s.categories[2]}};
}

std::string stats_tsv(const std::string& phase, const std::string& locale,
                      const LocaleReviewStats& s) {
  return phase + '\t' + locale + '\t' + num(s.reviewed()) + '\t' + num(s.accepted_as_is) +
         '\t' + num(s.corrected) + '\t' + num(s.rejected) + '\t' + num(s.categories[0]) +
         '\t' + num(s.categories[1]) + '\t' + num(s.categories[2]) + '\n';
}

}  // namespace

std::string phase_report_tsv(std::span<const PhaseReport> reports) {
  std::string out =
      "phase\tlocale\treviewed\taccepted_as_is\tcorrected\trejected\tmissing_labels\t"
      "wrong_labels_added\tincorrect_span\n";
  for (const auto& r : reports) {
    const std::string phase(to_string(r.phase));
    for (const auto& [locale, s] : r.by_locale) out += stats_tsv(phase, locale, s);
    out += stats_tsv(phase, "*", r.total);
  }
  return out;
}

json phase_report_json(std::span<const PhaseReport> reports) {
  json out = json::array();
  for (const auto& r : reports) {
    json by_locale = json::object();
    for (const auto& [locale, s] : r.by_locale) by_locale[locale] = stats_json(s);
    out.push_back({{"phase", to_string(r.phase)},
                   {"by_locale", by_locale},
                   {"total", stats_json(r.total)}});
  }
  return out;
}

std::string confusions_tsv(const std::map<Phase, std::vector<ConfusionPair>>& pairs) {
  std::string out = "phase\trank\tfirst\tsecond\tcount\n";
  for (const auto& [phase, list] : pairs) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      out += std::string(to_string(phase)) + '\t' + num(i + 1) + '\t' + list[i].first.name +
             '\t' + list[i].second.name + '\t' + num(list[i].count) + '\n';
    }
  }
  return out;
}

std::string rca_tsv(const RcaReport& r) {
  std::string out = "section\tkey\tvalue\ttrend\n";
  out += "window\tfrom\t" + std::to_string(r.window.from) + "\t\n";
  out += "window\tto\t" + std::to_string(r.window.to) + "\t\n";
  out += "summary\treviewed_tasks\t" + num(r.reviewed_tasks) + "\t\n";
  out += "summary\trows\t" + num(r.rows) + "\t\n";
  out += "summary\tdisagreement_rows\t" + num(r.disagreement_rows) + '\t' +
         std::to_string(r.trend_total) + '\n';
  for (RcaCategory c : kRcaCategories) {
    out += "category\t" + std::string(to_string(c)) + '\t' + num(r.counts.at(c)) + '\t' +
           std::to_string(r.trend.at(c)) + '\n';
  }
  for (const auto& p : r.confusions) {
    out += "confusion\t" + std::string(to_string(p.phase)) + ':' + p.first.name + "|" +
           p.second.name + '\t' + num(p.count) + "\t\n";
  }
  for (const auto& [locale, n] : r.affected_locales) {
    out += "locale\t" + locale + '\t' + num(n) + "\t\n";
  }
  if (r.warning) out += "warning\t" + *r.warning + "\t\t\n";
  return out;
}

json rca_json(const RcaReport& r) {
  json counts = json::object(), trend = json::object();
  for (RcaCategory c : kRcaCategories) {
    counts[std::string(to_string(c))] = r.counts.at(c);
    trend[std::string(to_string(c))] = r.trend.at(c);
  }
  json pairs = json::array();
  for (const auto& p : r.confusions) {
    pairs.push_back({{"phase", to_string(p.phase)},
                     {"first", p.first.name},
                     {"second", p.second.name},
                     {"count", p.count}});
  }
  return {{"window", {{"from", r.window.from}, {"to", r.window.to}}},
          {"reviewed_tasks", r.reviewed_tasks},
          {"rows", r.rows},
          {"disagreement_rows", r.disagreement_rows},
          {"counts", counts},
          {"trend", trend},
          {"trend_total", r.trend_total},
          {"confusions", pairs},
          {"affected_locales", r.affected_locales},
          {"warning", r.warning ? json(*r.warning) : json(nullptr)}};
}

std::string distributions_tsv(std::span<const DistributionReport> reports) {
  std::string out = "axis\tgroup\tbucket\tcount\tproportion\n";
  for (const auto& r : reports) {
    for (const auto& [bucket, n] : r.counts) {
      out += std::string(to_string(r.axis)) + '\t' + r.group + '\t' + bucket + '\t' + num(n) +
             '\t' + ratio(r.proportions.at(bucket)) + '\n';
    }
  }
  return out;
}

json distributions_json(std::span<const DistributionReport> reports) {
  json out = json::array();
  for (const auto& r : reports) {
    out.push_back({{"axis", to_string(r.axis)},
                   {"group", r.group},
                   {"total", r.total},
                   {"counts", r.counts},
                   {"proportions", r.proportions}});
  }
  return out;
}

}  // namespace piiqa::reports
