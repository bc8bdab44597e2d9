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

#include "piiqa/config.h"

#include <fstream>
#include <set>

#include "piiqa/error.h"

namespace piiqa {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(Errc::kSpecInvalid, why); }

void only_keys(const json& j, const std::set<std::string>& allowed,
               const std::string& where) {
  if (!j.is_object()) invalid(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) invalid("unknown key '" + it.key() + "' in " + where);
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) invalid(where + " must be a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_unsigned()) invalid(where + " must be a non-negative integer");
  return j.get<std::size_t>();
}

PhasePolicy policy_from(const json& j, Phase phase, const std::string& where) {
  only_keys(j, {"qa_sampling", "ira_threshold"}, where);
  PhasePolicy p = default_policy(phase);
  if (j.contains("qa_sampling")) p.qa_sampling = number(j["qa_sampling"], where + ".qa_sampling");
  if (j.contains("ira_threshold")) {
    p.ira_threshold = number(j["ira_threshold"], where + ".ira_threshold");
  }
  return p;
}

Phase phase_named(const std::string& name) {
  try {
    return parse_phase(name);
  } catch (const Error&) {
    invalid("unknown phase '" + name + "'");
  }
}

LengthBins bins_from(const json& j, LengthBins b, const std::string& where) {
  only_keys(j, {"m_min", "l_min", "xl_min", "xl_max", "unit"}, where);
  if (j.contains("m_min")) b.m_min = count(j["m_min"], where + ".m_min");
  if (j.contains("l_min")) b.l_min = count(j["l_min"], where + ".l_min");
  if (j.contains("xl_min")) b.xl_min = count(j["xl_min"], where + ".xl_min");
  if (j.contains("xl_max")) b.xl_max = count(j["xl_max"], where + ".xl_max");
  if (j.contains("unit")) {
    const auto unit = j["unit"].get<std::string>();
    if (unit != "words" && unit != "chars") invalid(where + ".unit must be words or chars");
    b.count_chars = unit == "chars";
  }
  return b;
}

json bins_to(const LengthBins& b) {
  return {{"m_min", b.m_min},
          {"l_min", b.l_min},
          {"xl_min", b.xl_min},
          {"xl_max", b.xl_max},
          {"unit", b.count_chars ? "chars" : "words"}};
}

}  // namespace

Config Config::from_json(const json& j) {
  only_keys(j, {"tau", "phases", "locale_overrides", "quality", "length_bins",
                "locale_merges", "fpr_mode", "top_k", "reference_data_dir"},
            "config");
  Config c;
  if (j.contains("tau")) c.tau = number(j["tau"], "tau");
  if (j.contains("phases")) {
    const json& phases = j["phases"];
    only_keys(phases, {"pilot", "training", "production"}, "phases");
    for (auto it = phases.begin(); it != phases.end(); ++it) {
      const Phase p = phase_named(it.key());
      c.workflow.phases[static_cast<std::size_t>(p)] =
          policy_from(it.value(), p, "phases." + it.key());
    }
  }
  if (j.contains("locale_overrides")) {
    const json& o = j["locale_overrides"];
    if (!o.is_object()) invalid("locale_overrides must be an object");
    for (auto it = o.begin(); it != o.end(); ++it) {
      if (!it.value().is_object()) invalid("locale_overrides." + it.key() + " must be an object");
      for (auto p = it.value().begin(); p != it.value().end(); ++p) {
        const Phase phase = phase_named(p.key());
        // Unspecified fields inherit the phase-wide policy.
        PhasePolicy base = c.workflow.phases[static_cast<std::size_t>(phase)];
        PhasePolicy parsed =
            policy_from(p.value(), phase, "locale_overrides." + it.key() + "." + p.key());
        if (!p.value().contains("qa_sampling")) parsed.qa_sampling = base.qa_sampling;
        if (!p.value().contains("ira_threshold")) parsed.ira_threshold = base.ira_threshold;
        c.workflow.locale_overrides[it.key()][phase] = parsed;
      }
    }
  }
  if (j.contains("quality")) {
    const json& q = j["quality"];
    only_keys(q, {"threshold", "min_reviewed", "lenient"}, "quality");
    if (q.contains("threshold")) c.workflow.quality.threshold = number(q["threshold"], "quality.threshold");
    if (q.contains("min_reviewed")) {
      c.workflow.quality.min_reviewed = count(q["min_reviewed"], "quality.min_reviewed");
    }
    if (q.contains("lenient")) {
      if (!q["lenient"].is_boolean()) invalid("quality.lenient must be a boolean");
      c.workflow.quality.lenient = q["lenient"].get<bool>();
    }
  }
  if (j.contains("length_bins")) {
    const json& lb = j["length_bins"];
    only_keys(lb, {"default", "locales"}, "length_bins");
    if (lb.contains("default")) c.bins.defaults = bins_from(lb["default"], {}, "length_bins.default");
    if (lb.contains("locales")) {
      if (!lb["locales"].is_object()) invalid("length_bins.locales must be an object");
      for (auto it = lb["locales"].begin(); it != lb["locales"].end(); ++it) {
        c.bins.by_locale[it.key()] =
            bins_from(it.value(), c.bins.defaults, "length_bins.locales." + it.key());
      }
    }
  }
  if (j.contains("locale_merges")) {
    if (!j["locale_merges"].is_object()) invalid("locale_merges must be an object");
    for (auto it = j["locale_merges"].begin(); it != j["locale_merges"].end(); ++it) {
      if (!it.value().is_string()) invalid("locale_merges values must be strings");
      c.locale_merges[it.key()] = it.value().get<std::string>();
    }
  }
  if (j.contains("fpr_mode")) {
    if (!j["fpr_mode"].is_string()) invalid("fpr_mode must be a string");
    try {
      c.fpr_mode = parse_fpr_mode(j["fpr_mode"].get<std::string>());
    } catch (const Error& e) {
      invalid(e.what());
    }
  }
  if (j.contains("top_k")) c.top_k = count(j["top_k"], "top_k");
  if (j.contains("reference_data_dir") && !j["reference_data_dir"].is_null()) {
    if (!j["reference_data_dir"].is_string()) invalid("reference_data_dir must be a string");
    c.reference_data_dir = j["reference_data_dir"].get<std::string>();
  }
  c.validate();
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kUnreadableFile, "cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    invalid(path.string() + ": " + e.what());
  }
  Config c = from_json(j);
  if (c.reference_data_dir && c.reference_data_dir->is_relative()) {
    c.reference_data_dir = path.parent_path() / *c.reference_data_dir;
  }
  return c;
}

json Config::to_json() const {
  json j;
  j["tau"] = tau;
  for (const auto& p : workflow.phases) {
    j["phases"][std::string(to_string(p.phase))] = {{"qa_sampling", p.qa_sampling},
                                                   {"ira_threshold", p.ira_threshold}};
  }
  j["locale_overrides"] = json::object();
  for (const auto& [locale, by_phase] : workflow.locale_overrides) {
    for (const auto& [phase, p] : by_phase) {
      j["locale_overrides"][locale][std::string(to_string(phase))] = {
          {"qa_sampling", p.qa_sampling}, {"ira_threshold", p.ira_threshold}};
    }
  }
  j["quality"] = {{"threshold", workflow.quality.threshold},
                  {"min_reviewed", workflow.quality.min_reviewed},
                  {"lenient", workflow.quality.lenient}};
  j["length_bins"]["default"] = bins_to(bins.defaults);
  j["length_bins"]["locales"] = json::object();
  for (const auto& [locale, b] : bins.by_locale) j["length_bins"]["locales"][locale] = bins_to(b);
  j["locale_merges"] = locale_merges;
  j["fpr_mode"] = to_string(fpr_mode);
  j["top_k"] = top_k;
  j["reference_data_dir"] =
      reference_data_dir ? json(reference_data_dir->string()) : json(nullptr);
  return j;
}

void Config::validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) invalid("tau must lie in (0, 1]");
  if (top_k == 0) invalid("top_k must be positive");
  workflow.validate();
  bins.validate();
}

std::array<ErrorRates, 3> default_phase_profiles() {
  return {ErrorRates{0.30, 0.15, 0.05, 0, 0.0}, ErrorRates{0.10, 0.05, 0.02, 0, 0.0},
          ErrorRates{0.02, 0.01, 0.005, 0, 0.0}};
}

CorpusSpec corpus_spec_from_json(const json& j, const ReferenceData& ref) {
  only_keys(j, {"seed", "locales", "table_ranges", "negative_fraction", "bin_mix",
                "pii_density", "domain_mix", "type_mix", "profiles",
                "annotators_per_locale", "annotators_per_task"},
            "corpus spec");
  CorpusSpec spec;
  spec.profiles = default_phase_profiles();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("locales")) {
    const json& l = j["locales"];
    if (!l.is_object()) invalid("locales must map locale to [pilot, training, production]");
    for (auto it = l.begin(); it != l.end(); ++it) {
      if (!it.value().is_array() || it.value().size() != 3) {
        invalid("locales." + it.key() + " must hold three counts");
      }
      LocaleVolume v;
      v.locale = it.key();
      for (std::size_t p = 0; p < 3; ++p) v.tasks[p] = count(it.value()[p], "locales." + it.key());
      spec.locales.push_back(v);
    }
  }
  if (j.value("table_ranges", false)) {
    for (const auto& v : spec.locales) {
      const std::string code = ref.has_locale(v.locale) ? ref.locale(v.locale).code : v.locale;
      if (auto r = published_volumes(code)) spec.ranges[v.locale] = *r;
    }
  }
  if (j.contains("negative_fraction")) {
    spec.negative_fraction = number(j["negative_fraction"], "negative_fraction");
  }
  if (j.contains("bin_mix")) {
    if (!j["bin_mix"].is_array() || j["bin_mix"].size() != 4) invalid("bin_mix needs 4 weights");
    for (std::size_t i = 0; i < 4; ++i) spec.bin_mix[i] = number(j["bin_mix"][i], "bin_mix");
  }
  if (j.contains("pii_density")) {
    spec.pii_density.clear();
    for (const auto& w : j["pii_density"]) spec.pii_density.push_back(number(w, "pii_density"));
  }
  if (j.contains("domain_mix")) {
    for (auto it = j["domain_mix"].begin(); it != j["domain_mix"].end(); ++it) {
      spec.domain_mix[it.key()] = number(it.value(), "domain_mix");
    }
  }
  if (j.contains("type_mix")) {
    for (auto it = j["type_mix"].begin(); it != j["type_mix"].end(); ++it) {
      spec.type_mix[ref.canonical_type(it.key())] = number(it.value(), "type_mix");
    }
  }
  if (j.contains("profiles")) {
    only_keys(j["profiles"], {"pilot", "training", "production"}, "profiles");
    for (auto it = j["profiles"].begin(); it != j["profiles"].end(); ++it) {
      const std::string where = "profiles." + it.key();
      only_keys(it.value(), {"miss", "confusion", "spurious", "span_jitter", "jitter_rate"},
                where);
      ErrorRates& r = spec.profiles[static_cast<std::size_t>(phase_named(it.key()))];
      const json& p = it.value();
      if (p.contains("miss")) r.miss = number(p["miss"], where);
      if (p.contains("confusion")) r.confusion = number(p["confusion"], where);
      if (p.contains("spurious")) r.spurious = number(p["spurious"], where);
      if (p.contains("span_jitter")) r.span_jitter = count(p["span_jitter"], where);
      if (p.contains("jitter_rate")) r.jitter_rate = number(p["jitter_rate"], where);
    }
  }
  if (j.contains("annotators_per_locale")) {
    spec.annotators_per_locale = count(j["annotators_per_locale"], "annotators_per_locale");
  }
  if (j.contains("annotators_per_task")) {
    spec.annotators_per_task = count(j["annotators_per_task"], "annotators_per_task");
  }
  spec.validate(ref);
  return spec;
}

}  // namespace piiqa
