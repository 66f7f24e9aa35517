// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/config.hpp"

#include "ltkit/errors.hpp"

namespace ltkit::config {
namespace {

void read_string(const io::Json& obj, const char* key, std::string& out) {
  if (obj.contains(key) && obj[key].is_string()) {
    out = obj[key].get<std::string>();
  }
}

template <typename T>
void read_number(const io::Json& obj, const char* key, T& out) {
  if (obj.contains(key) && obj[key].is_number()) out = obj[key].get<T>();
}

void read_string_list(const io::Json& obj, const char* key,
                      std::vector<std::string>& out) {
  if (!obj.contains(key) || !obj[key].is_array()) return;
  out.clear();
  for (const auto& v : obj[key]) {
    if (v.is_string()) out.push_back(v.get<std::string>());
  }
}

}  // namespace

ToolkitConfig default_config() { return ToolkitConfig{}; }

ToolkitConfig load_config(const std::filesystem::path& path) {
  io::Json root;
  try {
    root = io::Json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  ToolkitConfig cfg;

  if (root.contains("paths")) {
    const auto& p = root["paths"];
    read_string(p, "cache_dir", cfg.paths.cache_dir);
    read_string(p, "output_dir", cfg.paths.output_dir);
  }
  if (root.contains("teacher")) {
    const auto& t = root["teacher"];
    read_string(t, "base_url", cfg.endpoint.base_url);
    read_string(t, "path", cfg.endpoint.path);
    read_string(t, "model_id", cfg.endpoint.model_id);
    read_string(t, "api_key_env", cfg.endpoint.api_key_env);
    read_number(t, "timeout_ms", cfg.endpoint.timeout_ms);
    read_number(t, "max_inflight", cfg.max_inflight);
    read_number(t, "requests_per_minute", cfg.requests_per_minute);
    if (t.contains("sampling")) {
      const auto& s = t["sampling"];
      read_number(s, "temperature", cfg.sampling.temperature);
      read_number(s, "top_p", cfg.sampling.top_p);
      read_number(s, "max_output_tokens", cfg.sampling.max_output_tokens);
    }
  }
  if (root.contains("prompts")) {
    const auto& p = root["prompts"];
    read_string(p, "distill_system", cfg.prompts.distill_system);
    read_string(p, "distill_user", cfg.prompts.distill_user);
    read_string(p, "reformat_system", cfg.prompts.reformat_system);
    read_string(p, "reformat_user", cfg.prompts.reformat_user);
  }
  if (root.contains("curation")) {
    const auto& c = root["curation"];
    read_string_list(c, "image_markers", cfg.curation.image_markers);
    read_string_list(c, "proof_markers", cfg.curation.proof_markers);
    read_string_list(c, "proof_leading_words", cfg.curation.proof_leading_words);
    read_string_list(c, "rule_order", cfg.curation.rule_order);
  }
  if (root.contains("validation")) {
    const auto& v = root["validation"];
    read_number(v, "min_steps", cfg.validation.min_steps);
    read_number(v, "samples_per_problem", cfg.validation.samples_per_problem);
  }
  if (root.contains("metrics")) {
    const auto& m = root["metrics"];
    if (m.contains("budgets") && m["budgets"].is_array()) {
      cfg.metrics.budgets.clear();
      for (const auto& b : m["budgets"]) {
        if (b.is_number()) cfg.metrics.budgets.push_back(b.get<double>());
      }
    }
    read_number(m, "bootstrap_seed", cfg.metrics.bootstrap_seed);
    read_number(m, "bootstrap_samples", cfg.metrics.bootstrap_samples);
    read_number(m, "exhaustive_limit", cfg.metrics.exhaustive_limit);
  }
  read_string(root, "checklist_path", cfg.checklist_path);
  read_string(root, "provenance_timestamp", cfg.provenance_timestamp);

  if (cfg.metrics.bootstrap_samples <= 0) {
    throw ConfigError("config: bootstrap_samples must be positive");
  }
  if (cfg.metrics.bootstrap_seed == 0) {
    throw ConfigError("config: bootstrap_seed must be positive");
  }
  for (std::size_t i = 1; i < cfg.metrics.budgets.size(); ++i) {
    if (cfg.metrics.budgets[i] <= cfg.metrics.budgets[i - 1]) {
      throw ConfigError("config: budgets must be strictly ascending");
    }
  }
  if (!cfg.metrics.budgets.empty() && cfg.metrics.budgets.front() <= 0) {
    throw ConfigError("config: budgets must be positive");
  }
  if (cfg.validation.min_steps < 0) {
    throw ConfigError("config: min_steps must be non-negative");
  }
  if (cfg.max_inflight <= 0 || cfg.requests_per_minute <= 0) {
    throw ConfigError("config: rate limits must be positive");
  }
  return cfg;
}

io::Json config_to_json(const ToolkitConfig& cfg) {
  io::Json root;
  root["paths"] = {{"cache_dir", cfg.paths.cache_dir},
                   {"output_dir", cfg.paths.output_dir}};
  root["teacher"] = {
      {"base_url", cfg.endpoint.base_url},
      {"path", cfg.endpoint.path},
      {"model_id", cfg.endpoint.model_id},
      {"api_key_env", cfg.endpoint.api_key_env},
      {"timeout_ms", cfg.endpoint.timeout_ms},
      {"max_inflight", cfg.max_inflight},
      {"requests_per_minute", cfg.requests_per_minute},
      {"sampling",
       {{"temperature", cfg.sampling.temperature},
        {"top_p", cfg.sampling.top_p},
        {"max_output_tokens", cfg.sampling.max_output_tokens}}},
  };
  root["prompts"] = {
      {"distill_system", cfg.prompts.distill_system},
      {"distill_user", cfg.prompts.distill_user},
      {"reformat_system", cfg.prompts.reformat_system},
      {"reformat_user", cfg.prompts.reformat_user},
  };
  root["curation"] = {
      {"image_markers", cfg.curation.image_markers},
      {"proof_markers", cfg.curation.proof_markers},
      {"proof_leading_words", cfg.curation.proof_leading_words},
      {"rule_order", cfg.curation.rule_order},
  };
  root["validation"] = {
      {"min_steps", cfg.validation.min_steps},
      {"samples_per_problem", cfg.validation.samples_per_problem},
  };
  root["metrics"] = {
      {"budgets", cfg.metrics.budgets},
      {"bootstrap_seed", cfg.metrics.bootstrap_seed},
      {"bootstrap_samples", cfg.metrics.bootstrap_samples},
      {"exhaustive_limit", cfg.metrics.exhaustive_limit},
  };
  root["checklist_path"] = cfg.checklist_path;
  root["provenance_timestamp"] = cfg.provenance_timestamp;
  return root;
}

}  // namespace ltkit::config
