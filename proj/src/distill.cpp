// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/distill.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <ctime>
#include <thread>

#include "ltkit/answer.hpp"
#include "ltkit/digest.hpp"
#include "ltkit/errors.hpp"

namespace ltkit::distill {
namespace {

// Replaces every occurrence; the count lets callers detect a missing
// placeholder.
std::size_t substitute_all(std::string& text, std::string_view placeholder,
                           std::string_view value) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
    ++count;
  }
  return count;
}

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool is_step_marker_line(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
    ++i;
  }
  if (i >= line.size()) return false;
  // "Step 3:", "step 12." ...
  if (line.size() - i >= 4) {
    std::string head(line.substr(i, 4));
    std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
    if (head == "step") {
      std::size_t after = i + 4;
      if (after >= line.size() ||
          !std::isalpha(static_cast<unsigned char>(line[after]))) {
        return true;
      }
    }
  }
  // Numbered list: "1.", "2)", "3:"
  std::size_t d = i;
  while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) {
    ++d;
  }
  if (d > i && d < line.size() &&
      (line[d] == '.' || line[d] == ')' || line[d] == ':')) {
    return true;
  }
  return false;
}

int count_sentences(std::string_view text) {
  int sentences = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    bool at_end = (i + 1 == text.size()) ||
                  std::isspace(static_cast<unsigned char>(text[i + 1]));
    if (at_end) ++sentences;
  }
  return sentences;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  lines.push_back(current);
  return lines;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
}

teacher::CompletionRequest make_request(const std::string& user_prompt,
                                        const std::string& system_prompt,
                                        const std::string& model_id,
                                        const teacher::Sampling& sampling,
                                        const std::string& tag) {
  teacher::CompletionRequest req;
  req.model_id = model_id;
  req.system_prompt = system_prompt;
  req.user_prompt = user_prompt;
  req.sampling = sampling;
  req.request_tag = tag;
  return req;
}

}  // namespace

teacher::CompletionRequest build_distill_prompt(
    const corpus::Problem& p, const std::string& template_text,
    const std::string& system_prompt, const std::string& model_id,
    const teacher::Sampling& sampling) {
  std::string prompt = template_text;
  if (substitute_all(prompt, "{statement}", p.statement) == 0) {
    throw ConfigError(
        "distill prompt template has no {statement} placeholder");
  }
  return make_request(prompt, system_prompt, model_id, sampling, "distill");
}

LongThought generate_long_thought(teacher::TeacherClient& client,
                                  const corpus::Problem& p,
                                  const std::string& template_text,
                                  const std::string& system_prompt,
                                  const std::string& model_id,
                                  const teacher::Sampling& sampling) {
  auto req =
      build_distill_prompt(p, template_text, system_prompt, model_id, sampling);
  teacher::Completion completion;
  try {
    completion = client.complete(req);
  } catch (const teacher::ClientError& e) {
    throw teacher::ClientError("problem " + p.id + ": " + e.what());
  }
  LongThought lt;
  lt.problem_id = p.id;
  lt.text = completion.text;
  lt.final_answer = answer::extract_boxed(lt.text);
  lt.token_count = completion.token_count;
  lt.stage = ThoughtStage::distilled;
  return lt;
}

LongThought reformat_solution(teacher::TeacherClient& client,
                              const corpus::Problem& p,
                              const std::string& raw_solution,
                              const std::string& template_text,
                              const std::string& system_prompt,
                              const std::string& model_id,
                              const teacher::Sampling& sampling) {
  if (raw_solution.empty()) {
    throw ValidationError("problem " + p.id + ": raw solution is empty");
  }
  std::string prompt = template_text;
  if (substitute_all(prompt, "{solution}", raw_solution) == 0) {
    throw ConfigError(
        "reformat prompt template has no {solution} placeholder");
  }
  substitute_all(prompt, "{statement}", p.statement);
  auto req = make_request(prompt, system_prompt, model_id, sampling, "reformat");
  teacher::Completion completion;
  try {
    completion = client.complete(req);
  } catch (const teacher::ClientError& e) {
    throw teacher::ClientError("problem " + p.id + ": " + e.what());
  }
  LongThought lt;
  lt.problem_id = p.id;
  lt.text = completion.text;
  lt.final_answer = answer::extract_boxed(lt.text);
  lt.token_count = completion.token_count;
  lt.stage = ThoughtStage::reformatted;
  lt.reformatted_from_bytes = raw_solution.size();
  return lt;
}

int count_steps(const std::string& text) {
  auto lines = split_lines(text);
  int steps = 0;

  // Paragraph = run of non-blank lines. Marker lines count individually;
  // a marker-free paragraph counts once if it has >= 2 sentences.
  std::size_t i = 0;
  while (i < lines.size()) {
    while (i < lines.size() && is_blank(lines[i])) ++i;
    if (i >= lines.size()) break;
    int markers = 0;
    std::string paragraph;
    while (i < lines.size() && !is_blank(lines[i])) {
      if (is_step_marker_line(lines[i])) ++markers;
      paragraph += lines[i];
      paragraph += ' ';
      ++i;
    }
    if (markers > 0) {
      steps += markers;
    } else if (count_sentences(paragraph) >= 2) {
      ++steps;
    }
  }
  return steps;
}

ValidationResult validate_record(const LongThought& lt,
                                 const corpus::Problem& p,
                                 const ValidationPolicy& policy) {
  if (!p.gold_answer.has_value()) {
    throw ValidationError("problem " + p.id +
                          " has no gold answer; cannot validate");
  }
  ValidationResult result;
  if (!lt.final_answer.has_value()) {
    result.reasons.push_back("missing_boxed_answer");
  } else if (!answer::equivalent(*lt.final_answer, *p.gold_answer)) {
    result.reasons.push_back("answer_mismatch");
  }
  if (count_steps(lt.text) < policy.min_steps) {
    result.reasons.push_back("too_few_steps");
  }
  if (lt.stage == ThoughtStage::reformatted &&
      lt.reformatted_from_bytes.has_value() &&
      lt.text.size() < *lt.reformatted_from_bytes) {
    result.flags.push_back("length_regression");
  }
  result.accepted = result.reasons.empty();
  return result;
}

TrainingRecord make_training_record(const LongThought& lt,
                                    const corpus::Problem& p,
                                    const std::string& prompt,
                                    const Provenance& provenance,
                                    const ValidationPolicy& policy) {
  ValidationResult check = validate_record(lt, p, policy);
  if (!check.accepted) {
    std::string reasons;
    for (const auto& r : check.reasons) {
      if (!reasons.empty()) reasons += ", ";
      reasons += r;
    }
    throw ValidationError("problem " + p.id +
                          " failed validation: " + reasons);
  }
  TrainingRecord record;
  record.problem_id = lt.problem_id;
  record.prompt = prompt;
  record.response = lt.text;
  record.provenance = provenance;
  record.validated = true;
  return record;
}

DistillResult run_distill(const corpus::ProblemSet& ps,
                          teacher::TeacherClient& client,
                          const DistillOptions& options) {
  const std::string stamp =
      options.timestamp.empty() ? now_iso8601() : options.timestamp;
  const int attempts_per_problem = std::max(1, options.policy.samples_per_problem);

  struct Slot {
    std::optional<TrainingRecord> record;
    std::optional<RejectionEntry> rejection;
  };
  std::vector<Slot> slots(ps.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto process = [&](const corpus::Problem& p, Slot& slot) {
    if (!p.gold_answer.has_value()) {
      slot.rejection = RejectionEntry{p.id, {"missing_gold_answer"}, 0};
      return;
    }
    std::vector<std::string> last_reasons;
    for (int attempt = 0; attempt < attempts_per_problem; ++attempt) {
      auto req = build_distill_prompt(p, options.template_text,
                                      options.system_prompt, options.model_id,
                                      options.sampling);
      req.sample_index = attempt;
      teacher::Completion completion;
      try {
        completion = client.complete(req);
      } catch (const teacher::ClientError& e) {
        slot.rejection = RejectionEntry{
            p.id, {std::string("client_error: ") + e.what()}, attempt + 1};
        return;
      }
      LongThought lt;
      lt.problem_id = p.id;
      lt.text = completion.text;
      lt.final_answer = answer::extract_boxed(lt.text);
      lt.token_count = completion.token_count;
      lt.stage = ThoughtStage::distilled;

      ValidationResult check = validate_record(lt, p, options.policy);
      if (check.accepted) {
        Provenance prov;
        prov.teacher_model_id = options.model_id;
        prov.request_digest = teacher::request_digest(req);
        prov.validated_at = stamp;
        prov.source = p.source;
        slot.record = make_training_record(lt, p, req.user_prompt, prov,
                                           options.policy);
        return;
      }
      last_reasons = check.reasons;
    }
    slot.rejection =
        RejectionEntry{p.id, last_reasons, attempts_per_problem};
  };

  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= ps.size()) return;
      try {
        process(ps.problems[i], slots[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  DistillResult result;
  for (auto& slot : slots) {
    if (slot.record) result.records.push_back(std::move(*slot.record));
    if (slot.rejection) result.rejections.push_back(std::move(*slot.rejection));
  }
  std::sort(result.records.begin(), result.records.end(),
            [](const TrainingRecord& a, const TrainingRecord& b) {
              return a.problem_id < b.problem_id;
            });
  std::sort(result.rejections.begin(), result.rejections.end(),
            [](const RejectionEntry& a, const RejectionEntry& b) {
              return a.problem_id < b.problem_id;
            });
  return result;
}

io::Json DistillResult::rejections_to_json() const {
  io::Json arr = io::Json::array();
  for (const auto& r : rejections) {
    io::Json entry;
    entry["problem_id"] = r.problem_id;
    entry["reasons"] = r.reasons;
    entry["attempts"] = r.attempts;
    arr.push_back(entry);
  }
  return arr;
}

io::Json ExportManifest::to_json() const {
  io::Json obj;
  obj["count"] = count;
  obj["sha256"] = sha256;
  obj["per_source"] = io::Json::object();
  for (const auto& [source, n] : per_source) obj["per_source"][source] = n;
  return obj;
}

ExportManifest export_sft_dataset(const std::vector<TrainingRecord>& records,
                                  const std::filesystem::path& records_path) {
  for (const auto& r : records) {
    if (!r.validated) {
      throw ValidationError("record for problem " + r.problem_id +
                            " was not validated; export refused");
    }
  }
  std::string body;
  ExportManifest manifest;
  for (const auto& r : records) {
    io::Json obj;
    obj["problem_id"] = r.problem_id;
    obj["prompt"] = r.prompt;
    obj["response"] = r.response;
    obj["provenance"] = {
        {"teacher_model_id", r.provenance.teacher_model_id},
        {"request_digest", r.provenance.request_digest},
        {"validated_at", r.provenance.validated_at},
        {"source", r.provenance.source},
    };
    body += obj.dump();
    body += '\n';
    ++manifest.per_source[r.provenance.source];
  }
  manifest.count = records.size();
  manifest.sha256 = sha256_hex(body);
  io::atomic_write_file(records_path, body);
  auto manifest_path = records_path;
  manifest_path.replace_filename("manifest.json");
  io::atomic_write_file(manifest_path, manifest.to_json().dump(2) + "\n");
  return manifest;
}

}  // namespace ltkit::distill
