// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/cli.hpp"

#include <filesystem>
#include <memory>

#include "CLI11.hpp"
#include "ltkit/config.hpp"
#include "ltkit/corpus.hpp"
#include "ltkit/distill.hpp"
#include "ltkit/errors.hpp"
#include "ltkit/metrics.hpp"
#include "ltkit/report.hpp"
#include "ltkit/teacher.hpp"
#include "ltkit/tti.hpp"

namespace ltkit::cli {
namespace {

namespace fs = std::filesystem;

std::string sanitize_filename(const std::string& s) {
  std::string out;
  for (char c : s) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
              c == '_' || c == '.';
    out.push_back(ok ? c : '-');
  }
  return out;
}

struct ClientStack {
  teacher::ClientPtr client;
  std::shared_ptr<teacher::CachingClient> cache;
};

ClientStack make_client(const config::ToolkitConfig& cfg,
                        const std::string& mock_path) {
  teacher::ClientPtr base;
  if (!mock_path.empty()) {
    base = std::make_shared<teacher::MockTeacherClient>(
        teacher::load_mock_fixtures(mock_path));
  } else if (!cfg.endpoint.base_url.empty()) {
    base = teacher::with_rate_limit(teacher::make_http_client(cfg.endpoint),
                                    cfg.max_inflight, cfg.requests_per_minute);
    base = teacher::with_retries(base);
  } else {
    throw ConfigError(
        "no teacher configured: set teacher.base_url in the config or pass "
        "--mock FIXTURES");
  }
  auto cache =
      std::make_shared<teacher::CachingClient>(base, cfg.paths.cache_dir);
  return {cache, cache};
}

int cmd_curate(const config::ToolkitConfig& cfg, const std::string& in_path,
               const std::string& out_dir, std::ostream& out) {
  corpus::ProblemSet ps = corpus::load_problems(in_path);
  corpus::CurationResult result = corpus::curate(ps, cfg.curation);
  fs::create_directories(out_dir);
  corpus::write_problems(result.kept, fs::path(out_dir) / "curated.jsonl");
  io::atomic_write_file(fs::path(out_dir) / "curation_report.json",
                        result.report.to_json().dump(2) + "\n");
  out << "curate: kept " << result.report.kept_count << " of " << ps.size()
      << " problems\n";
  for (const auto& [rule, count] : result.report.rule_stats) {
    out << "  rejected by " << rule << ": " << count << "\n";
  }
  return 0;
}

distill::DistillOptions distill_options(const config::ToolkitConfig& cfg) {
  distill::DistillOptions opt;
  opt.template_text = cfg.prompts.distill_user;
  opt.system_prompt = cfg.prompts.distill_system;
  opt.model_id = cfg.endpoint.model_id;
  opt.sampling = cfg.sampling;
  opt.policy = cfg.validation;
  opt.timestamp = cfg.provenance_timestamp;
  opt.workers = cfg.max_inflight;
  return opt;
}

int cmd_distill(const config::ToolkitConfig& cfg, const std::string& mock_path,
                const std::string& corpus_path, const std::string& out_dir,
                std::ostream& out) {
  corpus::ProblemSet ps = corpus::load_problems(corpus_path);
  ClientStack stack = make_client(cfg, mock_path);
  distill::DistillResult result =
      distill::run_distill(ps, *stack.client, distill_options(cfg));
  fs::create_directories(out_dir);
  distill::ExportManifest manifest = distill::export_sft_dataset(
      result.records, fs::path(out_dir) / "records.jsonl");
  io::atomic_write_file(fs::path(out_dir) / "rejections.json",
                        result.rejections_to_json().dump(2) + "\n");
  out << "distill: " << manifest.count << " records exported, "
      << result.rejections.size() << " rejections";
  if (!result.rejections.empty()) {
    out << " (warning: see rejections.json)";
  }
  out << "\n";
  out << "  cache hits " << stack.cache->hits() << ", client calls "
      << stack.cache->misses() << "\n";
  return 0;
}

int cmd_reformat(const config::ToolkitConfig& cfg, const std::string& mock_path,
                 const std::string& corpus_path,
                 const std::string& solutions_path, const std::string& out_dir,
                 std::ostream& out) {
  corpus::ProblemSet ps = corpus::load_problems(corpus_path);
  ClientStack stack = make_client(cfg, mock_path);

  struct RawSolution {
    std::string problem_id;
    std::string solution;
  };
  std::vector<RawSolution> solutions;
  io::for_each_jsonl(solutions_path, [&](std::size_t line_no, const io::Json& obj) {
    if (!obj.contains("problem_id") || !obj.contains("solution")) {
      throw ValidationError(fs::path(solutions_path).filename().string() + ":" +
                            std::to_string(line_no) +
                            ": expected {\"problem_id\", \"solution\"}");
    }
    solutions.push_back({obj["problem_id"].get<std::string>(),
                         obj["solution"].get<std::string>()});
  });

  std::vector<distill::TrainingRecord> records;
  std::vector<distill::RejectionEntry> rejections;
  io::Json flag_report = io::Json::array();
  const std::string stamp = cfg.provenance_timestamp;
  for (const auto& raw : solutions) {
    const corpus::Problem* p = ps.find(raw.problem_id);
    if (p == nullptr) {
      throw ValidationError("solutions reference unknown problem \"" +
                            raw.problem_id + "\"");
    }
    distill::LongThought lt;
    try {
      lt = distill::reformat_solution(*stack.client, *p, raw.solution,
                                      cfg.prompts.reformat_user,
                                      cfg.prompts.reformat_system,
                                      cfg.endpoint.model_id, cfg.sampling);
    } catch (const teacher::ClientError& e) {
      rejections.push_back({p->id, {std::string("client_error: ") + e.what()}, 1});
      continue;
    }
    distill::ValidationResult check =
        distill::validate_record(lt, *p, cfg.validation);
    if (!check.flags.empty()) {
      io::Json entry;
      entry["problem_id"] = p->id;
      entry["flags"] = check.flags;
      flag_report.push_back(entry);
    }
    if (check.accepted) {
      distill::Provenance prov;
      prov.teacher_model_id = cfg.endpoint.model_id;
      auto student_prompt =
          distill::build_distill_prompt(*p, cfg.prompts.distill_user,
                                        cfg.prompts.distill_system,
                                        cfg.endpoint.model_id, cfg.sampling);
      prov.request_digest = teacher::request_digest(student_prompt);
      prov.validated_at = stamp;
      prov.source = p->source;
      records.push_back(distill::make_training_record(
          lt, *p, student_prompt.user_prompt, prov, cfg.validation));
    } else {
      rejections.push_back({p->id, check.reasons, 1});
    }
  }

  fs::create_directories(out_dir);
  distill::ExportManifest manifest = distill::export_sft_dataset(
      records, fs::path(out_dir) / "records.jsonl");
  distill::DistillResult tmp;
  tmp.rejections = rejections;
  io::atomic_write_file(fs::path(out_dir) / "rejections.json",
                        tmp.rejections_to_json().dump(2) + "\n");
  io::atomic_write_file(fs::path(out_dir) / "reformat_report.json",
                        flag_report.dump(2) + "\n");
  out << "reformat: " << manifest.count << " records exported, "
      << rejections.size() << " rejections\n";
  return 0;
}

struct LoadedRun {
  metrics::EvalRun run;
  metrics::Benchmark bench;
};

int cmd_eval(const config::ToolkitConfig& cfg,
             const std::vector<std::string>& samples_paths,
             const std::vector<std::string>& benchmark_paths,
             const std::string& out_dir, bool with_curve, std::ostream& out) {
  if (samples_paths.size() != benchmark_paths.size()) {
    throw ConfigError("eval: need one --benchmark per --samples");
  }
  std::vector<report::RunSummary> summaries;
  std::vector<LoadedRun> runs;
  for (std::size_t i = 0; i < samples_paths.size(); ++i) {
    auto raw = metrics::load_samples(samples_paths[i]);
    if (raw.empty()) {
      throw ValidationError("no samples in " + samples_paths[i]);
    }
    metrics::Benchmark bench = metrics::load_benchmark(benchmark_paths[i]);
    for (const auto& model : metrics::model_ids(raw)) {
      metrics::EvalRun run = metrics::build_eval_run(raw, model, bench);
      metrics::AvgTokens avg = metrics::avg_token_count(run);
      report::RunSummary s;
      s.model_id = model;
      s.benchmark_display = bench.display_name;
      s.style = bench.accuracy_style;
      s.accuracy = metrics::plain_accuracy(run);
      s.problem_count = bench.problem_order.size();
      s.avg_tokens = avg.value;
      s.tokens_approximate = avg.approximate;
      summaries.push_back(s);
      runs.push_back({std::move(run), bench});
    }
  }
  std::string table = report::render_table(summaries);
  fs::create_directories(out_dir);
  io::atomic_write_file(fs::path(out_dir) / "report.md", table);
  out << table;

  if (with_curve) {
    metrics::BudgetPolicy policy{cfg.metrics.bootstrap_seed,
                                 cfg.metrics.bootstrap_samples,
                                 cfg.metrics.exhaustive_limit};
    for (const auto& loaded : runs) {
      auto curve =
          metrics::scaling_curve(loaded.run, cfg.metrics.budgets, policy);
      std::string name = "curve_" + sanitize_filename(loaded.run.model_id) +
                         "_" + sanitize_filename(loaded.bench.benchmark_id) +
                         ".csv";
      io::atomic_write_file(fs::path(out_dir) / name,
                            report::render_curve_csv(curve));
    }
    out << "curves written for " << runs.size() << " run(s) over "
        << cfg.metrics.budgets.size() << " budgets\n";
  }
  return 0;
}

int cmd_report_curve(const config::ToolkitConfig& cfg,
                     const std::string& samples_path,
                     const std::string& benchmark_path, std::string model,
                     const std::vector<double>& budgets_override,
                     const std::string& out_file, std::ostream& out) {
  auto raw = metrics::load_samples(samples_path);
  if (raw.empty()) throw ValidationError("no samples in " + samples_path);
  metrics::Benchmark bench = metrics::load_benchmark(benchmark_path);
  auto models = metrics::model_ids(raw);
  if (model.empty()) {
    if (models.size() != 1) {
      throw ValidationError(
          "samples contain multiple models; choose one with --model");
    }
    model = models.front();
  }
  metrics::EvalRun run = metrics::build_eval_run(raw, model, bench);
  metrics::BudgetPolicy policy{cfg.metrics.bootstrap_seed,
                               cfg.metrics.bootstrap_samples,
                               cfg.metrics.exhaustive_limit};
  const auto& budgets =
      budgets_override.empty() ? cfg.metrics.budgets : budgets_override;
  for (std::size_t i = 1; i < budgets.size(); ++i) {
    if (budgets[i] <= budgets[i - 1]) {
      throw ConfigError("budgets must be strictly ascending");
    }
  }
  auto curve = metrics::scaling_curve(run, budgets, policy);
  std::string csv = report::render_curve_csv(curve);
  if (fs::path(out_file).has_parent_path()) {
    fs::create_directories(fs::path(out_file).parent_path());
  }
  io::atomic_write_file(out_file, csv);
  out << "curve: " << curve.size() << " points for " << model << " on "
      << bench.benchmark_id << " -> " << out_file << "\n";
  return 0;
}

int cmd_tti_score(const config::ToolkitConfig& cfg,
                  const std::string& submission_path, bool explain_flag,
                  std::ostream& out) {
  tti::Checklist cl = tti::load_checklist(cfg.checklist_path);
  tti::Submission s = tti::load_submission(submission_path);
  tti::ScoreCard card = tti::score(cl, s);
  out << card.work_name << ": total " << card.total;
  for (tti::Dimension d : tti::kDimensions) {
    out << ", " << tti::dimension_label(d) << " "
        << card.dimension_scores.at(d);
  }
  out << "\n";
  if (explain_flag) {
    out << "\n" << tti::render_explain(tti::explain(cl, s), s.work_name);
  }
  return 0;
}

int cmd_tti_board(const config::ToolkitConfig& cfg,
                  const std::vector<std::string>& submission_paths,
                  const std::string& out_dir, std::ostream& out) {
  tti::Checklist cl = tti::load_checklist(cfg.checklist_path);
  std::vector<tti::ScoreCard> cards;
  for (const auto& path : submission_paths) {
    cards.push_back(tti::score(cl, tti::load_submission(path)));
  }
  auto sorted = tti::leaderboard(std::move(cards));
  std::string table = tti::render_leaderboard(sorted, cl);
  out << table;
  fs::create_directories(out_dir);
  io::atomic_write_file(fs::path(out_dir) / "board.md", table);
  io::atomic_write_file(fs::path(out_dir) / "board.csv",
                        tti::leaderboard_csv(sorted));
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"long-thought distillation and evaluation toolkit", "ltkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mock_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "toolkit config file (JSON)");
  app.add_option("--mock", mock_path,
                 "mock teacher fixtures; no network is touched");
  auto* seed_opt =
      app.add_option("--seed", seed, "override the bootstrap seed");

  auto* curate = app.add_subcommand("curate", "filter a problem corpus");
  std::string curate_in, curate_out;
  curate->add_option("--in", curate_in, "problems.jsonl")->required();
  curate->add_option("--out", curate_out, "output directory");

  auto* dist = app.add_subcommand("distill", "teacher distillation campaign");
  std::string dist_corpus, dist_out;
  dist->add_option("--corpus", dist_corpus, "curated problems.jsonl")
      ->required();
  dist->add_option("--out", dist_out, "output directory");

  auto* reformat = app.add_subcommand("reformat", "rewrite raw solutions");
  std::string ref_corpus, ref_solutions, ref_out;
  reformat->add_option("--corpus", ref_corpus, "problems.jsonl")->required();
  reformat->add_option("--solutions", ref_solutions, "solutions.jsonl")
      ->required();
  reformat->add_option("--out", ref_out, "output directory");

  auto* eval = app.add_subcommand("eval", "score sample logs on benchmarks");
  std::vector<std::string> eval_samples, eval_benchmarks;
  std::string eval_out;
  bool eval_curve = false;
  eval->add_option("--samples", eval_samples, "samples.jsonl (repeatable)")
      ->required();
  eval->add_option("--benchmark", eval_benchmarks,
                   "benchmark manifest (one per --samples)")
      ->required();
  eval->add_option("--out", eval_out, "output directory");
  eval->add_flag("--curve", eval_curve, "also emit scaling-curve CSVs");

  auto* tti_cmd = app.add_subcommand("tti", "transparency index scoring");
  tti_cmd->require_subcommand(1);
  auto* tti_score_cmd = tti_cmd->add_subcommand("score", "score one work");
  std::string tti_submission;
  bool tti_explain = false;
  tti_score_cmd->add_option("--submission", tti_submission, "submission JSON")
      ->required();
  tti_score_cmd->add_flag("--explain", tti_explain, "per-item audit report");
  auto* tti_board_cmd = tti_cmd->add_subcommand("board", "render leaderboard");
  std::vector<std::string> tti_submissions;
  std::string tti_out;
  tti_board_cmd
      ->add_option("--submission", tti_submissions,
                   "submission JSON (repeatable)")
      ->required();
  tti_board_cmd->add_option("--out", tti_out, "output directory");

  auto* rep = app.add_subcommand("report", "derived reports");
  rep->require_subcommand(1);
  auto* rep_curve = rep->add_subcommand("curve", "inference-time scaling curve");
  std::string rc_samples, rc_benchmark, rc_model, rc_out;
  std::vector<double> rc_budgets;
  rep_curve->add_option("--samples", rc_samples, "samples.jsonl")->required();
  rep_curve->add_option("--benchmark", rc_benchmark, "benchmark manifest")
      ->required();
  rep_curve->add_option("--model", rc_model, "model to plot");
  rep_curve->add_option("--budgets", rc_budgets, "token budgets (ascending)");
  rep_curve->add_option("--out", rc_out, "output CSV path");

  try {
    std::vector<const char*> argv;
    argv.push_back("ltkit");
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    config::ToolkitConfig cfg = config_path.empty()
                                    ? config::default_config()
                                    : config::load_config(config_path);
    if (*seed_opt) {
      if (seed == 0) throw ConfigError("--seed must be positive");
      cfg.metrics.bootstrap_seed = seed;
    }
    auto out_or_default = [&](const std::string& dir) {
      return dir.empty() ? cfg.paths.output_dir : dir;
    };

    if (*curate) {
      return cmd_curate(cfg, curate_in, out_or_default(curate_out), out);
    }
    if (*dist) {
      return cmd_distill(cfg, mock_path, dist_corpus, out_or_default(dist_out),
                         out);
    }
    if (*reformat) {
      return cmd_reformat(cfg, mock_path, ref_corpus, ref_solutions,
                          out_or_default(ref_out), out);
    }
    if (*eval) {
      return cmd_eval(cfg, eval_samples, eval_benchmarks,
                      out_or_default(eval_out), eval_curve, out);
    }
    if (*tti_score_cmd) {
      return cmd_tti_score(cfg, tti_submission, tti_explain, out);
    }
    if (*tti_board_cmd) {
      return cmd_tti_board(cfg, tti_submissions, out_or_default(tti_out), out);
    }
    if (*rep_curve) {
      std::string out_file = rc_out.empty()
                                 ? (fs::path(cfg.paths.output_dir) / "curve.csv").string()
                                 : rc_out;
      return cmd_report_curve(cfg, rc_samples, rc_benchmark, rc_model,
                              rc_budgets, out_file, out);
    }
    throw ConfigError("no command given");
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const teacher::ClientError& e) {
    err << "client error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ltkit::cli
