#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "judgekit/cli.hpp"
#include "judgekit/judges.hpp"

namespace {

using namespace judgekit;

struct CommonArgs {
  std::string corpus;
  std::size_t min_chars = 12;
  std::size_t max_chars = 85;
  std::string out;
  std::string tie_policy = "prefer-non-offensive";
  std::string averaging = "macro";
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool out_required) {
  cmd->add_option("--corpus", args.corpus, "Corpus file (line-delimited records)")->required();
  cmd->add_option("--min-chars", args.min_chars, "Minimum comment length in characters")
      ->capture_default_str();
  cmd->add_option("--max-chars", args.max_chars, "Maximum comment length in characters")
      ->capture_default_str();
  auto* out = cmd->add_option("--out", args.out, "Output directory");
  if (out_required) out->required();
  cmd->add_option("--tie-policy", args.tie_policy,
                  "Vote tie policy: prefer-non-offensive, prefer-offensive, error")
      ->capture_default_str();
  cmd->add_option("--averaging", args.averaging, "Metric averaging: macro, binary-positive")
      ->capture_default_str();
  cmd->add_option("--seed", args.seed, "Random seed recorded in reports")->capture_default_str();
}

RunConfig to_run_config(const CommonArgs& args) {
  RunConfig config;
  config.corpus_path = args.corpus;
  config.min_chars = args.min_chars;
  config.max_chars = args.max_chars;
  config.out_dir = args.out;
  config.tie_policy = tie_policy_from_string(args.tie_policy);
  config.averaging = averaging_from_string(args.averaging);
  config.seed = args.seed;
  return config;
}

ChatClientProvider make_provider(const std::string& mock) {
  if (mock.empty()) {
    return [](const JudgeConfig& config) -> std::shared_ptr<ChatClient> {
      if (config.endpoint.empty()) {
        throw Error("judge config \"" + config.judge_id + "\" has no endpoint; pass --mock to run offline");
      }
      return std::make_shared<HttpChatClient>(config.endpoint);
    };
  }
  std::shared_ptr<ChatClient> client;
  if (mock == "yes" || mock == "no") {
    client = std::make_shared<MockChatClient>(mock);
  } else {
    client = std::make_shared<MockChatClient>(load_mock_rules(mock));
  }
  return [client](const JudgeConfig&) { return client; };
}

int run_ingest(const CommonArgs& args) {
  const IngestSummary summary = cmd_ingest(to_run_config(args));
  std::printf("articles: %zu\n", summary.n_articles);
  std::printf("comments: %zu total, %zu within length bounds\n", summary.n_comments_total,
              summary.n_comments_kept);
  for (const auto& [topic, count] : summary.kept_per_topic) {
    std::printf("  %-28s %zu\n", to_string(topic).c_str(), count);
  }
  for (const std::string& warning : summary.warnings) {
    std::fprintf(stderr, "warning: %s\n", warning.c_str());
  }
  return 0;
}

int run_judge(const CommonArgs& args, const std::string& mode, const std::string& judge_config,
              const std::string& mock, const std::string& templates,
              const std::string& exemplars, const std::string& variant,
              const std::string& summaries, const std::string& judge_id, bool force) {
  RunConfig config = to_run_config(args);
  config.judges = load_judge_configs(judge_config);
  config.template_dir = templates;
  config.exemplar_path = exemplars;

  JudgeOptions options;
  options.mode = judge_mode_from_string(mode);
  options.variant = prompt_variant_from_string(variant);
  options.summaries_path = summaries;
  options.judge_id = judge_id;
  options.force = force;

  const JudgeRunStats stats = cmd_judge(config, options, make_provider(mock));
  std::printf("requests: %zu\n", stats.n_requests);
  for (const std::string& file : stats.written_files) std::printf("wrote %s\n", file.c_str());
  for (const auto& [judge, count] : stats.abstentions) {
    if (count > 0) std::printf("abstentions for %s: %zu\n", judge.c_str(), count);
  }
  return 0;
}

int run_analyze(const CommonArgs& args, const AnalyzeOptions& options) {
  const Report report = cmd_analyze(to_run_config(args), options);
  const TopicBlock& total = report.total;
  std::printf("judges: %zu, items: %zu\n", report.judges.size(), total.n_items);
  if (total.alpha) {
    std::printf("alpha (x100): %.2f%s\n", total.alpha->score,
                total.alpha->degenerate ? " (degenerate: single class)" : "");
  }
  if (total.loo) {
    for (const auto& [judge, delta] : total.loo->per_judge_delta) {
      std::printf("  delta without %s: %+.2f\n", judge.c_str(), delta);
    }
  }
  for (const auto& [judge, row] : total.metrics_vs_trust) {
    std::printf("%-24s acc %.2f  P %.2f  R %.2f  F1 %.2f\n", judge.c_str(), row.accuracy,
                row.precision, row.recall, row.f1);
  }
  if (!args.out.empty()) std::printf("report written to %s\n", args.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Offensive-language judge orchestration and agreement auditing"};
  app.require_subcommand(1);

  CommonArgs ingest_args;
  CLI::App* ingest = app.add_subcommand("ingest", "Validate and filter a corpus");
  add_common(ingest, ingest_args, false);

  CommonArgs judge_args;
  std::string judge_mode;
  std::string judge_config_path;
  std::string mock;
  std::string templates;
  std::string exemplars;
  std::string variant = "vanilla";
  std::string summaries;
  std::string judge_id;
  bool force = false;
  CLI::App* judge = app.add_subcommand("judge", "Run judges over a corpus and write label files");
  judge->add_option("mode", judge_mode, "pej-variant, pej-full, mrj or summarize")->required();
  add_common(judge, judge_args, true);
  judge->add_option("--judge-config", judge_config_path, "Judge endpoint config (JSON)")->required();
  judge->add_option("--mock", mock, "Offline mode: \"yes\", \"no\" or a rule file");
  judge->add_option("--templates", templates, "Prompt template directory");
  judge->add_option("--exemplars", exemplars, "Few-shot exemplar fixture file");
  judge->add_option("--variant", variant, "Prompt variant for pej-variant")->capture_default_str();
  judge->add_option("--summaries", summaries, "Summaries file produced by `judge summarize`");
  judge->add_option("--judge", judge_id, "Judge id for mrj/summarize (default: first config)");
  judge->add_flag("--force", force, "Re-run items that already have labels");

  CommonArgs analyze_args;
  AnalyzeOptions analyze_options;
  std::string trust_judges;
  CLI::App* analyze = app.add_subcommand("analyze", "Aggregate and audit label files");
  add_common(analyze, analyze_args, false);
  analyze->add_option("--labels", analyze_options.label_files, "Label file (repeatable)")
      ->required();
  analyze->add_option("--trust-judges", trust_judges,
                      "Comma-separated judge ids used for the ground trust");
  analyze->add_flag("--allow-odd-trust", analyze_options.allow_odd_trust,
                    "Allow any odd number (>= 3) of trust judges");
  analyze->add_option("--reference", analyze_options.reference_path,
                      "Reference (e.g. human) label file");
  analyze->add_option("--consistency", analyze_options.consistency_path,
                      "Summary-consistency scores from `judge summarize`");
  analyze->add_option("--stats", analyze_options.stats_files,
                      "stats.json files from `judge` runs (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return run_ingest(ingest_args);
    if (judge->parsed()) {
      return run_judge(judge_args, judge_mode, judge_config_path, mock, templates, exemplars,
                       variant, summaries, judge_id, force);
    }
    if (analyze->parsed()) {
      std::string current;
      for (char c : trust_judges + ",") {
        if (c == ',') {
          if (!current.empty()) analyze_options.trust_judges.push_back(current);
          current.clear();
        } else {
          current += c;
        }
      }
      return run_analyze(analyze_args, analyze_options);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
