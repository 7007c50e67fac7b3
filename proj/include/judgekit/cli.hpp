#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "judgekit/chat.hpp"
#include "judgekit/report.hpp"

namespace judgekit {

struct RunConfig {
  std::string corpus_path;
  std::vector<JudgeConfig> judges;
  std::string template_dir;   // empty -> built-in defaults
  std::string exemplar_path;  // optional few-shot fixture file
  std::size_t min_chars = 12;
  std::size_t max_chars = 85;
  TiePolicy tie_policy = TiePolicy::PreferNonOffensive;
  Averaging averaging = Averaging::Macro;
  std::string out_dir;
  std::uint64_t seed = 0;
};

struct IngestSummary {
  std::size_t n_articles = 0;
  std::size_t n_comments_total = 0;
  std::size_t n_comments_kept = 0;
  std::map<Topic, std::size_t> kept_per_topic;
  std::vector<std::string> warnings;
};

// Loads and filters the corpus and reports per-topic counts. When
// config.out_dir is set, writes ingest.json there.
IngestSummary cmd_ingest(const RunConfig& config);

enum class JudgeMode { PejVariant, PejFull, Mrj, Summarize };

JudgeMode judge_mode_from_string(const std::string& token);

struct JudgeOptions {
  JudgeMode mode = JudgeMode::PejVariant;
  PromptVariant variant = PromptVariant::Vanilla;  // PejVariant only
  std::string summaries_path;  // optional summaries produced by Summarize
  std::string judge_id;        // Mrj/Summarize: which config to use (default first)
  bool force = false;          // re-run items that already have labels
};

struct JudgeRunStats {
  std::map<std::string, std::size_t> abstentions;  // judge id -> unparseable count
  std::size_t n_requests = 0;
  std::vector<std::string> written_files;
};

using ChatClientProvider =
    std::function<std::shared_ptr<ChatClient>(const JudgeConfig&)>;

// Runs judges over the filtered corpus and writes label files (and debate
// transcripts / summaries) under config.out_dir. Re-runs skip items that
// already carry labels unless options.force is set.
JudgeRunStats cmd_judge(const RunConfig& config, const JudgeOptions& options,
                        const ChatClientProvider& provider);

struct AnalyzeOptions {
  std::vector<std::string> label_files;
  std::vector<std::string> trust_judges;  // empty -> all judges (must be 3)
  bool allow_odd_trust = false;           // permit any odd count >= 3
  std::string reference_path;             // optional human labels
  std::string consistency_path;           // optional summary-consistency scores
  std::vector<std::string> stats_files;   // abstention sidecars from cmd_judge
};

// Full analysis: distributions, overlaps, alpha, leave-one-out deltas,
// ground trust and per-judge metrics. Writes report files to config.out_dir
// when set.
Report cmd_analyze(const RunConfig& config, const AnalyzeOptions& options);

}  // namespace judgekit
