#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "judgekit/agreement.hpp"
#include "judgekit/aggregate.hpp"
#include "judgekit/corpus.hpp"
#include "judgekit/evaluate.hpp"

namespace judgekit {

struct DistributionRow {
  double offensive_pct = 0.0;
  double non_offensive_pct = 0.0;
  std::size_t n = 0;
};

struct SummaryConsistencyStats {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  std::size_t n = 0;
};

// One per-topic (or total) slice of the analysis: label distributions,
// pairwise overlaps, agreement scores with leave-one-out deltas, and metrics
// against the ground trust (and optional reference labels).
struct TopicBlock {
  std::size_t n_items = 0;
  std::map<std::string, DistributionRow> distribution;  // judge -> row
  std::vector<OverlapResult> overlaps;                  // all judge pairs, sorted
  double unanimous_pct = 0.0;  // items on which every judge agrees
  std::optional<AlphaResult> alpha;  // absent when fewer than 2 judges
  std::optional<AgreementReport> loo;  // absent when fewer than 3 judges
  DistributionRow trust_distribution;
  std::map<std::string, MetricsRow> metrics_vs_trust;
  std::map<std::string, MetricsRow> metrics_vs_reference;  // empty when no reference
};

struct Report {
  std::vector<std::string> judges;
  std::vector<std::string> trust_judges;
  std::size_t min_chars = 0;
  std::size_t max_chars = 0;
  TiePolicy tie_policy = TiePolicy::PreferNonOffensive;
  Averaging averaging = Averaging::Macro;
  std::uint64_t seed = 0;
  std::map<Topic, TopicBlock> topics;  // only topics present in the corpus
  TopicBlock total;
  std::vector<LabelRecord> trust_labels;  // judge_id "ground_trust"
  std::map<std::string, std::size_t> abstentions;
  std::optional<SummaryConsistencyStats> summary_consistency;
};

// Everything cmd_analyze needs once inputs are loaded and aligned.
struct AnalysisInputs {
  std::vector<Comment> comments;  // filtered corpus, sorted by id
  LabelMatrix matrix;             // all judges x kept items
  std::vector<std::string> trust_judges;
  std::size_t min_chars = 12;
  std::size_t max_chars = 85;
  TiePolicy tie_policy = TiePolicy::PreferNonOffensive;
  Averaging averaging = Averaging::Macro;
  std::uint64_t seed = 0;
  std::optional<std::vector<LabelValue>> reference;  // aligned to matrix items
  std::map<std::string, std::size_t> abstentions;
  std::optional<SummaryConsistencyStats> summary_consistency;
};

Report build_report(const AnalysisInputs& inputs);

// Machine-readable form. Contains no paths, timestamps or host details so
// identical inputs serialize byte-identically.
nlohmann::json report_to_json(const Report& report);

// Writes report.json plus the table CSVs (distribution.csv, overlap.csv,
// agreement.csv, loo.csv, metrics.csv) and ground_trust.jsonl. Every CSV
// number is formatted from the corresponding report.json value.
void write_report_files(const Report& report, const std::string& out_dir);

}  // namespace judgekit
