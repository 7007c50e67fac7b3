#include "judgekit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace judgekit {

using nlohmann::json;

namespace {

DistributionRow distribution_of(std::span<const LabelValue> labels) {
  DistributionRow row;
  row.n = labels.size();
  if (labels.empty()) return row;
  std::size_t offensive = 0;
  for (LabelValue v : labels) {
    if (v == LabelValue::Offensive) ++offensive;
  }
  row.offensive_pct = 100.0 * (static_cast<double>(offensive) / static_cast<double>(labels.size()));
  row.non_offensive_pct = 100.0 - row.offensive_pct;
  return row;
}

TopicBlock build_block(const LabelMatrix& matrix, std::span<const LabelValue> trust,
                       const std::vector<LabelValue>* reference, Averaging averaging) {
  TopicBlock block;
  block.n_items = matrix.n_items();

  for (std::size_t i = 0; i < matrix.n_judges(); ++i) {
    block.distribution[matrix.judges()[i]] = distribution_of(matrix.row(i));
  }

  for (std::size_t a = 0; a < matrix.n_judges(); ++a) {
    for (std::size_t b = a + 1; b < matrix.n_judges(); ++b) {
      OverlapResult o;
      o.judge_a = matrix.judges()[a];
      o.judge_b = matrix.judges()[b];
      o.n = matrix.n_items();
      o.ratio = overlap_ratio(matrix.row(a), matrix.row(b));
      block.overlaps.push_back(std::move(o));
    }
  }

  std::size_t unanimous = 0;
  for (std::size_t j = 0; j < matrix.n_items(); ++j) {
    bool all_equal = true;
    for (std::size_t i = 1; i < matrix.n_judges(); ++i) {
      if (matrix.at(i, j) != matrix.at(0, j)) {
        all_equal = false;
        break;
      }
    }
    if (all_equal) ++unanimous;
  }
  block.unanimous_pct =
      100.0 * (static_cast<double>(unanimous) / static_cast<double>(matrix.n_items()));

  if (matrix.n_judges() >= 2) block.alpha = krippendorff_alpha(matrix, true);
  if (matrix.n_judges() >= 3) block.loo = loo_deltas(matrix, true);

  block.trust_distribution = distribution_of(trust);
  for (std::size_t i = 0; i < matrix.n_judges(); ++i) {
    block.metrics_vs_trust[matrix.judges()[i]] =
        metrics(confusion(matrix.row(i), trust), averaging);
  }
  if (reference != nullptr) {
    for (std::size_t i = 0; i < matrix.n_judges(); ++i) {
      block.metrics_vs_reference[matrix.judges()[i]] =
          metrics(confusion(matrix.row(i), *reference), averaging);
    }
  }
  return block;
}

}  // namespace

Report build_report(const AnalysisInputs& inputs) {
  const LabelMatrix& matrix = inputs.matrix;
  if (matrix.n_judges() == 0 || matrix.n_items() == 0) {
    throw Error("build_report: empty label matrix");
  }
  if (inputs.trust_judges.empty()) throw Error("build_report: no trust judges");
  if (inputs.trust_judges.size() % 2 == 0) {
    throw Error("build_report: ground trust needs an odd judge count");
  }
  if (inputs.reference && inputs.reference->size() != matrix.n_items()) {
    throw Error("build_report: reference vector does not cover all items");
  }

  Report report;
  report.judges = matrix.judges();
  report.trust_judges = inputs.trust_judges;
  report.min_chars = inputs.min_chars;
  report.max_chars = inputs.max_chars;
  report.tie_policy = inputs.tie_policy;
  report.averaging = inputs.averaging;
  report.seed = inputs.seed;
  report.abstentions = inputs.abstentions;
  report.summary_consistency = inputs.summary_consistency;

  std::vector<std::size_t> trust_rows;
  for (const std::string& judge : inputs.trust_judges) {
    trust_rows.push_back(matrix.judge_index(judge));
  }
  std::vector<LabelValue> trust(matrix.n_items());
  for (std::size_t j = 0; j < matrix.n_items(); ++j) {
    std::vector<LabelValue> votes;
    votes.reserve(trust_rows.size());
    for (std::size_t row : trust_rows) votes.push_back(matrix.at(row, j));
    trust[j] = majority_vote(votes, inputs.tie_policy);
  }
  report.trust_labels.reserve(matrix.n_items());
  for (std::size_t j = 0; j < matrix.n_items(); ++j) {
    report.trust_labels.push_back({"ground_trust", matrix.items()[j], trust[j]});
  }

  report.total = build_block(matrix, trust,
                             inputs.reference ? &*inputs.reference : nullptr, inputs.averaging);

  std::map<std::string, std::size_t> column_of;
  for (std::size_t j = 0; j < matrix.n_items(); ++j) column_of[matrix.items()[j]] = j;
  for (const auto& [topic, slice] : group_by_topic(matrix, inputs.comments)) {
    std::vector<LabelValue> topic_trust;
    std::vector<LabelValue> topic_reference;
    topic_trust.reserve(slice.n_items());
    for (const std::string& item : slice.items()) {
      const std::size_t col = column_of.at(item);
      topic_trust.push_back(trust[col]);
      if (inputs.reference) topic_reference.push_back((*inputs.reference)[col]);
    }
    report.topics.emplace(
        topic, build_block(slice, topic_trust,
                           inputs.reference ? &topic_reference : nullptr, inputs.averaging));
  }
  return report;
}

namespace {

json row_to_json(const DistributionRow& row) {
  return json{{"offensive_pct", row.offensive_pct},
              {"non_offensive_pct", row.non_offensive_pct},
              {"n", row.n}};
}

json metrics_to_json(const MetricsRow& row) {
  return json{{"accuracy", row.accuracy},
              {"precision", row.precision},
              {"recall", row.recall},
              {"f1", row.f1},
              {"averaging", to_string(row.averaging)},
              {"zero_division", row.zero_division}};
}

json block_to_json(const TopicBlock& block) {
  json j;
  j["n_items"] = block.n_items;
  j["distribution"] = json::object();
  for (const auto& [judge, row] : block.distribution) j["distribution"][judge] = row_to_json(row);
  j["overlap"] = json::array();
  for (const OverlapResult& o : block.overlaps) {
    j["overlap"].push_back(json{{"judge_a", o.judge_a},
                                {"judge_b", o.judge_b},
                                {"overlap_pct", 100.0 * o.ratio},
                                {"n", o.n}});
  }
  j["unanimous_pct"] = block.unanimous_pct;
  if (block.alpha) {
    j["alpha"] = json{{"score", block.alpha->score}, {"degenerate", block.alpha->degenerate}};
  } else {
    j["alpha"] = nullptr;
  }
  if (block.loo) {
    json deltas = json::object();
    for (const auto& [judge, delta] : block.loo->per_judge_delta) deltas[judge] = delta;
    j["loo"] = json{{"score_total", block.loo->score_total},
                    {"per_judge_delta", deltas},
                    {"n_judges", block.loo->n_judges},
                    {"n_items", block.loo->n_items}};
  } else {
    j["loo"] = nullptr;
  }
  j["trust_distribution"] = row_to_json(block.trust_distribution);
  j["metrics_vs_trust"] = json::object();
  for (const auto& [judge, row] : block.metrics_vs_trust) {
    j["metrics_vs_trust"][judge] = metrics_to_json(row);
  }
  if (!block.metrics_vs_reference.empty()) {
    j["metrics_vs_reference"] = json::object();
    for (const auto& [judge, row] : block.metrics_vs_reference) {
      j["metrics_vs_reference"][judge] = metrics_to_json(row);
    }
  }
  return j;
}

}  // namespace

json report_to_json(const Report& report) {
  json j;
  j["judges"] = report.judges;
  j["trust_judges"] = report.trust_judges;
  j["min_chars"] = report.min_chars;
  j["max_chars"] = report.max_chars;
  j["tie_policy"] = to_string(report.tie_policy);
  j["averaging"] = to_string(report.averaging);
  j["seed"] = report.seed;
  j["topics"] = json::object();
  for (const auto& [topic, block] : report.topics) {
    j["topics"][to_string(topic)] = block_to_json(block);
  }
  j["total"] = block_to_json(report.total);
  j["abstentions"] = json::object();
  for (const auto& [judge, count] : report.abstentions) j["abstentions"][judge] = count;
  if (report.summary_consistency) {
    j["summary_consistency"] = json{{"mean", report.summary_consistency->mean},
                                    {"stddev", report.summary_consistency->stddev},
                                    {"n", report.summary_consistency->n}};
  } else {
    j["summary_consistency"] = nullptr;
  }
  return j;
}

namespace {

std::string fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

// Topic keys in enum order, then "total". Values come out of the report JSON
// so that every CSV number is a formatted copy of a machine-readable one.
std::vector<std::pair<std::string, const json*>> block_order(const json& report) {
  std::vector<std::pair<std::string, const json*>> blocks;
  for (Topic topic : all_topics()) {
    const std::string key = to_string(topic);
    if (report.at("topics").contains(key)) {
      blocks.emplace_back(key, &report.at("topics").at(key));
    }
  }
  blocks.emplace_back("total", &report.at("total"));
  return blocks;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace

void write_report_files(const Report& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const json j = report_to_json(report);

  write_file(fs::path(out_dir) / "report.json", j.dump(2) + "\n");

  std::string distribution = "topic,judge,offensive_pct,non_offensive_pct,n_items\n";
  std::string overlap = "topic,judge_a,judge_b,overlap_pct,n_items\n";
  std::string agreement = "topic,alpha,degenerate,n_judges,n_items,unanimous_pct\n";
  std::string loo = "topic,judge,delta\n";
  std::string metrics_csv = "topic,judge,reference,accuracy,precision,recall,f1,averaging,zero_division\n";

  for (const auto& [name, block] : block_order(j)) {
    for (const auto& [judge, row] : block->at("distribution").items()) {
      distribution += name + "," + judge + "," + fixed2(row.at("offensive_pct").get<double>()) +
                      "," + fixed2(row.at("non_offensive_pct").get<double>()) + "," +
                      std::to_string(row.at("n").get<std::size_t>()) + "\n";
    }
    const json& trust_row = block->at("trust_distribution");
    distribution += name + ",ground_trust," + fixed2(trust_row.at("offensive_pct").get<double>()) +
                    "," + fixed2(trust_row.at("non_offensive_pct").get<double>()) + "," +
                    std::to_string(trust_row.at("n").get<std::size_t>()) + "\n";

    for (const json& o : block->at("overlap")) {
      overlap += name + "," + o.at("judge_a").get<std::string>() + "," +
                 o.at("judge_b").get<std::string>() + "," +
                 fixed2(o.at("overlap_pct").get<double>()) + "," +
                 std::to_string(o.at("n").get<std::size_t>()) + "\n";
    }
    overlap += name + ",all,all," + fixed2(block->at("unanimous_pct").get<double>()) + "," +
               std::to_string(block->at("n_items").get<std::size_t>()) + "\n";

    if (!block->at("alpha").is_null()) {
      agreement += name + "," + fixed2(block->at("alpha").at("score").get<double>()) + "," +
                   (block->at("alpha").at("degenerate").get<bool>() ? "true" : "false") + "," +
                   std::to_string(report.judges.size()) + "," +
                   std::to_string(block->at("n_items").get<std::size_t>()) + "," +
                   fixed2(block->at("unanimous_pct").get<double>()) + "\n";
    }
    if (!block->at("loo").is_null()) {
      for (const auto& [judge, delta] : block->at("loo").at("per_judge_delta").items()) {
        loo += name + "," + judge + "," + fixed2(delta.get<double>()) + "\n";
      }
    }
    const auto metrics_rows = [&](const char* reference, const json& rows) {
      for (const auto& [judge, row] : rows.items()) {
        metrics_csv += name + "," + judge + "," + reference + "," +
                       fixed2(row.at("accuracy").get<double>()) + "," +
                       fixed2(row.at("precision").get<double>()) + "," +
                       fixed2(row.at("recall").get<double>()) + "," +
                       fixed2(row.at("f1").get<double>()) + "," +
                       row.at("averaging").get<std::string>() + "," +
                       (row.at("zero_division").get<bool>() ? "true" : "false") + "\n";
      }
    };
    metrics_rows("ground_trust", block->at("metrics_vs_trust"));
    if (block->contains("metrics_vs_reference")) {
      metrics_rows("reference", block->at("metrics_vs_reference"));
    }
  }

  write_file(fs::path(out_dir) / "distribution.csv", distribution);
  write_file(fs::path(out_dir) / "overlap.csv", overlap);
  write_file(fs::path(out_dir) / "agreement.csv", agreement);
  write_file(fs::path(out_dir) / "loo.csv", loo);
  write_file(fs::path(out_dir) / "metrics.csv", metrics_csv);

  std::string trust;
  for (const LabelRecord& r : report.trust_labels) {
    json line{{"judge_id", r.judge_id}, {"comment_id", r.comment_id}, {"label", to_string(r.label)}};
    trust += line.dump() + "\n";
  }
  write_file(fs::path(out_dir) / "ground_trust.jsonl", trust);
}

}  // namespace judgekit
