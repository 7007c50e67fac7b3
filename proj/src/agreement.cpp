#include "judgekit/agreement.hpp"

#include <array>
#include <map>

namespace judgekit {

double overlap_ratio(std::span<const LabelValue> a, std::span<const LabelValue> b) {
  if (a.size() != b.size()) throw Error("overlap_ratio: vectors differ in length");
  if (a.empty()) throw Error("overlap_ratio: empty vectors");
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(a.size());
}

AlphaResult krippendorff_alpha(const LabelMatrix& matrix, bool scale_by_100) {
  const std::size_t n_judges = matrix.n_judges();
  const std::size_t n_items = matrix.n_items();
  if (n_judges < 2) throw Error("krippendorff_alpha: at least 2 judges required");
  if (n_items < 1) throw Error("krippendorff_alpha: at least 1 item required");

  // 2x2 coincidence matrix, class 0 = Offensive, class 1 = NonOffensive.
  std::array<std::array<double, 2>, 2> o{{{0.0, 0.0}, {0.0, 0.0}}};
  const double m = static_cast<double>(n_judges);
  for (std::size_t item = 0; item < n_items; ++item) {
    double counts[2] = {0.0, 0.0};
    for (std::size_t judge = 0; judge < n_judges; ++judge) {
      counts[matrix.at(judge, item) == LabelValue::Offensive ? 0 : 1] += 1.0;
    }
    for (int c = 0; c < 2; ++c) {
      for (int k = 0; k < 2; ++k) {
        const double delta = (c == k) ? 1.0 : 0.0;
        o[c][k] += (counts[c] * counts[k] - delta * counts[c]) / (m - 1.0);
      }
    }
  }

  const double n_class[2] = {o[0][0] + o[0][1], o[1][0] + o[1][1]};
  const double n = n_class[0] + n_class[1];
  const double observed = (o[0][1] + o[1][0]) / n;
  const double expected = (n_class[0] * n_class[1] + n_class[1] * n_class[0]) / (n * (n - 1.0));

  AlphaResult result;
  if (expected == 0.0) {
    if (observed != 0.0) {
      throw Error("krippendorff_alpha: zero expected disagreement with observed disagreement");
    }
    // Only one class was ever used, with perfect agreement.
    result.score = scale_by_100 ? 100.0 : 1.0;
    result.degenerate = true;
    return result;
  }
  const double alpha = 1.0 - observed / expected;
  result.score = scale_by_100 ? alpha * 100.0 : alpha;
  return result;
}

AgreementReport loo_deltas(const LabelMatrix& matrix, bool scale_by_100) {
  if (matrix.n_judges() < 3) throw Error("loo_deltas: at least 3 judges required");
  AgreementReport report;
  report.n_judges = matrix.n_judges();
  report.n_items = matrix.n_items();
  report.score_total = krippendorff_alpha(matrix, scale_by_100).score;
  for (std::size_t k = 0; k < matrix.n_judges(); ++k) {
    const double reduced = krippendorff_alpha(matrix.without_judge(k), scale_by_100).score;
    report.per_judge_delta[matrix.judges()[k]] = report.score_total - reduced;
  }
  return report;
}

std::map<Topic, LabelMatrix> group_by_topic(const LabelMatrix& matrix,
                                            const std::vector<Comment>& comments) {
  std::map<std::string, Topic> topic_of;
  for (const Comment& c : comments) topic_of.emplace(c.id, c.topic);

  std::map<Topic, std::vector<std::size_t>> columns;
  for (std::size_t j = 0; j < matrix.n_items(); ++j) {
    auto it = topic_of.find(matrix.items()[j]);
    if (it == topic_of.end()) {
      throw Error("group_by_topic: item \"" + matrix.items()[j] + "\" has no comment");
    }
    columns[it->second].push_back(j);
  }

  std::map<Topic, LabelMatrix> result;
  for (const auto& [topic, cols] : columns) result.emplace(topic, matrix.select_items(cols));
  return result;
}

}  // namespace judgekit
