#include <cmath>
#include <random>

#include "doctest.h"

#include "judgekit/agreement.hpp"
#include "judgekit/evaluate.hpp"
#include "oracles.hpp"

using namespace judgekit;

namespace {

constexpr LabelValue O = LabelValue::Offensive;
constexpr LabelValue N = LabelValue::NonOffensive;

LabelMatrix matrix_from_rows(const std::vector<std::vector<LabelValue>>& rows) {
  std::vector<std::string> judges;
  std::vector<std::string> items;
  std::vector<LabelValue> values;
  for (std::size_t i = 0; i < rows.size(); ++i) judges.push_back("j" + std::to_string(i));
  for (std::size_t j = 0; j < rows[0].size(); ++j) items.push_back("i" + std::to_string(100 + j));
  for (const auto& row : rows) values.insert(values.end(), row.begin(), row.end());
  return LabelMatrix(judges, items, values);
}

LabelMatrix swap_classes(const LabelMatrix& m) {
  std::vector<LabelValue> values;
  for (std::size_t i = 0; i < m.n_judges(); ++i) {
    for (std::size_t j = 0; j < m.n_items(); ++j) values.push_back(m.at(i, j) == O ? N : O);
  }
  return LabelMatrix(m.judges(), m.items(), values);
}

}  // namespace

TEST_CASE("overlap_ratio basics") {
  const std::vector<LabelValue> a = {O, N, O, O};
  const std::vector<LabelValue> b = {O, O, O, N};
  CHECK(overlap_ratio(a, b) == doctest::Approx(0.5));
  CHECK(overlap_ratio(a, a) == 1.0);
  const std::vector<LabelValue> c = {N, O, N, N};
  CHECK(overlap_ratio(a, c) == 0.0);
  CHECK(overlap_ratio(a, b) == overlap_ratio(b, a));
  CHECK_THROWS_AS(overlap_ratio(a, std::vector<LabelValue>{O}), Error);
  CHECK_THROWS_AS(overlap_ratio(std::vector<LabelValue>{}, std::vector<LabelValue>{}), Error);
}

TEST_CASE("krippendorff_alpha worked cases") {
  // Items rated (O,O,O), (O,N,O), (N,N,N) by three judges: alpha = 0.6.
  const LabelMatrix m1 = matrix_from_rows({{O, O, N}, {O, N, N}, {O, O, N}});
  CHECK(krippendorff_alpha(m1, true).score == doctest::Approx(60.0).epsilon(1e-9));
  CHECK(krippendorff_alpha(m1, false).score == doctest::Approx(0.6).epsilon(1e-9));
  CHECK_FALSE(krippendorff_alpha(m1, false).degenerate);

  // Two judges always disagreeing, balanced classes: alpha = -0.5.
  const LabelMatrix m2 = matrix_from_rows({{O, N}, {N, O}});
  CHECK(krippendorff_alpha(m2, true).score == doctest::Approx(-50.0).epsilon(1e-9));

  // Perfect agreement with both classes present: alpha = 1.
  const LabelMatrix m3 = matrix_from_rows({{O, N, O}, {O, N, O}, {O, N, O}});
  const AlphaResult r3 = krippendorff_alpha(m3, true);
  CHECK(r3.score == doctest::Approx(100.0).epsilon(1e-9));
  CHECK_FALSE(r3.degenerate);
}

TEST_CASE("krippendorff_alpha degenerate single-class convention") {
  const LabelMatrix m = matrix_from_rows({{N, N}, {N, N}});
  const AlphaResult r = krippendorff_alpha(m, true);
  CHECK(r.score == 100.0);
  CHECK(r.degenerate);
  CHECK(krippendorff_alpha(m, false).score == 1.0);
}

TEST_CASE("krippendorff_alpha rejects fewer than two judges") {
  CHECK_THROWS_AS(krippendorff_alpha(matrix_from_rows({{O, N}}), true), Error);
}

TEST_CASE("krippendorff_alpha matches the pair-counting oracle on random matrices") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n_judges = 2 + rng() % 5;
    const std::size_t n_items = 1 + rng() % 40;
    const LabelMatrix m = oracles::random_matrix(rng, n_judges, n_items);
    const double expected = oracles::alpha_pair_counting(m);
    CHECK(krippendorff_alpha(m, false).score == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("alpha is invariant under class swap and under judge/item permutation") {
  std::mt19937 rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const LabelMatrix m = oracles::random_matrix(rng, 2 + rng() % 4, 2 + rng() % 20);
    const double base = krippendorff_alpha(m, false).score;
    CHECK(krippendorff_alpha(swap_classes(m), false).score ==
          doctest::Approx(base).epsilon(1e-12));

    // Permute judges by rebuilding rows in reverse order.
    std::vector<std::vector<LabelValue>> rows;
    for (std::size_t i = m.n_judges(); i-- > 0;) {
      rows.emplace_back(m.row(i).begin(), m.row(i).end());
    }
    CHECK(krippendorff_alpha(matrix_from_rows(rows), false).score ==
          doctest::Approx(base).epsilon(1e-12));

    // Permute items by rotating every row.
    std::vector<std::vector<LabelValue>> rotated;
    for (std::size_t i = 0; i < m.n_judges(); ++i) {
      std::vector<LabelValue> row(m.row(i).begin(), m.row(i).end());
      std::rotate(row.begin(), row.begin() + 1, row.end());
      rotated.push_back(std::move(row));
    }
    CHECK(krippendorff_alpha(matrix_from_rows(rotated), false).score ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("duplicating an existing judge row still matches the oracle") {
  std::mt19937 rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    const LabelMatrix m = oracles::random_matrix(rng, 2 + rng() % 3, 2 + rng() % 15);
    std::vector<std::vector<LabelValue>> rows;
    for (std::size_t i = 0; i < m.n_judges(); ++i) {
      rows.emplace_back(m.row(i).begin(), m.row(i).end());
    }
    rows.push_back(rows[rng() % rows.size()]);  // duplicate one judge
    const LabelMatrix extended = matrix_from_rows(rows);
    CHECK(krippendorff_alpha(extended, false).score ==
          doctest::Approx(oracles::alpha_pair_counting(extended)).epsilon(1e-9));
  }
}

TEST_CASE("loo_deltas: identical judges give zero deltas") {
  const LabelMatrix m = matrix_from_rows({{O, N, O}, {O, N, O}, {O, N, O}});
  const AgreementReport report = loo_deltas(m, true);
  CHECK(report.score_total == doctest::Approx(100.0));
  REQUIRE(report.per_judge_delta.size() == 3);
  for (const auto& [judge, delta] : report.per_judge_delta) {
    CHECK(delta == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("loo_deltas: an everywhere-flipped judge gets a negative delta") {
  const std::vector<LabelValue> base = {O, N, O, N, O, O};
  std::vector<LabelValue> flipped;
  for (LabelValue v : base) flipped.push_back(v == O ? N : O);
  const LabelMatrix m = matrix_from_rows({base, base, base, flipped});
  const AgreementReport report = loo_deltas(m, true);
  CHECK(report.per_judge_delta.at("j3") < 0.0);
  // Removing the flipped judge restores perfect agreement.
  CHECK(report.score_total - report.per_judge_delta.at("j3") ==
        doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("loo_deltas equals an independent recomputation on random matrices") {
  std::mt19937 rng(109);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_judges = 3 + rng() % 4;
    const std::size_t n_items = 2 + rng() % 30;
    const LabelMatrix m = oracles::random_matrix(rng, n_judges, n_items);
    const AgreementReport report = loo_deltas(m, false);
    const double total = oracles::alpha_pair_counting(m);
    CHECK(report.score_total == doctest::Approx(total).epsilon(1e-9));
    for (std::size_t k = 0; k < n_judges; ++k) {
      const double reduced = oracles::alpha_pair_counting(m.without_judge(k));
      const double delta = report.per_judge_delta.at(m.judges()[k]);
      CHECK(delta == doctest::Approx(total - reduced).epsilon(1e-9));
      // The sign reading: delta < 0 exactly when the reduced score rises.
      CHECK((delta < 0) == (reduced > total));
    }
  }
  CHECK_THROWS_AS(loo_deltas(matrix_from_rows({{O, N}, {N, O}}), true), Error);
}

TEST_CASE("group_by_topic partitions columns and preserves their labels") {
  std::vector<Comment> comments;
  std::vector<std::string> items;
  std::vector<LabelValue> row1, row2;
  std::mt19937 rng(113);
  const std::vector<Topic>& topics = all_topics();
  for (int i = 0; i < 24; ++i) {
    Comment c;
    c.id = "c" + std::to_string(100 + i);
    c.article_id = "a";
    c.topic = topics[i % topics.size()];
    c.text = "text";
    comments.push_back(c);
    items.push_back(c.id);
    row1.push_back((rng() & 1u) ? O : N);
    row2.push_back((rng() & 1u) ? O : N);
  }
  std::vector<LabelValue> values = row1;
  values.insert(values.end(), row2.begin(), row2.end());
  const LabelMatrix m({"j1", "j2"}, items, values);

  const std::map<Topic, LabelMatrix> parts = group_by_topic(m, comments);
  REQUIRE(parts.size() == topics.size());
  std::size_t total_columns = 0;
  for (const auto& [topic, slice] : parts) {
    total_columns += slice.n_items();
    for (std::size_t sj = 0; sj < slice.n_items(); ++sj) {
      const auto it = std::find(items.begin(), items.end(), slice.items()[sj]);
      REQUIRE(it != items.end());
      const std::size_t col = static_cast<std::size_t>(it - items.begin());
      CHECK(comments[col].topic == topic);
      CHECK(slice.at(0, sj) == m.at(0, col));
      CHECK(slice.at(1, sj) == m.at(1, col));
    }
  }
  CHECK(total_columns == m.n_items());
}

TEST_CASE("group_by_topic: single-topic corpus maps back to the input") {
  std::vector<Comment> comments;
  for (int i = 0; i < 4; ++i) {
    Comment c;
    c.id = "c" + std::to_string(i);
    c.topic = Topic::NorthKorea;
    c.text = "t";
    comments.push_back(c);
  }
  const LabelMatrix m({"j1", "j2"}, {"c0", "c1", "c2", "c3"},
                      {O, N, O, N, O, N, O, N});
  const auto parts = group_by_topic(m, comments);
  REQUIRE(parts.size() == 1);
  const LabelMatrix& slice = parts.at(Topic::NorthKorea);
  CHECK(slice.n_items() == 4);
  CHECK(slice.items() == m.items());
}

TEST_CASE("group_by_topic rejects unresolvable items") {
  const LabelMatrix m({"j1", "j2"}, {"c0"}, {O, N});
  CHECK_THROWS_WITH_AS(group_by_topic(m, {}), doctest::Contains("c0"), Error);
}

TEST_CASE("per-topic alpha differs from total alpha in general") {
  // Fixed synthetic case: agreement patterns differ by topic, so the pooled
  // score is not the mean (or any simple recombination) of the parts.
  std::vector<Comment> comments;
  std::vector<std::string> items;
  for (int i = 0; i < 8; ++i) {
    Comment c;
    c.id = "c" + std::to_string(i);
    c.topic = i < 4 ? Topic::NorthKorea : Topic::Administration;
    c.text = "t";
    comments.push_back(c);
    items.push_back(c.id);
  }
  const LabelMatrix m({"j1", "j2"}, items,
                      {O, O, N, N, O, N, O, N,
                       O, O, N, N, N, O, N, O});
  const auto parts = group_by_topic(m, comments);
  const double total = krippendorff_alpha(m, false).score;
  const double alpha_nk = krippendorff_alpha(parts.at(Topic::NorthKorea), false).score;
  const double alpha_admin = krippendorff_alpha(parts.at(Topic::Administration), false).score;
  CHECK(alpha_nk == doctest::Approx(1.0));
  // 2 judges x 4 items in constant disagreement: D_o = 1, D_e = 4/7.
  CHECK(alpha_admin == doctest::Approx(-0.75));
  CHECK(total != doctest::Approx(alpha_nk));
  CHECK(total != doctest::Approx(alpha_admin));
  // Each slice still matches the oracle.
  CHECK(alpha_nk == doctest::Approx(oracles::alpha_pair_counting(parts.at(Topic::NorthKorea))));
  CHECK(alpha_admin ==
        doctest::Approx(oracles::alpha_pair_counting(parts.at(Topic::Administration))));
}

TEST_CASE("accuracy equals 100 x overlap against any reference vector") {
  std::mt19937 rng(127);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<LabelValue> pred, ref;
    for (std::size_t i = 0; i < n; ++i) {
      pred.push_back((rng() & 1u) ? O : N);
      ref.push_back((rng() & 1u) ? O : N);
    }
    const MetricsRow row = metrics(confusion(pred, ref), Averaging::Macro);
    CHECK(row.accuracy == 100.0 * overlap_ratio(pred, ref));
  }
}
