#include <random>

#include "doctest.h"

#include "judgekit/aggregate.hpp"
#include "oracles.hpp"

using namespace judgekit;

namespace {

constexpr LabelValue O = LabelValue::Offensive;
constexpr LabelValue N = LabelValue::NonOffensive;

}  // namespace

TEST_CASE("majority_vote basic cases") {
  CHECK(majority_vote(std::vector{O, N, O}, TiePolicy::Error) == O);
  CHECK(majority_vote(std::vector{N, N, N, N, O}, TiePolicy::Error) == N);
  CHECK(majority_vote(std::vector{O, N}, TiePolicy::PreferNonOffensive) == N);
  CHECK(majority_vote(std::vector{O, N}, TiePolicy::PreferOffensive) == O);
  CHECK_THROWS_AS(majority_vote(std::vector<LabelValue>{}, TiePolicy::PreferNonOffensive), Error);
  CHECK_THROWS_AS(majority_vote(std::vector{O, N}, TiePolicy::Error), Error);
}

TEST_CASE("majority_vote is permutation invariant and never consults the policy for odd input") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + 2 * (rng() % 4);  // odd: 1, 3, 5, 7
    std::vector<LabelValue> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back((rng() & 1u) ? O : N);
    // Under Error policy an odd binary vote must never throw.
    const LabelValue v = majority_vote(labels, TiePolicy::Error);
    std::shuffle(labels.begin(), labels.end(), rng);
    CHECK(majority_vote(labels, TiePolicy::Error) == v);
  }
}

TEST_CASE("pej_aggregate: unanimity") {
  PejGrid grid = PejGrid::make(3);
  grid.values.assign(15, O);
  const PejResult result = pej_aggregate(grid, TiePolicy::PreferNonOffensive);
  CHECK(result.final_label == O);
  for (const auto& [variant, label] : result.per_variant) CHECK(label == O);
}

TEST_CASE("pej_aggregate two-stage result can diverge from a flat vote") {
  // Rows are models, columns are the five variants. Variants 1-3 go (O,O,N)
  // down the column, variants 4-5 are (N,N,N): stage labels (O,O,O,N,N) give
  // a final O even though the 15 cells are 6 O vs 9 N.
  PejGrid grid = PejGrid::make(3);
  grid.values = {
      O, O, O, N, N,  // model 1
      O, O, O, N, N,  // model 2
      N, N, N, N, N,  // model 3
  };
  const PejResult result = pej_aggregate(grid, TiePolicy::Error);
  CHECK(result.per_variant.at(PromptVariant::Vanilla) == O);
  CHECK(result.per_variant.at(PromptVariant::Defn) == O);
  CHECK(result.per_variant.at(PromptVariant::Summ) == O);
  CHECK(result.per_variant.at(PromptVariant::FewShots) == N);
  CHECK(result.per_variant.at(PromptVariant::DSF) == N);
  CHECK(result.final_label == O);

  std::vector<std::vector<LabelValue>> rows = {
      {O, O, O, N, N}, {O, O, O, N, N}, {N, N, N, N, N}};
  CHECK(oracles::flat_vote(rows, TiePolicy::Error) == N);
  CHECK(oracles::two_stage_vote(rows, TiePolicy::Error) == O);
}

TEST_CASE("pej_aggregate matches the enumeration oracle on random grids") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    PejGrid grid = PejGrid::make(3);
    std::vector<std::vector<LabelValue>> rows(3, std::vector<LabelValue>(5));
    for (std::size_t m = 0; m < 3; ++m) {
      for (std::size_t v = 0; v < 5; ++v) {
        rows[m][v] = (rng() & 1u) ? O : N;
        grid.values.push_back(rows[m][v]);
      }
    }
    const PejResult result = pej_aggregate(grid, TiePolicy::PreferNonOffensive);
    CHECK(result.final_label ==
          oracles::two_stage_vote(rows, TiePolicy::PreferNonOffensive));
  }
}

TEST_CASE("pej_aggregate rejects incomplete grids") {
  PejGrid grid = PejGrid::make(3);
  grid.values.assign(14, O);
  CHECK_THROWS_WITH_AS(pej_aggregate(grid, TiePolicy::Error),
                       doctest::Contains("incomplete"), Error);
}

TEST_CASE("pej_aggregate supports configurable dimensions") {
  PejGrid grid = PejGrid::make(2, {PromptVariant::Vanilla, PromptVariant::Defn},
                               {O, N, N, N});
  const PejResult result = pej_aggregate(grid, TiePolicy::PreferNonOffensive);
  CHECK(result.per_variant.at(PromptVariant::Vanilla) == N);  // tie O/N -> N
  CHECK(result.per_variant.at(PromptVariant::Defn) == N);
  CHECK(result.final_label == N);
}

TEST_CASE("ground_trust majority cases") {
  CHECK(ground_trust(O, O, N) == O);
  CHECK(ground_trust(N, N, N) == N);
  CHECK(ground_trust(N, O, O) == O);
}

TEST_CASE("ground_trust matches element-wise enumeration on mixed triples") {
  const std::vector<std::array<LabelValue, 3>> triples = {
      {O, O, O}, {O, O, N}, {O, N, O}, {O, N, N},
      {N, O, O}, {N, O, N}, {N, N, O}, {N, N, N},
  };
  for (const auto& t : triples) {
    int offensive = 0;
    for (LabelValue v : t) {
      if (v == O) ++offensive;
    }
    const LabelValue expected = offensive >= 2 ? O : N;
    CHECK(ground_trust(t[0], t[1], t[2]) == expected);
  }
}

TEST_CASE("ground trust agrees with at least two of three judges") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 1000; ++trial) {
    const LabelValue a = (rng() & 1u) ? O : N;
    const LabelValue b = (rng() & 1u) ? O : N;
    const LabelValue c = (rng() & 1u) ? O : N;
    const LabelValue trust = ground_trust(a, b, c);
    const int agreeing = (a == trust) + (b == trust) + (c == trust);
    CHECK(agreeing >= 2);
  }
}
