#include <random>

#include "doctest.h"

#include "judgekit/evaluate.hpp"

using namespace judgekit;

namespace {

constexpr LabelValue O = LabelValue::Offensive;
constexpr LabelValue N = LabelValue::NonOffensive;

}  // namespace

TEST_CASE("confusion counts with Offensive positive") {
  std::vector<LabelValue> ref;
  for (int i = 0; i < 4; ++i) ref.push_back(O);
  for (int i = 0; i < 6; ++i) ref.push_back(N);
  const Confusion identical = confusion(ref, ref);
  CHECK(identical.tp == 4);
  CHECK(identical.tn == 6);
  CHECK(identical.fp == 0);
  CHECK(identical.fn == 0);

  const std::vector<LabelValue> all_o(5, O);
  const std::vector<LabelValue> all_n(5, N);
  const Confusion wrong = confusion(all_o, all_n);
  CHECK(wrong.fp == 5);
  CHECK(wrong.tp + wrong.fn + wrong.tn == 0);

  CHECK_THROWS_AS(confusion(all_o, std::vector<LabelValue>{N}), Error);
  CHECK_THROWS_AS(confusion(std::vector<LabelValue>{}, std::vector<LabelValue>{}), Error);
}

TEST_CASE("confusion matches an element-wise count on a mixed case") {
  const std::vector<LabelValue> pred = {O, O, N, N, O, N, O, N, O, N};
  const std::vector<LabelValue> ref  = {O, N, N, O, O, N, N, N, O, O};
  int tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] == O && ref[i] == O) ++tp;
    if (pred[i] == O && ref[i] == N) ++fp;
    if (pred[i] == N && ref[i] == O) ++fn;
    if (pred[i] == N && ref[i] == N) ++tn;
  }
  const Confusion c = confusion(pred, ref);
  CHECK(c.tp == tp);
  CHECK(c.fp == fp);
  CHECK(c.fn == fn);
  CHECK(c.tn == tn);
  CHECK(c.total() == 10);
}

TEST_CASE("metrics worked example: tp=3 fn=1 fp=1 tn=5") {
  const Confusion c{3, 1, 1, 5};
  const MetricsRow macro = metrics(c, Averaging::Macro);
  CHECK(macro.accuracy == doctest::Approx(80.0));
  CHECK(macro.precision == doctest::Approx(79.17).epsilon(0.0002));
  CHECK(macro.recall == doctest::Approx(79.17).epsilon(0.0002));
  CHECK(macro.f1 == doctest::Approx(79.17).epsilon(0.0002));
  CHECK_FALSE(macro.zero_division);

  const MetricsRow binary = metrics(c, Averaging::BinaryPositive);
  CHECK(binary.accuracy == doctest::Approx(80.0));
  CHECK(binary.precision == doctest::Approx(75.0));
  CHECK(binary.recall == doctest::Approx(75.0));
  CHECK(binary.f1 == doctest::Approx(75.0));
}

TEST_CASE("perfect predictions score 100 under either averaging") {
  const std::vector<LabelValue> labels = {O, N, O, N, N};
  const Confusion c = confusion(labels, labels);
  for (Averaging mode : {Averaging::Macro, Averaging::BinaryPositive}) {
    const MetricsRow row = metrics(c, mode);
    CHECK(row.accuracy == doctest::Approx(100.0));
    CHECK(row.precision == doctest::Approx(100.0));
    CHECK(row.recall == doctest::Approx(100.0));
    CHECK(row.f1 == doctest::Approx(100.0));
  }
}

TEST_CASE("0/0 cells resolve to 0 with the zero_division flag") {
  // Reference is all NonOffensive and so is the prediction.
  const std::vector<LabelValue> all_n(5, N);
  const Confusion c = confusion(all_n, all_n);
  const MetricsRow binary = metrics(c, Averaging::BinaryPositive);
  CHECK(binary.accuracy == doctest::Approx(100.0));
  CHECK(binary.precision == 0.0);
  CHECK(binary.recall == 0.0);
  CHECK(binary.f1 == 0.0);
  CHECK(binary.zero_division);

  const MetricsRow macro = metrics(c, Averaging::Macro);
  CHECK(macro.accuracy == doctest::Approx(100.0));
  CHECK(macro.precision == doctest::Approx(50.0));  // (0 + 100) / 2
  CHECK(macro.zero_division);

  CHECK_THROWS_AS(metrics(Confusion{}, Averaging::Macro), Error);
}

TEST_CASE("BinaryPositive f1 is the harmonic mean of precision and recall") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Confusion c;
    c.tp = rng() % 20;
    c.fp = rng() % 20;
    c.fn = rng() % 20;
    c.tn = rng() % 20;
    if (c.total() == 0) continue;
    const MetricsRow row = metrics(c, Averaging::BinaryPositive);
    if (row.precision + row.recall > 0.0) {
      const double harmonic = 2.0 * row.precision * row.recall / (row.precision + row.recall);
      CHECK(row.f1 == doctest::Approx(harmonic).epsilon(1e-9));
    } else {
      CHECK(row.f1 == 0.0);
    }
  }
}

TEST_CASE("class swap keeps Macro metrics and swaps the BinaryPositive role") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    std::vector<LabelValue> pred, ref, pred_swapped, ref_swapped;
    for (std::size_t i = 0; i < n; ++i) {
      pred.push_back((rng() & 1u) ? O : N);
      ref.push_back((rng() & 1u) ? O : N);
      pred_swapped.push_back(pred.back() == O ? N : O);
      ref_swapped.push_back(ref.back() == O ? N : O);
    }
    const MetricsRow macro = metrics(confusion(pred, ref), Averaging::Macro);
    const MetricsRow macro_swapped =
        metrics(confusion(pred_swapped, ref_swapped), Averaging::Macro);
    CHECK(macro.accuracy == doctest::Approx(macro_swapped.accuracy).epsilon(1e-12));
    CHECK(macro.precision == doctest::Approx(macro_swapped.precision).epsilon(1e-12));
    CHECK(macro.recall == doctest::Approx(macro_swapped.recall).epsilon(1e-12));
    CHECK(macro.f1 == doctest::Approx(macro_swapped.f1).epsilon(1e-12));

    // After swapping both vectors, the BinaryPositive row reports what used
    // to be the NonOffensive class.
    const Confusion c = confusion(pred, ref);
    const Confusion swapped = confusion(pred_swapped, ref_swapped);
    CHECK(swapped.tp == c.tn);
    CHECK(swapped.fp == c.fn);
    CHECK(swapped.fn == c.fp);
    CHECK(swapped.tn == c.tp);
  }
}

TEST_CASE("accuracy is identical under both averaging modes") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    Confusion c;
    c.tp = rng() % 10;
    c.fp = rng() % 10;
    c.fn = rng() % 10;
    c.tn = rng() % 10;
    if (c.total() == 0) c.tp = 1;
    CHECK(metrics(c, Averaging::Macro).accuracy ==
          metrics(c, Averaging::BinaryPositive).accuracy);
  }
}
