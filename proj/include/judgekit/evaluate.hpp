#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "judgekit/corpus.hpp"

namespace judgekit {

// Counts with Offensive as the positive class.
struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
};

Confusion confusion(std::span<const LabelValue> pred, std::span<const LabelValue> ref);

enum class Averaging { Macro, BinaryPositive };

std::string to_string(Averaging averaging);
Averaging averaging_from_string(const std::string& token);

// All values scaled to [0, 100]. Under Macro each metric is the unweighted
// mean of the two per-class values; under BinaryPositive the Offensive class
// is reported and f1 is the harmonic mean of precision and recall.
// zero_division marks any 0/0 cell resolved to 0.
struct MetricsRow {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Averaging averaging = Averaging::Macro;
  bool zero_division = false;
};

MetricsRow metrics(const Confusion& c, Averaging averaging);

}  // namespace judgekit
