#include "judgekit/evaluate.hpp"

#include "internal/strings.hpp"

namespace judgekit {

std::string to_string(Averaging averaging) {
  return averaging == Averaging::Macro ? "macro" : "binary-positive";
}

Averaging averaging_from_string(const std::string& token) {
  const std::string t = internal::to_lower(internal::trim(token));
  if (t == "macro") return Averaging::Macro;
  if (t == "binary-positive") return Averaging::BinaryPositive;
  throw Error("unknown averaging mode \"" + token + "\"");
}

Confusion confusion(std::span<const LabelValue> pred, std::span<const LabelValue> ref) {
  if (pred.size() != ref.size()) throw Error("confusion: vectors differ in length");
  if (pred.empty()) throw Error("confusion: empty vectors");
  Confusion c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == LabelValue::Offensive;
    const bool r = ref[i] == LabelValue::Offensive;
    if (p && r) ++c.tp;
    else if (p && !r) ++c.fp;
    else if (!p && r) ++c.fn;
    else ++c.tn;
  }
  return c;
}

namespace {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

ClassScores class_scores(double tp, double fp, double fn, bool& zero_division) {
  ClassScores s;
  if (tp + fp > 0.0) s.precision = tp / (tp + fp);
  else zero_division = true;
  if (tp + fn > 0.0) s.recall = tp / (tp + fn);
  else zero_division = true;
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  } else {
    zero_division = true;
  }
  return s;
}

}  // namespace

MetricsRow metrics(const Confusion& c, Averaging averaging) {
  const std::int64_t total = c.total();
  if (total <= 0) throw Error("metrics: empty confusion");

  MetricsRow row;
  row.averaging = averaging;
  // Same expression shape as 100 * overlap_ratio so the cross-module identity
  // holds bit-for-bit.
  row.accuracy =
      100.0 * (static_cast<double>(c.tp + c.tn) / static_cast<double>(total));

  bool zero_division = false;
  const ClassScores offensive = class_scores(
      static_cast<double>(c.tp), static_cast<double>(c.fp), static_cast<double>(c.fn),
      zero_division);
  const ClassScores non_offensive = class_scores(
      static_cast<double>(c.tn), static_cast<double>(c.fn), static_cast<double>(c.fp),
      zero_division);

  if (averaging == Averaging::Macro) {
    row.precision = 100.0 * (offensive.precision + non_offensive.precision) / 2.0;
    row.recall = 100.0 * (offensive.recall + non_offensive.recall) / 2.0;
    row.f1 = 100.0 * (offensive.f1 + non_offensive.f1) / 2.0;
  } else {
    row.precision = 100.0 * offensive.precision;
    row.recall = 100.0 * offensive.recall;
    row.f1 = 100.0 * offensive.f1;
  }
  row.zero_division = zero_division;
  return row;
}

}  // namespace judgekit
