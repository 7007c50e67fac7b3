#include "judgekit/aggregate.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "internal/strings.hpp"

namespace judgekit {

std::string to_string(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::PreferNonOffensive: return "prefer-non-offensive";
    case TiePolicy::PreferOffensive: return "prefer-offensive";
    case TiePolicy::Error: return "error";
  }
  throw Error("invalid TiePolicy value");
}

TiePolicy tie_policy_from_string(const std::string& token) {
  const std::string t = internal::to_lower(internal::trim(token));
  if (t == "prefer-non-offensive") return TiePolicy::PreferNonOffensive;
  if (t == "prefer-offensive") return TiePolicy::PreferOffensive;
  if (t == "error") return TiePolicy::Error;
  throw Error("unknown tie policy \"" + token + "\"");
}

LabelValue majority_vote(std::span<const LabelValue> labels, TiePolicy policy) {
  if (labels.empty()) throw Error("majority_vote: empty label list");
  std::size_t offensive = 0;
  for (LabelValue v : labels) {
    if (v == LabelValue::Offensive) ++offensive;
  }
  const std::size_t non_offensive = labels.size() - offensive;
  if (offensive > non_offensive) return LabelValue::Offensive;
  if (non_offensive > offensive) return LabelValue::NonOffensive;
  switch (policy) {
    case TiePolicy::PreferNonOffensive: return LabelValue::NonOffensive;
    case TiePolicy::PreferOffensive: return LabelValue::Offensive;
    case TiePolicy::Error: throw Error("majority_vote: tie with policy error");
  }
  throw Error("invalid TiePolicy value");
}

PejGrid PejGrid::make(std::size_t n_models, std::vector<PromptVariant> variants,
                      std::vector<LabelValue> values) {
  PejGrid grid;
  grid.n_models = n_models;
  grid.variants = variants.empty()
                      ? all_prompt_variants()
                      : std::move(variants);
  grid.values = std::move(values);
  return grid;
}

LabelValue PejGrid::at(std::size_t model, std::size_t variant_index) const {
  if (model >= n_models || variant_index >= variants.size()) {
    throw Error("PejGrid::at: index out of range");
  }
  return values[model * variants.size() + variant_index];
}

void PejGrid::validate() const {
  if (n_models == 0) throw Error("PejGrid: needs at least one model");
  if (variants.empty()) throw Error("PejGrid: needs at least one variant");
  std::set<PromptVariant> distinct(variants.begin(), variants.end());
  if (distinct.size() != variants.size()) throw Error("PejGrid: duplicate variant");
  if (values.size() != n_models * variants.size()) {
    throw Error("PejGrid: incomplete grid (" + std::to_string(values.size()) + " of " +
                std::to_string(n_models * variants.size()) + " cells)");
  }
}

PejResult pej_aggregate(const PejGrid& grid, TiePolicy policy) {
  grid.validate();
  PejResult result;
  std::vector<LabelValue> variant_labels;
  variant_labels.reserve(grid.variants.size());
  for (std::size_t v = 0; v < grid.variants.size(); ++v) {
    std::vector<LabelValue> column;
    column.reserve(grid.n_models);
    for (std::size_t m = 0; m < grid.n_models; ++m) column.push_back(grid.at(m, v));
    const LabelValue label = majority_vote(column, policy);
    result.per_variant[grid.variants[v]] = label;
    variant_labels.push_back(label);
  }
  result.final_label = majority_vote(variant_labels, policy);
  return result;
}

LabelValue ground_trust(LabelValue sej, LabelValue pej, LabelValue mrj, TiePolicy policy) {
  const LabelValue labels[] = {sej, pej, mrj};
  return majority_vote(labels, policy);
}

}  // namespace judgekit
