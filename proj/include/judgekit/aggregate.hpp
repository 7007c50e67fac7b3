#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "judgekit/corpus.hpp"
#include "judgekit/prompts.hpp"

namespace judgekit {

// Consulted only when the vote counts are exactly equal.
enum class TiePolicy { PreferNonOffensive, PreferOffensive, Error };

std::string to_string(TiePolicy policy);
TiePolicy tie_policy_from_string(const std::string& token);

// Strict majority over a nonempty label list; ties resolve via the policy
// (or throw under TiePolicy::Error).
LabelValue majority_vote(std::span<const LabelValue> labels, TiePolicy policy);

// One comment's complete models x variants label grid. The variant axis is
// ordered Vanilla, Defn, Summ, FewShots, DSF by default; both dimensions are
// configurable.
struct PejGrid {
  std::size_t n_models = 0;
  std::vector<PromptVariant> variants;
  std::vector<LabelValue> values;  // row-major: models x variants

  static PejGrid make(std::size_t n_models,
                      std::vector<PromptVariant> variants = {},
                      std::vector<LabelValue> values = {});
  LabelValue at(std::size_t model, std::size_t variant_index) const;
  void validate() const;
};

struct PejResult {
  std::map<PromptVariant, LabelValue> per_variant;
  LabelValue final_label = LabelValue::NonOffensive;
};

// Two-stage vote: within each variant across models, then across the
// per-variant labels. Both stages are returned.
PejResult pej_aggregate(const PejGrid& grid, TiePolicy policy);

// Majority over the three judgment-level labels for one item. A tie is
// impossible for three binary inputs; the policy is kept for arity
// generalization.
LabelValue ground_trust(LabelValue sej, LabelValue pej, LabelValue mrj,
                        TiePolicy policy = TiePolicy::PreferNonOffensive);

}  // namespace judgekit
