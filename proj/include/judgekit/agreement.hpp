#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "judgekit/corpus.hpp"

namespace judgekit {

// Pairwise label overlap: fraction of aligned positions with equal labels.
struct OverlapResult {
  std::string judge_a;
  std::string judge_b;
  double ratio = 0.0;  // in [0, 1]
  std::size_t n = 0;
};

double overlap_ratio(std::span<const LabelValue> a, std::span<const LabelValue> b);

struct AlphaResult {
  double score = 0.0;
  // True when only one class was observed with perfect agreement; the score
  // is 1 by convention in that case.
  bool degenerate = false;
};

// Nominal-data Krippendorff's alpha over a complete matrix (N >= 2 judges).
// Built from the coincidence matrix: per item u with m ratings,
// o_ck += (n_uc*n_uk - d_ck*n_uc)/(m-1); D_o = (1/n) sum_{c!=k} o_ck;
// D_e = (1/(n(n-1))) sum_{c!=k} n_c*n_k; alpha = 1 - D_o/D_e. Scores are
// computed in full precision and multiplied by 100 only when scale_by_100 is
// set.
AlphaResult krippendorff_alpha(const LabelMatrix& matrix, bool scale_by_100);

// Leave-one-out agreement deltas: delta[k] = score_total - score_without_k.
struct AgreementReport {
  double score_total = 0.0;
  std::map<std::string, double> per_judge_delta;
  std::size_t n_judges = 0;
  std::size_t n_items = 0;
};

// Requires N >= 3 so that each reduced matrix keeps at least two judges.
AgreementReport loo_deltas(const LabelMatrix& matrix, bool scale_by_100);

// Partitions matrix columns by the topic of each item's comment. Only topics
// that actually occur appear in the result; the partitions reassemble the
// original column set.
std::map<Topic, LabelMatrix> group_by_topic(const LabelMatrix& matrix,
                                            const std::vector<Comment>& comments);

}  // namespace judgekit
