#ifndef VSEARCH_HARNESS_SALIENCY_EVAL_HPP
#define VSEARCH_HARNESS_SALIENCY_EVAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "vsearch/harness/config.hpp"
#include "vsearch/harness/dataset.hpp"

namespace vsearch::harness {

/// Inclusive range of fixation ranks (rank 1 = the forced start).
struct RankBucket {
  std::string label;
  int first = 1;
  int last = 1;
  bool contains(int rank) const noexcept { return rank >= first && rank <= last; }
};

/// {1, 2, 3, 4, 5-8, 9-12}
const std::vector<RankBucket>& default_rank_buckets();
/// "3", "5-8", or one of the default labels.
RankBucket parse_rank_bucket(const std::string& text);

struct AucRow {
  std::string map;
  std::string bucket;
  std::string variant;
  double auc = 0;
  int images = 0;
  int positives = 0;
};

/// AUC per (map, rank bucket, variant). Per-image AUCs are averaged over the
/// images with at least one fixation in the bucket, unless cfg.pooled_auc.
/// Shuffled negatives are the same-bucket fixations on the other images.
std::vector<AucRow> eval_saliency(const Dataset& d, const RunConfig& cfg, const std::vector<RankBucket>& buckets);

std::string auc_table_csv(const std::vector<AucRow>& rows);

} // namespace vsearch::harness

#endif // VSEARCH_HARNESS_SALIENCY_EVAL_HPP
