#ifndef VSEARCH_METRICS_HPP
#define VSEARCH_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vsearch/grid.hpp"
#include "vsearch/priors.hpp"

namespace vsearch {

// ---- performance curves -------------------------------------------------

/// Proportion of targets found per saccade budget, budgets ascending.
struct PerformanceCurve {
  std::map<int, double> proportion;
  /// Per-budget standard deviation across participants (human curves only).
  std::map<int, double> std_dev;
};

/// Mean found-rate per budget. Throws on an empty group.
PerformanceCurve performance_curve(const std::map<int, std::vector<bool>>& found_by_budget);

/// Human curve: per-budget mean and population std of the per-participant
/// found-rates. Participants with no trial at a budget are left out there.
PerformanceCurve human_performance_curve(const std::vector<std::map<int, std::vector<bool>>>& per_participant);

/// sum over budgets of |P_human(N) - P_model(N)| / (4 sigma_N^2).
double weighted_distance(const PerformanceCurve& human, const PerformanceCurve& model);

// ---- found-vector agreement ---------------------------------------------

using FoundVector = std::vector<bool>;

/// Model found-vector under one participant's budget schedule:
/// found(i) iff saccades_needed(i) <= schedule(i); nullopt means never found.
FoundVector targets_found_by_model(std::span<const std::optional<int>> saccades_needed,
                                   std::span<const int> schedule);

/// |x AND y| / |x OR y|; 1 when both are all-false.
double jaccard(const FoundVector& x, const FoundVector& y);
/// 1 - mean |x - y|.
double mean_agreement(const FoundVector& x, const FoundVector& y);

// ---- scanpath shape -----------------------------------------------------

/// Saccade-vector alignment distance in [0, 1]: consecutive cell-center
/// differences are aligned by dynamic programming (match cost |u - v|, gap
/// cost |u|), and the minimal total cost is divided by the longer sequence
/// length and by the image diagonal.
double scanpath_dissimilarity(const Scanpath& a, const Scanpath& b, const GridConfig& cfg);

struct DissimilarityRecord {
  std::string image_id;
  double bhsd = 0;
  double hmsd = 0;
  int humans = 0;
};

struct DissimilarityInput {
  std::string image_id;
  /// Correct human trials only.
  std::vector<Scanpath> humans;
  Scanpath model;
};

struct DissimilarityResult {
  std::vector<DissimilarityRecord> records;
  /// Images left out, with the reason.
  std::vector<std::pair<std::string, std::string>> skipped;
};

/// bhSD = mean over unordered human pairs, hmSD = mean of human-vs-model.
/// Scanpaths with a single fixation are dropped; images left with fewer than
/// two humans, or whose model path has no saccade, are skipped and reported.
DissimilarityResult dissimilarity_records(const std::vector<DissimilarityInput>& images, const GridConfig& cfg);

// ---- correlation / regression -------------------------------------------

/// Spearman rank correlation with average ranks for ties; nullopt when
/// either input is constant. Throws on length mismatch or n < 3.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);
/// Least-squares slope through the origin, sum(x y) / sum(x^2).
double regression_slope_null_intercept(std::span<const double> x, std::span<const double> y);

// ---- ROC / AUC ------------------------------------------------------------

enum class AucVariant { paper_main, judd, borji, shuffled };
std::string to_string(AucVariant v);
AucVariant parse_auc_variant(const std::string& name);

struct RocPoint {
  double fpr;
  double tpr;
};

/// ROC curve swept over thresholds (descending), from (0,0) to (1,1). A
/// sample counts as detected at threshold t when its score is >= t.
std::vector<RocPoint> roc_curve(std::span<const double> positives, std::span<const double> negatives,
                                std::span<const double> thresholds);
double trapezoid_area(const std::vector<RocPoint>& curve);

/// Trapezoidal ROC area over the sorted unique values of both samples.
double auc_from_scores(std::span<const double> positives, std::span<const double> negatives);

struct AucOptions {
  /// Fixations from other images (shuffled variant).
  std::span<const PixelPoint> other_fixations{};
  std::uint64_t seed = 0;
  int borji_repeats = 10;
};

/// Scores the ROC is built from: positives, one or more negative sets (AUC is
/// averaged over sets), and whether thresholds are taken at positives only.
struct AucSamples {
  std::vector<double> positives;
  std::vector<std::vector<double>> negative_sets;
  bool thresholds_at_positives = false;
};

AucSamples collect_auc_samples(const SaliencyMap<double>& map, std::span<const PixelPoint> positives, AucVariant variant,
                               const AucOptions& opts = {});
double auc_from_samples(const AucSamples& samples);
/// Concatenates positives and the matching negative sets (pooled aggregation).
AucSamples pool_auc_samples(const std::vector<AucSamples>& parts);

/// Saliency map as a pixel classifier of fixated locations.
/// paper_main: thresholds at every unique value, negatives = non-fixated pixels.
/// judd: same negatives, thresholds at fixated values only.
/// borji: negatives = uniform sample of non-fixated pixels, size #positives, averaged over repeats.
/// shuffled: negatives = the map at fixations from other images, minus pixels fixated on this one.
double roc_auc(const SaliencyMap<double>& map, std::span<const PixelPoint> positives, AucVariant variant,
               const AucOptions& opts = {});

} // namespace vsearch

#endif // VSEARCH_METRICS_HPP
