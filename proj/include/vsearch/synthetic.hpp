#ifndef VSEARCH_SYNTHETIC_HPP
#define VSEARCH_SYNTHETIC_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vsearch/grid.hpp"
#include "vsearch/priors.hpp"
#include "vsearch/types.hpp"

namespace vsearch {

struct SceneOptions {
  int width = 1024;
  int height = 768;
  int cell_size = 32;
  int target_size = 72;
  /// Salient blobs unrelated to the target.
  int distractor_blobs = 22;
  /// A broad blob placed `target_blob_offset` cells away from the target.
  bool informative_prior = true;
  int target_blob_offset = 2;
  double target_blob_sigma = 96;
  double target_blob_min = 0.8;
  double target_blob_max = 1.0;
  double distractor_sigma = 40;
  /// Minimum Chebyshev distance (cells) between start and target.
  int min_start_distance = 5;
};

/// Smooth textured background with a high-contrast target patch planted so
/// that the target region is centered on a cell center.
struct SyntheticScene {
  std::string image_id;
  GridConfig grid;
  GridMatrixd image;
  GridMatrixd patch;
  TargetRegion target;
  Cell initial_fixation;
  SaliencyMap<double> saliency;
  /// Peaks of the distractor blobs, most salient first.
  std::vector<PixelPoint> blob_centers;
};

SyntheticScene make_synthetic_scene(const std::string& image_id, std::uint64_t seed, const SceneOptions& opts = {});

struct HumanOptions {
  int subjects = 6;
  std::vector<int> budgets{2, 4, 8, 12};
  /// Per-saccade probability of heading to the target.
  double target_rate = 0.3;
  /// Gaze noise in pixels around the chosen location.
  double jitter_px = 8;
};

/// One row of the human scanpath file.
struct HumanFixationRow {
  std::string subject_id;
  std::string image_id;
  int fixation_index = 1;
  int x = 0;
  int y = 0;
  int max_saccades = 12;
  bool found = false;
};

/// Simulated observers: each saccade goes to the target with probability
/// target_rate, otherwise to one of the salient blobs. Budgets are assigned
/// per subject by shuffling a balanced schedule over the scenes.
std::vector<HumanFixationRow> make_synthetic_humans(const std::vector<SyntheticScene>& scenes, std::uint64_t seed,
                                                    const HumanOptions& opts = {});

/// Writes manifest.json, images/, targets/, saliency/ and scanpaths.csv.
void write_synthetic_dataset(const std::filesystem::path& dir, const std::vector<SyntheticScene>& scenes,
                             const std::vector<HumanFixationRow>& humans);

} // namespace vsearch

#endif // VSEARCH_SYNTHETIC_HPP
