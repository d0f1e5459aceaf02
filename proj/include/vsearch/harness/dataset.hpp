#ifndef VSEARCH_HARNESS_DATASET_HPP
#define VSEARCH_HARNESS_DATASET_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vsearch/grid.hpp"
#include "vsearch/harness/config.hpp"
#include "vsearch/priors.hpp"

namespace vsearch::harness {

struct StimulusEntry {
  std::string image_id;
  std::filesystem::path image_path;  // empty when not supplied
  TargetRegion target;
  PixelPoint initial_fixation_px;
  std::filesystem::path target_patch_path;  // empty when not supplied
  std::map<std::string, std::filesystem::path> saliency_paths;
};

struct StimulusManifest {
  int image_width = 0;
  int image_height = 0;
  std::vector<StimulusEntry> entries;

  const StimulusEntry* find(const std::string& image_id) const;
};

/// One human trial after clamping, gridding and collapsing.
struct HumanTrial {
  std::string subject_id;
  std::string image_id;
  int max_saccades = 0;
  /// Clamped gaze positions in fixation order (rank = index + 1).
  std::vector<PixelPoint> fixations_px;
  Scanpath scanpath;
  bool found_flag = false;
  /// Recomputed from the raw coordinates; authoritative.
  bool found = false;
};

struct LoadReport {
  std::vector<std::string> clamped;
  std::vector<std::string> found_mismatches;
};

struct Dataset {
  GridConfig grid;
  StimulusManifest manifest;
  std::vector<HumanTrial> trials;
  LoadReport report;

  std::vector<std::string> subjects() const;
  std::vector<const HumanTrial*> trials_for_image(const std::string& image_id) const;
};

/// Parses the manifest; relative paths resolve against its directory.
/// Checks referenced files exist and the start does not hit the target.
StimulusManifest load_manifest(const std::filesystem::path& path, int cell_size);

/// Full validation: manifest, scanpath file and image/saliency dimensions.
Dataset load_dataset(const std::filesystem::path& manifest_path, const std::filesystem::path& scanpath_path,
                     const RunConfig& cfg);
/// Manifest only (no human data).
Dataset load_stimuli(const std::filesystem::path& manifest_path, const RunConfig& cfg);

Trial model_trial(const StimulusEntry& e, const GridConfig& grid, int budget);

/// Third-fixation (or cfg.human_prior_rank) pixels of every subject on the image.
std::vector<PixelPoint> fixations_of_rank(const Dataset& d, const std::string& image_id, int rank);

/// Prior named by cfg.prior for one image.
PriorGrid<double> build_prior(const Dataset& d, const StimulusEntry& e, const RunConfig& cfg);
/// Pixel-level map for saliency evaluation: a manifest key or flat | center | human.
SaliencyMap<double> build_saliency_map(const Dataset& d, const StimulusEntry& e, const std::string& name,
                                       const RunConfig& cfg);

} // namespace vsearch::harness

#endif // VSEARCH_HARNESS_DATASET_HPP
