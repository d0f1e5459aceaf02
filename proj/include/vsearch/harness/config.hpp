#ifndef VSEARCH_HARNESS_CONFIG_HPP
#define VSEARCH_HARNESS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "vsearch/searchers.hpp"

namespace vsearch::harness {

/// One experiment. Loaded from a JSON document; keys absent from the document
/// keep their defaults, and command-line flags override both.
struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path scanpaths;
  std::filesystem::path output_dir = "out";

  int cell_size = 32;
  VisibilityParams<double> visibility{};
  TemplateParams<double> template_params{};
  Policy policy = Policy::cibs;
  /// flat | center | noise | human | <saliency key from the manifest>
  std::string prior = "flat";
  std::vector<int> budgets{2, 4, 8, 12};
  int mc_samples = 64;
  std::uint64_t seed = 0;
  int ior_radius = 1;
  /// Center-bias sigma in pixels; 0 selects a quarter of the smaller image side.
  double center_sigma_px = 0;
  double human_kernel_sigma_px = 25;
  /// Fixation rank used to build the human-density prior.
  int human_prior_rank = 3;
  int threads = 1;
  bool posterior_snapshots = false;

  /// Saliency evaluation.
  std::vector<std::string> saliency_maps;
  std::vector<std::string> auc_variants{"paper_main", "judd", "borji", "shuffled"};
  bool pooled_auc = false;

  /// Label used in reports; defaults to "<policy>+<prior>".
  std::string model_label;

  std::string label() const;
  SearchConfig search_config(int budget) const;
  void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::ordered_json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

} // namespace vsearch::harness

#endif // VSEARCH_HARNESS_CONFIG_HPP
