#ifndef VSEARCH_SEARCHERS_HPP
#define VSEARCH_SEARCHERS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vsearch/grid.hpp"
#include "vsearch/posterior.hpp"
#include "vsearch/priors.hpp"
#include "vsearch/template_response.hpp"
#include "vsearch/types.hpp"
#include "vsearch/visibility.hpp"

namespace vsearch {

enum class Policy { ibs, cibs, greedy, saliency_ior };

std::string to_string(Policy p);
Policy parse_policy(const std::string& name);

struct SearchConfig {
  Policy policy = Policy::cibs;
  int max_saccades = 12;
  int mc_samples = 64;
  std::uint64_t seed = 0;
  TemplateParams<double> template_params{};
  VisibilityParams<double> visibility{};
  /// Chebyshev radius (in cells) suppressed around each visited cell by the saliency policy.
  int ior_radius = 1;
  /// Called after each posterior update with the step, the fixation and the normalized posterior.
  std::function<void(int, Cell, const GridMatrixd&)> on_posterior;

  void validate() const;
};

struct SearchResult {
  Scanpath scanpath;
  bool found = false;
  int saccades_used = 0;
  std::vector<std::string> warnings;
};

/// Standard-normal draws shared by every candidate and hypothesis of one
/// decision (common random numbers): samples x cells, cells in (row, col) order.
using NoiseBank = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
NoiseBank draw_noise_bank(int samples, int cells, std::uint64_t seed);

/// Everything a fixation-selection rule reads besides the posterior.
struct SearchContext {
  const GridConfig* grid = nullptr;
  const VisibilityModel<double>* visibility = nullptr;
  ResponseKind kind = ResponseKind::ibs;
  TemplateParams<double> template_params{};
  /// Correlation map (rows x cols); may be empty for the ibs kind.
  GridMatrixd correlation;
  const PriorGrid<double>* prior = nullptr;
  /// Excluded as the immediate next fixation when set.
  std::optional<Cell> current;
  int mc_samples = 64;
  std::uint64_t mc_seed = 0;
  int ior_radius = 1;
};

/// Lowest (row, col) cell among the maximizers of `scores` over allowed cells;
/// scores within a relative 1e-12 of the best count as tied. Returns nullopt
/// when no cell is allowed.
std::optional<Cell> argmax_cell(const GridMatrixd& scores, const std::vector<bool>& allowed);

/// Monte-Carlo probability that the posterior argmax after fixating k_next
/// would be i, given the target is at i. Ties count as incorrect.
double p_correct(Cell i, Cell k_next, const PosteriorState<double>& state, const SearchContext& ctx);

/// sum_i p_i(T) p(C | i, k) for every candidate k (rows x cols), sharing one
/// noise bank across candidates. Cost O(cells^2 * samples).
GridMatrixd expected_correct_map(const PosteriorState<double>& state, const SearchContext& ctx);

Cell next_fixation_ibs(const PosteriorState<double>& state, const SearchContext& ctx);
Cell next_fixation_greedy(const PosteriorState<double>& state, const SearchContext& ctx);
/// Argmax of the prior with every visited cell and its neighborhood suppressed.
/// Sets `fallback` when everything is suppressed and the raw prior argmax is used.
Cell next_fixation_saliency(const std::vector<Cell>& visited, const SearchContext& ctx, bool* fallback = nullptr);

/// Per-image inputs a search needs besides the trial itself.
struct SearchInputs {
  const PriorGrid<double>* prior = nullptr;
  /// Required by cibs; ignored otherwise.
  GridMatrixd correlation;
};

/// Runs one trial to target fixation or budget exhaustion. All randomness is
/// derived from (cfg.seed, trial.image_id, step), independent of the budget,
/// so a smaller budget yields a prefix of a larger one.
SearchResult run_search(const Trial& trial, const SearchInputs& inputs, const SearchConfig& cfg,
                        const GridConfig& grid);

} // namespace vsearch

#endif // VSEARCH_SEARCHERS_HPP
