#include "vsearch/searchers.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "vsearch/errors.hpp"
#include "vsearch/random.hpp"

namespace vsearch {

std::string to_string(Policy p) {
  switch (p) {
    case Policy::ibs: return "ibs";
    case Policy::cibs: return "cibs";
    case Policy::greedy: return "greedy";
    case Policy::saliency_ior: return "saliency_ior";
  }
  return "unknown";
}

Policy parse_policy(const std::string& name) {
  if (name == "ibs") return Policy::ibs;
  if (name == "cibs") return Policy::cibs;
  if (name == "greedy") return Policy::greedy;
  if (name == "saliency_ior" || name == "saliency") return Policy::saliency_ior;
  throw DomainError("unknown policy '" + name + "' (expected ibs, cibs, greedy or saliency_ior)");
}

void SearchConfig::validate() const {
  if (max_saccades < 1) throw DomainError("SearchConfig: max_saccades must be >= 1");
  if (mc_samples < 1) throw DomainError("SearchConfig: mc_samples must be >= 1");
  if (ior_radius < 0) throw DomainError("SearchConfig: ior_radius must be >= 0");
  template_params.validate();
  visibility.validate();
}

NoiseBank draw_noise_bank(int samples, int cells, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  NoiseBank z(samples, cells);
  for (Eigen::Index k = 0; k < z.size(); ++k) z.data()[k] = n(rng);
  return z;
}

std::optional<Cell> argmax_cell(const GridMatrixd& scores, const std::vector<bool>& allowed) {
  std::optional<Cell> best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < scores.rows(); ++r)
    for (int c = 0; c < scores.cols(); ++c) {
      if (!allowed[std::size_t(r * scores.cols() + c)]) continue;
      const double s = scores(r, c);
      if (!best || s > best_score + 1e-12 * std::abs(best_score)) {
        best = Cell{c, r};
        best_score = s;
      }
    }
  return best;
}

namespace {

const GridMatrixd& checked_correlation(const SearchContext& ctx) {
  if (ctx.kind == ResponseKind::cibs &&
      (ctx.correlation.rows() != ctx.grid->rows() || ctx.correlation.cols() != ctx.grid->cols()))
    throw DomainError("cIBS search requires a correlation map conforming to the grid");
  return ctx.correlation;
}

/// Terms of the hypothetical log-weight update for fixation k:
/// after = offset + scale * z, plus `target_gain` at the hypothesized target.
struct HypotheticalUpdate {
  Vectord offset;
  Vectord scale;
  Vectord target_gain;
};

HypotheticalUpdate hypothetical_update(Cell k, const PosteriorState<double>& state, const SearchContext& ctx) {
  const GridMatrixd vis = ctx.visibility->field(k);
  const ResponseField<double> f = response_field(ctx.kind, vis, checked_correlation(ctx), ctx.template_params);
  const auto v2 = vis.array().square();
  HypotheticalUpdate u;
  u.offset = (state.log_weights().array() + v2 * f.absent_mean.array()).reshaped<Eigen::RowMajor>();
  u.scale = (v2 * f.std.array()).reshaped<Eigen::RowMajor>();
  u.target_gain = (v2 * f.target_shift.array()).reshaped<Eigen::RowMajor>();
  return u;
}

/// Largest value, its index, and the largest value at any other index.
struct TopTwo {
  double first = -std::numeric_limits<double>::infinity();
  double second = -std::numeric_limits<double>::infinity();
  Eigen::Index first_index = -1;
};

inline TopTwo top_two(const double* x, Eigen::Index n) {
  TopTwo t;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = x[j];
    if (v > t.first) {
      t.second = t.first;
      t.first = v;
      t.first_index = j;
    } else if (v > t.second) {
      t.second = v;
    }
  }
  return t;
}

} // namespace

double p_correct(Cell i, Cell k_next, const PosteriorState<double>& state, const SearchContext& ctx) {
  const GridConfig& grid = *ctx.grid;
  if (!in_grid(i, grid) || !in_grid(k_next, grid)) throw DomainError("p_correct: cell outside the grid");
  const int n = grid.cell_count();
  if (n == 1) return 1.0;
  const HypotheticalUpdate u = hypothetical_update(k_next, state, ctx);
  const NoiseBank z = draw_noise_bank(ctx.mc_samples, n, ctx.mc_seed);
  const Eigen::Index ti = linear_index(i, grid);
  Vectord after(n);
  int correct = 0;
  for (int s = 0; s < ctx.mc_samples; ++s) {
    after = u.offset.array() + u.scale.array() * z.row(s).transpose().array();
    after(ti) += u.target_gain(ti);
    const TopTwo t = top_two(after.data(), n);
    if (t.first_index == ti && t.second < t.first) ++correct;
  }
  return double(correct) / double(ctx.mc_samples);
}

GridMatrixd expected_correct_map(const PosteriorState<double>& state, const SearchContext& ctx) {
  const GridConfig& grid = *ctx.grid;
  const int n = grid.cell_count();
  const GridMatrixd post = state.probabilities();
  const double* p = post.data();
  GridMatrixd out(grid.rows(), grid.cols());
  if (n == 1) {
    out.setConstant(1.0);
    return out;
  }
  const NoiseBank z = draw_noise_bank(ctx.mc_samples, n, ctx.mc_seed);
  Vectord base(n);
  for (int k = 0; k < n; ++k) {
    const Cell kc = cell_at(k, grid);
    if (ctx.current && *ctx.current == kc) {
      out(kc.row, kc.col) = -std::numeric_limits<double>::infinity();
      continue;
    }
    const HypotheticalUpdate u = hypothetical_update(kc, state, ctx);
    const double* off = u.offset.data();
    const double* sc = u.scale.data();
    const double* gain = u.target_gain.data();
    double acc = 0.0;
    for (int s = 0; s < ctx.mc_samples; ++s) {
      const double* zs = z.data() + Eigen::Index(s) * n;
      double* b = base.data();
      for (int j = 0; j < n; ++j) b[j] = off[j] + sc[j] * zs[j];
      const TopTwo t = top_two(b, n);
      // With the target at i, the competitors are every j != i at their
      // target-absent values; i wins iff it strictly beats the best of them.
      double mass = 0.0;
      for (int j = 0; j < n; ++j)
        if (b[j] + gain[j] > t.first) mass += p[j];
      const Eigen::Index m = t.first_index;
      if (b[m] + gain[m] > t.first) mass -= p[m];
      if (b[m] + gain[m] > t.second) mass += p[m];
      acc += mass;
    }
    out(kc.row, kc.col) = acc / double(ctx.mc_samples);
  }
  return out;
}

namespace {

std::vector<bool> all_but_current(const SearchContext& ctx) {
  std::vector<bool> allowed(std::size_t(ctx.grid->cell_count()), true);
  if (ctx.current && ctx.grid->cell_count() > 1) allowed[std::size_t(linear_index(*ctx.current, *ctx.grid))] = false;
  return allowed;
}

} // namespace

Cell next_fixation_ibs(const PosteriorState<double>& state, const SearchContext& ctx) {
  const GridMatrixd scores = expected_correct_map(state, ctx);
  return *argmax_cell(scores, all_but_current(ctx));
}

Cell next_fixation_greedy(const PosteriorState<double>& state, const SearchContext& ctx) {
  const GridMatrixd post = state.probabilities();
  // score(k) = sum_i p_i d'(i, k); the visibility field is separable.
  const GridMatrixd scores =
      ctx.visibility->row_profile().transpose() * post * ctx.visibility->col_profile().transpose();
  return *argmax_cell(scores, all_but_current(ctx));
}

Cell next_fixation_saliency(const std::vector<Cell>& visited, const SearchContext& ctx, bool* fallback) {
  const GridConfig& grid = *ctx.grid;
  std::vector<bool> allowed(std::size_t(grid.cell_count()), true);
  const int rad = ctx.ior_radius;
  for (const Cell& v : visited)
    for (int r = std::max(0, v.row - rad); r <= std::min(grid.rows() - 1, v.row + rad); ++r)
      for (int c = std::max(0, v.col - rad); c <= std::min(grid.cols() - 1, v.col + rad); ++c)
        allowed[std::size_t(r * grid.cols() + c)] = false;
  if (fallback) *fallback = false;
  if (auto best = argmax_cell(ctx.prior->p(), allowed)) return *best;
  if (fallback) *fallback = true;
  return *argmax_cell(ctx.prior->p(), all_but_current(ctx));
}

SearchResult run_search(const Trial& trial, const SearchInputs& inputs, const SearchConfig& cfg,
                        const GridConfig& grid) {
  cfg.validate();
  validate_trial(trial, grid);
  if (!inputs.prior || !inputs.prior->conforms(grid)) throw DomainError("run_search: prior does not match the grid");

  const VisibilityModel<double> visibility(grid, cfg.visibility);
  SearchContext ctx;
  ctx.grid = &grid;
  ctx.visibility = &visibility;
  ctx.kind = cfg.policy == Policy::cibs ? ResponseKind::cibs : ResponseKind::ibs;
  ctx.template_params = cfg.template_params;
  ctx.prior = inputs.prior;
  ctx.mc_samples = cfg.mc_samples;
  ctx.ior_radius = cfg.ior_radius;
  if (ctx.kind == ResponseKind::cibs) {
    ctx.correlation = inputs.correlation;
    checked_correlation(ctx);
  }

  const Cell target = target_cell(trial.target, grid);
  PosteriorState<double> state(*inputs.prior);
  std::vector<Cell> path{trial.initial_fixation};
  std::vector<std::string> warnings;
  bool found = false;

  for (int step = 0;; ++step) {
    const Cell current = path.back();
    if (target_hit(current, trial.target, grid)) {
      found = true;
      break;
    }
    if (step == trial.max_saccades) break;

    Cell next;
    ctx.current = current;
    if (cfg.policy == Policy::saliency_ior) {
      bool fallback = false;
      next = next_fixation_saliency(path, ctx, &fallback);
      if (fallback)
        warnings.push_back("step " + std::to_string(step) + ": every cell suppressed, used raw prior argmax");
    } else {
      const GridMatrixd vis = visibility.field(current);
      const ResponseField<double> field = response_field(ctx.kind, vis, ctx.correlation, cfg.template_params);
      Rng obs_rng = make_rng(derive_seed(cfg.seed, trial.image_id, StreamPurpose::observation, std::uint64_t(step)));
      state.update(current, observe_field(field, target, cfg.template_params, obs_rng), vis);
      if (cfg.on_posterior) cfg.on_posterior(step, current, state.probabilities());
      ctx.mc_seed = derive_seed(cfg.seed, trial.image_id, StreamPurpose::mc_estimate, std::uint64_t(step));
      next = cfg.policy == Policy::greedy ? next_fixation_greedy(state, ctx) : next_fixation_ibs(state, ctx);
    }
    if (next == current) break;  // single-cell grid: nowhere to go
    path.push_back(next);
  }

  SearchResult result{Scanpath(path, ScanpathOrigin::model), found, int(path.size()) - 1, std::move(warnings)};
  return result;
}

} // namespace vsearch
