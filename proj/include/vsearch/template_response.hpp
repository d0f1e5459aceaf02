#ifndef VSEARCH_TEMPLATE_RESPONSE_HPP
#define VSEARCH_TEMPLATE_RESPONSE_HPP

#include <algorithm>
#include <cmath>
#include <random>

#include "vsearch/errors.hpp"
#include "vsearch/grid.hpp"
#include "vsearch/random.hpp"
#include "vsearch/types.hpp"

namespace vsearch {

enum class ResponseKind { ibs, cibs };
enum class ResponseMode { deterministic, sampled };

template <typename Scalar = double>
struct TemplateParams {
  Scalar a = Scalar(3);
  Scalar b = Scalar(4);
  ResponseMode mode = ResponseMode::deterministic;

  void validate() const {
    if (!(a >= 0) || !(b > 0)) throw DomainError("TemplateParams: require a >= 0 and b > 0");
  }
};

template <typename Scalar = double>
struct ResponseStats {
  Scalar mean;
  Scalar std;
};

/// Normalized cross-correlation between the target patch and the window
/// centered on each cell center, scaled by 0.5 into [-0.5, 0.5]. Windows that
/// run past the border are cropped together with the matching patch pixels.
/// A zero-variance window (or patch crop) correlates as 0.
template <typename Scalar>
GridMatrix<Scalar> correlation_map(const GridMatrix<Scalar>& image, const GridMatrix<Scalar>& patch,
                                   const GridConfig& cfg) {
  if (image.rows() != cfg.image_height() || image.cols() != cfg.image_width())
    throw DomainError("correlation_map: image dimensions do not match the grid");
  if (patch.size() == 0 || patch.rows() > image.rows() || patch.cols() > image.cols())
    throw DomainError("correlation_map: patch must be non-empty and no larger than the image");
  const int ph = int(patch.rows()), pw = int(patch.cols());
  GridMatrix<Scalar> corr(cfg.rows(), cfg.cols());
  for (int r = 0; r < cfg.rows(); ++r)
    for (int c = 0; c < cfg.cols(); ++c) {
      const PixelPoint center = cell_center({c, r}, cfg);
      const int x0 = center.x - pw / 2, y0 = center.y - ph / 2;
      const int ix0 = std::max(x0, 0), iy0 = std::max(y0, 0);
      const int ix1 = std::min(x0 + pw, cfg.image_width()), iy1 = std::min(y0 + ph, cfg.image_height());
      const int w = ix1 - ix0, h = iy1 - iy0;
      if (w <= 0 || h <= 0 || w * h < 2) {
        corr(r, c) = 0;
        continue;
      }
      const auto win = image.block(iy0, ix0, h, w).array();
      const auto pat = patch.block(iy0 - y0, ix0 - x0, h, w).array();
      const auto wc = (win - win.mean()).eval();
      const auto pc = (pat - pat.mean()).eval();
      const Scalar var_w = wc.square().sum(), var_p = pc.square().sum();
      // Rounding in the mean leaves tiny residuals on flat windows.
      if (!(var_w > Scalar(1e-20) * win.square().sum()) || !(var_p > Scalar(1e-20) * pat.square().sum())) {
        corr(r, c) = 0;
        continue;
      }
      const Scalar denom = std::sqrt(var_w * var_p);
      corr(r, c) = Scalar(0.5) * std::clamp((wc * pc).sum() / denom, Scalar(-1), Scalar(1));
    }
  return corr;
}

/// Original searcher: mean +-0.5 by target presence, std 1/d'.
template <typename Scalar>
ResponseStats<Scalar> response_stats_ibs(Cell i, Cell /*k*/, Cell target, Scalar visibility) {
  if (!(visibility > 0)) throw DomainError("response_stats_ibs: visibility must be strictly positive");
  return {i == target ? Scalar(0.5) : Scalar(-0.5), Scalar(1) / visibility};
}

/// Correlation-based searcher: the mean blends target presence with image
/// similarity, weighted by visibility; std = 1/(a d' + b) stays finite at d' = 0.
template <typename Scalar>
ResponseStats<Scalar> response_stats_cibs(Cell i, Cell /*k*/, Cell target, Scalar visibility, Scalar corr,
                                          const TemplateParams<Scalar>& params) {
  const Scalar mu = i == target ? Scalar(0.5) : Scalar(-0.5);
  return {mu * (visibility + Scalar(0.5)) + corr * (Scalar(1.5) - visibility),
          Scalar(1) / (params.a * visibility + params.b)};
}

/// One template response W: the mean in deterministic mode, else a normal draw.
template <typename Scalar>
Scalar observe(const ResponseStats<Scalar>& stats, const TemplateParams<Scalar>& params, Rng& rng) {
  if (params.mode == ResponseMode::deterministic) return stats.mean;
  std::normal_distribution<Scalar> n(stats.mean, stats.std);
  return n(rng);
}

/// Response statistics over the whole grid for one fixation, split so that the
/// mean under "target at cell t" is absent_mean + target_shift at t and
/// absent_mean elsewhere.
template <typename Scalar>
struct ResponseField {
  GridMatrix<Scalar> absent_mean;
  GridMatrix<Scalar> target_shift;
  GridMatrix<Scalar> std;
};

/// `corr` may be empty for the original searcher (it ignores image similarity).
template <typename Scalar>
ResponseField<Scalar> response_field(ResponseKind kind, const GridMatrix<Scalar>& vis,
                                     const GridMatrix<Scalar>& corr, const TemplateParams<Scalar>& params) {
  ResponseField<Scalar> f;
  if (kind == ResponseKind::ibs) {
    if (!(vis.minCoeff() > Scalar(0))) throw DomainError("response_field: IBS requires strictly positive visibility");
    f.absent_mean = GridMatrix<Scalar>::Constant(vis.rows(), vis.cols(), Scalar(-0.5));
    f.target_shift = GridMatrix<Scalar>::Ones(vis.rows(), vis.cols());
    f.std = vis.array().inverse();
    return f;
  }
  if (corr.rows() != vis.rows() || corr.cols() != vis.cols())
    throw DomainError("response_field: correlation map does not conform to the grid");
  f.absent_mean = Scalar(-0.5) * (vis.array() + Scalar(0.5)) + corr.array() * (Scalar(1.5) - vis.array());
  f.target_shift = vis.array() + Scalar(0.5);
  f.std = (params.a * vis.array() + params.b).inverse();
  return f;
}

/// Template responses at every cell given the true target cell.
template <typename Scalar>
GridMatrix<Scalar> observe_field(const ResponseField<Scalar>& field, Cell target,
                                 const TemplateParams<Scalar>& params, Rng& rng) {
  GridMatrix<Scalar> w(field.absent_mean.rows(), field.absent_mean.cols());
  for (int r = 0; r < w.rows(); ++r)
    for (int c = 0; c < w.cols(); ++c) {
      const Scalar mean = field.absent_mean(r, c) + (Cell{c, r} == target ? field.target_shift(r, c) : Scalar(0));
      w(r, c) = observe(ResponseStats<Scalar>{mean, field.std(r, c)}, params, rng);
    }
  return w;
}

} // namespace vsearch

#endif // VSEARCH_TEMPLATE_RESPONSE_HPP
