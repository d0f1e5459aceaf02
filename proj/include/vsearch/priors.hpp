#ifndef VSEARCH_PRIORS_HPP
#define VSEARCH_PRIORS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>

#include "vsearch/errors.hpp"
#include "vsearch/grid.hpp"
#include "vsearch/random.hpp"
#include "vsearch/types.hpp"

namespace vsearch {

/// Per-pixel saliency (height x width), non-negative and not identically zero.
template <typename Scalar = double>
struct SaliencyMap {
  GridMatrix<Scalar> values;
  std::string image_id;

  void validate() const {
    if (values.size() == 0) throw DomainError("SaliencyMap " + image_id + ": empty map");
    if (!values.allFinite()) throw DomainError("SaliencyMap " + image_id + ": non-finite entry");
    if ((values.array() < Scalar(0)).any()) throw DomainError("SaliencyMap " + image_id + ": negative entry");
    if (!(values.sum() > Scalar(0))) throw DomainError("SaliencyMap " + image_id + ": all-zero map");
  }
};

/// Strictly positive per-cell probabilities summing to one.
template <typename Scalar = double>
class PriorGrid {
public:
  using Matrix = GridMatrix<Scalar>;

  /// Floors and normalizes non-negative cell weights. The floor
  /// 1e-9/(rows*cols) is applied to the normalized weights, which keeps the
  /// result invariant to rescaling of the input.
  static PriorGrid from_weights(Matrix weights) {
    if (weights.size() == 0) throw DomainError("PriorGrid: empty weight matrix");
    if (!weights.allFinite() || (weights.array() < Scalar(0)).any())
      throw DomainError("PriorGrid: weights must be finite and non-negative");
    const Scalar total = weights.sum();
    if (!(total > Scalar(0))) throw DomainError("PriorGrid: all weights are zero");
    weights /= total;
    weights.array() += floor_epsilon(weights.size());
    weights /= weights.sum();
    return PriorGrid(std::move(weights));
  }

  static Scalar floor_epsilon(Eigen::Index cells) { return Scalar(1e-9) / Scalar(cells); }

  const Matrix& p() const noexcept { return p_; }
  Scalar operator()(Cell c) const { return p_(c.row, c.col); }
  int rows() const noexcept { return int(p_.rows()); }
  int cols() const noexcept { return int(p_.cols()); }

  bool conforms(const GridConfig& cfg) const noexcept { return rows() == cfg.rows() && cols() == cfg.cols(); }

  Scalar entropy() const { return -(p_.array() * p_.array().log()).sum(); }

private:
  explicit PriorGrid(Matrix p) : p_(std::move(p)) {}
  Matrix p_;
};

/// Mean saliency of the pixels covered by each cell.
template <typename Scalar>
GridMatrix<Scalar> cell_means(const GridMatrix<Scalar>& pixels, const GridConfig& cfg) {
  if (pixels.rows() != cfg.image_height() || pixels.cols() != cfg.image_width())
    throw DomainError("saliency map is " + std::to_string(pixels.cols()) + "x" + std::to_string(pixels.rows()) +
                      ", grid expects " + std::to_string(cfg.image_width()) + "x" +
                      std::to_string(cfg.image_height()));
  const int d = cfg.cell_size();
  GridMatrix<Scalar> means(cfg.rows(), cfg.cols());
  for (int r = 0; r < cfg.rows(); ++r)
    for (int c = 0; c < cfg.cols(); ++c) {
      const int h = std::min(d, cfg.image_height() - r * d);
      const int w = std::min(d, cfg.image_width() - c * d);
      means(r, c) = pixels.block(r * d, c * d, h, w).mean();
    }
  return means;
}

template <typename Scalar>
PriorGrid<Scalar> grid_prior_from_saliency(const SaliencyMap<Scalar>& s, const GridConfig& cfg) {
  s.validate();
  return PriorGrid<Scalar>::from_weights(cell_means(s.values, cfg));
}

/// Isotropic Gaussian centered on the image, sampled at cell centers.
template <typename Scalar = double>
PriorGrid<Scalar> center_prior(const GridConfig& cfg, Scalar sigma_px) {
  if (!(sigma_px > 0)) throw DomainError("center_prior: sigma must be positive");
  const Scalar cx = Scalar(cfg.image_width()) / 2;
  const Scalar cy = Scalar(cfg.image_height()) / 2;
  GridMatrix<Scalar> w(cfg.rows(), cfg.cols());
  for (int r = 0; r < cfg.rows(); ++r)
    for (int c = 0; c < cfg.cols(); ++c) {
      const PixelPoint p = cell_center({c, r}, cfg);
      const Scalar dx = Scalar(p.x) - cx, dy = Scalar(p.y) - cy;
      w(r, c) = std::exp(-(dx * dx + dy * dy) / (2 * sigma_px * sigma_px));
    }
  return PriorGrid<Scalar>::from_weights(std::move(w));
}

template <typename Scalar = double>
Scalar default_center_sigma(const GridConfig& cfg) {
  return Scalar(0.25) * Scalar(std::min(cfg.image_width(), cfg.image_height()));
}

template <typename Scalar = double>
PriorGrid<Scalar> flat_prior(const GridConfig& cfg) {
  return PriorGrid<Scalar>::from_weights(GridMatrix<Scalar>::Ones(cfg.rows(), cfg.cols()));
}

/// i.i.d. uniform(0,1) cell weights; the grid is a pure function of the seed.
template <typename Scalar = double>
PriorGrid<Scalar> noise_prior(const GridConfig& cfg, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<Scalar> u(Scalar(0), Scalar(1));
  GridMatrix<Scalar> w(cfg.rows(), cfg.cols());
  for (Eigen::Index k = 0; k < w.size(); ++k) w.data()[k] = u(rng);
  return PriorGrid<Scalar>::from_weights(std::move(w));
}

/// Sum of unit-mass Gaussian kernels at the given fixations, truncated at the
/// image border (mass falling outside the image is dropped, not folded back).
template <typename Scalar = double>
SaliencyMap<Scalar> human_density_map(std::span<const PixelPoint> fixations, const GridConfig& cfg,
                                      Scalar kernel_sigma_px = Scalar(25), std::string image_id = {}) {
  if (fixations.empty()) throw DomainError("human_density_map: no fixations");
  if (!(kernel_sigma_px > 0)) throw DomainError("human_density_map: kernel sigma must be positive");
  const int W = cfg.image_width(), H = cfg.image_height();
  const Scalar inv2s2 = Scalar(1) / (2 * kernel_sigma_px * kernel_sigma_px);
  const Scalar norm = Scalar(1) / (2 * std::numbers::pi_v<Scalar> * kernel_sigma_px * kernel_sigma_px);
  GridMatrix<Scalar> map = GridMatrix<Scalar>::Zero(H, W);
  Vector<Scalar> gx(W), gy(H);
  for (const PixelPoint& f : fixations) {
    for (int x = 0; x < W; ++x) gx(x) = std::exp(-Scalar((x - f.x) * (x - f.x)) * inv2s2);
    for (int y = 0; y < H; ++y) gy(y) = norm * std::exp(-Scalar((y - f.y) * (y - f.y)) * inv2s2);
    map.noalias() += gy * gx.transpose();
  }
  return {std::move(map), std::move(image_id)};
}

} // namespace vsearch

#endif // VSEARCH_PRIORS_HPP
