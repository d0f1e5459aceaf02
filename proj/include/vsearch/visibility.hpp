#ifndef VSEARCH_VISIBILITY_HPP
#define VSEARCH_VISIBILITY_HPP

#include <cmath>

#include "vsearch/errors.hpp"
#include "vsearch/grid.hpp"
#include "vsearch/types.hpp"

namespace vsearch {

/// Diagonal covariance of the visibility Gaussian, in squared pixels.
template <typename Scalar = double>
struct VisibilityParams {
  Scalar sigma_x_sq = Scalar(2600);
  Scalar sigma_y_sq = Scalar(4000);

  void validate() const {
    if (!(sigma_x_sq > 0) || !(sigma_y_sq > 0))
      throw DomainError("VisibilityParams: variances must be strictly positive");
  }
};

/// d' at cell i while fixating cell k: a peak-1 anisotropic Gaussian of the
/// pixel offset between the two cell centers.
template <typename Scalar>
Scalar visibility(Cell k, Cell i, const VisibilityParams<Scalar>& params, const GridConfig& cfg) {
  const PixelPoint pk = cell_center(k, cfg);
  const PixelPoint pi = cell_center(i, cfg);
  const Scalar dx = Scalar(pi.x - pk.x);
  const Scalar dy = Scalar(pi.y - pk.y);
  return std::exp(Scalar(-0.5) * (dx * dx / params.sigma_x_sq + dy * dy / params.sigma_y_sq));
}

/// Precomputed per-axis Gaussian profiles. The visibility field of a fixation
/// is the outer product of one row profile and one column profile, so a field
/// costs rows*cols and the whole model stores only rows^2 + cols^2 values.
template <typename Scalar = double>
class VisibilityModel {
public:
  using Matrix = GridMatrix<Scalar>;

  VisibilityModel(const GridConfig& cfg, const VisibilityParams<Scalar>& params = {})
      : grid_(cfg), params_(params) {
    params_.validate();
    col_profile_ = axis_profile(cfg.cols(), params_.sigma_x_sq, [&](int c) { return cell_center({c, 0}, cfg).x; });
    row_profile_ = axis_profile(cfg.rows(), params_.sigma_y_sq, [&](int r) { return cell_center({0, r}, cfg).y; });
  }

  const GridConfig& grid() const noexcept { return grid_; }
  const VisibilityParams<Scalar>& params() const noexcept { return params_; }

  /// (cols x cols): entry (a, b) is the horizontal factor between columns a and b.
  const Matrix& col_profile() const noexcept { return col_profile_; }
  /// (rows x rows): entry (a, b) is the vertical factor between rows a and b.
  const Matrix& row_profile() const noexcept { return row_profile_; }

  /// Full d' field (rows x cols) for fixation k.
  Matrix field(Cell k) const {
    if (!in_grid(k, grid_)) throw DomainError("visibility_field: fixation outside the grid");
    return row_profile_.col(k.row) * col_profile_.row(k.col);
  }

  Scalar at(Cell k, Cell i) const { return row_profile_(i.row, k.row) * col_profile_(k.col, i.col); }

private:
  template <typename CenterFn>
  static Matrix axis_profile(int n, Scalar var, CenterFn center) {
    Matrix m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Scalar d = Scalar(center(a) - center(b));
        m(a, b) = std::exp(Scalar(-0.5) * d * d / var);
      }
    return m;
  }

  GridConfig grid_;
  VisibilityParams<Scalar> params_;
  Matrix col_profile_;
  Matrix row_profile_;
};

template <typename Scalar>
GridMatrix<Scalar> visibility_field(Cell k, const VisibilityParams<Scalar>& params, const GridConfig& cfg) {
  return VisibilityModel<Scalar>(cfg, params).field(k);
}

} // namespace vsearch

#endif // VSEARCH_VISIBILITY_HPP
