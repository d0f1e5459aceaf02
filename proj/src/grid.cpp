#include "vsearch/grid.hpp"

#include <algorithm>
#include <cmath>

#include "vsearch/errors.hpp"

namespace vsearch {

GridConfig::GridConfig(int image_width, int image_height, int cell_size)
    : cell_size_(cell_size), width_(image_width), height_(image_height) {
  if (cell_size <= 0 || image_width <= 0 || image_height <= 0)
    throw DomainError("GridConfig: image dimensions and cell size must be positive");
  cols_ = (image_width + cell_size - 1) / cell_size;
  rows_ = (image_height + cell_size - 1) / cell_size;
}

double GridConfig::diagonal() const noexcept {
  return std::hypot(static_cast<double>(width_), static_cast<double>(height_));
}

Scanpath::Scanpath(std::vector<Cell> fixations, ScanpathOrigin origin)
    : fixations_(std::move(fixations)), origin_(origin) {
  if (fixations_.empty()) throw DomainError("Scanpath: at least one fixation is required");
  for (std::size_t i = 1; i < fixations_.size(); ++i)
    if (fixations_[i] == fixations_[i - 1])
      throw DomainError("Scanpath: consecutive fixations share a cell; collapse first");
}

bool in_grid(Cell c, const GridConfig& cfg) noexcept {
  return c.col >= 0 && c.row >= 0 && c.col < cfg.cols() && c.row < cfg.rows();
}

bool in_image(PixelPoint p, const GridConfig& cfg) noexcept {
  return p.x >= 0 && p.y >= 0 && p.x < cfg.image_width() && p.y < cfg.image_height();
}

Cell pixel_to_cell(PixelPoint p, const GridConfig& cfg) {
  if (!in_image(p, cfg))
    throw DomainError("pixel_to_cell: (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                      ") is outside the image");
  return {p.x / cfg.cell_size(), p.y / cfg.cell_size()};
}

PixelPoint clamp_to_image(PixelPoint p, const GridConfig& cfg) noexcept {
  return {std::clamp(p.x, 0, cfg.image_width() - 1), std::clamp(p.y, 0, cfg.image_height() - 1)};
}

PixelPoint cell_center(Cell c, const GridConfig& cfg) {
  if (!in_grid(c, cfg)) throw DomainError("cell_center: cell outside the grid");
  const int d = cfg.cell_size();
  return clamp_to_image({c.col * d + d / 2, c.row * d + d / 2}, cfg);
}

Scanpath collapse_scanpath(const std::vector<Cell>& raw, ScanpathOrigin origin) {
  if (raw.empty()) throw DomainError("collapse_scanpath: empty fixation list");
  std::vector<Cell> out;
  out.reserve(raw.size());
  for (const Cell& c : raw)
    if (out.empty() || out.back() != c) out.push_back(c);
  return Scanpath(std::move(out), origin);
}

bool target_hit(Cell f, const TargetRegion& t, const GridConfig& cfg) {
  return t.contains(cell_center(f, cfg));
}

bool target_hit(PixelPoint p, const TargetRegion& t) noexcept { return t.contains(p); }

Cell target_cell(const TargetRegion& t, const GridConfig& cfg) {
  return pixel_to_cell(clamp_to_image(t.center(), cfg), cfg);
}

void validate_trial(const Trial& trial, const GridConfig& cfg) {
  const auto& t = trial.target;
  if (t.width <= 0 || t.height <= 0 || t.left < 0 || t.top < 0 || t.left + t.width > cfg.image_width() ||
      t.top + t.height > cfg.image_height())
    throw DomainError("trial " + trial.image_id + ": target region is not inside the image");
  if (!in_grid(trial.initial_fixation, cfg))
    throw DomainError("trial " + trial.image_id + ": initial fixation outside the grid");
  if (trial.max_saccades < 1) throw DomainError("trial " + trial.image_id + ": max_saccades must be >= 1");
}

} // namespace vsearch
