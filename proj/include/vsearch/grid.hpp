#ifndef VSEARCH_GRID_HPP
#define VSEARCH_GRID_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace vsearch {

/// Pixel-to-cell discretization of a stimulus image. Cells are square with
/// side `cell_size` pixels; the last column/row may be partial when the
/// image size is not a multiple of the cell size.
class GridConfig {
public:
  GridConfig(int image_width, int image_height, int cell_size = 32);

  int cell_size() const noexcept { return cell_size_; }
  int image_width() const noexcept { return width_; }
  int image_height() const noexcept { return height_; }
  int cols() const noexcept { return cols_; }
  int rows() const noexcept { return rows_; }
  int cell_count() const noexcept { return cols_ * rows_; }
  double diagonal() const noexcept;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;

private:
  int cell_size_;
  int width_;
  int height_;
  int cols_;
  int rows_;
};

struct Cell {
  int col = 0;
  int row = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  /// Lexicographic (row, col): the tie-break order used by every policy.
  friend std::strong_ordering operator<=>(const Cell& a, const Cell& b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.col <=> b.col;
  }
};

struct PixelPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

enum class ScanpathOrigin { human, model };

/// Ordered fixations with no two consecutive entries in the same cell.
class Scanpath {
public:
  Scanpath(std::vector<Cell> fixations, ScanpathOrigin origin);

  const std::vector<Cell>& fixations() const noexcept { return fixations_; }
  ScanpathOrigin origin() const noexcept { return origin_; }
  std::size_t size() const noexcept { return fixations_.size(); }
  const Cell& operator[](std::size_t i) const { return fixations_[i]; }
  const Cell& back() const { return fixations_.back(); }

  friend bool operator==(const Scanpath&, const Scanpath&) = default;

private:
  std::vector<Cell> fixations_;
  ScanpathOrigin origin_;
};

/// Target rectangle in pixels, half-open: [left, left+width) x [top, top+height).
struct TargetRegion {
  int left = 0;
  int top = 0;
  int width = 72;
  int height = 72;

  bool contains(PixelPoint p) const noexcept {
    return p.x >= left && p.x < left + width && p.y >= top && p.y < top + height;
  }
  PixelPoint center() const noexcept { return {left + width / 2, top + height / 2}; }
  friend bool operator==(const TargetRegion&, const TargetRegion&) = default;
};

struct Trial {
  std::string image_id;
  Cell initial_fixation;
  TargetRegion target;
  int max_saccades = 12;
};

bool in_grid(Cell c, const GridConfig& cfg) noexcept;
bool in_image(PixelPoint p, const GridConfig& cfg) noexcept;

/// Throws DomainError for pixels outside the image; clamp first.
Cell pixel_to_cell(PixelPoint p, const GridConfig& cfg);
PixelPoint clamp_to_image(PixelPoint p, const GridConfig& cfg) noexcept;
/// Cell center, clamped into the image for partial border cells.
PixelPoint cell_center(Cell c, const GridConfig& cfg);

/// Collapses runs of identical consecutive cells. Throws on empty input.
Scanpath collapse_scanpath(const std::vector<Cell>& raw, ScanpathOrigin origin = ScanpathOrigin::human);

/// Model-side hit test: the cell center lies inside the target rectangle.
bool target_hit(Cell f, const TargetRegion& t, const GridConfig& cfg);
/// Human-side hit test on a raw (clamped) gaze coordinate.
bool target_hit(PixelPoint p, const TargetRegion& t) noexcept;

/// Cell whose template response carries the target signal: the cell holding the region center.
Cell target_cell(const TargetRegion& t, const GridConfig& cfg);

/// Geometry check: throws DomainError if the region does not lie inside the
/// image, the initial fixation is outside the grid, or N < 1. A start that
/// already hits the target is rejected by the manifest loader, not here.
void validate_trial(const Trial& trial, const GridConfig& cfg);

inline int linear_index(Cell c, const GridConfig& cfg) noexcept { return c.row * cfg.cols() + c.col; }
inline Cell cell_at(int index, const GridConfig& cfg) noexcept { return {index % cfg.cols(), index / cfg.cols()}; }

} // namespace vsearch

#endif // VSEARCH_GRID_HPP
