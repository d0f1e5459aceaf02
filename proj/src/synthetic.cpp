#include "vsearch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

#include "vsearch/errors.hpp"
#include "vsearch/image_io.hpp"
#include "vsearch/random.hpp"

namespace vsearch {

namespace {

GridMatrixd smooth_background(int w, int h, Rng& rng) {
  constexpr int step = 32;
  const int gw = w / step + 2, gh = h / step + 2;
  std::uniform_real_distribution<double> level(80.0, 170.0);
  GridMatrixd lattice(gh, gw);
  for (Eigen::Index k = 0; k < lattice.size(); ++k) lattice.data()[k] = level(rng);
  std::normal_distribution<double> grain(0.0, 6.0);
  GridMatrixd img(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double fx = double(x) / step, fy = double(y) / step;
      const int x0 = int(fx), y0 = int(fy);
      const double tx = fx - x0, ty = fy - y0;
      const double v = (1 - ty) * ((1 - tx) * lattice(y0, x0) + tx * lattice(y0, x0 + 1)) +
                       ty * ((1 - tx) * lattice(y0 + 1, x0) + tx * lattice(y0 + 1, x0 + 1));
      img(y, x) = std::clamp(v + grain(rng), 0.0, 255.0);
    }
  return img;
}

GridMatrixd checker_patch(int size, Rng& rng) {
  constexpr int block = 8;
  std::bernoulli_distribution coin(0.5);
  const int nb = (size + block - 1) / block;
  GridMatrixd blocks(nb, nb);
  for (Eigen::Index k = 0; k < blocks.size(); ++k) blocks.data()[k] = coin(rng) ? 225.0 : 30.0;
  GridMatrixd patch(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) patch(y, x) = blocks(y / block, x / block);
  return patch;
}

void add_blob(GridMatrixd& map, PixelPoint c, double amplitude, double sigma) {
  const double inv = 1.0 / (2 * sigma * sigma);
  Vectord gx(map.cols()), gy(map.rows());
  for (Eigen::Index x = 0; x < map.cols(); ++x) gx(x) = std::exp(-double((x - c.x) * (x - c.x)) * inv);
  for (Eigen::Index y = 0; y < map.rows(); ++y) gy(y) = amplitude * std::exp(-double((y - c.y) * (y - c.y)) * inv);
  map.noalias() += gy * gx.transpose();
}

} // namespace

SyntheticScene make_synthetic_scene(const std::string& image_id, std::uint64_t seed, const SceneOptions& opts) {
  GridConfig grid(opts.width, opts.height, opts.cell_size);
  Rng rng = make_rng(derive_seed(seed, image_id, StreamPurpose::synthetic));

  const Cell start{grid.cols() / 2, grid.rows() / 2};
  std::vector<Cell> candidates;
  const int half = opts.target_size / 2;
  for (int r = 0; r < grid.rows(); ++r)
    for (int c = 0; c < grid.cols(); ++c) {
      const PixelPoint p = cell_center({c, r}, grid);
      const bool fits = p.x - half >= 0 && p.y - half >= 0 && p.x - half + opts.target_size <= opts.width &&
                        p.y - half + opts.target_size <= opts.height;
      const int dist = std::max(std::abs(c - start.col), std::abs(r - start.row));
      if (fits && dist >= opts.min_start_distance) candidates.push_back({c, r});
    }
  if (candidates.empty()) throw DomainError("make_synthetic_scene: no admissible target location");
  const Cell tcell = candidates[std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
  const PixelPoint tc = cell_center(tcell, grid);
  const TargetRegion target{tc.x - half, tc.y - half, opts.target_size, opts.target_size};

  GridMatrixd image = smooth_background(opts.width, opts.height, rng);
  GridMatrixd patch = checker_patch(opts.target_size, rng);
  image.block(target.top, target.left, target.height, target.width) = patch;

  GridMatrixd sal = GridMatrixd::Constant(opts.height, opts.width, 0.02);
  std::uniform_int_distribution<int> ux(0, opts.width - 1), uy(0, opts.height - 1);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  std::vector<std::pair<double, PixelPoint>> blobs;
  for (int b = 0; b < opts.distractor_blobs; ++b) {
    const PixelPoint c{ux(rng), uy(rng)};
    const double a = amp(rng);
    add_blob(sal, c, a, opts.distractor_sigma);
    blobs.emplace_back(a, c);
  }
  if (opts.informative_prior) {
    std::vector<PixelPoint> spots;
    const int off = opts.target_blob_offset;
    for (int dr = -off; dr <= off; dr += off)
      for (int dc = -off; dc <= off; dc += off) {
        if (dr == 0 && dc == 0) continue;
        const Cell c{tcell.col + dc, tcell.row + dr};
        if (in_grid(c, grid)) spots.push_back(cell_center(c, grid));
      }
    const PixelPoint c = spots.empty() ? tc : spots[std::uniform_int_distribution<std::size_t>(0, spots.size() - 1)(rng)];
    add_blob(sal, c, std::uniform_real_distribution<double>(opts.target_blob_min, opts.target_blob_max)(rng),
             opts.target_blob_sigma);
  }
  std::stable_sort(blobs.begin(), blobs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<PixelPoint> centers;
  for (const auto& b : blobs) centers.push_back(b.second);

  return {image_id, grid, std::move(image), std::move(patch), target, start,
          SaliencyMap<double>{std::move(sal), image_id}, std::move(centers)};
}

std::vector<HumanFixationRow> make_synthetic_humans(const std::vector<SyntheticScene>& scenes, std::uint64_t seed,
                                                    const HumanOptions& opts) {
  if (scenes.empty() || opts.budgets.empty()) throw DomainError("make_synthetic_humans: nothing to simulate");
  std::vector<HumanFixationRow> rows;
  for (int s = 0; s < opts.subjects; ++s) {
    const std::string subject = "s" + std::to_string(s + 1);
    Rng rng = make_rng(derive_seed(seed, subject, StreamPurpose::synthetic));
    std::vector<int> schedule(scenes.size());
    for (std::size_t i = 0; i < schedule.size(); ++i) schedule[i] = opts.budgets[i % opts.budgets.size()];
    std::shuffle(schedule.begin(), schedule.end(), rng);
    std::normal_distribution<double> jitter(0.0, opts.jitter_px);
    std::bernoulli_distribution to_target(opts.target_rate);

    for (std::size_t i = 0; i < scenes.size(); ++i) {
      const SyntheticScene& sc = scenes[i];
      const int budget = schedule[i];
      const auto noisy = [&](PixelPoint p) {
        return PixelPoint{int(std::lround(p.x + jitter(rng))), int(std::lround(p.y + jitter(rng)))};
      };
      std::vector<PixelPoint> fix{cell_center(sc.initial_fixation, sc.grid)};
      bool found = false;
      std::size_t next_blob = 0;
      for (int k = 0; k < budget && !found; ++k) {
        if (to_target(rng) || sc.blob_centers.empty()) {
          fix.push_back(noisy(sc.target.center()));
          found = sc.target.contains(clamp_to_image(fix.back(), sc.grid));
        } else {
          const std::size_t pick = std::min(next_blob, sc.blob_centers.size() - 1);
          next_blob += 1 + std::uniform_int_distribution<std::size_t>(0, 1)(rng);
          fix.push_back(noisy(sc.blob_centers[pick]));
          found = sc.target.contains(clamp_to_image(fix.back(), sc.grid));
        }
      }
      for (std::size_t f = 0; f < fix.size(); ++f)
        rows.push_back({subject, sc.image_id, int(f + 1), fix[f].x, fix[f].y, budget, found});
    }
  }
  return rows;
}

void write_synthetic_dataset(const std::filesystem::path& dir, const std::vector<SyntheticScene>& scenes,
                             const std::vector<HumanFixationRow>& humans) {
  if (scenes.empty()) throw DomainError("write_synthetic_dataset: no scenes");
  nlohmann::ordered_json manifest;
  manifest["image_width"] = scenes.front().grid.image_width();
  manifest["image_height"] = scenes.front().grid.image_height();
  manifest["images"] = nlohmann::ordered_json::array();
  for (const auto& sc : scenes) {
    const std::string img = "images/" + sc.image_id + ".pgm";
    const std::string tgt = "targets/" + sc.image_id + ".pgm";
    const std::string sal = "saliency/" + sc.image_id + ".csv";
    write_pgm(dir / img, sc.image);
    write_pgm(dir / tgt, sc.patch);
    write_csv_matrix(dir / sal, sc.saliency.values);
    const PixelPoint start = cell_center(sc.initial_fixation, sc.grid);
    nlohmann::ordered_json e;
    e["image_id"] = sc.image_id;
    e["image_path"] = img;
    e["target"] = {{"left", sc.target.left}, {"top", sc.target.top}, {"width", sc.target.width},
                   {"height", sc.target.height}};
    e["initial_fixation"] = {{"x", start.x}, {"y", start.y}};
    e["target_patch_path"] = tgt;
    e["saliency"] = {{"synthetic", sal}};
    manifest["images"].push_back(std::move(e));
  }
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  std::ostringstream csv;
  csv << "subject_id,image_id,fixation_index,x_px,y_px,max_saccades,found_flag\n";
  for (const auto& r : humans)
    csv << r.subject_id << ',' << r.image_id << ',' << r.fixation_index << ',' << r.x << ',' << r.y << ','
        << r.max_saccades << ',' << (r.found ? 1 : 0) << '\n';
  write_file_atomic(dir / "scanpaths.csv", csv.str());
}

} // namespace vsearch
