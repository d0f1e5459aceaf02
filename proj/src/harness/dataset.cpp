#include "vsearch/harness/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "vsearch/errors.hpp"
#include "vsearch/image_io.hpp"
#include "vsearch/random.hpp"

namespace vsearch::harness {

namespace fs = std::filesystem;
using nlohmann::json;

const StimulusEntry* StimulusManifest::find(const std::string& image_id) const {
  const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.image_id == image_id; });
  return it == entries.end() ? nullptr : &*it;
}

std::vector<std::string> Dataset::subjects() const {
  std::set<std::string> s;
  for (const auto& t : trials) s.insert(t.subject_id);
  return {s.begin(), s.end()};
}

std::vector<const HumanTrial*> Dataset::trials_for_image(const std::string& image_id) const {
  std::vector<const HumanTrial*> out;
  for (const auto& t : trials)
    if (t.image_id == image_id) out.push_back(&t);
  return out;
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void require_file(const fs::path& manifest, const std::string& image_id, const fs::path& p, const char* what) {
  if (!p.empty() && !fs::exists(p))
    throw LoadError(manifest.string(), 0, "image '" + image_id + "': " + what + " '" + p.string() + "' does not exist");
}

} // namespace

StimulusManifest load_manifest(const fs::path& path, int cell_size) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open manifest");
  StimulusManifest m;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw LoadError(path.string(), 0, e.what());
  }
  const fs::path base = path.parent_path();
  try {
    m.image_width = j.at("image_width").get<int>();
    m.image_height = j.at("image_height").get<int>();
    const GridConfig grid(m.image_width, m.image_height, cell_size);
    std::set<std::string> ids;
    for (const auto& e : j.at("images")) {
      StimulusEntry s;
      s.image_id = e.at("image_id").get<std::string>();
      if (!ids.insert(s.image_id).second)
        throw LoadError(path.string(), 0, "duplicate image_id '" + s.image_id + "'");
      s.image_path = resolve(base, e.value("image_path", std::string()));
      const auto& t = e.at("target");
      s.target = {t.at("left").get<int>(), t.at("top").get<int>(), t.value("width", 72), t.value("height", 72)};
      s.initial_fixation_px = {e.at("initial_fixation").at("x").get<int>(), e.at("initial_fixation").at("y").get<int>()};
      s.target_patch_path = resolve(base, e.value("target_patch_path", std::string()));
      if (e.contains("saliency"))
        for (const auto& [name, p] : e.at("saliency").items()) s.saliency_paths[name] = resolve(base, p.get<std::string>());

      require_file(path, s.image_id, s.image_path, "image");
      require_file(path, s.image_id, s.target_patch_path, "target patch");
      for (const auto& [name, p] : s.saliency_paths) require_file(path, s.image_id, p, ("saliency map " + name).c_str());
      if (!in_image(s.initial_fixation_px, grid))
        throw LoadError(path.string(), 0, "image '" + s.image_id + "': initial fixation outside the image");
      Trial probe = model_trial(s, grid, 1);
      validate_trial(probe, grid);
      if (target_hit(probe.initial_fixation, s.target, grid) || s.target.contains(s.initial_fixation_px))
        throw LoadError(path.string(), 0, "image '" + s.image_id + "': initial fixation already hits the target");
      m.entries.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw LoadError(path.string(), 0, e.what());
  } catch (const DomainError& e) {
    throw LoadError(path.string(), 0, e.what());
  }
  return m;
}

Trial model_trial(const StimulusEntry& e, const GridConfig& grid, int budget) {
  return Trial{e.image_id, pixel_to_cell(clamp_to_image(e.initial_fixation_px, grid), grid), e.target, budget};
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int parse_int(const std::string& s, const fs::path& path, long line, const char* col) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    // Gaze exports often carry fractional pixels; accept and round those.
    try {
      std::size_t used = 0;
      const double d = std::stod(s, &used);
      if (used == s.size()) return int(std::lround(d));
    } catch (const std::exception&) {
    }
    throw LoadError(path.string(), line, std::string("column ") + col + ": cannot parse '" + s + "' as a number");
  }
  return v;
}

bool parse_flag(const std::string& s, const fs::path& path, long line) {
  if (s == "1" || s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "0" || s == "false" || s == "False" || s == "FALSE") return false;
  throw LoadError(path.string(), line, "column found_flag: expected 0/1, got '" + s + "'");
}

struct RawRow {
  long line;
  int index;
  PixelPoint p;
  int max_saccades;
  bool found_flag;
};

std::vector<HumanTrial> load_scanpaths(const fs::path& path, const StimulusManifest& manifest, const GridConfig& grid,
                                       const std::vector<int>& budgets, LoadReport& report) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open scanpath file");
  std::string line;
  if (!std::getline(in, line)) throw LoadError(path.string(), 1, "missing header row");
  const auto header = split_csv(line);
  const std::vector<std::string> required{"subject_id", "image_id", "fixation_index", "x_px",
                                          "y_px",       "max_saccades", "found_flag"};
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& r : required)
    if (!col.count(r)) throw LoadError(path.string(), 1, "header lacks column '" + r + "'");

  std::map<std::pair<std::string, std::string>, std::vector<RawRow>> groups;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != header.size())
      throw LoadError(path.string(), lineno,
                      "row has " + std::to_string(f.size()) + " fields, header has " + std::to_string(header.size()));
    const std::string& image_id = f[col["image_id"]];
    if (!manifest.find(image_id)) throw LoadError(path.string(), lineno, "unknown image_id '" + image_id + "'");
    RawRow r{lineno,
             parse_int(f[col["fixation_index"]], path, lineno, "fixation_index"),
             {parse_int(f[col["x_px"]], path, lineno, "x_px"), parse_int(f[col["y_px"]], path, lineno, "y_px")},
             parse_int(f[col["max_saccades"]], path, lineno, "max_saccades"),
             parse_flag(f[col["found_flag"]], path, lineno)};
    if (std::find(budgets.begin(), budgets.end(), r.max_saccades) == budgets.end())
      throw LoadError(path.string(), lineno, "max_saccades " + std::to_string(r.max_saccades) +
                                                 " is not in the configured budget set");
    groups[{f[col["subject_id"]], image_id}].push_back(r);
  }

  std::vector<HumanTrial> trials;
  for (auto& [key, rows] : groups) {
    std::sort(rows.begin(), rows.end(), [](const RawRow& a, const RawRow& b) { return a.index < b.index; });
    const auto& [subject, image_id] = key;
    const StimulusEntry& e = *manifest.find(image_id);
    HumanTrial t{subject, image_id, rows.front().max_saccades, {}, Scanpath({Cell{}}, ScanpathOrigin::human),
                 rows.front().found_flag, false};
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const RawRow& r = rows[i];
      if (r.index != int(i) + 1)
        throw LoadError(path.string(), r.line, "subject " + subject + ", image " + image_id +
                                                   ": fixation_index not contiguous from 1 (found " +
                                                   std::to_string(r.index) + ")");
      if (r.max_saccades != t.max_saccades || r.found_flag != t.found_flag)
        throw LoadError(path.string(), r.line, "subject " + subject + ", image " + image_id +
                                                   ": max_saccades/found_flag differ within one trial");
      const PixelPoint c = clamp_to_image(r.p, grid);
      if (c != r.p)
        report.clamped.push_back(path.string() + ":" + std::to_string(r.line) + ": (" + std::to_string(r.p.x) + "," +
                                 std::to_string(r.p.y) + ") clamped to (" + std::to_string(c.x) + "," +
                                 std::to_string(c.y) + ")");
      t.fixations_px.push_back(c);
      cells.push_back(pixel_to_cell(c, grid));
      t.found = t.found || e.target.contains(c);
    }
    t.scanpath = collapse_scanpath(cells, ScanpathOrigin::human);
    if (t.found != t.found_flag)
      report.found_mismatches.push_back("subject " + subject + ", image " + image_id + ": file says " +
                                        (t.found_flag ? "found" : "not found") + ", coordinates say " +
                                        (t.found ? "found" : "not found"));
    trials.push_back(std::move(t));
  }
  return trials;
}

void check_dimensions(const StimulusManifest& m, const GridConfig& grid) {
  const auto check = [&](const std::string& id, const fs::path& p, const char* what) {
    const GridMatrixd map = read_map(p);
    if (map.rows() != grid.image_height() || map.cols() != grid.image_width())
      throw LoadError(p.string(), 0, std::string(what) + " of image '" + id + "' is " + std::to_string(map.cols()) +
                                         "x" + std::to_string(map.rows()) + ", manifest declares " +
                                         std::to_string(grid.image_width()) + "x" + std::to_string(grid.image_height()));
  };
  for (const auto& e : m.entries) {
    if (!e.image_path.empty()) check(e.image_id, e.image_path, "stimulus");
    for (const auto& [name, p] : e.saliency_paths) check(e.image_id, p, ("saliency map " + name).c_str());
  }
}

} // namespace

Dataset load_stimuli(const fs::path& manifest_path, const RunConfig& cfg) {
  StimulusManifest m = load_manifest(manifest_path, cfg.cell_size);
  GridConfig grid(m.image_width, m.image_height, cfg.cell_size);
  check_dimensions(m, grid);
  return Dataset{grid, std::move(m), {}, {}};
}

Dataset load_dataset(const fs::path& manifest_path, const fs::path& scanpath_path, const RunConfig& cfg) {
  Dataset d = load_stimuli(manifest_path, cfg);
  d.trials = load_scanpaths(scanpath_path, d.manifest, d.grid, cfg.budgets, d.report);
  return d;
}

std::vector<PixelPoint> fixations_of_rank(const Dataset& d, const std::string& image_id, int rank) {
  std::vector<PixelPoint> out;
  for (const auto& t : d.trials)
    if (t.image_id == image_id && int(t.fixations_px.size()) >= rank) out.push_back(t.fixations_px[std::size_t(rank - 1)]);
  return out;
}

namespace {

SaliencyMap<double> load_saliency(const StimulusEntry& e, const std::string& name) {
  const auto it = e.saliency_paths.find(name);
  if (it == e.saliency_paths.end())
    throw DomainError("image '" + e.image_id + "': no saliency map named '" + name + "' in the manifest");
  return SaliencyMap<double>{read_map(it->second), e.image_id};
}

SaliencyMap<double> human_map(const Dataset& d, const StimulusEntry& e, const RunConfig& cfg) {
  const auto fix = fixations_of_rank(d, e.image_id, cfg.human_prior_rank);
  if (fix.empty())
    throw DomainError("image '" + e.image_id + "': no human trial reaches fixation " +
                      std::to_string(cfg.human_prior_rank) + ", human-density map undefined");
  return human_density_map<double>(fix, d.grid, cfg.human_kernel_sigma_px, e.image_id);
}

double center_sigma(const RunConfig& cfg, const GridConfig& grid) {
  return cfg.center_sigma_px > 0 ? cfg.center_sigma_px : default_center_sigma<double>(grid);
}

} // namespace

PriorGrid<double> build_prior(const Dataset& d, const StimulusEntry& e, const RunConfig& cfg) {
  if (cfg.prior == "flat") return flat_prior<double>(d.grid);
  if (cfg.prior == "center") return center_prior<double>(d.grid, center_sigma(cfg, d.grid));
  if (cfg.prior == "noise") return noise_prior<double>(d.grid, derive_seed(cfg.seed, e.image_id, StreamPurpose::noise_prior));
  if (cfg.prior == "human") return grid_prior_from_saliency(human_map(d, e, cfg), d.grid);
  return grid_prior_from_saliency(load_saliency(e, cfg.prior), d.grid);
}

SaliencyMap<double> build_saliency_map(const Dataset& d, const StimulusEntry& e, const std::string& name,
                                       const RunConfig& cfg) {
  const GridConfig& g = d.grid;
  if (name == "flat") return {GridMatrixd::Ones(g.image_height(), g.image_width()), e.image_id};
  if (name == "center") {
    const double s = center_sigma(cfg, g);
    const double cx = g.image_width() / 2.0, cy = g.image_height() / 2.0;
    GridMatrixd m(g.image_height(), g.image_width());
    for (int y = 0; y < g.image_height(); ++y)
      for (int x = 0; x < g.image_width(); ++x)
        m(y, x) = std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2 * s * s));
    return {std::move(m), e.image_id};
  }
  if (name == "human") return human_map(d, e, cfg);
  SaliencyMap<double> m = load_saliency(e, name);
  if (m.values.rows() != g.image_height() || m.values.cols() != g.image_width())
    throw DomainError("image '" + e.image_id + "': saliency map '" + name + "' does not match the image size");
  return m;
}

} // namespace vsearch::harness
