#include "vsearch/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "vsearch/errors.hpp"
#include "vsearch/image_io.hpp"
#include "vsearch/searchers.hpp"
#include "vsearch/template_response.hpp"

namespace vsearch::harness {

namespace fs = std::filesystem;

namespace {

struct ImageOutcome {
  std::vector<ModelResult> results;
  std::vector<TrialError> errors;
};

ImageOutcome run_image(const Dataset& d, const StimulusEntry& e, const RunConfig& cfg) {
  ImageOutcome out;
  SearchInputs inputs;
  std::optional<PriorGrid<double>> prior;
  try {
    prior.emplace(build_prior(d, e, cfg));
    inputs.prior = &*prior;
    if (cfg.policy == Policy::cibs) {
      if (e.image_path.empty() || e.target_patch_path.empty())
        throw DomainError("cibs needs image_path and target_patch_path in the manifest");
      inputs.correlation = correlation_map(read_map(e.image_path), read_map(e.target_patch_path), d.grid);
    }
  } catch (const std::exception& ex) {
    for (int b : cfg.budgets) out.errors.push_back({e.image_id, b, ex.what()});
    return out;
  }
  const int max_budget = *std::max_element(cfg.budgets.begin(), cfg.budgets.end());
  for (int b : cfg.budgets) {
    try {
      SearchConfig sc = cfg.search_config(b);
      // Budgets share a prefix, so the largest one covers every snapshot.
      if (cfg.posterior_snapshots && b == max_budget && sc.policy != Policy::saliency_ior) {
        const fs::path dir = cfg.output_dir / "posteriors" / e.image_id;
        sc.on_posterior = [dir](int step, Cell, const GridMatrixd& p) {
          char name[32];
          std::snprintf(name, sizeof name, "step_%02d.csv", step);
          write_csv_matrix(dir / name, p);
        };
      }
      const SearchResult r = run_search(model_trial(e, d.grid, b), inputs, sc, d.grid);
      out.results.push_back({e.image_id, b, r.found, r.saccades_used, r.scanpath.fixations()});
    } catch (const std::exception& ex) {
      out.errors.push_back({e.image_id, b, ex.what()});
    }
  }
  return out;
}

} // namespace

ExperimentOutput run_experiment(const Dataset& d, const RunConfig& cfg) {
  cfg.validate();
  const auto& entries = d.manifest.entries;
  std::vector<ImageOutcome> per_image(entries.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) per_image[i] = run_image(d, entries[i], cfg);
  };
  const int n = std::min<int>(cfg.threads, int(entries.size()));
  std::vector<std::jthread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  ExperimentOutput out;
  for (auto& img : per_image) {
    out.results.insert(out.results.end(), img.results.begin(), img.results.end());
    out.errors.insert(out.errors.end(), img.errors.begin(), img.errors.end());
  }
  return out;
}

std::string format_cells(const std::vector<Cell>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i)
    s += (i ? ";" : "") + std::to_string(cells[i].col) + ":" + std::to_string(cells[i].row);
  return s;
}

std::vector<Cell> parse_cells(const std::string& text) {
  std::vector<Cell> cells;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw DomainError("malformed cell '" + item + "' (expected col:row)");
    try {
      cells.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw DomainError("malformed cell '" + item + "' (expected col:row)");
    }
  }
  return cells;
}

std::string results_csv(const std::vector<ModelResult>& results) {
  std::ostringstream out;
  out << "image_id,budget,found,saccades,scanpath\n";
  for (const auto& r : results)
    out << r.image_id << ',' << r.budget << ',' << (r.found ? 1 : 0) << ',' << r.saccades << ','
        << format_cells(r.scanpath) << '\n';
  return out.str();
}

std::vector<ModelResult> parse_results_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("image_id,budget,found,saccades,scanpath", 0) != 0)
    throw LoadError(source, 1, "expected header 'image_id,budget,found,saccades,scanpath'");
  std::vector<ModelResult> out;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != 5) throw LoadError(source, lineno, "expected 5 fields");
    try {
      out.push_back({f[0], std::stoi(f[1]), f[2] == "1", std::stoi(f[3]), parse_cells(f[4])});
    } catch (const std::exception& ex) {
      throw LoadError(source, lineno, ex.what());
    }
  }
  return out;
}

std::vector<ModelResult> load_results_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open results file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_results_csv(ss.str(), path.string());
}

void write_experiment(const ExperimentOutput& out, const RunConfig& cfg) {
  write_file_atomic(cfg.output_dir / "results.csv", results_csv(out.results));
  nlohmann::ordered_json j;
  j["model"] = cfg.label();
  // The output location is not part of the experiment; leaving it out keeps
  // reruns into different directories byte-identical.
  auto config = config_to_json(cfg);
  config.erase("output_dir");
  j["config"] = std::move(config);
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& r : out.results) {
    nlohmann::ordered_json path = nlohmann::ordered_json::array();
    for (const auto& c : r.scanpath) path.push_back({c.col, c.row});
    j["results"].push_back({{"image_id", r.image_id},
                            {"budget", r.budget},
                            {"found", r.found},
                            {"saccades", r.saccades},
                            {"scanpath", path}});
  }
  j["errors"] = nlohmann::ordered_json::array();
  for (const auto& e : out.errors)
    j["errors"].push_back({{"image_id", e.image_id}, {"budget", e.budget}, {"message", e.message}});
  write_file_atomic(cfg.output_dir / "results.json", j.dump(2) + "\n");
}

} // namespace vsearch::harness
