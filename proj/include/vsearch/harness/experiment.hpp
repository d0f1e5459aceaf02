#ifndef VSEARCH_HARNESS_EXPERIMENT_HPP
#define VSEARCH_HARNESS_EXPERIMENT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "vsearch/harness/config.hpp"
#include "vsearch/harness/dataset.hpp"

namespace vsearch::harness {

/// One model run on one image under one saccade budget.
struct ModelResult {
  std::string image_id;
  int budget = 0;
  bool found = false;
  int saccades = 0;
  std::vector<Cell> scanpath;

  friend bool operator==(const ModelResult&, const ModelResult&) = default;
};

struct TrialError {
  std::string image_id;
  int budget = 0;
  std::string message;
};

struct ExperimentOutput {
  std::vector<ModelResult> results;
  std::vector<TrialError> errors;
};

/// Runs every (image, budget) pair in manifest-then-budget order. Trials are
/// independent and may run on a worker pool; results do not depend on the
/// number of workers. A failing trial is reported and the run continues.
ExperimentOutput run_experiment(const Dataset& dataset, const RunConfig& cfg);

/// "col:row;col:row;..."
std::string format_cells(const std::vector<Cell>& cells);
std::vector<Cell> parse_cells(const std::string& text);

std::string results_csv(const std::vector<ModelResult>& results);
std::vector<ModelResult> parse_results_csv(const std::string& text, const std::string& source = "<results>");
std::vector<ModelResult> load_results_csv(const std::filesystem::path& path);

/// results.csv + results.json (with the configuration echoed) under cfg.output_dir.
void write_experiment(const ExperimentOutput& out, const RunConfig& cfg);

} // namespace vsearch::harness

#endif // VSEARCH_HARNESS_EXPERIMENT_HPP
