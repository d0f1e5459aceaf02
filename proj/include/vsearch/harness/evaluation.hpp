#ifndef VSEARCH_HARNESS_EVALUATION_HPP
#define VSEARCH_HARNESS_EVALUATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "vsearch/harness/dataset.hpp"
#include "vsearch/harness/experiment.hpp"
#include "vsearch/metrics.hpp"

namespace vsearch::harness {

struct MeanStd {
  double mean = 0;
  double std = 0;
};

struct ParticipantAgreement {
  std::string subject_id;
  double mean_agreement = 0;
  double jaccard = 0;
  int images = 0;
};

/// Human-vs-model comparison for one model, shaped after the summary table:
/// weighted distance, mean agreement, Jaccard index, slope and Spearman rho.
struct EvaluationReport {
  std::string model;
  PerformanceCurve human_curve;
  PerformanceCurve model_curve;
  std::optional<double> weighted_distance;
  std::string weighted_distance_note;
  MeanStd mean_agreement;
  MeanStd jaccard;
  std::vector<ParticipantAgreement> participants;
  std::optional<double> slope;
  std::optional<double> spearman;
  std::string regression_note;
  DissimilarityResult dissimilarity;
};

/// Throws DomainError naming every (image, budget) pair the results lack.
EvaluationReport evaluate(const Dataset& dataset, const std::vector<ModelResult>& results, const RunConfig& cfg);

/// Names of the five summary rows, in output order.
const std::vector<std::string>& table_metric_names();

nlohmann::ordered_json report_to_json(const EvaluationReport& r);
/// metric,value,std rows for the five summary metrics.
std::string table_csv(const EvaluationReport& r);
std::string dissimilarity_csv(const EvaluationReport& r);
std::string curves_csv(const EvaluationReport& r);

/// Writes table1.csv/json, dissimilarity.csv and performance_curves.csv.
void write_evaluation(const EvaluationReport& r, const std::filesystem::path& dir);

/// Side-by-side summary table from several evaluation JSON bundles.
std::string combined_table_csv(const std::vector<nlohmann::json>& bundles);

} // namespace vsearch::harness

#endif // VSEARCH_HARNESS_EVALUATION_HPP
