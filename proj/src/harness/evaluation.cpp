#include "vsearch/harness/evaluation.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "vsearch/errors.hpp"
#include "vsearch/image_io.hpp"

namespace vsearch::harness {

namespace {

MeanStd mean_std(const std::vector<double>& v) {
  if (v.empty()) return {};
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / double(v.size()))};
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string("NA"); }

nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

} // namespace

const std::vector<std::string>& table_metric_names() {
  static const std::vector<std::string> names{"weighted_distance", "mean_agreement", "jaccard_index", "slope",
                                              "spearman_rho"};
  return names;
}

EvaluationReport evaluate(const Dataset& d, const std::vector<ModelResult>& results, const RunConfig& cfg) {
  std::map<std::pair<std::string, int>, const ModelResult*> by_key;
  for (const auto& r : results) by_key[{r.image_id, r.budget}] = &r;
  std::vector<std::string> missing;
  for (const auto& e : d.manifest.entries)
    for (int b : cfg.budgets)
      if (!by_key.count({e.image_id, b})) missing.push_back(e.image_id + "@N=" + std::to_string(b));
  if (!missing.empty()) {
    std::string msg = "model results do not cover the dataset; missing:";
    for (const auto& m : missing) msg += " " + m;
    throw DomainError(msg);
  }

  EvaluationReport rep;
  rep.model = cfg.label();
  const int max_budget = *std::max_element(cfg.budgets.begin(), cfg.budgets.end());

  std::map<int, std::vector<bool>> model_found;
  for (int b : cfg.budgets)
    for (const auto& e : d.manifest.entries) model_found[b].push_back(by_key.at({e.image_id, b})->found);
  rep.model_curve = performance_curve(model_found);

  std::map<std::string, std::map<int, std::vector<bool>>> human_found;
  std::map<std::string, std::vector<const HumanTrial*>> by_subject;
  for (const auto& t : d.trials) {
    human_found[t.subject_id][t.max_saccades].push_back(t.found);
    by_subject[t.subject_id].push_back(&t);
  }
  std::vector<std::map<int, std::vector<bool>>> participants;
  for (auto& [s, m] : human_found) participants.push_back(m);
  rep.human_curve = human_performance_curve(participants);
  try {
    rep.weighted_distance = weighted_distance(rep.human_curve, rep.model_curve);
  } catch (const DomainError& ex) {
    rep.weighted_distance_note = ex.what();
  }

  std::vector<double> mas, jac;
  for (const auto& [subject, trials] : by_subject) {
    FoundVector tfp;
    std::vector<std::optional<int>> needed;
    std::vector<int> schedule;
    for (const HumanTrial* t : trials) {
      const ModelResult* r = by_key.at({t->image_id, max_budget});
      tfp.push_back(t->found);
      needed.push_back(r->found ? std::optional<int>(r->saccades) : std::nullopt);
      schedule.push_back(t->max_saccades);
    }
    const FoundVector tfm = targets_found_by_model(needed, schedule);
    ParticipantAgreement pa{subject, mean_agreement(tfp, tfm), jaccard(tfp, tfm), int(tfp.size())};
    mas.push_back(pa.mean_agreement);
    jac.push_back(pa.jaccard);
    rep.participants.push_back(pa);
  }
  rep.mean_agreement = mean_std(mas);
  rep.jaccard = mean_std(jac);

  std::vector<DissimilarityInput> inputs;
  for (const auto& e : d.manifest.entries) {
    DissimilarityInput in{e.image_id, {}, Scanpath(by_key.at({e.image_id, max_budget})->scanpath, ScanpathOrigin::model)};
    for (const HumanTrial* t : d.trials_for_image(e.image_id))
      if (t->found) in.humans.push_back(t->scanpath);
    inputs.push_back(std::move(in));
  }
  rep.dissimilarity = dissimilarity_records(inputs, d.grid);
  std::vector<double> bh, hm;
  for (const auto& r : rep.dissimilarity.records) {
    bh.push_back(r.bhsd);
    hm.push_back(r.hmsd);
  }
  try {
    rep.slope = regression_slope_null_intercept(bh, hm);
    rep.spearman = spearman(bh, hm);
    if (!rep.spearman) rep.regression_note = "spearman undefined: constant dissimilarities";
  } catch (const DomainError& ex) {
    rep.regression_note = ex.what();
  }
  return rep;
}

namespace {

nlohmann::ordered_json curve_json(const PerformanceCurve& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [b, p] : c.proportion) {
    nlohmann::ordered_json row{{"budget", b}, {"proportion", p}};
    if (auto s = c.std_dev.find(b); s != c.std_dev.end()) row["std"] = s->second;
    j.push_back(row);
  }
  return j;
}

} // namespace

nlohmann::ordered_json report_to_json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["model"] = r.model;
  j["table"] = nlohmann::ordered_json::array();
  j["table"].push_back({{"metric", "weighted_distance"}, {"value", opt_json(r.weighted_distance)}, {"std", nullptr}});
  j["table"].push_back({{"metric", "mean_agreement"}, {"value", r.mean_agreement.mean}, {"std", r.mean_agreement.std}});
  j["table"].push_back({{"metric", "jaccard_index"}, {"value", r.jaccard.mean}, {"std", r.jaccard.std}});
  j["table"].push_back({{"metric", "slope"}, {"value", opt_json(r.slope)}, {"std", nullptr}});
  j["table"].push_back({{"metric", "spearman_rho"}, {"value", opt_json(r.spearman)}, {"std", nullptr}});
  nlohmann::ordered_json notes = nlohmann::ordered_json::array();
  if (!r.weighted_distance_note.empty()) notes.push_back(r.weighted_distance_note);
  if (!r.regression_note.empty()) notes.push_back(r.regression_note);
  j["notes"] = notes;
  j["human_curve"] = curve_json(r.human_curve);
  j["model_curve"] = curve_json(r.model_curve);
  j["participants"] = nlohmann::ordered_json::array();
  for (const auto& p : r.participants)
    j["participants"].push_back(
        {{"subject_id", p.subject_id}, {"mean_agreement", p.mean_agreement}, {"jaccard", p.jaccard}, {"images", p.images}});
  j["dissimilarity"] = nlohmann::ordered_json::array();
  for (const auto& d : r.dissimilarity.records)
    j["dissimilarity"].push_back({{"image_id", d.image_id}, {"bhSD", d.bhsd}, {"hmSD", d.hmsd}, {"humans", d.humans}});
  j["skipped_images"] = nlohmann::ordered_json::array();
  for (const auto& [id, why] : r.dissimilarity.skipped) j["skipped_images"].push_back({{"image_id", id}, {"reason", why}});
  return j;
}

std::string table_csv(const EvaluationReport& r) {
  std::ostringstream s;
  s << "model,metric,value,std\n";
  s << r.model << ",weighted_distance," << opt_num(r.weighted_distance) << ",\n";
  s << r.model << ",mean_agreement," << num(r.mean_agreement.mean) << ',' << num(r.mean_agreement.std) << '\n';
  s << r.model << ",jaccard_index," << num(r.jaccard.mean) << ',' << num(r.jaccard.std) << '\n';
  s << r.model << ",slope," << opt_num(r.slope) << ",\n";
  s << r.model << ",spearman_rho," << opt_num(r.spearman) << ",\n";
  return s.str();
}

std::string dissimilarity_csv(const EvaluationReport& r) {
  std::ostringstream s;
  s << "image_id,bhSD,hmSD,humans\n";
  for (const auto& d : r.dissimilarity.records)
    s << d.image_id << ',' << num(d.bhsd) << ',' << num(d.hmsd) << ',' << d.humans << '\n';
  return s.str();
}

std::string curves_csv(const EvaluationReport& r) {
  std::ostringstream s;
  s << "series,budget,proportion,std\n";
  for (const auto& [b, p] : r.human_curve.proportion) s << "human," << b << ',' << num(p) << ',' << num(r.human_curve.std_dev.at(b)) << '\n';
  for (const auto& [b, p] : r.model_curve.proportion) s << r.model << ',' << b << ',' << num(p) << ",\n";
  return s.str();
}

void write_evaluation(const EvaluationReport& r, const std::filesystem::path& dir) {
  write_file_atomic(dir / "table1.csv", table_csv(r));
  write_file_atomic(dir / "table1.json", report_to_json(r).dump(2) + "\n");
  write_file_atomic(dir / "dissimilarity.csv", dissimilarity_csv(r));
  write_file_atomic(dir / "performance_curves.csv", curves_csv(r));
}

std::string combined_table_csv(const std::vector<nlohmann::json>& bundles) {
  std::ostringstream s;
  s << "metric";
  for (const auto& b : bundles) s << ',' << b.at("model").get<std::string>();
  s << '\n';
  for (const auto& metric : table_metric_names()) {
    s << metric;
    for (const auto& b : bundles) {
      std::string cell = "NA";
      for (const auto& row : b.at("table"))
        if (row.at("metric") == metric && !row.at("value").is_null()) {
          cell = num(row.at("value").get<double>());
          if (!row.at("std").is_null()) cell += " (" + num(row.at("std").get<double>()) + ")";
        }
      s << ',' << cell;
    }
    s << '\n';
  }
  return s.str();
}

} // namespace vsearch::harness
