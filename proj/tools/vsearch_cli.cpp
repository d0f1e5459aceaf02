// vsearch: Bayesian visual-search simulation and evaluation harness.
//
// Precedence for every setting: built-in defaults < --config JSON < flags.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "vsearch/errors.hpp"
#include "vsearch/harness/config.hpp"
#include "vsearch/harness/dataset.hpp"
#include "vsearch/harness/evaluation.hpp"
#include "vsearch/harness/experiment.hpp"
#include "vsearch/harness/output.hpp"
#include "vsearch/harness/saliency_eval.hpp"
#include "vsearch/image_io.hpp"
#include "vsearch/synthetic.hpp"

namespace fs = std::filesystem;
using namespace vsearch;
using namespace vsearch::harness;

namespace {

struct CommonFlags {
  std::string config;
  std::string manifest;
  std::string scanpaths;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::string prior;
  std::optional<int> threads;
  std::optional<int> mc_samples;
  std::vector<int> budgets;
  std::string mode;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--manifest", f.manifest, "stimulus manifest (JSON)");
  cmd->add_option("--scanpaths", f.scanpaths, "human scanpath CSV");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--seed", f.seed, "global random seed");
  cmd->add_option("--policy", f.policy, "ibs | cibs | greedy | saliency_ior");
  cmd->add_option("--prior", f.prior, "flat | center | noise | human | <manifest saliency key>");
  cmd->add_option("--threads", f.threads, "worker threads");
  cmd->add_option("--mc-samples", f.mc_samples, "Monte-Carlo samples per decision");
  cmd->add_option("--budgets", f.budgets, "saccade budgets")->delimiter(',');
  cmd->add_option("--response-mode", f.mode, "deterministic | sampled");
}

RunConfig resolve(const CommonFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
  if (!f.manifest.empty()) c.manifest = f.manifest;
  if (!f.scanpaths.empty()) c.scanpaths = f.scanpaths;
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.seed) c.seed = *f.seed;
  if (!f.policy.empty()) c.policy = parse_policy(f.policy);
  if (!f.prior.empty()) c.prior = f.prior;
  if (f.threads) c.threads = *f.threads;
  if (f.mc_samples) c.mc_samples = *f.mc_samples;
  if (!f.budgets.empty()) c.budgets = f.budgets;
  if (!f.mode.empty()) {
    if (f.mode == "deterministic") c.template_params.mode = ResponseMode::deterministic;
    else if (f.mode == "sampled") c.template_params.mode = ResponseMode::sampled;
    else throw DomainError("--response-mode must be 'deterministic' or 'sampled'");
  }
  if (c.manifest.empty()) throw DomainError("no manifest given (--manifest or config key 'manifest')");
  c.validate();
  return c;
}

Dataset load(const RunConfig& c, bool need_humans) {
  if (!c.scanpaths.empty()) return load_dataset(c.manifest, c.scanpaths, c);
  if (need_humans) throw DomainError("no human scanpath file given (--scanpaths or config key 'scanpaths')");
  return load_stimuli(c.manifest, c);
}

void print_load_report(const Dataset& d) {
  for (const auto& m : d.report.clamped) std::cerr << "note: " << m << '\n';
  for (const auto& m : d.report.found_mismatches) std::cerr << "warning: found flag mismatch: " << m << '\n';
}

[[noreturn]] void fail(const std::vector<ErrorEntry>& errors) {
  std::cerr << error_list(errors).dump(2) << '\n';
  std::exit(1);
}

int cmd_run(const CommonFlags& f) {
  const RunConfig c = resolve(f);
  const Dataset d = load(c, c.prior == "human");
  print_load_report(d);
  const ExperimentOutput out = run_experiment(d, c);
  write_experiment(out, c);
  std::cout << "wrote " << out.results.size() << " results to " << (c.output_dir / "results.csv").string() << '\n';
  if (!out.errors.empty()) {
    std::vector<ErrorEntry> errs;
    for (const auto& e : out.errors) errs.push_back({"trial_failed", e.message, e.image_id + "@N=" + std::to_string(e.budget)});
    fail(errs);
  }
  return 0;
}

int cmd_evaluate(const CommonFlags& f, const std::string& results_path) {
  RunConfig c = resolve(f);
  const fs::path rp = results_path.empty() ? c.output_dir / "results.csv" : fs::path(results_path);
  // label the model as the run did, unless the config names it
  if (c.model_label.empty()) {
    std::ifstream in(fs::path(rp).replace_extension(".json"));
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.contains("model") && j["model"].is_string()) c.model_label = j["model"];
  }
  const Dataset d = load(c, true);
  print_load_report(d);
  const EvaluationReport r = evaluate(d, load_results_csv(rp), c);
  const fs::path dir = c.output_dir / "evaluation";
  write_evaluation(r, dir);
  std::cout << table_csv(r);
  for (const auto& [id, why] : r.dissimilarity.skipped) std::cerr << "note: skipped " << id << ": " << why << '\n';
  std::cout << "wrote " << dir.string() << '\n';
  return 0;
}

int cmd_eval_saliency(const CommonFlags& f, const std::vector<std::string>& maps,
                      const std::vector<std::string>& variants, const std::string& rank, bool pooled) {
  RunConfig c = resolve(f);
  if (!maps.empty()) c.saliency_maps = maps;
  if (!variants.empty()) c.auc_variants = variants;
  if (pooled) c.pooled_auc = true;
  c.validate();
  const Dataset d = load(c, true);
  print_load_report(d);
  const std::vector<RankBucket> buckets = rank.empty() ? default_rank_buckets() : std::vector{parse_rank_bucket(rank)};
  const auto rows = eval_saliency(d, c, buckets);
  const std::string csv = auc_table_csv(rows);
  write_file_atomic(c.output_dir / "auc.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  if (inputs.empty()) throw DomainError("report: no evaluation bundles given");
  std::vector<nlohmann::json> bundles;
  nlohmann::ordered_json combined = nlohmann::ordered_json::array();
  for (const auto& p : inputs) {
    std::ifstream in(p);
    if (!in) throw LoadError(p, 0, "cannot open evaluation bundle");
    try {
      bundles.push_back(nlohmann::json::parse(in));
      combined.push_back({{"model", bundles.back().at("model")}, {"table", bundles.back().at("table")}});
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(p, 0, e.what());
    }
  }
  const std::string csv = combined_table_csv(bundles);
  const fs::path dir = out.empty() ? fs::path("out") : fs::path(out);
  write_file_atomic(dir / "report.csv", csv);
  write_file_atomic(dir / "report.json", combined.dump(2) + "\n");
  std::cout << csv;
  return 0;
}

int cmd_synth(const std::string& out, int images, int subjects, std::uint64_t seed, int width, int height) {
  if (out.empty()) throw DomainError("synth: --out is required");
  if (images < 1) throw DomainError("synth: --images must be >= 1");
  SceneOptions so;
  so.width = width;
  so.height = height;
  std::vector<SyntheticScene> scenes;
  for (int i = 0; i < images; ++i) {
    std::ostringstream id;
    id << "img" << std::setw(3) << std::setfill('0') << i + 1;
    scenes.push_back(make_synthetic_scene(id.str(), seed, so));
  }
  HumanOptions ho;
  ho.subjects = subjects;
  write_synthetic_dataset(out, scenes, make_synthetic_humans(scenes, seed, ho));
  std::cout << "wrote synthetic dataset with " << images << " images to " << out << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian visual-search simulation and evaluation harness"};
  app.require_subcommand(1);

  CommonFlags run_f, eval_f, sal_f;
  auto* run = app.add_subcommand("run", "simulate a searcher on every (image, budget) pair");
  add_common(run, run_f);

  auto* eval = app.add_subcommand("evaluate", "compare model results with human data");
  add_common(eval, eval_f);
  std::string results_path;
  eval->add_option("--results", results_path, "model results CSV (default <out>/results.csv)");

  auto* sal = app.add_subcommand("eval-saliency", "score saliency maps as fixation classifiers");
  add_common(sal, sal_f);
  std::vector<std::string> maps, variants;
  std::string rank;
  bool pooled = false;
  sal->add_option("--maps", maps, "maps to score: manifest keys or flat|center|human")->delimiter(',');
  sal->add_option("--variant", variants, "paper_main | judd | borji | shuffled")->delimiter(',');
  sal->add_option("--rank", rank, "fixation-rank filter, e.g. 3 or 5-8");
  sal->add_flag("--pooled", pooled, "pool fixations across images instead of averaging per-image AUCs");

  auto* rep = app.add_subcommand("report", "combine evaluation bundles into one summary table");
  std::vector<std::string> inputs;
  std::string rep_out;
  rep->add_option("inputs", inputs, "table1.json files written by 'evaluate'")->required();
  rep->add_option("--out", rep_out, "output directory");

  auto* syn = app.add_subcommand("synth", "write a synthetic dataset for demos and tests");
  std::string syn_out;
  int syn_images = 10, syn_subjects = 6, syn_w = 1024, syn_h = 768;
  std::uint64_t syn_seed = 0;
  syn->add_option("--out", syn_out, "dataset directory")->required();
  syn->add_option("--images", syn_images, "number of scenes");
  syn->add_option("--subjects", syn_subjects, "simulated observers");
  syn->add_option("--seed", syn_seed, "random seed");
  syn->add_option("--width", syn_w, "image width");
  syn->add_option("--height", syn_h, "image height");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(run_f);
    if (*eval) return cmd_evaluate(eval_f, results_path);
    if (*sal) return cmd_eval_saliency(sal_f, maps, variants, rank, pooled);
    if (*rep) return cmd_report(inputs, rep_out);
    if (*syn) return cmd_synth(syn_out, syn_images, syn_subjects, syn_seed, syn_w, syn_h);
  } catch (const LoadError& e) {
    fail({{"load_error", e.what(), e.file()}});
  } catch (const DomainError& e) {
    fail({{"domain_error", e.what(), ""}});
  } catch (const std::exception& e) {
    fail({{"internal_error", e.what(), ""}});
  }
  return 0;
}
