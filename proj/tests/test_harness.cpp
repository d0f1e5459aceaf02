#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "vsearch/errors.hpp"
#include "vsearch/harness/config.hpp"
#include "vsearch/harness/dataset.hpp"
#include "vsearch/harness/evaluation.hpp"
#include "vsearch/harness/experiment.hpp"
#include "vsearch/harness/output.hpp"
#include "vsearch/harness/saliency_eval.hpp"
#include "vsearch/image_io.hpp"
#include "vsearch/synthetic.hpp"

using namespace vsearch;
using namespace vsearch::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vsearch_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

// Two 128x96 images, targets at the top-left, start at the bottom-right.
fs::path toy_manifest(const fs::path& dir) {
  write_csv_matrix(dir / "sal_a.csv", GridMatrixd::Ones(96, 128));
  write_csv_matrix(dir / "sal_b.csv", GridMatrixd::Ones(96, 128));
  put(dir / "manifest.json", R"({
    "image_width": 128, "image_height": 96,
    "images": [
      {"image_id": "a", "target": {"left": 0, "top": 0, "width": 40, "height": 40},
       "initial_fixation": {"x": 112, "y": 80}, "saliency": {"s": "sal_a.csv"}},
      {"image_id": "b", "target": {"left": 0, "top": 0, "width": 40, "height": 40},
       "initial_fixation": {"x": 112, "y": 80}, "saliency": {"s": "sal_b.csv"}}
    ]})");
  return dir / "manifest.json";
}

const char* kHeader = "subject_id,image_id,fixation_index,x_px,y_px,max_saccades,found_flag\n";

fs::path toy_scanpaths(const fs::path& dir, const std::string& body) {
  put(dir / "scan.csv", kHeader + body);
  return dir / "scan.csv";
}

const std::string kGoodRows =
    "s1,a,1,112,80,2,1\ns1,a,2,16,16,2,1\n"
    "s1,b,1,112,80,4,0\ns1,b,2,80,48,4,0\n"
    "s2,a,1,112,80,4,1\ns2,a,2,60,50,4,1\ns2,a,3,20,20,4,1\n"
    "s2,b,1,112,80,2,1\ns2,b,2,10,10,2,1\n";

std::string load_error(const fs::path& m, const fs::path& s) {
  try {
    load_dataset(m, s, RunConfig{});
  } catch (const LoadError& e) {
    return e.what();
  }
  return "";
}

struct SynthSuite {
  fs::path dir;
  fs::path manifest;
  fs::path scanpaths;
};

SynthSuite small_suite(const std::string& name, int images) {
  SynthSuite s{scratch(name), {}, {}};
  SceneOptions o;
  o.width = 320;
  o.height = 256;
  o.distractor_blobs = 4;
  o.min_start_distance = 3;
  std::vector<SyntheticScene> scenes;
  for (int i = 0; i < images; ++i) scenes.push_back(make_synthetic_scene("img" + std::to_string(i), 3, o));
  HumanOptions h;
  h.subjects = 4;
  write_synthetic_dataset(s.dir / "data", scenes, make_synthetic_humans(scenes, 3, h));
  s.manifest = s.dir / "data" / "manifest.json";
  s.scanpaths = s.dir / "data" / "scanpaths.csv";
  return s;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config defaults, overrides and round trip") {
  const RunConfig d;
  CHECK(d.cell_size == 32);
  CHECK(d.template_params.a == 3.0);
  CHECK(d.template_params.b == 4.0);
  CHECK(d.visibility.sigma_x_sq == 2600.0);
  CHECK(d.visibility.sigma_y_sq == 4000.0);
  CHECK(d.budgets == std::vector<int>{2, 4, 8, 12});

  const auto j = nlohmann::json::parse(R"({"policy": "greedy", "seed": 9, "template": {"a": 2.5},
                                           "visibility": {"sigma_y_sq": 3000}, "budgets": [2, 12]})");
  const RunConfig c = config_from_json(j);
  CHECK(c.policy == Policy::greedy);
  CHECK(c.seed == 9);
  CHECK(c.template_params.a == 2.5);
  CHECK(c.template_params.b == 4.0);
  CHECK(c.visibility.sigma_x_sq == 2600.0);
  CHECK(c.visibility.sigma_y_sq == 3000.0);
  CHECK(c.budgets == std::vector<int>{2, 12});

  const RunConfig back = config_from_json(nlohmann::json::parse(config_to_json(c).dump()));
  CHECK(config_to_json(back).dump() == config_to_json(c).dump());

  CHECK_THROWS(config_from_json(nlohmann::json::parse(R"({"policy": "nope"})")));
  CHECK_THROWS(config_from_json(nlohmann::json::parse(R"({"mc_samples": 0})")).validate());
}

TEST_CASE("config file paths resolve against the file") {
  const fs::path dir = scratch("cfg");
  put(dir / "sub" / "run.json", R"({"manifest": "m.json", "scanpaths": "s.csv"})");
  const RunConfig c = load_config(dir / "sub" / "run.json");
  CHECK(c.manifest == dir / "sub" / "m.json");
  CHECK(c.scanpaths == dir / "sub" / "s.csv");
  CHECK_THROWS_AS(load_config(dir / "missing.json"), LoadError);
}

TEST_CASE("toy dataset loads") {
  const fs::path dir = scratch("toy");
  const Dataset d = load_dataset(toy_manifest(dir), toy_scanpaths(dir, kGoodRows), RunConfig{});
  CHECK(d.grid.cols() == 4);
  CHECK(d.grid.rows() == 3);
  CHECK(d.trials.size() == 4);
  CHECK(d.subjects() == std::vector<std::string>{"s1", "s2"});
  CHECK(d.trials_for_image("a").size() == 2);
  CHECK(d.report.clamped.empty());
  // s1 on b never enters the target; s2 on a does.
  for (const auto& t : d.trials) CHECK(t.found == t.found_flag);
}

TEST_CASE("loader errors carry context") {
  const fs::path dir = scratch("errs");
  const fs::path m = toy_manifest(dir);
  CHECK(load_error(m, toy_scanpaths(dir, "s1,zzz,1,112,80,2,0\n")).find("zzz") != std::string::npos);
  CHECK(load_error(m, toy_scanpaths(dir, "s1,a,1,112,80,3,0\n")).find("max_saccades") != std::string::npos);
  CHECK(load_error(m, toy_scanpaths(dir, "s1,a,1,112,80,2,0\ns1,a,3,50,50,2,0\n")).find("scan.csv:") !=
        std::string::npos);
  CHECK(load_error(m, toy_scanpaths(dir, "s1,a,1,abc,80,2,0\n")).find("scan.csv:2") != std::string::npos);
  put(dir / "nohead.csv", "s1,a,1,112,80,2,0\n");
  CHECK_FALSE(load_error(m, dir / "nohead.csv").empty());

  put(dir / "dangling.json", R"({"image_width": 128, "image_height": 96, "images": [
      {"image_id": "a", "target": {"left": 0, "top": 0, "width": 40, "height": 40},
       "initial_fixation": {"x": 112, "y": 80}, "saliency": {"s": "nowhere.csv"}}]})");
  CHECK_THROWS_AS(load_manifest(dir / "dangling.json", 32), LoadError);

  put(dir / "hit.json", R"({"image_width": 128, "image_height": 96, "images": [
      {"image_id": "a", "target": {"left": 0, "top": 0, "width": 40, "height": 40},
       "initial_fixation": {"x": 10, "y": 10}}]})");
  CHECK_THROWS_AS(load_manifest(dir / "hit.json", 32), LoadError);

  put(dir / "dup.json", R"({"image_width": 128, "image_height": 96, "images": [
      {"image_id": "a", "target": {"left": 0, "top": 0}, "initial_fixation": {"x": 112, "y": 80}},
      {"image_id": "a", "target": {"left": 0, "top": 0}, "initial_fixation": {"x": 112, "y": 80}}]})");
  CHECK_THROWS_AS(load_manifest(dir / "dup.json", 32), LoadError);

  put(dir / "bad.json", "{not json");
  CHECK_THROWS_AS(load_manifest(dir / "bad.json", 32), LoadError);

  write_csv_matrix(dir / "sal_a.csv", GridMatrixd::Ones(90, 128));
  CHECK_FALSE(load_error(m, toy_scanpaths(dir, kGoodRows)).empty());
}

TEST_CASE("out-of-image gaze is clamped and flagged") {
  const fs::path dir = scratch("clamp");
  const Dataset d = load_dataset(toy_manifest(dir), toy_scanpaths(dir, "s1,a,1,112,80,2,0\ns1,a,2,-3,60,2,0\n"),
                                 RunConfig{});
  REQUIRE(d.trials.size() == 1);
  CHECK(d.trials[0].fixations_px[1] == PixelPoint{0, 60});
  CHECK(d.report.clamped.size() == 1);

  const Dataset mm = load_dataset(dir / "manifest.json",
                                  toy_scanpaths(dir, "s1,a,1,112,80,2,0\ns1,a,2,10,10,2,0\n"), RunConfig{});
  CHECK(mm.trials[0].found);
  CHECK(mm.report.found_mismatches.size() == 1);
}

TEST_CASE("results csv round trip") {
  const std::vector<ModelResult> rs{{"a", 2, true, 1, {{3, 2}, {0, 0}}}, {"b", 12, false, 12, {{1, 1}, {2, 1}}}};
  CHECK(parse_results_csv(results_csv(rs)) == rs);
  CHECK(parse_cells(format_cells({{3, 2}, {10, 0}})) == std::vector<Cell>{{3, 2}, {10, 0}});
  CHECK_THROWS_AS(parse_cells("3-2"), DomainError);
  CHECK_THROWS(parse_results_csv("image_id,budget\nx,1\n"));
}

TEST_CASE("experiment cardinality, determinism and worker independence") {
  const SynthSuite s = small_suite("exp", 10);
  RunConfig c;
  c.policy = Policy::greedy;
  c.prior = "synthetic";
  c.output_dir = s.dir / "out1";
  const Dataset d = load_stimuli(s.manifest, c);
  const ExperimentOutput a = run_experiment(d, c);
  CHECK(a.errors.empty());
  CHECK(a.results.size() == 40);
  c.threads = 3;
  const ExperimentOutput b = run_experiment(d, c);
  CHECK(results_csv(a.results) == results_csv(b.results));

  write_experiment(a, c);
  c.output_dir = s.dir / "out2";
  write_experiment(b, c);
  CHECK(slurp(s.dir / "out1" / "results.csv") == slurp(s.dir / "out2" / "results.csv"));
  CHECK(load_results_csv(s.dir / "out1" / "results.csv") == a.results);
  const auto j = nlohmann::json::parse(slurp(s.dir / "out1" / "results.json"));
  CHECK(j.at("results").size() == 40);
}

TEST_CASE("saliency policy runs without image files") {
  const fs::path dir = scratch("noimg");
  RunConfig c;
  c.policy = Policy::saliency_ior;
  c.prior = "s";
  const Dataset d = load_stimuli(toy_manifest(dir), c);
  const ExperimentOutput out = run_experiment(d, c);
  CHECK(out.errors.empty());
  CHECK(out.results.size() == 8);

  c.policy = Policy::cibs;
  const ExperimentOutput failed = run_experiment(d, c);
  CHECK(failed.errors.size() == 8);
  CHECK(failed.results.empty());
}

TEST_CASE("posterior snapshots") {
  const SynthSuite s = small_suite("snap", 1);
  RunConfig c;
  c.policy = Policy::greedy;
  c.budgets = {2, 4};
  c.posterior_snapshots = true;
  c.output_dir = s.dir / "out";
  const ExperimentOutput out = run_experiment(load_stimuli(s.manifest, c), c);
  const fs::path step0 = s.dir / "out" / "posteriors" / "img0" / "step_00.csv";
  REQUIRE(fs::exists(step0));
  CHECK(read_csv_matrix(step0).sum() == doctest::Approx(1.0));
  CHECK(out.results.size() == 2);
}

TEST_CASE("evaluation of a copied participant") {
  const SynthSuite s = small_suite("eval", 8);
  RunConfig c;
  const Dataset d = load_dataset(s.manifest, s.scanpaths, c);
  // Model = subject s1: it needs exactly as many saccades as s1 made when s1 found the target.
  std::vector<ModelResult> rs;
  for (const auto& e : d.manifest.entries)
    for (const HumanTrial* t : d.trials_for_image(e.image_id)) {
      if (t->subject_id != "s1") continue;
      const int need = int(t->fixations_px.size()) - 1;
      for (int b : c.budgets) {
        const bool found = t->found && need <= b;
        rs.push_back({e.image_id, b, found, found ? need : b, t->scanpath.fixations()});
      }
    }
  const EvaluationReport r = evaluate(d, rs, c);
  bool seen = false;
  for (const auto& p : r.participants)
    if (p.subject_id == "s1") {
      seen = true;
      CHECK(p.mean_agreement == 1.0);
      CHECK(p.jaccard == 1.0);
    }
  CHECK(seen);

  std::istringstream table(table_csv(r));
  std::string line;
  std::getline(table, line);
  int rows = 0;
  while (std::getline(table, line)) ++rows;
  CHECK(rows == 5);
  CHECK(table_metric_names().size() == 5);

  std::vector<ModelResult> partial(rs.begin(), rs.end() - 1);
  try {
    evaluate(d, partial, c);
    CHECK(false);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find(rs.back().image_id) != std::string::npos);
  }
}

TEST_CASE("copied subject scanpaths give hmSD equal to the mean distance to the others") {
  const SynthSuite s = small_suite("hmsd", 4);
  const Dataset d = load_dataset(s.manifest, s.scanpaths, RunConfig{});
  for (const auto& e : d.manifest.entries) {
    std::vector<Scanpath> humans;
    for (const HumanTrial* t : d.trials_for_image(e.image_id))
      if (t->found && t->scanpath.size() >= 2) humans.push_back(t->scanpath);
    if (humans.size() < 3) continue;
    const Scanpath model(humans[0].fixations(), ScanpathOrigin::model);
    const auto rec = dissimilarity_records({{e.image_id, humans, model}}, d.grid);
    double sum = 0;
    for (std::size_t k = 1; k < humans.size(); ++k) sum += scanpath_dissimilarity(humans[0], humans[k], d.grid);
    CHECK(rec.records.at(0).hmsd == doctest::Approx(sum / double(humans.size())));
  }
}

TEST_CASE("saliency evaluation") {
  const SynthSuite s = small_suite("auc", 6);
  RunConfig c;
  c.saliency_maps = {"human", "flat", "synthetic"};
  c.auc_variants = {"paper_main"};
  const Dataset d = load_dataset(s.manifest, s.scanpaths, c);
  const auto rows = eval_saliency(d, c, {parse_rank_bucket("3")});
  double human = -1, best_other = -1;
  for (const auto& r : rows) {
    if (r.map == "human") human = r.auc;
    else best_other = std::max(best_other, r.auc);
    if (r.map == "flat") CHECK(r.auc == doctest::Approx(0.5));
  }
  CHECK(human > best_other);

  const RankBucket third = parse_rank_bucket("3");
  CHECK(third.first == 3);
  CHECK(third.last == 3);
  const RankBucket mid = parse_rank_bucket("5-8");
  CHECK(mid.contains(6));
  CHECK_FALSE(mid.contains(9));
  CHECK(default_rank_buckets().size() == 6);
  CHECK_THROWS(parse_rank_bucket("x"));

  int third_positives = 0;
  for (const auto& t : d.trials) third_positives += t.fixations_px.size() >= 3;
  c.saliency_maps = {"flat"};
  c.pooled_auc = true;
  const auto pooled = eval_saliency(d, c, {third});
  REQUIRE(pooled.size() == 1);
  CHECK(pooled[0].positives == third_positives);
}

TEST_CASE("error list shape") {
  const auto j = error_list({{"load_error", "bad", "file.csv"}});
  CHECK(j.at("errors").size() == 1);
  CHECK(j.at("errors")[0].at("code") == "load_error");
  CHECK(j.at("errors")[0].at("context") == "file.csv");
}

TEST_CASE("command line") {
  const SynthSuite s = small_suite("cli", 2);
  const std::string cli = VSEARCH_CLI;
  const std::string out = (s.dir / "o").string();
  const std::string run = cli + " run --manifest " + s.manifest.string() + " --policy greedy --prior center --out " +
                          out + " > /dev/null";
  CHECK(std::system(run.c_str()) == 0);
  CHECK(load_results_csv(s.dir / "o" / "results.csv").size() == 8);

  const std::string eval = cli + " evaluate --manifest " + s.manifest.string() + " --scanpaths " +
                           s.scanpaths.string() + " --policy greedy --prior center --out " + out + " > /dev/null";
  CHECK(std::system(eval.c_str()) == 0);
  CHECK(fs::exists(s.dir / "o" / "evaluation" / "table1.json"));

  const std::string bad = cli + " run --manifest " + (s.dir / "absent.json").string() + " 2> " +
                          (s.dir / "err.json").string();
  CHECK(std::system(bad.c_str()) != 0);
  const auto err = nlohmann::json::parse(slurp(s.dir / "err.json"));
  CHECK(err.at("errors").size() >= 1);
}

}
