#include "vsearch/harness/config.hpp"

#include <fstream>

#include "vsearch/errors.hpp"
#include "vsearch/metrics.hpp"

namespace vsearch::harness {

namespace fs = std::filesystem;

std::string RunConfig::label() const {
  return model_label.empty() ? to_string(policy) + "+" + prior : model_label;
}

SearchConfig RunConfig::search_config(int budget) const {
  SearchConfig s;
  s.policy = policy;
  s.max_saccades = budget;
  s.mc_samples = mc_samples;
  s.seed = seed;
  s.template_params = template_params;
  s.visibility = visibility;
  s.ior_radius = ior_radius;
  return s;
}

void RunConfig::validate() const {
  if (cell_size <= 0) throw DomainError("config: cell_size must be positive");
  if (budgets.empty()) throw DomainError("config: budgets must not be empty");
  for (int b : budgets)
    if (b < 1) throw DomainError("config: every budget must be >= 1");
  if (threads < 1) throw DomainError("config: threads must be >= 1");
  if (center_sigma_px < 0) throw DomainError("config: center_sigma_px must be >= 0");
  if (!(human_kernel_sigma_px > 0)) throw DomainError("config: human_kernel_sigma_px must be positive");
  if (human_prior_rank < 1) throw DomainError("config: human_prior_rank must be >= 1");
  for (const auto& v : auc_variants) parse_auc_variant(v);
  search_config(budgets.front()).validate();
}

RunConfig config_from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw DomainError("config: top-level JSON value must be an object");
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  if (j.contains("manifest")) c.manifest = j.at("manifest").get<std::string>();
  if (j.contains("scanpaths")) c.scanpaths = j.at("scanpaths").get<std::string>();
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  get("cell_size", c.cell_size);
  if (j.contains("visibility")) {
    const auto& v = j.at("visibility");
    if (v.contains("sigma_x_sq")) c.visibility.sigma_x_sq = v.at("sigma_x_sq").get<double>();
    if (v.contains("sigma_y_sq")) c.visibility.sigma_y_sq = v.at("sigma_y_sq").get<double>();
  }
  if (j.contains("template")) {
    const auto& t = j.at("template");
    if (t.contains("a")) c.template_params.a = t.at("a").get<double>();
    if (t.contains("b")) c.template_params.b = t.at("b").get<double>();
    if (t.contains("mode")) {
      const auto mode = t.at("mode").get<std::string>();
      if (mode == "deterministic") c.template_params.mode = ResponseMode::deterministic;
      else if (mode == "sampled") c.template_params.mode = ResponseMode::sampled;
      else throw DomainError("config: template.mode must be 'deterministic' or 'sampled'");
    }
  }
  if (j.contains("policy")) c.policy = parse_policy(j.at("policy").get<std::string>());
  get("prior", c.prior);
  get("budgets", c.budgets);
  get("mc_samples", c.mc_samples);
  get("seed", c.seed);
  get("ior_radius", c.ior_radius);
  get("center_sigma_px", c.center_sigma_px);
  get("human_kernel_sigma_px", c.human_kernel_sigma_px);
  get("human_prior_rank", c.human_prior_rank);
  get("threads", c.threads);
  get("posterior_snapshots", c.posterior_snapshots);
  get("saliency_maps", c.saliency_maps);
  get("auc_variants", c.auc_variants);
  get("pooled_auc", c.pooled_auc);
  get("model_label", c.model_label);
  return c;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["manifest"] = c.manifest.string();
  j["scanpaths"] = c.scanpaths.string();
  j["output_dir"] = c.output_dir.string();
  j["cell_size"] = c.cell_size;
  j["visibility"] = {{"sigma_x_sq", c.visibility.sigma_x_sq}, {"sigma_y_sq", c.visibility.sigma_y_sq}};
  j["template"] = {{"a", c.template_params.a},
                   {"b", c.template_params.b},
                   {"mode", c.template_params.mode == ResponseMode::deterministic ? "deterministic" : "sampled"}};
  j["policy"] = to_string(c.policy);
  j["prior"] = c.prior;
  j["budgets"] = c.budgets;
  j["mc_samples"] = c.mc_samples;
  j["seed"] = c.seed;
  j["ior_radius"] = c.ior_radius;
  j["center_sigma_px"] = c.center_sigma_px;
  j["human_kernel_sigma_px"] = c.human_kernel_sigma_px;
  j["human_prior_rank"] = c.human_prior_rank;
  j["threads"] = c.threads;
  j["posterior_snapshots"] = c.posterior_snapshots;
  j["saliency_maps"] = c.saliency_maps;
  j["auc_variants"] = c.auc_variants;
  j["pooled_auc"] = c.pooled_auc;
  j["model_label"] = c.model_label;
  return j;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open config");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(path.string(), 0, e.what());
  }
  RunConfig c;
  try {
    c = config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path.string(), 0, e.what());
  }
  // Relative data paths resolve against the config file's directory.
  const fs::path base = path.parent_path();
  for (fs::path* p : {&c.manifest, &c.scanpaths})
    if (!p->empty() && p->is_relative()) *p = base / *p;
  return c;
}

} // namespace vsearch::harness
