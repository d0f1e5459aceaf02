#include "vsearch/harness/saliency_eval.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "vsearch/errors.hpp"
#include "vsearch/metrics.hpp"
#include "vsearch/random.hpp"

namespace vsearch::harness {

const std::vector<RankBucket>& default_rank_buckets() {
  static const std::vector<RankBucket> b{{"1", 1, 1}, {"2", 2, 2}, {"3", 3, 3}, {"4", 4, 4}, {"5-8", 5, 8}, {"9-12", 9, 12}};
  return b;
}

RankBucket parse_rank_bucket(const std::string& text) {
  try {
    const auto dash = text.find('-');
    std::size_t used = 0;
    if (dash == std::string::npos) {
      const int r = std::stoi(text, &used);
      if (used == text.size() && r >= 1) return {text, r, r};
    } else {
      const int a = std::stoi(text.substr(0, dash), &used);
      const int b = std::stoi(text.substr(dash + 1));
      if (a >= 1 && b >= a) return {text, a, b};
    }
  } catch (const std::exception&) {
  }
  throw DomainError("invalid fixation-rank filter '" + text + "' (expected e.g. 3 or 5-8)");
}

std::vector<AucRow> eval_saliency(const Dataset& d, const RunConfig& cfg, const std::vector<RankBucket>& buckets) {
  if (cfg.saliency_maps.empty()) throw DomainError("eval-saliency: no saliency maps selected");
  std::vector<AucVariant> variants;
  for (const auto& v : cfg.auc_variants) variants.push_back(parse_auc_variant(v));

  // Fixations per image per bucket.
  std::vector<std::vector<std::vector<PixelPoint>>> fix(d.manifest.entries.size(),
                                                        std::vector<std::vector<PixelPoint>>(buckets.size()));
  for (std::size_t i = 0; i < d.manifest.entries.size(); ++i)
    for (const HumanTrial* t : d.trials_for_image(d.manifest.entries[i].image_id))
      for (std::size_t k = 0; k < t->fixations_px.size(); ++k)
        for (std::size_t b = 0; b < buckets.size(); ++b)
          if (buckets[b].contains(int(k) + 1)) fix[i][b].push_back(t->fixations_px[k]);

  std::vector<AucRow> rows;
  for (const auto& name : cfg.saliency_maps) {
    std::vector<SaliencyMap<double>> maps;
    for (const auto& e : d.manifest.entries) maps.push_back(build_saliency_map(d, e, name, cfg));
    for (std::size_t b = 0; b < buckets.size(); ++b)
      for (AucVariant v : variants) {
        std::vector<AucSamples> parts;
        double sum = 0;
        int images = 0, positives = 0;
        for (std::size_t i = 0; i < maps.size(); ++i) {
          if (fix[i][b].empty()) continue;
          std::vector<PixelPoint> others;
          for (std::size_t j = 0; j < maps.size(); ++j)
            if (j != i) others.insert(others.end(), fix[j][b].begin(), fix[j][b].end());
          AucOptions opts;
          opts.other_fixations = others;
          opts.seed = derive_seed(cfg.seed, d.manifest.entries[i].image_id + "/" + name, StreamPurpose::borji_negatives, b);
          if (v == AucVariant::shuffled && others.empty()) continue;
          AucSamples s = collect_auc_samples(maps[i], fix[i][b], v, opts);
          positives += int(s.positives.size());
          ++images;
          if (cfg.pooled_auc) parts.push_back(std::move(s));
          else sum += auc_from_samples(s);
        }
        if (images == 0) continue;
        const double auc = cfg.pooled_auc ? auc_from_samples(pool_auc_samples(parts)) : sum / images;
        rows.push_back({name, buckets[b].label, to_string(v), auc, images, positives});
      }
  }
  return rows;
}

std::string auc_table_csv(const std::vector<AucRow>& rows) {
  std::ostringstream s;
  s << "map,rank,variant,auc,images,positives\n";
  for (const auto& r : rows)
    s << r.map << ',' << r.bucket << ',' << r.variant << ',' << std::setprecision(12) << r.auc << ',' << r.images << ','
      << r.positives << '\n';
  return s.str();
}

} // namespace vsearch::harness
