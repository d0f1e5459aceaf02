#include "vsearch/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include "vsearch/errors.hpp"
#include "vsearch/random.hpp"

namespace vsearch {

namespace {

double found_rate(const std::vector<bool>& v) {
  return double(std::count(v.begin(), v.end(), true)) / double(v.size());
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw DomainError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

} // namespace

PerformanceCurve performance_curve(const std::map<int, std::vector<bool>>& found_by_budget) {
  PerformanceCurve curve;
  for (const auto& [budget, found] : found_by_budget) {
    if (found.empty()) throw DomainError("performance_curve: no results for budget " + std::to_string(budget));
    curve.proportion[budget] = found_rate(found);
  }
  return curve;
}

PerformanceCurve human_performance_curve(const std::vector<std::map<int, std::vector<bool>>>& per_participant) {
  std::map<int, std::vector<double>> rates;
  for (const auto& participant : per_participant)
    for (const auto& [budget, found] : participant)
      if (!found.empty()) rates[budget].push_back(found_rate(found));
  PerformanceCurve curve;
  for (const auto& [budget, r] : rates) {
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / double(r.size());
    double ss = 0;
    for (double v : r) ss += (v - mean) * (v - mean);
    curve.proportion[budget] = mean;
    curve.std_dev[budget] = std::sqrt(ss / double(r.size()));
  }
  return curve;
}

double weighted_distance(const PerformanceCurve& human, const PerformanceCurve& model) {
  if (human.proportion.size() != model.proportion.size())
    throw DomainError("weighted_distance: human and model budget sets differ");
  double wd = 0;
  for (const auto& [budget, p_human] : human.proportion) {
    const auto m = model.proportion.find(budget);
    if (m == model.proportion.end())
      throw DomainError("weighted_distance: model curve lacks budget " + std::to_string(budget));
    const auto s = human.std_dev.find(budget);
    if (s == human.std_dev.end() || !(s->second > 0))
      throw DomainError("weighted_distance: human std across participants is zero (or missing) at budget " +
                        std::to_string(budget) + "; the distance is undefined");
    wd += std::abs(p_human - m->second) / (4.0 * s->second * s->second);
  }
  return wd;
}

FoundVector targets_found_by_model(std::span<const std::optional<int>> saccades_needed, std::span<const int> schedule) {
  require_same_length(saccades_needed.size(), schedule.size(), "targets_found_by_model");
  FoundVector out(schedule.size());
  for (std::size_t i = 0; i < schedule.size(); ++i)
    out[i] = saccades_needed[i].has_value() && *saccades_needed[i] <= schedule[i];
  return out;
}

double jaccard(const FoundVector& x, const FoundVector& y) {
  require_same_length(x.size(), y.size(), "jaccard");
  std::size_t both = 0, either = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    both += x[i] && y[i];
    either += x[i] || y[i];
  }
  return either == 0 ? 1.0 : double(both) / double(either);
}

double mean_agreement(const FoundVector& x, const FoundVector& y) {
  require_same_length(x.size(), y.size(), "mean_agreement");
  if (x.empty()) throw DomainError("mean_agreement: empty vectors");
  std::size_t differ = 0;
  for (std::size_t i = 0; i < x.size(); ++i) differ += x[i] != y[i];
  return 1.0 - double(differ) / double(x.size());
}

namespace {

std::vector<Eigen::Vector2d> saccade_vectors(const Scanpath& s, const GridConfig& cfg) {
  std::vector<Eigen::Vector2d> v;
  v.reserve(s.size() - 1);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const PixelPoint a = cell_center(s[i - 1], cfg), b = cell_center(s[i], cfg);
    v.emplace_back(double(b.x - a.x), double(b.y - a.y));
  }
  return v;
}

} // namespace

double scanpath_dissimilarity(const Scanpath& a, const Scanpath& b, const GridConfig& cfg) {
  if (a.size() < 2 || b.size() < 2) throw DomainError("scanpath_dissimilarity: each scanpath needs at least one saccade");
  const auto u = saccade_vectors(a, cfg), v = saccade_vectors(b, cfg);
  const std::size_t n = u.size(), m = v.size();
  Eigen::MatrixXd cost(n + 1, m + 1);
  cost(0, 0) = 0;
  for (std::size_t i = 1; i <= n; ++i) cost(i, 0) = cost(i - 1, 0) + u[i - 1].norm();
  for (std::size_t j = 1; j <= m; ++j) cost(0, j) = cost(0, j - 1) + v[j - 1].norm();
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      cost(i, j) = std::min({cost(i - 1, j - 1) + (u[i - 1] - v[j - 1]).norm(), cost(i - 1, j) + u[i - 1].norm(),
                             cost(i, j - 1) + v[j - 1].norm()});
  const double mean = cost(n, m) / double(std::max(n, m));
  return std::clamp(mean / cfg.diagonal(), 0.0, 1.0);
}

DissimilarityResult dissimilarity_records(const std::vector<DissimilarityInput>& images, const GridConfig& cfg) {
  DissimilarityResult out;
  for (const auto& img : images) {
    std::vector<const Scanpath*> humans;
    for (const auto& h : img.humans)
      if (h.size() >= 2) humans.push_back(&h);
    if (humans.size() < 2) {
      out.skipped.emplace_back(img.image_id, "fewer than two correct human scanpaths with a saccade");
      continue;
    }
    if (img.model.size() < 2) {
      out.skipped.emplace_back(img.image_id, "model scanpath has no saccade");
      continue;
    }
    double between = 0, to_model = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < humans.size(); ++i) {
      to_model += scanpath_dissimilarity(*humans[i], img.model, cfg);
      for (std::size_t j = i + 1; j < humans.size(); ++j, ++pairs)
        between += scanpath_dissimilarity(*humans[i], *humans[j], cfg);
    }
    out.records.push_back({img.image_id, between / double(pairs), to_model / double(humans.size()), int(humans.size())});
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

} // namespace

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "spearman");
  if (x.size() < 3) throw DomainError("spearman: at least three pairs are required");
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const Eigen::Map<const Eigen::VectorXd> a(rx.data(), Eigen::Index(rx.size())), b(ry.data(), Eigen::Index(ry.size()));
  const Eigen::VectorXd ca = a.array() - a.mean(), cb = b.array() - b.mean();
  const double den = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
  if (!(den > 0)) return std::nullopt;
  return ca.dot(cb) / den;
}

double regression_slope_null_intercept(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size(), "regression_slope_null_intercept");
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  if (!(sxx > 0)) throw DomainError("regression_slope_null_intercept: all x are zero");
  return sxy / sxx;
}

std::string to_string(AucVariant v) {
  switch (v) {
    case AucVariant::paper_main: return "paper_main";
    case AucVariant::judd: return "judd";
    case AucVariant::borji: return "borji";
    case AucVariant::shuffled: return "shuffled";
  }
  return "unknown";
}

AucVariant parse_auc_variant(const std::string& name) {
  if (name == "paper_main" || name == "main") return AucVariant::paper_main;
  if (name == "judd") return AucVariant::judd;
  if (name == "borji") return AucVariant::borji;
  if (name == "shuffled" || name == "sauc") return AucVariant::shuffled;
  throw DomainError("unknown AUC variant '" + name + "' (expected paper_main, judd, borji or shuffled)");
}

std::vector<RocPoint> roc_curve(std::span<const double> positives, std::span<const double> negatives,
                                std::span<const double> thresholds) {
  if (positives.empty()) throw DomainError("roc_curve: no positives");
  if (negatives.empty()) throw DomainError("roc_curve: no negatives");
  std::vector<double> pos(positives.begin(), positives.end()), neg(negatives.begin(), negatives.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> thr(thresholds.begin(), thresholds.end());
  std::sort(thr.begin(), thr.end(), std::greater<>());
  const auto at_or_above = [](const std::vector<double>& sorted, double t) {
    return double(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t));
  };
  std::vector<RocPoint> curve{{0.0, 0.0}};
  curve.reserve(thr.size() + 2);
  for (double t : thr)
    curve.push_back({at_or_above(neg, t) / double(neg.size()), at_or_above(pos, t) / double(pos.size())});
  curve.push_back({1.0, 1.0});
  return curve;
}

double trapezoid_area(const std::vector<RocPoint>& curve) {
  double area = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) * 0.5;
  return area;
}

namespace {

std::vector<double> unique_values(std::span<const double> a, std::span<const double> b) {
  std::vector<double> t(a.begin(), a.end());
  t.insert(t.end(), b.begin(), b.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

} // namespace

double auc_from_scores(std::span<const double> positives, std::span<const double> negatives) {
  const auto thr = unique_values(positives, negatives);
  return trapezoid_area(roc_curve(positives, negatives, thr));
}

AucSamples collect_auc_samples(const SaliencyMap<double>& map, std::span<const PixelPoint> positives, AucVariant variant,
                               const AucOptions& opts) {
  const auto& s = map.values;
  const int W = int(s.cols()), H = int(s.rows());
  if (positives.empty()) throw DomainError("roc_auc: no positive fixations");
  const auto value_at = [&](PixelPoint p) {
    if (p.x < 0 || p.y < 0 || p.x >= W || p.y >= H) throw DomainError("roc_auc: fixation outside the saliency map");
    return s(p.y, p.x);
  };
  AucSamples out;
  out.positives.reserve(positives.size());
  std::vector<bool> fixated(std::size_t(W) * std::size_t(H), false);
  const auto index = [W](PixelPoint p) { return std::size_t(p.y) * std::size_t(W) + std::size_t(p.x); };
  for (const auto& p : positives) {
    out.positives.push_back(value_at(p));
    fixated[index(p)] = true;
  }
  const std::size_t unfixated = std::size_t(std::count(fixated.begin(), fixated.end(), false));
  if (unfixated == 0) throw DomainError("roc_auc: every pixel is fixated, no negatives");

  switch (variant) {
    case AucVariant::paper_main:
    case AucVariant::judd: {
      std::vector<double> neg;
      neg.reserve(unfixated);
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
          if (!fixated[index({x, y})]) neg.push_back(s(y, x));
      out.negative_sets.push_back(std::move(neg));
      out.thresholds_at_positives = variant == AucVariant::judd;
      return out;
    }
    case AucVariant::borji: {
      if (opts.borji_repeats < 1) throw DomainError("roc_auc: borji_repeats must be >= 1");
      Rng rng = make_rng(opts.seed);
      std::uniform_int_distribution<int> ux(0, W - 1), uy(0, H - 1);
      for (int rep = 0; rep < opts.borji_repeats; ++rep) {
        std::vector<double> neg(out.positives.size());
        for (auto& v : neg) {
          PixelPoint p;
          do {
            p.x = ux(rng);
            p.y = uy(rng);
          } while (fixated[index(p)]);
          v = s(p.y, p.x);
        }
        out.negative_sets.push_back(std::move(neg));
      }
      return out;
    }
    case AucVariant::shuffled: {
      std::vector<double> neg;
      neg.reserve(opts.other_fixations.size());
      for (const auto& p : opts.other_fixations) {
        const double v = value_at(p);
        if (!fixated[index(p)]) neg.push_back(v);
      }
      if (neg.empty()) throw DomainError("roc_auc: shuffled variant needs fixations from other images");
      out.negative_sets.push_back(std::move(neg));
      return out;
    }
  }
  throw DomainError("roc_auc: unknown variant");
}

double auc_from_samples(const AucSamples& samples) {
  if (samples.negative_sets.empty()) throw DomainError("roc_auc: no negatives");
  double total = 0;
  for (const auto& neg : samples.negative_sets) {
    if (samples.thresholds_at_positives) {
      std::vector<double> thr = samples.positives;
      std::sort(thr.begin(), thr.end());
      thr.erase(std::unique(thr.begin(), thr.end()), thr.end());
      total += trapezoid_area(roc_curve(samples.positives, neg, thr));
    } else {
      total += auc_from_scores(samples.positives, neg);
    }
  }
  return total / double(samples.negative_sets.size());
}

AucSamples pool_auc_samples(const std::vector<AucSamples>& parts) {
  AucSamples out;
  if (parts.empty()) return out;
  out.thresholds_at_positives = parts.front().thresholds_at_positives;
  std::size_t sets = parts.front().negative_sets.size();
  for (const auto& p : parts) sets = std::min(sets, p.negative_sets.size());
  out.negative_sets.resize(sets);
  for (const auto& p : parts) {
    out.positives.insert(out.positives.end(), p.positives.begin(), p.positives.end());
    for (std::size_t k = 0; k < sets; ++k)
      out.negative_sets[k].insert(out.negative_sets[k].end(), p.negative_sets[k].begin(), p.negative_sets[k].end());
  }
  return out;
}

double roc_auc(const SaliencyMap<double>& map, std::span<const PixelPoint> positives, AucVariant variant,
               const AucOptions& opts) {
  return auc_from_samples(collect_auc_samples(map, positives, variant, opts));
}

} // namespace vsearch
