#include "doctest.h"

#include <cmath>

#include "vsearch/random.hpp"
#include "vsearch/template_response.hpp"

using namespace vsearch;

namespace {

GridMatrixd ramp(int h, int w, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0, 255);
  GridMatrixd m(h, w);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

}  // namespace

TEST_SUITE("template") {

TEST_CASE("defaults") {
  const TemplateParams<double> p;
  CHECK(p.a == 3.0);
  CHECK(p.b == 4.0);
  CHECK(p.mode == ResponseMode::deterministic);
  CHECK_THROWS_AS((TemplateParams<double>{3, 0}.validate()), DomainError);
  CHECK_THROWS_AS((TemplateParams<double>{-1, 4}.validate()), DomainError);
}

TEST_CASE("correlation map self, negative and flat") {
  const GridConfig g(256, 192);
  GridMatrixd img = ramp(192, 256, 3);
  // Cell (3,2) has center (112,80); the 40x40 window starts at (92,60).
  const GridMatrixd patch = img.block(60, 92, 40, 40);
  GridMatrixd corr = correlation_map(img, patch, g);
  CHECK(corr(2, 3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(corr.maxCoeff() <= 0.5);
  CHECK(corr.minCoeff() >= -0.5);

  GridMatrixd neg = img;
  neg.block(60, 92, 40, 40) = 255.0 - patch.array();
  CHECK(correlation_map(neg, patch, g)(2, 3) == doctest::Approx(-0.5).epsilon(1e-12));

  GridMatrixd flat = img;
  flat.block(60, 92, 40, 40).setConstant(128.0);
  CHECK(correlation_map(flat, patch, g)(2, 3) == 0.0);

  CHECK(correlation_map(GridMatrixd(GridMatrixd::Constant(192, 256, 7.0)), patch, g).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("correlation map crops at the border") {
  const GridConfig g(128, 96);
  const GridMatrixd img = ramp(96, 128, 5);
  // Cell (0,0) centered at (16,16); a 48x48 window would start at (-8,-8).
  GridMatrixd patch = ramp(48, 48, 9);
  patch.block(8, 8, 40, 40) = img.block(0, 0, 40, 40);
  CHECK(correlation_map(img, patch, g)(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(correlation_map(img, GridMatrixd(0, 0), g), DomainError);
  CHECK_THROWS_AS(correlation_map(GridMatrixd(ramp(90, 128, 1)), patch, g), DomainError);
}

TEST_CASE("ibs response statistics") {
  const Cell t{2, 2}, other{0, 0}, k{1, 1};
  CHECK(response_stats_ibs(t, k, t, 0.3).mean == 0.5);
  CHECK(response_stats_ibs(other, k, t, 0.3).mean == -0.5);
  CHECK(response_stats_ibs(t, k, t, 1.0).std == 1.0);
  CHECK(response_stats_ibs(t, k, t, 0.25).std == 4.0);
  CHECK_THROWS_AS(response_stats_ibs(t, k, t, 0.0), DomainError);
}

TEST_CASE("cibs response statistics") {
  const TemplateParams<double> p;
  const Cell t{2, 2}, other{0, 0}, k{1, 1};
  CHECK(response_stats_cibs(t, k, t, 1.0, 0.5, p).mean == doctest::Approx(1.0));
  CHECK(response_stats_cibs(other, k, t, 0.0, 0.0, p).mean == doctest::Approx(-0.25));
  CHECK(response_stats_cibs(t, k, t, 1.0, 0.0, p).std == doctest::Approx(1.0 / 7));
  CHECK(response_stats_cibs(t, k, t, 0.0, 0.0, p).std == doctest::Approx(0.25));
  // At d' = 1 and corr = mu the mean is 2 mu.
  CHECK(response_stats_cibs(t, k, t, 1.0, 0.5, p).mean == doctest::Approx(1.0));
  CHECK(response_stats_cibs(other, k, t, 1.0, -0.5, p).mean == doctest::Approx(-1.0));
}

TEST_CASE("cibs mean is monotone in corr and std decreases with d'") {
  const TemplateParams<double> p;
  const Cell t{0, 0}, o{1, 0};
  for (double d = 0; d <= 1.0; d += 0.05) {
    double last = -1e9;
    for (double c = -0.5; c <= 0.5; c += 0.05) {
      const double m = response_stats_cibs(o, t, t, d, c, p).mean;
      CHECK(m > last);
      last = m;
    }
    CHECK(response_stats_cibs(t, t, t, d, 0.0, p).std > response_stats_cibs(t, t, t, d + 0.05, 0.0, p).std);
  }
}

TEST_CASE("observe") {
  TemplateParams<double> p;
  Rng rng(1);
  CHECK(observe(ResponseStats<double>{-0.25, 0.3}, p, rng) == -0.25);

  p.mode = ResponseMode::sampled;
  Rng r1(42), r2(42);
  CHECK(observe(ResponseStats<double>{0.1, 0.5}, p, r1) == observe(ResponseStats<double>{0.1, 0.5}, p, r2));

  Rng r(7);
  const int n = 100000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double w = observe(ResponseStats<double>{0.3, 0.7}, p, r);
    sum += w;
    sq += w * w;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.3) < 3 * 0.7 / std::sqrt(double(n)));
  CHECK(std::sqrt(sq / n - mean * mean) == doctest::Approx(0.7).epsilon(0.01));
}

TEST_CASE("response fields agree with pointwise statistics") {
  const TemplateParams<double> p;
  GridMatrixd vis(2, 3), corr(2, 3);
  vis << 1.0, 0.5, 0.1, 0.8, 0.3, 0.02;
  corr << 0.1, -0.2, 0.5, 0.0, -0.5, 0.3;
  const Cell target{1, 1};
  const auto fi = response_field(ResponseKind::ibs, vis, GridMatrixd{}, p);
  const auto fc = response_field(ResponseKind::cibs, vis, corr, p);
  Rng rng(0);
  const GridMatrixd wc = observe_field(fc, target, p, rng);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) {
      const Cell i{c, r};
      const auto si = response_stats_ibs(i, Cell{}, target, vis(r, c));
      CHECK(fi.absent_mean(r, c) + (i == target ? fi.target_shift(r, c) : 0.0) == doctest::Approx(si.mean));
      CHECK(fi.std(r, c) == doctest::Approx(si.std));
      const auto sc = response_stats_cibs(i, Cell{}, target, vis(r, c), corr(r, c), p);
      CHECK(wc(r, c) == doctest::Approx(sc.mean).epsilon(1e-14));
      CHECK(fc.std(r, c) == doctest::Approx(sc.std));
    }
  GridMatrixd zero = vis;
  zero(0, 0) = 0;
  CHECK_THROWS_AS(response_field(ResponseKind::ibs, zero, GridMatrixd{}, p), DomainError);
  CHECK_THROWS_AS(response_field(ResponseKind::cibs, vis, GridMatrixd(3, 2), p), DomainError);
}

}
