#include "doctest.h"

#include <cmath>
#include <vector>

#include "vsearch/posterior.hpp"
#include "vsearch/random.hpp"
#include "vsearch/template_response.hpp"
#include "vsearch/visibility.hpp"

using namespace vsearch;

namespace {

// Direct product form: prior(i) * prod_t exp(d'^2 W), normalized.
GridMatrixd naive_posterior(const GridMatrixd& prior, const std::vector<GridMatrixd>& vis,
                            const std::vector<GridMatrixd>& w) {
  GridMatrixd p = prior;
  for (std::size_t t = 0; t < w.size(); ++t)
    for (Eigen::Index r = 0; r < p.rows(); ++r)
      for (Eigen::Index c = 0; c < p.cols(); ++c) p(r, c) *= std::exp(vis[t](r, c) * vis[t](r, c) * w[t](r, c));
  double total = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) total += p.data()[i];
  return p / total;
}

}  // namespace

TEST_SUITE("posterior") {

TEST_CASE("init from a flat prior") {
  const auto s = init(flat_prior<double>(GridConfig(128, 96)));
  CHECK(s.log_weights().maxCoeff() == s.log_weights().minCoeff());
  CHECK(s.history().empty());
  CHECK(probabilities(s).maxCoeff() == doctest::Approx(1.0 / 12));
}

TEST_CASE("zero responses leave the posterior unchanged") {
  const GridConfig g(128, 96);
  const auto prior = noise_prior<double>(g, 1);
  const auto s = update(init(prior), Cell{1, 1}, GridMatrixd(GridMatrixd::Zero(3, 4)), GridMatrixd(GridMatrixd::Ones(3, 4)));
  CHECK((s.probabilities() - prior.p()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(s.history().size() == 1);
}

TEST_CASE("two-cell hand evaluation") {
  const auto prior = flat_prior<double>(GridConfig(64, 32));
  GridMatrixd w(1, 2);
  w << std::log(2.0), 0.0;
  const auto s = update(init(prior), Cell{0, 0}, w, GridMatrixd(GridMatrixd::Ones(1, 2)));
  CHECK(s.probabilities()(0, 0) == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(s.probabilities()(0, 1) == doctest::Approx(1.0 / 3).epsilon(1e-14));

  GridMatrixd same(1, 2);
  same << 0.7, 0.7;
  const auto u = update(init(prior), Cell{0, 0}, same, GridMatrixd(GridMatrixd::Constant(1, 2, 0.4)));
  CHECK(u.probabilities()(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("log-sum-exp stability") {
  const auto prior = flat_prior<double>(GridConfig(128, 96));
  GridMatrixd w = GridMatrixd::Zero(3, 4);
  w(1, 2) = 1000;
  const auto s = update(init(prior), Cell{0, 0}, w, GridMatrixd(GridMatrixd::Ones(3, 4)));
  const GridMatrixd p = s.probabilities();
  CHECK(p.allFinite());
  CHECK(p(1, 2) == doctest::Approx(1.0));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("shape and bounds checks") {
  PosteriorState<double> s(flat_prior<double>(GridConfig(128, 96)));
  CHECK_THROWS_AS(s.update({0, 0}, GridMatrixd(GridMatrixd::Zero(4, 3)), GridMatrixd(GridMatrixd::Ones(3, 4))), DomainError);
  CHECK_THROWS_AS(s.update({0, 0}, GridMatrixd(GridMatrixd::Zero(3, 4)), GridMatrixd(GridMatrixd::Ones(3, 3))), DomainError);
  CHECK_THROWS_AS(s.update({4, 0}, GridMatrixd(GridMatrixd::Zero(3, 4)), GridMatrixd(GridMatrixd::Ones(3, 4))), DomainError);
}

TEST_CASE("update order invariance and oracle equivalence") {
  Rng rng(2024);
  std::uniform_int_distribution<int> dim(1, 8), nupd(1, 5);
  std::uniform_real_distribution<double> u01(0, 1), wv(-20, 20);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = dim(rng), cols = dim(rng);
    const GridConfig g(cols * 32, rows * 32);
    const auto prior = noise_prior<double>(g, std::uint64_t(trial));
    const int n = nupd(rng);
    std::vector<GridMatrixd> vis, w;
    for (int t = 0; t < n; ++t) {
      GridMatrixd v(rows, cols), x(rows, cols);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        v.data()[i] = u01(rng);
        x.data()[i] = wv(rng);
      }
      vis.push_back(v);
      w.push_back(x);
    }
    PosteriorState<double> fwd(prior), rev(prior);
    for (int t = 0; t < n; ++t) fwd.update({0, 0}, w[t], vis[t]);
    for (int t = n - 1; t >= 0; --t) rev.update({0, 0}, w[t], vis[t]);
    const GridMatrixd want = naive_posterior(prior.p(), vis, w);
    const GridMatrixd got = fwd.probabilities();
    for (Eigen::Index i = 0; i < got.size(); ++i) {
      CHECK(std::abs(got.data()[i] - want.data()[i]) <= 1e-9 * std::abs(want.data()[i]) + 1e-300);
      CHECK(rev.probabilities().data()[i] == doctest::Approx(got.data()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("a non-target fixation suppresses its own cell") {
  const GridConfig g(160, 128);
  const auto prior = flat_prior<double>(g);
  const Cell k{2, 1};
  const VisibilityModel<double> m(g);
  const GridMatrixd vis = m.field(k);
  const auto f = response_field(ResponseKind::ibs, vis, GridMatrixd{}, TemplateParams<double>{});
  Rng rng(0);
  const auto s = update(init(prior), k, observe_field(f, Cell{4, 3}, TemplateParams<double>{}, rng), vis);
  CHECK(s.probabilities()(k.row, k.col) < prior(k));
  Eigen::Index r, c;
  s.probabilities().minCoeff(&r, &c);
  CHECK(Cell{int(c), int(r)} == k);
}

}
