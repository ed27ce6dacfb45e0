#include <doctest.h>

#include <random>

#include "leastgrad/errors.hpp"
#include "leastgrad/metric.hpp"
#include "support.hpp"

using namespace leastgrad;

namespace {

const GridGeometry kOne{3, 3, 1.0, {}};

MetricField single(NormKind kind, double a, Sym2 s = Sym2::identity()) {
  return MetricField::constant(kind, kOne, a, s);
}

Sym2 random_spd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(0.2, 5.0), ang(0.0, 3.14159);
  const double l1 = e(rng), l2 = e(rng), t = ang(rng);
  const double c = std::cos(t), s = std::sin(t);
  return {l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
}

const NormKind kKinds[] = {NormKind::IsotropicEuclidean, NormKind::Riemannian, NormKind::CrystallineL1,
                           NormKind::CrystallineLinf};

}  // namespace

TEST_CASE("phi on the worked cases") {
  CHECK(eval_phi(single(NormKind::IsotropicEuclidean, 2.0), 4, {3, 4}) == doctest::Approx(10.0));
  CHECK(eval_phi(single(NormKind::Riemannian, 1.0, {4, 0, 1}), 4, {1, 0}) == doctest::Approx(2.0));
  CHECK(eval_phi(single(NormKind::CrystallineL1, 1.0), 4, {1, -2}) == doctest::Approx(3.0));
  CHECK(eval_phi(single(NormKind::CrystallineLinf, 1.5), 4, {1, -2}) == doctest::Approx(3.0));
  CHECK(eval_phi(single(NormKind::Riemannian, 3.0, {4, 0, 1}), 4, {0, 0}) == 0.0);
  CHECK_THROWS_AS(eval_phi(single(NormKind::CrystallineL1, 1.0), 9, {1, 0}), DomainError);
  CHECK_THROWS_AS(eval_phi(single(NormKind::CrystallineL1, 1.0), -1, {1, 0}), DomainError);
}

TEST_CASE("closed-form duals on the worked cases") {
  CHECK(eval_dual(single(NormKind::IsotropicEuclidean, 2.0), 4, {1, 0}) == doctest::Approx(0.5));
  CHECK(eval_dual(single(NormKind::Riemannian, 1.0, {4, 0, 1}), 4, {1, 0}) == doctest::Approx(0.5));
  CHECK(eval_dual(single(NormKind::CrystallineL1, 1.0), 4, {1, -2}) == doctest::Approx(2.0));
  CHECK(eval_dual(single(NormKind::CrystallineLinf, 1.0), 4, {1, -2}) == doctest::Approx(3.0));
  CHECK_THROWS_AS(eval_dual(single(NormKind::Riemannian, 1.0, {1, 0, 1e-12}), 4, {1, 0}), InvalidMetricError);
}

TEST_CASE("sampled dual: zero vector and worked directions") {
  const MetricField iso = single(NormKind::IsotropicEuclidean, 1.0);
  CHECK(dual_norm_sampled(iso, 4, {0, 0}, 64) == 0.0);
  CHECK(dual_norm_sampled(iso, 4, {1, 0}, 4096) == doctest::Approx(1.0).epsilon(1e-3));
  const MetricField rie = single(NormKind::Riemannian, 2.0, {4, 0, 1});
  CHECK(dual_norm_sampled(rie, 4, {0, 1}, 4096) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(dual_norm_sampled(iso, 4, {1, 0}, 4), DomainError);
}

TEST_CASE("closed-form dual matches an independent direction sweep") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(0.1, 4.0), x(-3.0, 3.0);
  for (NormKind k : kKinds) {
    for (int t = 0; t < 50; ++t) {
      const Sym2 s = random_spd(rng);
      const double a = w(rng);
      const Vec2 xi{x(rng), x(rng)};
      const double sweep = lgtest::dual_sweep(k, a, s, xi, 4096);
      const double closed = LocalNorm(k, a, s).dual(xi);
      CHECK(sweep <= closed * (1.0 + 1e-12));
      CHECK(std::abs(sweep - closed) <= 1e-3 * closed);
      CHECK(lgtest::phi_direct(k, a, s, xi) == doctest::Approx(LocalNorm(k, a, s).phi(xi)).epsilon(1e-13));
    }
  }
}

TEST_CASE("bipolar identity: the dual of the dual is phi") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> w(0.3, 3.0), x(-2.0, 2.0);
  for (NormKind k : kKinds) {
    for (int t = 0; t < 20; ++t) {
      const LocalNorm n(k, w(rng), random_spd(rng));
      const Vec2 xi{x(rng), x(rng)};
      double best = 0.0;
      for (int j = 0; j < 4096; ++j) {
        const double th = 2.0 * std::numbers::pi * j / 4096;
        const Vec2 p{std::cos(th), std::sin(th)};
        best = std::max(best, dot(xi, p) / n.dual(p));
      }
      CHECK(std::abs(best - n.phi(xi)) <= 1e-3 * n.phi(xi));
    }
  }
}

TEST_CASE("generalized Cauchy-Schwarz on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(0.1, 4.0), x(-5.0, 5.0);
  for (NormKind k : kKinds) {
    for (int t = 0; t < 2500; ++t) {
      const LocalNorm n(k, w(rng), random_spd(rng));
      const Vec2 xi{x(rng), x(rng)}, eta{x(rng), x(rng)};
      CHECK(dot(xi, eta) <= n.phi(xi) * n.dual(eta) + 1e-12 * (1.0 + n.phi(xi) * n.dual(eta)));
    }
  }
}

TEST_CASE("homogeneity of phi") {
  std::mt19937_64 rng(8);
  for (NormKind k : kKinds) {
    const LocalNorm n(k, 1.7, random_spd(rng));
    const Vec2 xi{0.3, -1.1};
    for (double t : {0.0, 0.5, 2.0, 10.0}) CHECK(std::abs(n.phi(t * xi) - t * n.phi(xi)) <= 1e-12 * n.phi(xi) * t + 1e-300);
  }
}

TEST_CASE("projection on the worked cases") {
  const Vec2 p = LocalNorm(NormKind::IsotropicEuclidean, 1.0).project({2, 0});
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == 0.0);
  const Vec2 q = LocalNorm(NormKind::Riemannian, 1.0, {4, 0, 1}).project({4, 0});
  CHECK(q.x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(q.y) < 1e-12);
  const Vec2 r = LocalNorm(NormKind::CrystallineL1, 1.0).project({2, -0.5});
  CHECK(r.x == 1.0);
  CHECK(r.y == -0.5);
  const Vec2 s = LocalNorm(NormKind::CrystallineLinf, 1.0).project({2, 0.5});
  CHECK(std::abs(s.x) + std::abs(s.y) == doctest::Approx(1.0));
  CHECK(s.x == doctest::Approx(1.0));
  for (NormKind k : kKinds) {
    const Vec2 inside{0.1, -0.2};
    const Vec2 out = LocalNorm(k, 1.0, {2, 0.3, 1}).project(inside);
    CHECK(out.x == inside.x);
    CHECK(out.y == inside.y);
  }
}

TEST_CASE("ellipse projection matches the nearest point found by a sweep") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> w(0.2, 3.0), x(-6.0, 6.0);
  for (int t = 0; t < 100; ++t) {
    const Sym2 s = random_spd(rng);
    const double a = w(rng);
    const LocalNorm n(NormKind::Riemannian, a, s);
    const Vec2 xi{x(rng), x(rng)};
    if (n.dual(xi) <= 1.0) continue;
    const Vec2 p = n.project(xi);
    const Vec2 oracle = lgtest::nearest_on_ellipse(a, s, xi);
    CHECK(norm(p - oracle) <= 1e-7 * (1.0 + norm(xi)));
  }
}

TEST_CASE("projection is feasible, idempotent and non-expansive") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> w(0.2, 3.0), x(-4.0, 4.0);
  for (NormKind k : kKinds) {
    for (int t = 0; t < 200; ++t) {
      const LocalNorm n(k, w(rng), random_spd(rng));
      const Vec2 xi{x(rng), x(rng)}, eta{x(rng), x(rng)};
      const Vec2 p = n.project(xi), q = n.project(eta);
      CHECK(n.dual(p) <= 1.0 + 1e-9);
      const Vec2 pp = n.project(p);
      CHECK(norm(pp - p) <= 1e-12 * (1.0 + norm(p)));
      CHECK(norm(p - q) <= norm(xi - eta) + 1e-12);
    }
  }
}

TEST_CASE("validation reports alpha and violations") {
  const DomainMask mask = build_mask(Box{1, 1, {0, 0}}, 8);
  const GridGeometry& g = mask.geometry();
  const MetricValidation ok = validate(MetricField::constant(NormKind::Riemannian, g, 1.0), mask);
  CHECK(ok.valid);
  CHECK(ok.alpha == doctest::Approx(1.0).epsilon(1e-9));
  const MetricValidation six = validate(MetricField::constant(NormKind::Riemannian, g, 3.0, {4, 0, 1}), mask);
  CHECK(six.valid);
  CHECK(six.alpha == doctest::Approx(6.0).epsilon(1e-6));

  ScalarGrid a(g, 1.0);
  const int bad = mask.interior_cells()[5];
  a[bad] = 0.0;
  const MetricValidation zero = validate(MetricField(NormKind::IsotropicEuclidean, a), mask);
  REQUIRE_FALSE(zero.valid);
  CHECK(zero.violations.front().cell == bad);
  CHECK(zero.violations.front().message == "weight not positive");

  std::vector<Sym2> sig(static_cast<std::size_t>(g.cells()), Sym2::identity());
  sig[static_cast<std::size_t>(bad)] = {1, 2, 1};
  const MetricValidation indefinite = validate(MetricField(NormKind::Riemannian, ScalarGrid(g, 1.0), sig), mask);
  CHECK_FALSE(indefinite.valid);
  CHECK(indefinite.violations.front().cell == bad);
}

TEST_CASE("norm kind names round-trip") {
  for (NormKind k : kKinds) CHECK(parse_norm_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_norm_kind("l2"), DomainError);
}
