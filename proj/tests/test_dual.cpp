#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include "ruelle/attractor.hpp"
#include "ruelle/dual.hpp"
#include "ruelle/example_system.hpp"
#include "support.hpp"

using namespace ruelle;

namespace {
const Interval kUnit{0.0, 1.0};

DiscreteMeasure random_measure(std::mt19937_64 &rng, std::size_t atoms) {
  std::vector<Atom<double>> a(atoms);
  for (auto &x : a)
    x = {oracle::uniform(rng, 0, 1), oracle::uniform(rng, 0.01, 1)};
  return DiscreteMeasure(std::move(a));
}
} // namespace

TEST_CASE("dual: T* of a point mass integrates to Tf(x)") {
  std::mt19937_64 rng(21);
  const auto rs = oracle::random_system(rng, 3);
  const auto f = oracle::random_grid_function(rng, 101, -1, 1);
  for (double x : {0.0, 0.123, 0.5, 1.0}) {
    const auto pushed = apply_transfer_dual(rs.system, DiscreteMeasure::dirac(x));
    CHECK(pushed.size() == 3);
    CHECK(pushed.integrate([&](double y) { return f(y); }) == doctest::Approx(transfer_at(rs.system, f, x)));
    CHECK(duality_gap(rs.system, DiscreteMeasure::dirac(x), f) <= 1e-15);
  }
}

TEST_CASE("dual: mass bookkeeping") {
  std::mt19937_64 rng(22);
  const auto mu = random_measure(rng, 200);
  const auto pushed = apply_transfer_dual(oracle::linear_pair(0.3, 0.5), mu);
  CHECK(pushed.mass() == doctest::Approx(0.8 * mu.mass()).epsilon(1e-14));
  const auto rs = oracle::random_system(rng, 2);
  CHECK(apply_transfer_dual(rs.system, mu).mass() ==
        doctest::Approx(mu.integrate([&](double x) { return rs.system.potential_sum(x); })).epsilon(1e-14));
}

TEST_CASE("dual: doubling refines an equal-mass dyadic grid") {
  using boost::multiprecision::cpp_rational;
  const int level = 6;
  std::vector<double> pts;
  for (int k = 0; k < (1 << level); ++k)
    pts.push_back(std::ldexp(k, -level));
  const auto pushed = apply_transfer_dual(oracle::linear_pair(0.5, 0.5), DiscreteMeasure::uniform(pts));
  // Oracle: push each rational atom k/2^level through both branches by hand.
  std::map<cpp_rational, cpp_rational> expected;
  for (int k = 0; k < (1 << level); ++k) {
    const cpp_rational x(k, 1 << level), m(1, 1 << level);
    expected[x / 2] += m / 2;
    expected[(x + 1) / 2] += m / 2;
  }
  std::map<cpp_rational, cpp_rational> got;
  for (const auto &a : pushed.atoms())
    got[cpp_rational(a.position)] += cpp_rational(a.mass);
  CHECK(got == expected);
  for (const auto &[x, m] : got)
    CHECK(m == cpp_rational(1, 2 << level));
}

TEST_CASE("dual: coarsen") {
  SUBCASE("separated atoms are unchanged") {
    const DiscreteMeasure mu({{0.1, 1.0}, {0.3, 2.0}, {0.7, 0.5}});
    const auto out = coarsen(mu, 0.1, 0.05);
    REQUIRE(out.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(out.atoms()[i].position == mu.atoms()[i].position);
      CHECK(out.atoms()[i].mass == mu.atoms()[i].mass);
    }
    CHECK(out.resolution() == 0.1);
  }
  SUBCASE("close atoms merge at their centroid") {
    const double r = 1.0 / 64, a = 0.25, b = 0.75;
    const DiscreteMeasure mu({{0.1, a}, {0.1 + r / 4, b}});
    const auto out = coarsen(mu, r, 0.1 - r / 8);
    REQUIRE(out.size() == 1);
    CHECK(out.atoms()[0].mass == a + b);
    CHECK(out.atoms()[0].position == doctest::Approx((a * 0.1 + b * (0.1 + r / 4)) / (a + b)).epsilon(1e-15));
  }
  SUBCASE("a million atoms keep their mass") {
    // Masses are integer multiples of 2^-40, so the exact total is an integer count.
    std::mt19937_64 rng(23);
    std::vector<Atom<double>> atoms(1'000'000);
    std::uint64_t units = 0;
    for (auto &x : atoms) {
      const std::uint64_t k = 1 + rng() % 1'000'000;
      units += k;
      x = {oracle::uniform(rng, 0, 1), std::ldexp(static_cast<double>(k), -40)};
    }
    const DiscreteMeasure mu(std::move(atoms));
    const double exact = std::ldexp(static_cast<double>(units), -40);
    const auto out = coarsen(mu, 1.0 / 4096);
    CHECK(out.size() <= 4096);
    CHECK(std::fabs(out.mass() - exact) <= 1e-12 * exact);
    CHECK(std::fabs(static_cast<double>(oracle::exact_mass(out)) - exact) <= 1e-12 * exact);
  }
  CHECK_THROWS_AS(coarsen(DiscreteMeasure::dirac(0.5), 0.0), SystemError);
}

TEST_CASE("dual: wasserstein distance") {
  CHECK(wasserstein1(DiscreteMeasure::dirac(0.0), DiscreteMeasure::dirac(1.0)) == 1.0);
  CHECK(wasserstein1(DiscreteMeasure::dirac(0.3, 2.0), DiscreteMeasure::dirac(0.3)) == 0.0);
  const DiscreteMeasure a({{0.0, 1.0}, {1.0, 1.0}});
  CHECK(wasserstein1(a, DiscreteMeasure::dirac(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("dual: eigenmeasure") {
  const double r = 1.0 / 4096;
  auto start = [&](const IfsSystem &s) { return DiscreteMeasure::uniform(build_attractor(s, 12, r).points); };
  SUBCASE("doubling gives Lebesgue measure") {
    const IfsSystem s = oracle::linear_pair(0.5, 0.5);
    const auto em = power_eigenmeasure(s, start(s), 0.0, {});
    CHECK(em.converged);
    CHECK(em.mu.mass() == doctest::Approx(1.0));
    CHECK(std::fabs(em.mu.integrate([](double x) { return x; }) - 0.5) <= 0.01);
    CHECK(std::fabs(em.mu.integrate([](double x) { return x * x; }) - 1.0 / 3) <= 0.02);
    // Histogram oracle: each of 16 bins carries 1/16.
    std::vector<double> bins(16, 0.0);
    for (const auto &a : em.mu.atoms())
      bins[std::min<std::size_t>(15, static_cast<std::size_t>(a.position * 16))] += a.mass;
    for (double b : bins)
      CHECK(std::fabs(b - 1.0 / 16) <= 1e-3);
  }
  SUBCASE("constant weights") {
    const IfsSystem s = oracle::linear_pair(0.3, 0.5);
    const auto em = power_eigenmeasure(s, start(s), 0.0, {});
    CHECK(em.converged);
    CHECK(std::fabs(em.rho - 0.8) <= 1e-9);
  }
  SUBCASE("example, and agreement with the primal estimate") {
    const auto ex = build_indifferent_example(RealFunction::parse(kDefaultExamplePotential));
    const auto em = power_eigenmeasure(ex.system, start(ex.system), 0.0, {});
    CHECK(em.converged);
    CHECK(em.rho >= 1.0);
    CHECK(em.rho <= 1.0 + ex.delta);
    const auto est = spectral_radius(TransferOperator(ex.system, kUnit, 4096));
    // The two discretizations differ by O(r); see the notes on primal/dual agreement.
    CHECK(std::fabs(est.rho - em.rho) <= est.bracket_width() + r);
  }
  CHECK_THROWS_AS(power_eigenmeasure(oracle::linear_pair(0.5, 0.5), DiscreteMeasure(), 0.0, {}), SystemError);
}

TEST_CASE("dual: duality identity before coarsening, drift after") {
  std::mt19937_64 rng(24);
  for (int c = 0; c < 100; ++c) {
    const auto rs = oracle::random_system(rng, 1 + c % 3);
    const auto mu = random_measure(rng, 100);
    const auto f = oracle::random_grid_function(rng, 65 + c, -1, 1);
    const double scale = mu.integrate([&](double x) { return std::fabs(transfer_at(rs.system, f, x)); });
    CHECK(duality_gap(rs.system, mu, f) <= 1e-12 * scale);
  }
  const auto rs = oracle::random_system(rng, 2);
  const auto mu = coarsen(random_measure(rng, 2000), 1.0 / 64);
  const auto f = oracle::random_grid_function(rng, 129, -1, 1);
  MESSAGE("duality gap after coarsening at r = 1/64: " << duality_gap(rs.system, mu, f));
}

TEST_CASE("dual: pair_normalize") {
  const auto two = GridFunction::constant(kUnit, 33, 2.0);
  const auto one = pair_normalize(two, DiscreteMeasure::uniform(std::vector<double>{0.1, 0.5, 0.9}));
  CHECK(one.min_value() == 1.0);
  CHECK(one.max_value() == 1.0);

  const IfsSystem s = oracle::linear_pair(0.5, 0.5);
  const auto em = power_eigenmeasure(s, DiscreteMeasure::uniform(build_attractor(s, 10, 1.0 / 1024).points), 0.0, {});
  const auto h = pair_normalize(GridFunction::constant(kUnit, 33, 1.0), em.mu);
  CHECK((h.values().array() - 1.0).abs().maxCoeff() <= 1e-9);

  CHECK_THROWS_AS(pair_normalize(two, DiscreteMeasure()), PairingError);
}
