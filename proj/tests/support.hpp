// Independent oracles, random instance generators and the randomized property
// suites. Shared by the doctest binaries and the acceptance runner.
#ifndef RUELLE_TESTS_SUPPORT_HPP
#define RUELLE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "ruelle/attractor.hpp"
#include "ruelle/discrete_measure.hpp"
#include "ruelle/dual.hpp"
#include "ruelle/system.hpp"
#include "ruelle/transfer_operator.hpp"

namespace oracle {

using ruelle::GridFunction;
using ruelle::IfsSystem;
using ruelle::Interval;
using ruelle::RealFunction;

// ---------------------------------------------------------------- instances

/** A random system with 1-Lipschitz maps into [0,1] and quadratic potentials, plus bounds on them. */
struct RandomSystem {
  IfsSystem system;
  double weight_sup = 0.0;     // >= sup_x sum_j p_j(x)
  double weight_abs_sum = 0.0; // >= sum_j sup_x p_j(x)
  double weight_lip = 0.0;     // >= sum_j Lip(p_j)
};

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline RandomSystem random_system(std::mt19937_64 &rng, std::size_t m = 2) {
  std::vector<RealFunction> maps, potentials;
  double abs_sum = 0.0, lip = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double a = uniform(rng, -0.95, 0.95);
    const bool bent = uniform(rng, 0, 1) < 0.5;
    // x - x^2/2 is 1-Lipschitz with range [0, 1/2]; x has range [0, 1].
    const double span = bent ? 0.5 * std::fabs(a) : std::fabs(a);
    const double offset = uniform(rng, 0.0, 1.0 - span) + (a < 0 ? span : 0.0);
    if (bent)
      maps.emplace_back("bent", [a, offset](double x) { return offset + a * (x - 0.5 * x * x); });
    else
      maps.emplace_back("affine", [a, offset](double x) { return offset + a * x; });

    const double c0 = uniform(rng, 0.2, 0.6), c1 = uniform(rng, -0.09, 0.09), c2 = uniform(rng, -0.09, 0.09);
    potentials.emplace_back("quadratic", [c0, c1, c2](double x) { return c0 + x * (c1 + x * c2); });
    abs_sum += c0 + std::fabs(c1) + std::fabs(c2);
    lip += std::fabs(c1) + 2.0 * std::fabs(c2);
  }
  return RandomSystem{IfsSystem(Interval{0.0, 1.0}, std::move(maps), std::move(potentials)), abs_sum, abs_sum, lip};
}

/** The two-branch system with constant weights c1, c2 and maps x/2, (x+1)/2. */
inline IfsSystem linear_pair(double c1, double c2) {
  return IfsSystem(Interval{0.0, 1.0}, {RealFunction::parse("x/2"), RealFunction::parse("(x+1)/2")},
                   {RealFunction::constant(c1), RealFunction::constant(c2)},
                   {RealFunction::constant(0.5), RealFunction::constant(0.5)});
}

inline GridFunction random_grid_function(std::mt19937_64 &rng, Eigen::Index nodes, double lo, double hi) {
  Eigen::VectorXd v(nodes);
  for (auto &x : v)
    x = uniform(rng, lo, hi);
  return GridFunction(Interval{0.0, 1.0}, std::move(v));
}

// ------------------------------------------------------------------ oracles

/** T^n f(x) by the recursion T^n f(x) = sum_j p_j(x) T^{n-1} f(w_j x); touches no operator code. */
inline double word_sum_recursive(const IfsSystem &s, const std::function<double(double)> &f, double x, std::size_t n) {
  if (n == 0)
    return f(x);
  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j)
    total += s.potential(j, x) * word_sum_recursive(s, f, s.map(j, x), n - 1);
  return total;
}

/** T^n f(x) = sum_{|J| = n} p_{w_J}(x) f(w_J x) by explicit word enumeration. */
inline double word_sum_enumerated(const IfsSystem &s, const std::function<double(double)> &f, double x,
                                  std::size_t n) {
  double total = 0.0;
  for (const auto &word : ruelle::all_words(s.size(), n))
    total += ruelle::weight_product(s, word, x) * f(ruelle::compose_word(s, word, x));
  return total;
}

/** Dense matrix of the piecewise-linear discretization, assembled from scratch. */
inline Eigen::MatrixXd dense_transfer(const IfsSystem &s, const Interval &hull, Eigen::Index n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const double h = hull.width() / static_cast<double>(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = i == n - 1 ? hull.hi : hull.lo + h * static_cast<double>(i);
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double u = (s.map(j, x) - hull.lo) / h;
      const Eigen::Index k = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor(u)), 0, n - 2);
      const double t = std::clamp(u - static_cast<double>(k), 0.0, 1.0);
      const double p = s.potential(j, x);
      a(i, k) += p * (1.0 - t);
      a(i, k + 1) += p * t;
    }
  }
  return a;
}

/** Largest eigenvalue modulus from a full nonsymmetric eigensolve. */
inline double dense_spectral_radius(const Eigen::MatrixXd &a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/** Dominant eigenvector of a non-negative matrix by plain dense power iteration, unit sup norm. */
inline Eigen::VectorXd dense_power_vector(const Eigen::MatrixXd &a, std::size_t steps) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.rows());
  for (std::size_t k = 0; k < steps; ++k) {
    v = a * v;
    v /= v.cwiseAbs().maxCoeff();
  }
  return v;
}

// ------------------------------------------------------- property suites
//
// Each runs `cases` randomized instances and returns the number of failures.

inline std::size_t positivity_failures(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    const auto rs = random_system(rng, 1 + c % 3);
    const auto nodes = static_cast<Eigen::Index>(17 + rng() % 240);
    const ruelle::TransferOperator op(rs.system, Interval{0.0, 1.0}, nodes);
    const GridFunction f = random_grid_function(rng, nodes, 1e-6, 1.0);
    const GridFunction g = op.apply(f);
    failures += !(g.min_value() > 0.0);
  }
  return failures;
}

inline std::size_t monotonicity_failures(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    const auto rs = random_system(rng, 1 + c % 3);
    const auto nodes = static_cast<Eigen::Index>(17 + rng() % 240);
    const ruelle::TransferOperator op(rs.system, Interval{0.0, 1.0}, nodes);
    const GridFunction f = random_grid_function(rng, nodes, -1.0, 1.0);
    Eigen::VectorXd bump = random_grid_function(rng, nodes, 0.0, 1.0).values();
    for (Eigen::Index i = 0; i < nodes; i += 3)
      bump[i] = 0.0; // ties must survive too
    const GridFunction g = f.with_values(f.values() + bump);
    const Eigen::VectorXd tf = op.apply(f).values(), tg = op.apply(g).values();
    failures += !((tg - tf).minCoeff() >= 0.0);
  }
  return failures;
}

inline std::size_t linearity_failures(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    const auto rs = random_system(rng, 1 + c % 3);
    const auto nodes = static_cast<Eigen::Index>(17 + rng() % 240);
    const ruelle::TransferOperator op(rs.system, Interval{0.0, 1.0}, nodes);
    const GridFunction f = random_grid_function(rng, nodes, -1.0, 1.0);
    const GridFunction g = random_grid_function(rng, nodes, -1.0, 1.0);
    const double a = uniform(rng, -3, 3), b = uniform(rng, -3, 3);
    const Eigen::VectorXd lhs = op.apply(f.with_values(a * f.values() + b * g.values())).values();
    const Eigen::VectorXd tf = op.apply(f).values(), tg = op.apply(g).values();
    const Eigen::VectorXd rhs = a * tf + b * tg;
    const double scale = std::fabs(a) * tf.cwiseAbs().maxCoeff() + std::fabs(b) * tg.cwiseAbs().maxCoeff() + 1.0;
    failures += !((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * scale);
  }
  return failures;
}

inline std::size_t semigroup_failures(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    const auto rs = random_system(rng, 1 + c % 3);
    const auto nodes = static_cast<Eigen::Index>(17 + rng() % 240);
    const ruelle::TransferOperator op(rs.system, Interval{0.0, 1.0}, nodes);
    const GridFunction f = random_grid_function(rng, nodes, -1.0, 1.0);
    const std::size_t a = rng() % 8, b = rng() % 8;
    using ruelle::Normalization;
    const auto whole = ruelle::iterate(op, f, a + b, Normalization::None);
    const auto first = ruelle::iterate(op, f, a, Normalization::None);
    const auto split = ruelle::iterate(op, first.f, b, Normalization::None);
    failures += !(whole.f.values() == split.f.values());
  }
  return failures;
}

inline std::size_t cocycle_failures(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t m = 1 + c % 3;
    const auto rs = random_system(rng, m);
    auto random_word = [&] {
      std::vector<int> letters(rng() % 7);
      for (auto &l : letters)
        l = static_cast<int>(rng() % m);
      return ruelle::MultiIndex(std::move(letters));
    };
    const auto j = random_word(), k = random_word();
    const double x = uniform(rng, 0.0, 1.0);
    const auto &s = rs.system;
    const double lhs = ruelle::weight_product(s, j * k, x);
    const double rhs = ruelle::weight_product(s, j, ruelle::compose_word(s, k, x)) * ruelle::weight_product(s, k, x);
    const bool weights_ok = std::fabs(lhs - rhs) <= 1e-12 * std::fabs(rhs);
    const bool maps_ok = ruelle::compose_word(s, j * k, x) == ruelle::compose_word(s, j, ruelle::compose_word(s, k, x));
    failures += !(weights_ok && maps_ok);
  }
  return failures;
}

/** Exact rational sum; every double is a dyadic rational, so this is the true sum. */
inline boost::multiprecision::cpp_rational exact_mass(const ruelle::DiscreteMeasure &mu) {
  boost::multiprecision::cpp_rational total = 0;
  for (const auto &a : mu.atoms())
    total += boost::multiprecision::cpp_rational(a.mass);
  return total;
}

inline std::size_t coarsen_mass_failures(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::vector<ruelle::Atom<double>> atoms(1 + rng() % 400);
    for (auto &a : atoms)
      a = {uniform(rng, 0.0, 1.0), std::ldexp(uniform(rng, 1.0, 2.0), -static_cast<int>(rng() % 40))};
    const ruelle::DiscreteMeasure mu(atoms);
    const double r = std::ldexp(uniform(rng, 1.0, 2.0), -static_cast<int>(1 + rng() % 10));
    const double origin = uniform(rng, -0.5, 0.0);
    const auto out = ruelle::coarsen(mu, r, origin);

    const auto before = exact_mass(mu), after = exact_mass(out);
    bool ok = abs(after - before) <= boost::multiprecision::cpp_rational(1e-12) * before;
    // Every output atom must sit inside a cell that held input mass, between that cell's extreme atoms.
    for (const auto &a : out.atoms()) {
      const auto cell = ruelle::cell_index(a.position, origin, r);
      double lo = 2.0, hi = -1.0;
      for (const auto &b : atoms)
        if (ruelle::cell_index(b.position, origin, r) == cell) {
          lo = std::min(lo, b.position);
          hi = std::max(hi, b.position);
        }
      ok = ok && lo <= a.position && a.position <= hi;
    }
    failures += !ok;
  }
  return failures;
}

inline std::size_t dedup_idempotence_failures(std::uint64_t seed, std::size_t cases) {
  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    std::vector<double> pts(1 + rng() % 500);
    for (auto &p : pts)
      p = uniform(rng, -0.2, 1.2);
    const double r = std::ldexp(uniform(rng, 1.0, 2.0), -static_cast<int>(2 + rng() % 12));
    const double origin = uniform(rng, -1.0, 0.0);
    const Interval clip{0.0, 1.0};
    const auto once = ruelle::dedup(pts, origin, r, clip);
    const auto twice = ruelle::dedup(once, origin, r, clip);
    failures += !(once == twice && std::is_sorted(once.begin(), once.end()));
  }
  return failures;
}

} // namespace oracle

#endif // RUELLE_TESTS_SUPPORT_HPP
