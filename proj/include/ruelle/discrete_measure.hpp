#ifndef RUELLE_DISCRETE_MEASURE_HPP
#define RUELLE_DISCRETE_MEASURE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ruelle/system.hpp"

namespace ruelle {

/** \brief Neumaier compensated summation. */
template <typename Scalar>
class CompensatedSum {
public:
  void add(Scalar v) {
    const Scalar t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      carry_ += (sum_ - t) + v;
    else
      carry_ += (v - t) + sum_;
    sum_ = t;
  }
  Scalar value() const { return sum_ + carry_; }

private:
  Scalar sum_{0};
  Scalar carry_{0};
};

template <typename Scalar>
struct Atom {
  Scalar position{};
  Scalar mass{};

  friend bool operator==(const Atom &, const Atom &) = default;
};

/**
 * \brief Finitely supported positive measure: a list of weighted atoms.
 *
 * Masses are strictly positive. Atoms at equal positions are allowed; they
 * merge only under coarsening.
 */
template <typename Scalar>
class BasicDiscreteMeasure {
public:
  using AtomType = Atom<Scalar>;

  BasicDiscreteMeasure() = default;
  explicit BasicDiscreteMeasure(std::vector<AtomType> atoms, Scalar resolution = Scalar(0))
      : atoms_(std::move(atoms)), resolution_(resolution) {
    for (const auto &a : atoms_)
      if (!(a.mass > Scalar(0)) || !std::isfinite(a.position) || !std::isfinite(a.mass))
        throw SystemError("discrete measure atoms need finite positions and positive masses");
  }

  /** Equal masses summing to one at the given points. */
  static BasicDiscreteMeasure uniform(std::span<const Scalar> points) {
    std::vector<AtomType> atoms;
    atoms.reserve(points.size());
    const Scalar m = Scalar(1) / static_cast<Scalar>(points.size());
    for (Scalar x : points)
      atoms.push_back({x, m});
    return BasicDiscreteMeasure(std::move(atoms));
  }

  static BasicDiscreteMeasure dirac(Scalar x, Scalar mass = Scalar(1)) {
    return BasicDiscreteMeasure(std::vector<AtomType>{{x, mass}});
  }

  const std::vector<AtomType> &atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  /** Cell width of the last coarsening, zero when never coarsened. */
  Scalar resolution() const noexcept { return resolution_; }

  Scalar mass() const {
    CompensatedSum<Scalar> s;
    for (const auto &a : atoms_)
      s.add(a.mass);
    return s.value();
  }

  /** <mu, f> */
  template <typename F>
  Scalar integrate(F &&f) const {
    CompensatedSum<Scalar> s;
    for (const auto &a : atoms_)
      s.add(a.mass * static_cast<Scalar>(f(a.position)));
    return s.value();
  }

  BasicDiscreteMeasure scaled(Scalar c) const {
    std::vector<AtomType> atoms(atoms_);
    for (auto &a : atoms)
      a.mass *= c;
    return BasicDiscreteMeasure(std::move(atoms), resolution_);
  }

private:
  std::vector<AtomType> atoms_;
  Scalar resolution_{0};
};

using DiscreteMeasure = BasicDiscreteMeasure<double>;

/**
 * Bins atoms into cells [origin + k r, origin + (k+1) r) and replaces each
 * occupied cell by one atom at its mass-weighted centroid. Cell masses and
 * moments use compensated sums over atoms sorted by (cell, position, mass),
 * so the result does not depend on input order. A cell holding a single
 * atom keeps it unchanged.
 */
template <typename Scalar>
BasicDiscreteMeasure<Scalar> coarsen(const BasicDiscreteMeasure<Scalar> &mu, Scalar resolution,
                                     Scalar origin = Scalar(0)) {
  if (!(resolution > Scalar(0)))
    throw SystemError("coarsen: resolution must be positive");
  struct Keyed {
    std::int64_t cell;
    Atom<Scalar> atom;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(mu.size());
  for (const auto &a : mu.atoms())
    keyed.push_back({static_cast<std::int64_t>(std::floor((a.position - origin) / resolution)), a});
  std::sort(keyed.begin(), keyed.end(), [](const Keyed &a, const Keyed &b) {
    if (a.cell != b.cell)
      return a.cell < b.cell;
    if (a.atom.position != b.atom.position)
      return a.atom.position < b.atom.position;
    return a.atom.mass < b.atom.mass;
  });

  std::vector<Atom<Scalar>> out;
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t end = i;
    CompensatedSum<Scalar> mass;
    CompensatedSum<Scalar> moment;
    while (end < keyed.size() && keyed[end].cell == keyed[i].cell) {
      mass.add(keyed[end].atom.mass);
      moment.add(keyed[end].atom.mass * keyed[end].atom.position);
      ++end;
    }
    if (end - i == 1) {
      out.push_back(keyed[i].atom);
    } else {
      const Scalar m = mass.value();
      // The centroid lies between the extreme atoms of the cell; clamp away rounding.
      const Scalar c = std::clamp(moment.value() / m, keyed[i].atom.position, keyed[end - 1].atom.position);
      out.push_back({c, m});
    }
    i = end;
  }
  return BasicDiscreteMeasure<Scalar>(std::move(out), resolution);
}

/**
 * Wasserstein-1 distance between the normalized measures, computed exactly
 * from the CDFs; it dominates the bounded-Lipschitz distance.
 */
template <typename Scalar>
Scalar wasserstein1(const BasicDiscreteMeasure<Scalar> &a, const BasicDiscreteMeasure<Scalar> &b) {
  const Scalar ma = a.mass();
  const Scalar mb = b.mass();
  if (!(ma > Scalar(0)) || !(mb > Scalar(0)))
    throw SystemError("wasserstein1: measures must have positive mass");
  struct Event {
    Scalar position;
    Scalar delta;
  };
  std::vector<Event> events;
  events.reserve(a.size() + b.size());
  for (const auto &x : a.atoms())
    events.push_back({x.position, x.mass / ma});
  for (const auto &x : b.atoms())
    events.push_back({x.position, -x.mass / mb});
  std::sort(events.begin(), events.end(), [](const Event &l, const Event &r) { return l.position < r.position; });
  CompensatedSum<Scalar> cdf_gap;
  CompensatedSum<Scalar> total;
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    cdf_gap.add(events[i].delta);
    total.add(std::abs(cdf_gap.value()) * (events[i + 1].position - events[i].position));
  }
  return total.value();
}

} // namespace ruelle

#endif // RUELLE_DISCRETE_MEASURE_HPP
