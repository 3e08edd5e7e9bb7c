#include "ruelle/dual.hpp"

#include "ruelle/transfer_operator.hpp"

namespace ruelle {

DiscreteMeasure apply_transfer_dual(const IfsSystem &system, const DiscreteMeasure &mu) {
  std::vector<Atom<double>> atoms;
  atoms.reserve(mu.size() * system.size());
  for (const auto &a : mu.atoms())
    for (std::size_t j = 0; j < system.size(); ++j)
      atoms.push_back({system.map(j, a.position), system.potential(j, a.position) * a.mass});
  return DiscreteMeasure(std::move(atoms));
}

EigenMeasure power_eigenmeasure(const IfsSystem &system, const DiscreteMeasure &start, double origin,
                                const EigenMeasureOptions &options) {
  if (!(options.tolerance > 0.0))
    throw SystemError("power_eigenmeasure: tolerance must be positive");
  if (start.empty())
    throw SystemError("power_eigenmeasure: empty starting measure");
  const double r = options.resolution > 0.0 ? options.resolution : system.domain().width() / 4096.0;
  EigenMeasure out;
  DiscreteMeasure mu = start.scaled(1.0 / start.mass());
  for (std::size_t n = 0; n < options.max_iterations; ++n) {
    const DiscreteMeasure pushed = apply_transfer_dual(system, mu);
    const double mass = pushed.mass();
    out.rho = mass / mu.mass();
    DiscreteMeasure next = coarsen(pushed, r, origin);
    next = next.scaled(1.0 / next.mass());
    out.distance = wasserstein1(next, mu);
    mu = std::move(next);
    out.iterations = n + 1;
    if (out.distance <= options.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.mu = std::move(mu);
  return out;
}

double duality_gap(const IfsSystem &system, const DiscreteMeasure &mu, const GridFunction &f) {
  const DiscreteMeasure pushed = apply_transfer_dual(system, mu);
  const double lhs = pushed.integrate([&](double y) { return f(y); });
  const double rhs = mu.integrate([&](double x) { return transfer_at(system, f, x); });
  return std::abs(lhs - rhs);
}

GridFunction pair_normalize(const GridFunction &h, const DiscreteMeasure &mu) {
  const double pairing = mu.integrate([&](double x) { return h(x); });
  if (!(pairing > 0.0))
    throw PairingError("pair_normalize: <mu, h> is not positive");
  return h.with_values(h.values() / pairing);
}

} // namespace ruelle
