#ifndef RUELLE_DUAL_HPP
#define RUELLE_DUAL_HPP

#include <cstddef>
#include <stdexcept>

#include "ruelle/discrete_measure.hpp"
#include "ruelle/grid_function.hpp"
#include "ruelle/system.hpp"

namespace ruelle {

/** T*mu = sum_j (w_j)_*(p_j mu): every atom (x, m) spawns (w_j(x), p_j(x) m), atom-major order. */
DiscreteMeasure apply_transfer_dual(const IfsSystem &system, const DiscreteMeasure &mu);

struct EigenMeasure {
  DiscreteMeasure mu;           ///< probability measure
  double rho = 0.0;             ///< mass(T*mu) / mass(mu) at the last step
  double distance = 0.0;        ///< W1 between the last two normalized iterates
  std::size_t iterations = 0;
  bool converged = false;
};

struct EigenMeasureOptions {
  double tolerance = 1e-12;       ///< on the W1 distance between successive iterates
  std::size_t max_iterations = 500;
  double resolution = 0.0;        ///< coarsening cell width; 0 means hull width / 4096
};

/**
 * mu <- coarsen(T*mu, r) / mass starting from `start` (typically uniform
 * atoms on the attractor mesh). Cells are anchored at `origin`.
 */
EigenMeasure power_eigenmeasure(const IfsSystem &system, const DiscreteMeasure &start, double origin,
                                const EigenMeasureOptions &options);

/**
 * |<T*mu, f> - <mu, Tf>| with f evaluated by its interpolation on both sides
 * and Tf computed pointwise at each atom.
 */
double duality_gap(const IfsSystem &system, const DiscreteMeasure &mu, const GridFunction &f);

/** Thrown when <mu, h> is not positive. */
class PairingError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/** h / <mu, h>. */
GridFunction pair_normalize(const GridFunction &h, const DiscreteMeasure &mu);

} // namespace ruelle

#endif // RUELLE_DUAL_HPP
