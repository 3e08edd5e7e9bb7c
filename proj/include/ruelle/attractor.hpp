#ifndef RUELLE_ATTRACTOR_HPP
#define RUELLE_ATTRACTOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ruelle/system.hpp"

namespace ruelle {

/** \brief Finite approximation of the invariant set K. */
struct AttractorMesh {
  std::vector<double> points; ///< sorted cell midpoints, pairwise >= resolution/2 apart
  Interval hull;              ///< [min, max] of the raw image points
  double resolution = 0.0;
  double origin = 0.0;        ///< left edge of cell 0
  std::size_t depth = 0;
  bool chaos_game = false;    ///< enumeration exceeded the budget
  /** False when no branch audited as weakly contractive; K may then not be unique. */
  bool unique = true;
};

struct AttractorOptions {
  std::size_t seeds = 33;
  std::size_t budget = 4'000'000; ///< max m^depth * seeds before falling back to the chaos game
  std::size_t chaos_steps = 1'000'000;
  std::size_t burn_in = 1'000;
  std::uint64_t seed = 1;
};

/** Snaps points to cells of width r anchored at `origin` and keeps the midpoint of each occupied cell (cut to `clip`); points are clamped to `clip` first. */
std::vector<double> dedup(std::span<const double> points, double origin, double resolution, const Interval &clip);

/** Cell index of x for cells of width r anchored at origin. */
std::int64_t cell_index(double x, double origin, double resolution);

AttractorMesh build_attractor(const IfsSystem &system, std::size_t depth, double resolution,
                              const AttractorOptions &options = {});

/** Symmetric Hausdorff distance between two non-empty sorted point sets. */
double hausdorff_distance(std::span<const double> a, std::span<const double> b);

/** Hausdorff distance between the mesh and the deduplicated union of its images. */
double invariance_gap(const IfsSystem &system, const AttractorMesh &mesh);

struct OrbitCoverage {
  double fraction = 0.0;
  std::size_t cells_hit = 0;
  std::size_t cells_total = 0;
  std::size_t orbit_points = 0;
  bool sampled = false; ///< random words were used because enumeration exceeded the budget
};

/** Fraction of mesh cells hit by { w_J(x) : |J| <= depth }. */
OrbitCoverage orbit_density_probe(const IfsSystem &system, double x, std::size_t depth, const AttractorMesh &mesh,
                                  const AttractorOptions &options = {});

/**
 * Interval on which grid functions over the mesh live: the hull, widened to
 * at least one resolution cell when the attractor is (nearly) a point.
 */
Interval working_hull(const AttractorMesh &mesh, const Interval &domain);

/** True when at least one map audits as weakly contractive. */
bool has_weakly_contractive_branch(const IfsSystem &system);

} // namespace ruelle

#endif // RUELLE_ATTRACTOR_HPP
