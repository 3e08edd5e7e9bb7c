#include "ruelle/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <random>
#include <unordered_set>

#include "ruelle/modulus.hpp"

namespace ruelle {

std::int64_t cell_index(double x, double origin, double resolution) {
  return static_cast<std::int64_t>(std::floor((x - origin) / resolution));
}

std::vector<double> dedup(std::span<const double> points, double origin, double resolution, const Interval &clip) {
  if (!(resolution > 0.0))
    throw SystemError("dedup: resolution must be positive");
  std::vector<std::int64_t> cells;
  cells.reserve(points.size());
  for (double x : points)
    cells.push_back(cell_index(clip.clamp(x), origin, resolution));
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  std::vector<double> out;
  out.reserve(cells.size());
  for (std::int64_t k : cells) {
    // Midpoint of the cell intersected with the clip interval: a cell cut by an
    // endpoint keeps a representative inside itself, so dedup is idempotent.
    double a = origin + static_cast<double>(k) * resolution;
    double b = origin + static_cast<double>(k + 1) * resolution;
    a = std::max(a, clip.lo);
    b = std::min(b, clip.hi);
    double c = a <= b ? 0.5 * (a + b) : clip.clamp(a);
    // Guard the rounding of origin + k r against landing in a neighbouring cell.
    while (cell_index(c, origin, resolution) < k)
      c = std::nextafter(c, std::numeric_limits<double>::infinity());
    while (cell_index(c, origin, resolution) > k)
      c = std::nextafter(c, -std::numeric_limits<double>::infinity());
    out.push_back(c);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool has_weakly_contractive_branch(const IfsSystem &system) {
  const auto scales = default_scales(system.domain());
  for (std::size_t j = 0; j < system.size(); ++j)
    if (modulus_audit(system.map(j), system.domain(), scales).classification == ModulusClass::WeaklyContractive)
      return true;
  return false;
}

namespace {

double saturating_count(std::size_t m, std::size_t depth, std::size_t seeds) {
  return std::pow(static_cast<double>(m), static_cast<double>(depth)) * static_cast<double>(seeds);
}

} // namespace

AttractorMesh build_attractor(const IfsSystem &system, std::size_t depth, double resolution,
                              const AttractorOptions &options) {
  if (depth < 1)
    throw SystemError("build_attractor: depth must be at least 1");
  if (!(resolution > 0.0))
    throw SystemError("build_attractor: resolution must be positive");
  const Interval &X = system.domain();
  const std::size_t m = system.size();

  AttractorMesh mesh;
  mesh.resolution = resolution;
  mesh.origin = X.lo;
  mesh.depth = depth;
  mesh.unique = has_weakly_contractive_branch(system);

  std::vector<double> raw;
  if (saturating_count(m, depth, options.seeds) <= static_cast<double>(options.budget)) {
    raw = options.seeds >= 2 ? X.linspace(options.seeds) : std::vector<double>{0.5 * (X.lo + X.hi)};
    std::vector<double> next;
    for (std::size_t level = 0; level < depth; ++level) {
      next.clear();
      next.reserve(raw.size() * m);
      for (double x : raw)
        for (std::size_t j = 0; j < m; ++j)
          next.push_back(X.clamp(system.map(j, x)));
      raw.swap(next);
    }
  } else {
    mesh.chaos_game = true;
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    double x = 0.5 * (X.lo + X.hi);
    raw.reserve(options.chaos_steps);
    for (std::size_t step = 0; step < options.burn_in + options.chaos_steps; ++step) {
      x = X.clamp(system.map(pick(rng), x));
      if (step >= options.burn_in)
        raw.push_back(x);
    }
  }
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  mesh.hull = Interval{*lo, *hi};
  mesh.points = dedup(raw, mesh.origin, resolution, X);
  return mesh;
}

double hausdorff_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw SystemError("hausdorff_distance: empty point set");
  auto one_sided = [](std::span<const double> from, std::span<const double> to) {
    double worst = 0.0;
    for (double x : from) {
      auto it = std::lower_bound(to.begin(), to.end(), x);
      double d = std::numeric_limits<double>::infinity();
      if (it != to.end())
        d = *it - x;
      if (it != to.begin())
        d = std::min(d, x - *std::prev(it));
      worst = std::max(worst, d);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

double invariance_gap(const IfsSystem &system, const AttractorMesh &mesh) {
  if (mesh.points.empty())
    throw SystemError("invariance_gap: empty mesh");
  std::vector<double> images;
  images.reserve(mesh.points.size() * system.size());
  for (double x : mesh.points)
    for (std::size_t j = 0; j < system.size(); ++j)
      images.push_back(system.map(j, x));
  const auto image_mesh = dedup(images, mesh.origin, mesh.resolution, system.domain());
  return hausdorff_distance(mesh.points, image_mesh);
}

OrbitCoverage orbit_density_probe(const IfsSystem &system, double x, std::size_t depth, const AttractorMesh &mesh,
                                  const AttractorOptions &options) {
  if (mesh.points.empty())
    throw SystemError("orbit_density_probe: empty mesh");
  std::unordered_set<std::int64_t> cells;
  for (double p : mesh.points)
    cells.insert(cell_index(p, mesh.origin, mesh.resolution));
  std::unordered_set<std::int64_t> hit;
  OrbitCoverage cov;
  cov.cells_total = cells.size();
  auto record = [&](double y) {
    ++cov.orbit_points;
    const auto k = cell_index(y, mesh.origin, mesh.resolution);
    if (cells.count(k))
      hit.insert(k);
  };

  const std::size_t m = system.size();
  double total = 0.0;
  for (std::size_t k = 0; k <= depth; ++k)
    total += std::pow(static_cast<double>(m), static_cast<double>(k));
  if (total <= static_cast<double>(options.budget)) {
    std::vector<double> level{x};
    std::vector<double> next;
    record(x);
    for (std::size_t d = 0; d < depth; ++d) {
      next.clear();
      next.reserve(level.size() * m);
      for (double y : level)
        for (std::size_t j = 0; j < m; ++j) {
          next.push_back(system.map(j, y));
          record(next.back());
        }
      level.swap(next);
    }
  } else {
    cov.sampled = true;
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    record(x);
    while (cov.orbit_points < options.chaos_steps) {
      double y = x;
      for (std::size_t d = 0; d < depth; ++d) {
        y = system.map(pick(rng), y);
        record(y);
      }
    }
  }
  cov.cells_hit = hit.size();
  cov.fraction = static_cast<double>(cov.cells_hit) / static_cast<double>(cov.cells_total);
  return cov;
}

Interval working_hull(const AttractorMesh &mesh, const Interval &domain) {
  Interval h = mesh.hull;
  if (h.width() >= mesh.resolution)
    return h;
  const double mid = 0.5 * (h.lo + h.hi);
  h = Interval{mid - 0.5 * mesh.resolution, mid + 0.5 * mesh.resolution};
  if (h.lo < domain.lo)
    h = Interval{domain.lo, domain.lo + mesh.resolution};
  if (h.hi > domain.hi)
    h = Interval{domain.hi - mesh.resolution, domain.hi};
  return h;
}

} // namespace ruelle
