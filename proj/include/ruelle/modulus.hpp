#ifndef RUELLE_MODULUS_HPP
#define RUELLE_MODULUS_HPP

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ruelle/system.hpp"

namespace ruelle {

enum class ModulusClass { Nonexpansive, WeaklyContractive, Neither, Inconclusive };

std::string_view to_string(ModulusClass c);

/**
 * \brief Sampled modulus of continuity alpha(t) = sup_{|x-y|<=t} |f(x) - f(y)|.
 *
 * Values are maxima over finitely many sampled pairs and therefore lower
 * bounds of the true supremum; `sampled` is always true for audited tables.
 */
struct ModulusTable {
  std::vector<double> scales; ///< strictly decreasing
  std::vector<double> values; ///< alpha(scales[i])
  ModulusClass classification = ModulusClass::Inconclusive;
  std::size_t samples_used = 0;
  bool sampled = true;
};

struct ModulusOptions {
  std::size_t budget = 2049;    ///< base samples per (scale, offset) pair
  std::size_t offsets = 4;      ///< pair separations s = t*k/offsets, k = 1..offsets
  std::size_t refinement = 10;  ///< refinement factor around the best pair
  double tolerance = 1e-9;      ///< nonexpansive if alpha(t) <= t (1 + tolerance)
  double margin = 1e-9;         ///< weakly contractive if alpha(t) < t (1 - margin)
};

/** Geometric scale ladder width * 2^-i, i = 0..count-1. */
std::vector<double> default_scales(const Interval &domain, std::size_t count = 13);

ModulusTable modulus_audit(const RealFunction &f, const Interval &domain, std::span<const double> scales,
                           const ModulusOptions &options = {});

enum class DiniVerdict { Converged, Inconclusive };

std::string_view to_string(DiniVerdict v);

/** \brief Partial sums of sum_n alpha_p(theta^n a), a the diameter of the domain. */
struct DiniReport {
  std::string label;
  double theta = 0.5;
  double diameter = 1.0;
  std::vector<double> terms;        ///< alpha_p(theta^n a)
  std::vector<double> partial_sums; ///< nondecreasing
  double sum = 0.0;
  double last_term = 0.0;
  DiniVerdict verdict = DiniVerdict::Inconclusive;
};

struct DiniOptions {
  double theta = 0.5;
  std::size_t depth = 40;
  double tolerance = 1e-10; ///< each of the last ten terms must fall below this
  ModulusOptions modulus{};
};

DiniReport dini_sum(const RealFunction &p, const Interval &domain, const DiniOptions &options = {});

} // namespace ruelle

#endif // RUELLE_MODULUS_HPP
