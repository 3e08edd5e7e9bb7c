#include "ruelle/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ruelle {

std::string_view to_string(ModulusClass c) {
  switch (c) {
  case ModulusClass::Nonexpansive: return "nonexpansive";
  case ModulusClass::WeaklyContractive: return "weakly-contractive";
  case ModulusClass::Neither: return "neither";
  case ModulusClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(DiniVerdict v) {
  return v == DiniVerdict::Converged ? "converged" : "inconclusive";
}

std::vector<double> default_scales(const Interval &domain, std::size_t count) {
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i)
    t[i] = std::ldexp(domain.width(), -static_cast<int>(i));
  return t;
}

namespace {

struct PairSearch {
  double value = 0.0;
  std::size_t samples = 0;
  bool domain_failure = false;
};

// max |f(x) - f(x + s)| over a uniform grid of x, then a finer pass around the best x.
PairSearch sweep_offset(const RealFunction &f, const Interval &domain, double s, const ModulusOptions &opt,
                        PairSearch acc) {
  const double span = std::max(0.0, domain.width() - s);
  const std::size_t base = span > 0.0 ? std::max<std::size_t>(opt.budget, 2) : 1;
  const double step = base > 1 ? span / static_cast<double>(base - 1) : 0.0;
  double best = -1.0;
  double best_x = domain.lo;
  auto probe = [&](double x) {
    x = std::clamp(x, domain.lo, domain.lo + span);
    const double y = std::min(x + s, domain.hi);
    ++acc.samples;
    try {
      const double v = std::fabs(f(x) - f(y));
      if (v > best) {
        best = v;
        best_x = x;
      }
    } catch (const DomainError &) {
      acc.domain_failure = true;
    }
  };
  for (std::size_t i = 0; i < base; ++i)
    probe(domain.lo + static_cast<double>(i) * step);
  if (step > 0.0 && opt.refinement > 0) {
    const auto r = static_cast<long>(opt.refinement);
    for (long q = -r; q <= r; ++q)
      probe(best_x + static_cast<double>(q) * step / static_cast<double>(r));
  }
  acc.value = std::max(acc.value, best);
  return acc;
}

} // namespace

ModulusTable modulus_audit(const RealFunction &f, const Interval &domain, std::span<const double> scales,
                           const ModulusOptions &options) {
  if (scales.empty())
    throw SystemError("modulus_audit: empty scale grid");
  for (double t : scales)
    if (!(t > 0.0) || t > domain.width() * (1.0 + 1e-12))
      throw SystemError("modulus_audit: scales must lie in (0, diameter]");

  ModulusTable table;
  table.scales.assign(scales.begin(), scales.end());
  table.values.assign(scales.size(), 0.0);
  bool failures = false;
  const std::size_t k_max = std::max<std::size_t>(options.offsets, 1);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    PairSearch acc;
    for (std::size_t k = 1; k <= k_max; ++k) {
      const double s = std::min(scales[i] * static_cast<double>(k) / static_cast<double>(k_max), domain.width());
      acc = sweep_offset(f, domain, s, options, acc);
    }
    table.values[i] = acc.value;
    table.samples_used += acc.samples;
    failures = failures || acc.domain_failure;
  }

  // A pair admissible at scale t is admissible at every larger scale.
  std::vector<std::size_t> order(scales.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scales[a] < scales[b]; });
  double running = 0.0;
  for (std::size_t idx : order) {
    running = std::max(running, table.values[idx]);
    table.values[idx] = running;
  }

  if (failures) {
    table.classification = ModulusClass::Inconclusive;
    return table;
  }
  bool nonexpansive = true;
  bool weak = true;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double t = table.scales[i];
    nonexpansive = nonexpansive && table.values[i] <= t * (1.0 + options.tolerance);
    weak = weak && table.values[i] < t * (1.0 - options.margin);
  }
  table.classification = !nonexpansive ? ModulusClass::Neither
                         : weak        ? ModulusClass::WeaklyContractive
                                       : ModulusClass::Nonexpansive;
  return table;
}

DiniReport dini_sum(const RealFunction &p, const Interval &domain, const DiniOptions &options) {
  if (!(options.theta > 0.0 && options.theta < 1.0))
    throw SystemError("dini_sum: theta must lie in (0, 1)");
  if (options.depth < 1)
    throw SystemError("dini_sum: depth must be at least 1");

  DiniReport report;
  report.label = p.label();
  report.theta = options.theta;
  report.diameter = domain.width();
  std::vector<double> scales(options.depth);
  double t = domain.width();
  for (std::size_t n = 0; n < options.depth; ++n, t *= options.theta)
    scales[n] = t;
  const ModulusTable table = modulus_audit(p, domain, scales, options.modulus);
  report.terms = table.values;
  report.partial_sums.resize(options.depth);
  double sum = 0.0;
  for (std::size_t n = 0; n < options.depth; ++n) {
    sum += report.terms[n];
    report.partial_sums[n] = sum;
  }
  report.sum = sum;
  report.last_term = report.terms.back();
  bool tail_small = options.depth >= 10 && table.classification != ModulusClass::Inconclusive;
  for (std::size_t n = options.depth >= 10 ? options.depth - 10 : 0; n < options.depth; ++n)
    tail_small = tail_small && report.terms[n] < options.tolerance;
  report.verdict = tail_small ? DiniVerdict::Converged : DiniVerdict::Inconclusive;
  return report;
}

} // namespace ruelle
