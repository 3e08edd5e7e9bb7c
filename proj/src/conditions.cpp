#include "ruelle/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ruelle {

std::string_view to_string(StretchMethod m) {
  switch (m) {
  case StretchMethod::ClosedForm: return "closed-form";
  case StretchMethod::Sampled: return "sampled";
  case StretchMethod::ChainBound: return "chain-bound";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::Holds: return "HOLDS";
  case Verdict::Fails: return "FAILS";
  case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

Verdict decide(double margin, double width) {
  if (margin > width)
    return Verdict::Holds;
  if (margin < -width)
    return Verdict::Fails;
  return Verdict::Inconclusive;
}

namespace {

// max |w(x) - w(y)| / |x - y| over y in the grid and x +- offsets.
template <typename Image>
double max_quotient(const std::vector<double> &grid, const std::vector<double> &images, const Interval &hull, double x,
                    Image &&image) {
  const double wx = image(x);
  double best = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid[i] - x;
    if (d != 0.0)
      best = std::max(best, std::fabs(images[i] - wx) / std::fabs(d));
  }
  for (double off : kStretchOffsets) {
    for (double y : {hull.clamp(x - off), hull.clamp(x + off)}) {
      const double d = y - x;
      if (d != 0.0)
        best = std::max(best, std::fabs(image(y) - wx) / std::fabs(d));
    }
  }
  return best;
}

} // namespace

StretchModel::StretchModel(IfsSystem system, Interval grid, std::size_t nodes)
    : system_(std::move(system)), hull_(grid), grid_(grid.linspace(nodes)) {
  letter_images_.resize(system_.size());
  for (std::size_t j = 0; j < system_.size(); ++j) {
    if (system_.stretch(j)) {
      letter_images_[j].clear();
      continue;
    }
    certified_ = false;
    auto &img = letter_images_[j];
    img.reserve(grid_.size());
    for (double y : grid_)
      img.push_back(system_.map(j, y));
  }
}

double StretchModel::sampled_letter(std::size_t j, double x) const {
  std::vector<double> images;
  const std::vector<double> *img = &letter_images_[j];
  if (img->empty()) {
    images.reserve(grid_.size());
    for (double y : grid_)
      images.push_back(system_.map(j, y));
    img = &images;
  }
  return max_quotient(grid_, *img, hull_, x, [&](double y) { return system_.map(j, y); });
}

double StretchModel::upper(std::size_t j, double x) const {
  if (const auto &closed = system_.stretch(j))
    return (*closed)(x);
  return kSampledStretchInflation * sampled_letter(j, x);
}

double StretchModel::sampled(const MultiIndex &word, double x) const {
  std::vector<double> images;
  images.reserve(grid_.size());
  for (double y : grid_)
    images.push_back(compose_word(system_, word, y));
  return max_quotient(grid_, images, hull_, x, [&](double y) { return compose_word(system_, word, y); });
}

std::string StretchModel::provenance() const {
  std::string s;
  for (std::size_t j = 0; j < system_.size(); ++j) {
    if (j)
      s += ',';
    s += closed_form(j) ? "closed-form" : "sampled*1.02";
  }
  return s;
}

StretchEstimate local_stretch(const StretchModel &model, const MultiIndex &word, StretchMethod method) {
  if (word.empty())
    throw SystemError("local_stretch: word must be non-empty");
  model.system().check_word(word);
  StretchEstimate est;
  est.word = word;
  est.method = method;
  est.points = model.grid();
  est.values.reserve(est.points.size());
  switch (method) {
  case StretchMethod::ClosedForm: {
    if (word.size() != 1 || !model.closed_form(static_cast<std::size_t>(word[0])))
      throw SystemError("local_stretch: no closed-form stretch for word " + word.to_string());
    const RealFunction &g = *model.system().stretch(static_cast<std::size_t>(word[0]));
    for (double x : est.points)
      est.values.push_back(g(x));
    break;
  }
  case StretchMethod::Sampled: {
    const auto &grid = model.grid();
    std::vector<double> images;
    images.reserve(grid.size());
    for (double y : grid)
      images.push_back(compose_word(model.system(), word, y));
    for (double x : est.points)
      est.values.push_back(max_quotient(grid, images, model.hull(), x,
                                        [&](double y) { return compose_word(model.system(), word, y); }));
    break;
  }
  case StretchMethod::ChainBound:
    for (double x : est.points)
      est.values.push_back(chain_stretch_bound(model, word, x));
    break;
  }
  est.sup = *std::max_element(est.values.begin(), est.values.end());
  return est;
}

double chain_stretch_bound(const StretchModel &model, const MultiIndex &word, double x) {
  model.system().check_word(word);
  double bound = 1.0;
  for (std::size_t i = word.size(); i-- > 0;) {
    const auto j = static_cast<std::size_t>(word[i]);
    bound *= model.upper(j, x);
    x = model.system().map(j, x);
  }
  return bound;
}

namespace {

// sum over words of length k of p_{w_J}(y) * chain bound of gamma_J(y), expanded from the innermost letter.
double weighted_stretch_sum(const StretchModel &model, double y, std::size_t k) {
  if (k == 0)
    return 1.0;
  const IfsSystem &sys = model.system();
  double s = 0.0;
  for (std::size_t j = 0; j < sys.size(); ++j)
    s += sys.potential(j, y) * model.upper(j, y) * weighted_stretch_sum(model, sys.map(j, y), k - 1);
  return s;
}

double max_weighted_stretch(const StretchModel &model, std::size_t k) {
  double s = 0.0;
  for (double x : model.grid())
    s = std::max(s, weighted_stretch_sum(model, x, k));
  return s;
}

ConditionReport base_report(const StretchModel &model, std::string id) {
  ConditionReport r;
  r.id = std::move(id);
  r.method = model.provenance();
  r.certified = model.certified();
  r.grid_nodes = model.grid().size();
  return r;
}

void finish(ConditionReport &r, double width) {
  r.margin = r.comparator - r.s;
  r.width = std::max(width, kVerdictFloor * std::max(1.0, std::fabs(r.comparator)));
  r.verdict = decide(r.margin, r.width);
}

} // namespace

ConditionReport depth_k_check(const StretchModel &model, std::size_t k, const SpectralEstimate &rho,
                              std::size_t word_budget) {
  if (k < 1)
    throw SystemError("depth_k_check: k must be at least 1");
  if (std::pow(static_cast<double>(model.system().size()), static_cast<double>(k)) > static_cast<double>(word_budget))
    throw SystemError("depth_k_check: m^k exceeds the word budget");
  ConditionReport r = base_report(model, k == 1 ? "main" : "depth-k");
  r.depth = k;
  r.s = max_weighted_stretch(model, k);
  const double kd = static_cast<double>(k);
  r.comparator = std::pow(rho.rho, kd);
  finish(r, std::pow(rho.bracket_upper, kd) - std::pow(rho.bracket_lower, kd));
  return r;
}

MainTheoremReport main_theorem_check(const StretchModel &model, const SpectralEstimate &rho) {
  MainTheoremReport out;
  out.pointwise = depth_k_check(model, 1, rho);

  const IfsSystem &sys = model.system();
  std::vector<double> global(sys.size(), 0.0);
  for (std::size_t j = 0; j < sys.size(); ++j)
    for (double x : model.grid())
      global[j] = std::max(global[j], model.upper(j, x));
  ConditionReport g = base_report(model, "main-global");
  for (double x : model.grid()) {
    double s = 0.0;
    for (std::size_t j = 0; j < sys.size(); ++j)
      s += sys.potential(j, x) * global[j];
    g.s = std::max(g.s, s);
  }
  g.comparator = rho.rho;
  finish(g, rho.bracket_width());
  out.global = g;
  return out;
}

ConditionReport corollary_check(const StretchModel &model) {
  ConditionReport r = base_report(model, "corollary");
  r.s = max_weighted_stretch(model, 1);
  double lower = std::numeric_limits<double>::infinity();
  for (double x : model.grid())
    lower = std::min(lower, model.system().potential_sum(x));
  r.comparator = lower;
  finish(r, 0.0);
  return r;
}

ConditionReport single_branch_check(const StretchModel &model) {
  ConditionReport r = base_report(model, "single-branch");
  const IfsSystem &sys = model.system();
  for (double x : model.grid()) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sys.size(); ++j)
      best = std::min(best, model.upper(j, x));
    r.s = std::max(r.s, best);
  }
  r.comparator = 1.0;
  finish(r, 0.0);
  return r;
}

DistortionReport distortion_audit(const IfsSystem &system, const MultiIndex &word, double x, double y, double theta,
                                  const DistortionOptions &options) {
  if (!(theta > 0.0 && theta < 1.0))
    throw SystemError("distortion_audit: theta must lie in (0, 1)");
  system.check_word(word);
  const double a = system.domain().width();
  const std::size_t n = word.size();
  DistortionReport rep;

  // suffix(i) = w_{j_{i+1}} o ... o w_{j_n}; built innermost first.
  double sx = x;
  double sy = y;
  rep.premise_holds = true;
  for (std::size_t i = n; i-- > 1;) {
    const auto j = static_cast<std::size_t>(word[i]);
    sx = system.map(j, sx);
    sy = system.map(j, sy);
    const double allowed = std::pow(theta, static_cast<double>(n - i)) * a;
    if (std::fabs(sx - sy) > allowed) {
      rep.premise_holds = false;
      rep.failed_index = i;
      return rep;
    }
  }

  std::vector<double> scales(options.depth);
  double t = a;
  for (std::size_t k = 0; k < options.depth; ++k, t *= theta)
    scales[k] = t;
  std::vector<double> alpha(options.depth, 0.0);
  for (std::size_t j = 0; j < system.size(); ++j) {
    const RealFunction &p = system.potential(j);
    RealFunction logp("log(" + p.label() + ")", [p](double z) { return std::log(p(z)); });
    const ModulusTable table = modulus_audit(logp, system.domain(), scales, options.modulus);
    for (std::size_t k = 0; k < options.depth; ++k)
      alpha[k] = std::max(alpha[k], table.values[k]);
  }
  for (double v : alpha)
    rep.exponent += v;
  rep.bound = std::exp(rep.exponent);
  rep.ratio = weight_product(system, word, x) / weight_product(system, word, y);
  rep.holds = rep.ratio <= rep.bound * (1.0 + 1e-12);
  return rep;
}

IrreducibilityResult irreducibility_probe(const IfsSystem &system, const GridFunction &f, double x,
                                          std::size_t n_max, double threshold, std::size_t word_budget) {
  IrreducibilityResult out;
  // Level n holds (w_J x, p_{w_J}(x)) for all |J| = n, i.e. the atoms of (T*)^n delta_x.
  std::vector<WeightedPoint> level{{x, 1.0}};
  std::vector<WeightedPoint> next;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (level.size() * system.size() > word_budget) {
      out.budget_exhausted = true;
      return out;
    }
    next.clear();
    next.reserve(level.size() * system.size());
    for (const auto &wp : level)
      for (std::size_t j = 0; j < system.size(); ++j)
        next.push_back({system.map(j, wp.point), wp.weight * system.potential(j, wp.point)});
    level.swap(next);
    out.words += level.size();
    double value = 0.0;
    for (const auto &wp : level)
      value += wp.weight * f(wp.point);
    out.value = value;
    if (value > threshold) {
      out.n = n;
      return out;
    }
  }
  return out;
}

} // namespace ruelle
