#include "ruelle/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ruelle/attractor.hpp"
#include "ruelle/conditions.hpp"
#include "ruelle/dual.hpp"
#include "ruelle/example_system.hpp"
#include "ruelle/modulus.hpp"

namespace ruelle {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void fit_geometric_rate(ConvergenceSeries &s) {
  double sn = 0, sy = 0, snn = 0, sny = 0;
  std::size_t count = 0;
  for (std::size_t n = s.fit_begin; n <= s.fit_end && n < s.errors.size(); ++n) {
    if (!(s.errors[n] > 0.0))
      continue;
    const double x = static_cast<double>(n);
    const double y = std::log(s.errors[n]);
    sn += x;
    sy += y;
    snn += x * x;
    sny += x * y;
    ++count;
  }
  if (count < 3) {
    s.at_floor = true;
    s.rate = s.fit_residual = kNaN;
    return;
  }
  const double c = static_cast<double>(count);
  const double slope = (c * sny - sn * sy) / (c * snn - sn * sn);
  const double intercept = (sy - slope * sn) / c;
  double ss = 0.0;
  for (std::size_t n = s.fit_begin; n <= s.fit_end && n < s.errors.size(); ++n) {
    if (!(s.errors[n] > 0.0))
      continue;
    const double r = std::log(s.errors[n]) - intercept - slope * static_cast<double>(n);
    ss += r * r;
  }
  s.rate = std::exp(slope);
  s.fit_residual = std::sqrt(ss / c);
}

ConvergenceReport convergence_experiment(const TransferOperator &op, const GridFunction &h, const DiscreteMeasure &mu,
                                         double rho, std::span<const TestFunction> tests, std::size_t n_max) {
  if (!(rho > 0.0))
    throw std::invalid_argument("convergence_experiment: rho must be positive");
  ConvergenceReport report;
  report.rho = rho;
  for (const auto &test : tests) {
    ConvergenceSeries s;
    s.label = test.label;
    s.pairing = mu.integrate([&](double x) { return test.f(x); });
    const Eigen::VectorXd target = s.pairing * h.values();

    // The true iterate is exp(log_scale) * v; rescaling only happens if v drifts far from unit size.
    Eigen::VectorXd v = test.f.values();
    double log_scale = 0.0;
    s.errors.reserve(n_max + 1);
    for (std::size_t n = 0;; ++n) {
      s.errors.push_back((std::exp(log_scale) * v - target).cwiseAbs().maxCoeff());
      if (n == n_max)
        break;
      v = op.apply(v) / rho;
      const double norm = v.cwiseAbs().maxCoeff();
      if (norm > 0.0 && (norm > 1e100 || norm < 1e-100)) {
        v /= norm;
        log_scale += std::log(norm);
      }
    }

    const auto it = std::min_element(s.errors.begin(), s.errors.end());
    s.floor = *it;
    s.floor_index = 0;
    while (s.errors[s.floor_index] > 10.0 * s.floor)
      ++s.floor_index;
    s.fit_end = s.floor_index;
    s.fit_begin = s.floor_index / 2;
    if (s.floor_index < 4) {
      s.at_floor = true;
      s.rate = s.fit_residual = kNaN;
    } else {
      fit_geometric_rate(s);
    }
    s.monotone_tail = true;
    for (std::size_t n = s.fit_begin + 1; n <= s.fit_end; ++n)
      s.monotone_tail = s.monotone_tail && s.errors[n] <= s.errors[n - 1];
    report.series.push_back(std::move(s));
  }
  return report;
}

Document to_document(const ConvergenceReport &r) {
  Document d;
  d["rho"] = r.rho;
  Document list = Document::array();
  for (const auto &s : r.series) {
    Document e;
    e["f"] = s.label;
    e["pairing"] = s.pairing;
    e["floor"] = s.floor;
    e["floor_index"] = s.floor_index;
    e["fit_window"] = {s.fit_begin, s.fit_end};
    e["at_floor"] = s.at_floor;
    e["rate"] = s.rate;
    e["fit_residual"] = s.fit_residual;
    e["monotone_tail"] = s.monotone_tail;
    Document errors = Document::array();
    for (double x : s.errors)
      errors.push_back(x);
    e["e"] = errors;
    list.push_back(e);
  }
  d["series"] = list;
  return d;
}

namespace {

enum Stage : unsigned {
  kExample = 1u << 0,
  kAttractor = 1u << 1,
  kRadius = 1u << 2,
  kCheck = 1u << 3,
  kEigen = 1u << 4,
  kConverge = 1u << 5,
};

unsigned stages_for(std::string_view command, const RunConfig &config) {
  const unsigned everything = kAttractor | kRadius | kCheck | kEigen | kConverge;
  if (command == "attractor")
    return kAttractor;
  if (command == "radius")
    return kAttractor | kRadius;
  if (command == "check")
    return kAttractor | kRadius | kCheck;
  if (command == "eigen")
    return kAttractor | kRadius | kEigen;
  if (command == "converge")
    return kAttractor | kRadius | kEigen | kConverge;
  if (command == "paper-example")
    return kExample | everything;
  if (command == "all")
    return (config.example_p1 ? unsigned(kExample) : 0u) | everything;
  throw ConfigError("unknown command '" + std::string(command) + "'");
}

Document labels(const std::vector<RealFunction> &fs) {
  Document a = Document::array();
  for (const auto &f : fs)
    a.push_back(f.label());
  return a;
}

// Pipeline state shared by the stages of one command.
struct Run {
  const RunConfig &config;
  std::optional<IfsSystem> system;
  std::optional<AttractorMesh> mesh;
  std::optional<TransferOperator> op;
  std::optional<SpectralEstimate> rho;
  std::optional<EigenPair> pair;
  std::optional<EigenMeasure> measure;
  std::optional<GridFunction> h_normalized;
  Document doc;

  double resolution() const {
    return config.resolution > 0.0 ? config.resolution : system->domain().width() / 4096.0;
  }

  void example(const RealFunction &p1) {
    const ExampleSpec ex = build_indifferent_example(p1, config.grid_nodes);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : Interval{0.0, 1.0}.linspace(config.grid_nodes)) {
      const double s = ex.system.potential_sum(x);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    Document d;
    d["p1"] = ex.p1.label();
    d["p2"] = ex.p2.label();
    d["delta"] = ex.delta;
    d["tent_at_half"] = ex.tent(0.5);
    d["potential_sum_range"] = {lo, hi};
    d["max_tent_minus_quarter_p1"] = ex.max_tent_minus_quarter_p1;
    d["max_tent_minus_quarter_p2"] = ex.max_tent_minus_quarter_p2;
    doc["example"] = d;
    system = ex.system;
  }

  void attractor() {
    AttractorOptions opts;
    opts.seed = config.seed;
    mesh = build_attractor(*system, config.attractor_depth, resolution(), opts);
    Document d = to_document(*mesh);
    d["invariance_gap"] = invariance_gap(*system, *mesh);
    d["orbit_density"] = to_document(orbit_density_probe(*system, mesh->points.front(), config.orbit_depth, *mesh, opts));
    Document moduli = Document::array();
    const auto scales = default_scales(system->domain());
    for (std::size_t j = 0; j < system->size(); ++j) {
      Document m = to_document(modulus_audit(system->map(j), system->domain(), scales));
      m["map"] = system->map(j).label();
      moduli.push_back(m);
    }
    d["map_modulus"] = moduli;
    doc["attractor"] = d;
  }

  void radius() {
    op.emplace(*system, working_hull(*mesh, system->domain()), static_cast<Eigen::Index>(config.grid_nodes));
    SpectralOptions opts;
    opts.max_iterations = config.radius_iterations;
    rho = spectral_radius(*op, opts);
    Document d;
    d["hull"] = {op->hull().lo, op->hull().hi};
    d["nodes"] = op->nodes();
    d["potential_sum_range"] = {op->potential_sum().minCoeff(), op->potential_sum().maxCoeff()};
    d["estimate"] = to_document(*rho);
    const double unc = std::max(rho->relative_uncertainty(), 1e-12);
    d["sandwich"] = to_document(sandwich_check(*op, rho->rho, config.sandwich_steps, unc));
    // A 1% error in rho must be caught by the sandwich test.
    d["corrupted_control"] = to_document(sandwich_check(*op, rho->rho * 1.01, config.sandwich_steps, unc));
    doc["radius"] = d;
  }

  void check() {
    const StretchModel model(*system, op->hull(), config.grid_nodes);
    Document d;
    d["rho"] = rho->rho;
    d["provenance"] = model.provenance();
    d["certified"] = model.certified();
    const MainTheoremReport main = main_theorem_check(model, *rho);
    d["main"] = to_document(main.pointwise);
    d["main_global"] = to_document(main.global);
    d["corollary"] = to_document(corollary_check(model));
    const double words = std::pow(static_cast<double>(system->size()), static_cast<double>(config.depth_k));
    if (words <= double(1u << 16))
      d["depth_k"] = to_document(depth_k_check(model, config.depth_k, *rho));
    else
      d["depth_k"] = {{"skipped", "m^k exceeds the word budget"}};
    d["single_branch"] = to_document(single_branch_check(model));

    Document stretch = Document::array();
    for (std::size_t j = 0; j < system->size(); ++j) {
      Document e;
      e["letter"] = j + 1;
      e["closed_form"] = model.closed_form(j);
      const StretchEstimate sampled = local_stretch(model, MultiIndex{static_cast<int>(j)}, StretchMethod::Sampled);
      e["sampled_sup"] = sampled.sup;
      if (model.closed_form(j)) {
        double gap = 0.0;
        for (std::size_t i = 0; i < sampled.points.size(); ++i)
          gap = std::max(gap, std::fabs(sampled.values[i] - (*system->stretch(j))(sampled.points[i])));
        e["max_gap_to_closed_form"] = gap;
      }
      stretch.push_back(e);
    }
    d["stretch"] = stretch;

    DiniOptions dini;
    dini.theta = config.dini_theta;
    dini.depth = config.dini_depth;
    Document dinis = Document::array();
    for (std::size_t j = 0; j < system->size(); ++j)
      dinis.push_back(to_document(dini_sum(system->potential(j), system->domain(), dini)));
    d["dini"] = dinis;
    doc["check"] = d;
  }

  void eigen() {
    EigenOptions eo;
    eo.tolerance = config.eigen_tolerance;
    eo.max_iterations = config.eigen_iterations;
    pair = power_eigenfunction(*op, eo);
    EigenMeasureOptions mo;
    mo.tolerance = config.measure_tolerance;
    mo.max_iterations = config.measure_iterations;
    mo.resolution = resolution();
    measure = power_eigenmeasure(*system, DiscreteMeasure::uniform(mesh->points), mesh->origin, mo);

    Document d;
    d["eigenfunction"] = to_document(*pair);
    d["eigenmeasure"] = to_document(*measure);
    d["rho_gap"] = std::fabs(pair->rho - measure->rho);
    d["moment_x"] = measure->mu.integrate([](double x) { return x; });
    d["moment_x2"] = measure->mu.integrate([](double x) { return x * x; });
    try {
      h_normalized = pair_normalize(pair->h, measure->mu);
      d["pairing"] = measure->mu.integrate([&](double x) { return pair->h(x); });
      d["duality_gap_h"] = duality_gap(*system, measure->mu, *h_normalized);
    } catch (const PairingError &e) {
      d["pairing_error"] = e.what();
    }
    doc["eigen"] = d;
  }

  void converge() {
    if (!h_normalized) {
      doc["converge"] = {{"skipped", "no normalized eigenfunction"}};
      return;
    }
    std::vector<TestFunction> tests;
    for (const auto &nf : config.test_functions)
      tests.push_back({nf.label, op->sample([&](double x) { return nf.f(x); })});
    tests.push_back({"h", *h_normalized});
    doc["converge"] =
        to_document(convergence_experiment(*op, *h_normalized, measure->mu, rho->rho, tests, config.converge_iterations));
  }
};

} // namespace

Document run_command(const RunConfig &config, std::string_view command) {
  const unsigned stages = stages_for(command, config);
  Run run{config, {}, {}, {}, {}, {}, {}, {}, Document::object()};

  Document header;
  header["command"] = command;
  header["config"] = config.source;
  header["seed"] = config.seed;
  header["grid_nodes"] = config.grid_nodes;
  run.doc["run"] = header;

  if (stages & kExample) {
    run.example(config.example_p1 ? *config.example_p1 : RealFunction::parse(kDefaultExamplePotential));
  } else {
    run.system = build_system(config);
  }
  Document sys;
  sys["interval"] = {run.system->domain().lo, run.system->domain().hi};
  std::vector<RealFunction> maps, potentials;
  for (std::size_t j = 0; j < run.system->size(); ++j) {
    maps.push_back(run.system->map(j));
    potentials.push_back(run.system->potential(j));
  }
  sys["maps"] = labels(maps);
  sys["potentials"] = labels(potentials);
  run.doc["system"] = sys;

  if (stages & kAttractor)
    run.attractor();
  if (stages & kRadius)
    run.radius();
  if (stages & kCheck)
    run.check();
  if (stages & kEigen)
    run.eigen();
  if (stages & kConverge)
    run.converge();
  return run.doc;
}

std::vector<std::filesystem::path> run_config(const RunConfig &config, std::string_view command,
                                              const std::filesystem::path &out_dir) {
  std::vector<std::filesystem::path> written;
  if (command == "all" && !config.commands.empty()) {
    for (const auto &c : config.commands) {
      if (c == "all")
        throw ConfigError(config.source + ": [run] commands must not contain 'all'");
      written.push_back(write_report(run_command(config, c), out_dir, c, config.format));
    }
    return written;
  }
  written.push_back(write_report(run_command(config, command), out_dir, command, config.format));
  return written;
}

} // namespace ruelle
