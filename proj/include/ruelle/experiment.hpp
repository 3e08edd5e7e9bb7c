#ifndef RUELLE_EXPERIMENT_HPP
#define RUELLE_EXPERIMENT_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ruelle/config.hpp"
#include "ruelle/discrete_measure.hpp"
#include "ruelle/report.hpp"
#include "ruelle/transfer_operator.hpp"

namespace ruelle {

struct TestFunction {
  std::string label;
  GridFunction f;
};

/**
 * \brief e_n = ||rho^{-n} T^n f - <mu, f> h||_inf for one test function.
 *
 * The floor is the first n with e_n <= 10 min_k e_k; the geometric rate is
 * fitted by least squares on log e_n over the second half of [0, floor].
 */
struct ConvergenceSeries {
  std::string label;
  double pairing = 0.0;       ///< <mu, f>
  std::vector<double> errors; ///< e_n, n = 0..n_max
  double floor = 0.0;         ///< min e_n
  std::size_t floor_index = 0;
  std::size_t fit_begin = 0;  ///< fit window [fit_begin, fit_end]
  std::size_t fit_end = 0;
  bool at_floor = false;      ///< too few pre-floor points to fit; rate and residual are NaN
  double rate = 0.0;          ///< fitted b
  double fit_residual = 0.0;  ///< RMS residual of the log-linear fit
  bool monotone_tail = false; ///< e_n non-increasing over the fit window
};

struct ConvergenceReport {
  double rho = 0.0;
  std::vector<ConvergenceSeries> series;
};

/** `h` must already be normalized so that <mu, h> = 1. */
ConvergenceReport convergence_experiment(const TransferOperator &op, const GridFunction &h, const DiscreteMeasure &mu,
                                         double rho, std::span<const TestFunction> tests, std::size_t n_max);

/** Least-squares fit of log e_n = a + n log b over n in [begin, end]; zero entries are skipped. */
void fit_geometric_rate(ConvergenceSeries &series);

Document to_document(const ConvergenceReport &report);

/** The commands accepted by run_command, in documentation order. */
inline constexpr std::string_view kCommands[] = {"attractor", "radius", "check", "eigen",
                                                 "converge",  "paper-example", "all"};

/**
 * Runs the stages `command` needs, in the order example -> attractor ->
 * radius -> check -> eigen -> converge, and returns one document holding
 * every stage that ran. Every stage sees the same rho estimate.
 */
Document run_command(const RunConfig &config, std::string_view command);

/**
 * Runs `command` and writes `<out>/<command>.<ext>`. For "all" with a
 * non-empty [run] commands list, each listed command is written to its own
 * file instead. Returns the written paths.
 */
std::vector<std::filesystem::path> run_config(const RunConfig &config, std::string_view command,
                                              const std::filesystem::path &out_dir);

} // namespace ruelle

#endif // RUELLE_EXPERIMENT_HPP
