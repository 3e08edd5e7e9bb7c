#ifndef RUELLE_CONFIG_HPP
#define RUELLE_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ruelle/system.hpp"

namespace ruelle {

/** \brief Schema violation; the message names the source, line and key. */
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { Tabular, Structured };

std::string_view extension(OutputFormat f);
OutputFormat parse_format(std::string_view name);

/** A test function for the convergence experiment, kept with its source text. */
struct NamedFunction {
  std::string label;
  RealFunction f;
};

/**
 * \brief Everything a run needs. Defaults match the documented schema.
 *
 * Either `maps`/`potentials` (section [system]) or `example_p1` (section
 * [example]) describe the system.
 */
struct RunConfig {
  std::string source = "<defaults>";

  Interval domain{0.0, 1.0};
  std::vector<RealFunction> maps;
  std::vector<RealFunction> potentials;
  std::vector<std::optional<RealFunction>> stretches;
  std::optional<RealFunction> example_p1;

  std::size_t grid_nodes = 4096;
  std::size_t attractor_depth = 16;
  double resolution = 0.0; ///< 0 means domain width / 4096
  std::size_t orbit_depth = 14;

  std::size_t radius_iterations = 4000;
  std::vector<std::size_t> sandwich_steps{1, 2, 5, 10, 20, 30};
  std::size_t depth_k = 2;
  double dini_theta = 0.5;
  std::size_t dini_depth = 80;

  double eigen_tolerance = 1e-13;
  std::size_t eigen_iterations = 100000;
  double measure_tolerance = 1e-12;
  std::size_t measure_iterations = 500;

  std::size_t converge_iterations = 200;
  std::vector<NamedFunction> test_functions;

  std::uint64_t seed = 1;
  std::vector<std::string> commands;
  OutputFormat format = OutputFormat::Structured;

  bool describes_system() const noexcept { return !maps.empty() || example_p1.has_value(); }
};

/**
 * Parses the sectioned key-value text format:
 *
 *     # comment
 *     [system]
 *     interval = 0, 1
 *     map.1 = x - x^2/2
 *     potential.1 = 0.5 + sqrt(x)/10
 *     stretch.1 = 1 - x/2
 *
 * Sections: system, example, grid, attractor, radius, check, eigen,
 * converge, run. Unknown sections or keys are errors.
 */
RunConfig parse_config(std::string_view text, std::string source = "<string>");

RunConfig load_config(const std::filesystem::path &path);

/** Assembles and audits the system the config describes (the example system when [example] is used). */
IfsSystem build_system(const RunConfig &config);

} // namespace ruelle

#endif // RUELLE_CONFIG_HPP
