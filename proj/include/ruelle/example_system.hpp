#ifndef RUELLE_EXAMPLE_SYSTEM_HPP
#define RUELLE_EXAMPLE_SYSTEM_HPP

#include <cstddef>

#include "ruelle/system.hpp"

namespace ruelle {

/**
 * \brief Tent of height delta centred at 1/2:
 *   delta - 1/2 + x  on (1/2 - delta, 1/2],
 *   delta + 1/2 - x  on (1/2, 1/2 + delta),
 *   0                elsewhere.
 */
struct TentFunction {
  double delta = 0.0;

  double operator()(double x) const {
    if (x > 0.5 - delta && x <= 0.5)
      return delta - 0.5 + x;
    if (x > 0.5 && x < 0.5 + delta)
      return delta + 0.5 - x;
    return 0.0;
  }
};

/**
 * \brief Two-branch system on [0, 1] in which each branch has an indifferent
 * fixed point: w_1 = x - x^2/2 (fixes 0), w_2 = 1/2 + x^2/2 (fixes 1).
 *
 * Given p_1 with 0 < p_1 < 1, the second potential is p_2 = 1 - p_1 + g with
 * g the tent of height delta = min_x min{p_1, 1 - p_1} / 5, so that
 * 1 <= p_1 + p_2 <= 1 + delta.
 */
struct ExampleSpec {
  RealFunction p1;
  double delta = 0.0;
  TentFunction tent;
  RealFunction p2;
  IfsSystem system;
  double max_tent_minus_quarter_p1 = 0.0; ///< max over the grid of g - p_1/4, must be < 0
  double max_tent_minus_quarter_p2 = 0.0; ///< max over the grid of g - p_2/4, must be < 0
};

/** The default first potential 1/2 + sqrt(x)/10: Hoelder-1/2, hence Dini but not Lipschitz at 0. */
inline constexpr const char *kDefaultExamplePotential = "0.5 + sqrt(x)/10";

/**
 * Builds the system on an N-point audit grid. Throws SystemError if p_1
 * leaves (0, 1) on the grid, and std::logic_error if g - p_j/4 < 0 fails.
 */
ExampleSpec build_indifferent_example(const RealFunction &p1, std::size_t grid_nodes = 4096);

} // namespace ruelle

#endif // RUELLE_EXAMPLE_SYSTEM_HPP
