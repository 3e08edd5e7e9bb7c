#include "ruelle/example_system.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ruelle {

ExampleSpec build_indifferent_example(const RealFunction &p1, std::size_t grid_nodes) {
  const Interval unit{0.0, 1.0};
  const auto grid = unit.linspace(grid_nodes);

  double low = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double v = p1(x);
    if (!(v > 0.0 && v < 1.0)) {
      std::ostringstream os;
      os << "first potential must lie in (0, 1); p1(" << x << ") = " << v;
      throw SystemError(os.str());
    }
    low = std::min({low, v, 1.0 - v});
  }
  const double delta = low / 5.0;
  const TentFunction tent{delta};

  std::ostringstream label;
  label.precision(17);
  label << "1 - (" << p1.label() << ") + tent(delta=" << delta << ")";
  RealFunction p2(label.str(), [p1, tent](double x) { return 1.0 - p1(x) + tent(x); });

  std::vector<RealFunction> maps{RealFunction::parse("x - x^2/2"), RealFunction::parse("0.5 + x^2/2")};
  std::vector<std::optional<RealFunction>> stretches{RealFunction::parse("1 - x/2"), RealFunction::parse("(1 + x)/2")};
  IfsSystem system(unit, std::move(maps), {p1, p2}, std::move(stretches));

  double worst1 = -std::numeric_limits<double>::infinity();
  double worst2 = -std::numeric_limits<double>::infinity();
  for (double x : grid) {
    worst1 = std::max(worst1, tent(x) - 0.25 * p1(x));
    worst2 = std::max(worst2, tent(x) - 0.25 * p2(x));
  }
  if (!(worst1 < 0.0) || !(worst2 < 0.0))
    throw std::logic_error("tent exceeds a quarter of a potential on the grid");

  return ExampleSpec{p1, delta, tent, std::move(p2), std::move(system), worst1, worst2};
}

} // namespace ruelle
