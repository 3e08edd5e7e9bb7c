#ifndef RUELLE_GRID_FUNCTION_HPP
#define RUELLE_GRID_FUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Core>

#include "ruelle/system.hpp"

namespace ruelle {

/** \brief Cell index and barycentric weight of a point on a uniform grid. */
struct GridLocation {
  Eigen::Index cell = 0; ///< left node
  double weight = 0.0;   ///< weight of the right node, in [0, 1]
};

/**
 * \brief Piecewise-linear function on N equispaced nodes over an interval.
 *
 * Evaluation clamps to the interval ends and returns stored values exactly
 * at the nodes. Node values are an Eigen column vector so grid functions
 * compose with Eigen expressions directly.
 */
template <typename Scalar>
class BasicGridFunction {
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicGridFunction(Interval hull, Vector values) : hull_(hull), values_(std::move(values)) {
    if (values_.size() < 2)
      throw SystemError("grid function needs at least two nodes");
    if (!(hull_.lo < hull_.hi))
      throw SystemError("grid function needs a non-degenerate interval");
    if (!values_.allFinite())
      throw SystemError("grid function values must be finite");
  }

  static BasicGridFunction constant(Interval hull, Eigen::Index nodes, Scalar c) {
    return BasicGridFunction(hull, Vector::Constant(nodes, c));
  }

  template <typename F>
  static BasicGridFunction sample(Interval hull, Eigen::Index nodes, F &&f) {
    Vector v(nodes);
    for (Eigen::Index i = 0; i < nodes; ++i)
      v[i] = static_cast<Scalar>(f(node_position(hull, nodes, i)));
    return BasicGridFunction(hull, std::move(v));
  }

  static double node_position(const Interval &hull, Eigen::Index nodes, Eigen::Index i) {
    if (i == nodes - 1)
      return hull.hi;
    return hull.lo + static_cast<double>(i) * (hull.width() / static_cast<double>(nodes - 1));
  }

  static GridLocation locate(const Interval &hull, Eigen::Index nodes, double x) {
    const double h = hull.width() / static_cast<double>(nodes - 1);
    double t = (x - hull.lo) / h;
    t = std::clamp(t, 0.0, static_cast<double>(nodes - 1));
    const double r = std::nearbyint(t);
    if (std::fabs(t - r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t)) {
      const auto k = static_cast<Eigen::Index>(r);
      if (k == nodes - 1)
        return {nodes - 2, 1.0};
      return {k, 0.0};
    }
    auto k = static_cast<Eigen::Index>(std::floor(t));
    k = std::min(k, nodes - 2);
    return {k, t - static_cast<double>(k)};
  }

  Scalar operator()(double x) const {
    const GridLocation loc = locate(hull_, size(), x);
    if (loc.weight == 0.0)
      return values_[loc.cell];
    if (loc.weight == 1.0)
      return values_[loc.cell + 1];
    return values_[loc.cell] * static_cast<Scalar>(1.0 - loc.weight) +
           values_[loc.cell + 1] * static_cast<Scalar>(loc.weight);
  }

  Eigen::Index size() const noexcept { return values_.size(); }
  const Interval &hull() const noexcept { return hull_; }
  double spacing() const noexcept { return hull_.width() / static_cast<double>(size() - 1); }
  double node(Eigen::Index i) const { return node_position(hull_, size(), i); }
  const Vector &values() const noexcept { return values_; }
  Scalar sup_norm() const { return values_.cwiseAbs().maxCoeff(); }
  Scalar min_value() const { return values_.minCoeff(); }
  Scalar max_value() const { return values_.maxCoeff(); }

  BasicGridFunction with_values(Vector v) const { return BasicGridFunction(hull_, std::move(v)); }

private:
  Interval hull_;
  Vector values_;
};

using GridFunction = BasicGridFunction<double>;

} // namespace ruelle

#endif // RUELLE_GRID_FUNCTION_HPP
