#ifndef RUELLE_TRANSFER_OPERATOR_HPP
#define RUELLE_TRANSFER_OPERATOR_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ruelle/grid_function.hpp"
#include "ruelle/system.hpp"

namespace ruelle {

/** \brief A map sent a grid node outside the working hull by more than the tolerance. */
class RangeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/**
 * \brief Ruelle operator Tf(x) = sum_j p_j(x) f(w_j(x)) discretized on a uniform grid.
 *
 * Row i of the assembled matrix holds p_j(x_i) split over the two nodes that
 * bracket w_j(x_i), so applying it is exactly "evaluate f by linear
 * interpolation at w_j(x_i)". All entries are non-negative; row sums equal
 * sum_j p_j(x_i).
 */
class TransferOperator {
public:
  using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  TransferOperator(IfsSystem system, Interval hull, Eigen::Index nodes, double range_tolerance = 1e-9);

  GridFunction apply(const GridFunction &f) const;
  Eigen::VectorXd apply(const Eigen::VectorXd &values) const { return matrix_ * values; }

  const IfsSystem &system() const noexcept { return system_; }
  const Interval &hull() const noexcept { return hull_; }
  Eigen::Index nodes() const noexcept { return nodes_; }
  const SparseMatrix &matrix() const noexcept { return matrix_; }
  /** sum_j p_j(x_i) at every node; T applied to the constant 1. */
  const Eigen::VectorXd &potential_sum() const noexcept { return potential_sum_; }
  double node(Eigen::Index i) const { return GridFunction::node_position(hull_, nodes_, i); }

  GridFunction constant(double c) const { return GridFunction::constant(hull_, nodes_, c); }
  template <typename F>
  GridFunction sample(F &&f) const {
    return GridFunction::sample(hull_, nodes_, std::forward<F>(f));
  }

private:
  IfsSystem system_;
  Interval hull_;
  Eigen::Index nodes_;
  SparseMatrix matrix_;
  Eigen::VectorXd potential_sum_;
};

/** Tf at an arbitrary point, with f evaluated by its own interpolation; no re-gridding. */
double transfer_at(const IfsSystem &system, const GridFunction &f, double x);

enum class Normalization {
  None,   ///< plain powers T^n f
  Auto,   ///< rescale only when the sup norm leaves [1e-100, 1e100]
  Always, ///< rescale to unit sup norm every step
};

/**
 * \brief n-fold application. The true iterate is exp(log_scale) * f.
 *
 * `log_norms[k]` is log ||T^{k+1} f||, accumulated across rescalings.
 */
struct IterationResult {
  GridFunction f;
  double log_scale = 0.0;
  std::vector<double> log_norms;
  bool rescaled = false;
};

IterationResult iterate(const TransferOperator &op, const GridFunction &f, std::size_t n,
                        Normalization mode = Normalization::Auto);

/** \brief Spectral radius estimate from power iteration on the constant 1. */
struct SpectralEstimate {
  double rho = 0.0;              ///< last ratio ||T^{n+1}1|| / ||T^n 1||, clamped into the bracket
  std::vector<double> gelfand;   ///< ||T^n 1||^{1/n}, n = 1, 2, ...
  std::vector<double> ratio;     ///< ||T^{n+1}1|| / ||T^n 1||, n = 0, 1, ...
  double lower_bound = 0.0;      ///< min_x sum_j p_j(x)
  double collatz_lower = 0.0;    ///< min_i (Tv)_i / v_i for the last iterate v
  double collatz_upper = 0.0;    ///< max_i (Tv)_i / v_i
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
  double spread = 0.0;           ///< max - min of the ratio over the tail
  bool conclusive = false;
  std::size_t iterations = 0;

  double bracket_width() const noexcept { return bracket_upper - bracket_lower; }
  double relative_uncertainty() const noexcept { return bracket_width() / rho; }
};

struct SpectralOptions {
  std::size_t max_iterations = 2000; ///< must be >= 10
  double bracket_tolerance = 1e-13;  ///< stop once the bracket is this tight, relative
  double spread_tolerance = 1e-6;    ///< tail oscillation above this is inconclusive, relative
};

SpectralEstimate spectral_radius(const TransferOperator &op, const SpectralOptions &options = {});

/** \brief min / max of rho^{-n} T^n 1 over the grid for each requested n. */
struct SandwichRow {
  std::size_t n = 0;
  double min = 0.0;
  double max = 0.0;
  double epsilon = 0.0;
  bool pass = false;
};

struct SandwichReport {
  double rho = 0.0;
  std::vector<SandwichRow> rows;
  bool pass = false;
};

/**
 * Checks min <= 1 + eps_n and max >= 1 - eps_n, where
 * eps_n = 1e-9 + n * relative_uncertainty absorbs the error in rho.
 */
SandwichReport sandwich_check(const TransferOperator &op, double rho, std::span<const std::size_t> ns,
                              double relative_uncertainty = 1e-12);

/** \brief Leading eigenfunction from normalized power iteration. */
struct EigenPair {
  GridFunction h;            ///< unit sup norm
  double rho = 0.0;
  double residual = 0.0;     ///< ||Th - rho h||_inf
  std::size_t iterations = 0;
  bool converged = false;
  bool positive = false;     ///< min node value > 0
};

struct EigenOptions {
  double tolerance = 1e-13;
  std::size_t max_iterations = 20000;
};

/** Non-convergence is reported through the flags, not thrown: the eigenfunction may not exist. */
EigenPair power_eigenfunction(const TransferOperator &op, const EigenOptions &options = {});

/**
 * Rigorous bound on max_i |(T_h^n f)_i - T^n(I_h f)(x_i)| between the grid
 * iterate and the exact word sum with f interpolated, for maps that are
 * 1-Lipschitz. `weight_sup` bounds sum_j p_j, `weight_abs_sum` bounds
 * sum_j sup p_j, `weight_lip` bounds sum_j Lip(p_j), `f_sup` and `f_lip`
 * describe f, and h is the grid spacing. Uses
 *   e_{k+1} <= S (e_k + L_k h / 2),   L_{k+1} <= S' ||T^k f|| + P L_k,
 * with S = sup sum_j p_j, P = sum_j sup p_j, S' = sum_j Lip(p_j).
 */
double word_sum_error_bound(std::size_t n, double weight_sup, double weight_abs_sum, double weight_lip, double f_sup,
                            double f_lip, double h);

} // namespace ruelle

#endif // RUELLE_TRANSFER_OPERATOR_HPP
