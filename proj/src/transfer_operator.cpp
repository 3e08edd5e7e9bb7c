#include "ruelle/transfer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ruelle {

TransferOperator::TransferOperator(IfsSystem system, Interval hull, Eigen::Index nodes, double range_tolerance)
    : system_(std::move(system)), hull_(hull), nodes_(nodes) {
  if (nodes_ < 2)
    throw SystemError("transfer operator needs at least two grid nodes");
  if (!(hull_.lo < hull_.hi))
    throw SystemError("transfer operator needs a non-degenerate hull");
  const std::size_t m = system_.size();
  const double slack = range_tolerance * hull_.width();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(nodes_) * m * 2);
  potential_sum_.resize(nodes_);
  for (Eigen::Index i = 0; i < nodes_; ++i) {
    const double x = node(i);
    double row_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double y = system_.map(j, x);
      const double p = system_.potential(j, x);
      if (y < hull_.lo - slack || y > hull_.hi + slack) {
        std::ostringstream os;
        os.precision(17);
        os << "map " << j + 1 << " sends node " << x << " to " << y << ", outside the hull [" << hull_.lo << ", "
           << hull_.hi << "]";
        throw RangeError(os.str());
      }
      const GridLocation loc = GridFunction::locate(hull_, nodes_, y);
      if (loc.weight < 1.0)
        entries.emplace_back(i, loc.cell, p * (1.0 - loc.weight));
      if (loc.weight > 0.0)
        entries.emplace_back(i, loc.cell + 1, p * loc.weight);
      row_sum += p;
    }
    potential_sum_[i] = row_sum;
  }
  matrix_.resize(nodes_, nodes_);
  matrix_.setFromTriplets(entries.begin(), entries.end());
  matrix_.makeCompressed();
}

GridFunction TransferOperator::apply(const GridFunction &f) const {
  if (f.size() != nodes_ || !(f.hull() == hull_))
    throw SystemError("grid function does not live on the operator grid");
  return f.with_values(matrix_ * f.values());
}

double transfer_at(const IfsSystem &system, const GridFunction &f, double x) {
  double s = 0.0;
  for (std::size_t j = 0; j < system.size(); ++j)
    s += system.potential(j, x) * f(system.map(j, x));
  return s;
}

IterationResult iterate(const TransferOperator &op, const GridFunction &f, std::size_t n, Normalization mode) {
  constexpr double kHigh = 1e100;
  constexpr double kLow = 1e-100;
  Eigen::VectorXd v = f.values();
  IterationResult out{f, 0.0, {}, false};
  out.log_norms.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    v = op.apply(v);
    const double norm = v.cwiseAbs().maxCoeff();
    out.log_norms.push_back(out.log_scale + std::log(norm));
    const bool rescale = mode == Normalization::Always ||
                         (mode == Normalization::Auto && norm > 0.0 && (norm > kHigh || norm < kLow));
    if (rescale && norm > 0.0) {
      v /= norm;
      out.log_scale += std::log(norm);
      out.rescaled = true;
    }
  }
  out.f = f.with_values(std::move(v));
  return out;
}

SpectralEstimate spectral_radius(const TransferOperator &op, const SpectralOptions &options) {
  if (options.max_iterations < 10)
    throw SystemError("spectral_radius: at least 10 iterations required");
  SpectralEstimate est;
  est.lower_bound = op.potential_sum().minCoeff();

  Eigen::VectorXd v = Eigen::VectorXd::Ones(op.nodes());
  double log_norm = 0.0;
  Eigen::VectorXd tv;
  for (std::size_t n = 0; n < options.max_iterations; ++n) {
    tv = op.apply(v);
    const double norm = tv.maxCoeff();
    est.ratio.push_back(norm);
    log_norm += std::log(norm);
    est.gelfand.push_back(std::exp(log_norm / static_cast<double>(n + 1)));
    est.collatz_lower = (tv.array() / v.array()).minCoeff();
    est.collatz_upper = (tv.array() / v.array()).maxCoeff();
    v = tv / norm;
    est.iterations = n + 1;
    if (n + 1 >= 10 && est.collatz_upper - est.collatz_lower <= options.bracket_tolerance * norm)
      break;
  }

  est.bracket_lower = std::max(est.lower_bound, est.collatz_lower);
  est.bracket_upper = std::min(est.gelfand.back(), est.collatz_upper);
  if (est.bracket_upper < est.bracket_lower)
    est.bracket_upper = est.bracket_lower;
  est.rho = std::clamp(est.ratio.back(), est.bracket_lower, est.bracket_upper);

  const std::size_t tail = std::max<std::size_t>(5, est.ratio.size() / 10);
  const auto first = est.ratio.end() - static_cast<std::ptrdiff_t>(std::min(tail, est.ratio.size()));
  const auto [lo, hi] = std::minmax_element(first, est.ratio.end());
  est.spread = *hi - *lo;
  est.conclusive = est.spread <= options.spread_tolerance * est.rho ||
                   est.bracket_width() <= options.spread_tolerance * est.rho;
  return est;
}

SandwichReport sandwich_check(const TransferOperator &op, double rho, std::span<const std::size_t> ns,
                              double relative_uncertainty) {
  if (!(rho > 0.0))
    throw SystemError("sandwich_check: rho must be positive");
  SandwichReport report;
  report.rho = rho;
  report.pass = true;
  std::vector<std::size_t> sorted(ns.begin(), ns.end());
  std::sort(sorted.begin(), sorted.end());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(op.nodes());
  double log_scale = 0.0;
  std::size_t done = 0;
  const double log_rho = std::log(rho);
  for (std::size_t n : sorted) {
    for (; done < n; ++done) {
      v = op.apply(v);
      const double norm = v.maxCoeff();
      v /= norm;
      log_scale += std::log(norm);
    }
    const double factor = std::exp(log_scale - static_cast<double>(n) * log_rho);
    SandwichRow row;
    row.n = n;
    row.min = factor * v.minCoeff();
    row.max = factor * v.maxCoeff();
    row.epsilon = 1e-9 + static_cast<double>(n) * relative_uncertainty;
    row.pass = row.min <= 1.0 + row.epsilon && row.max >= 1.0 - row.epsilon;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

EigenPair power_eigenfunction(const TransferOperator &op, const EigenOptions &options) {
  if (!(options.tolerance > 0.0))
    throw SystemError("power_eigenfunction: tolerance must be positive");
  Eigen::VectorXd f = Eigen::VectorXd::Ones(op.nodes());
  EigenPair pair{op.constant(1.0), 0.0, 0.0, 0, false, false};
  bool settled = false;
  for (std::size_t n = 0; n < options.max_iterations; ++n) {
    Eigen::VectorXd next = op.apply(f);
    const double norm = next.cwiseAbs().maxCoeff();
    if (!(norm > 0.0))
      break;
    next /= norm;
    const double change = (next - f).cwiseAbs().maxCoeff();
    f = std::move(next);
    pair.iterations = n + 1;
    if (change <= options.tolerance) {
      settled = true;
      break;
    }
  }
  const Eigen::VectorXd tf = op.apply(f);
  pair.rho = tf.cwiseAbs().maxCoeff();
  pair.residual = (tf - pair.rho * f).cwiseAbs().maxCoeff();
  pair.h = op.constant(1.0).with_values(f);
  pair.positive = f.minCoeff() > 0.0;
  pair.converged = settled && pair.positive;
  return pair;
}

double word_sum_error_bound(std::size_t n, double weight_sup, double weight_abs_sum, double weight_lip, double f_sup,
                            double f_lip, double h) {
  double err = 0.0;
  double lip = f_lip;
  double sup = f_sup;
  for (std::size_t k = 0; k < n; ++k) {
    err = weight_sup * (err + 0.5 * lip * h);
    lip = weight_lip * sup + weight_abs_sum * lip;
    sup *= weight_sup;
  }
  return err;
}

} // namespace ruelle
