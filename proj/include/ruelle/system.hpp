#ifndef RUELLE_SYSTEM_HPP
#define RUELLE_SYSTEM_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ruelle/expr.hpp"

namespace ruelle {

/** \brief Invalid system or argument supplied at construction time. */
class SystemError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/** \brief Closed interval [lo, hi]. */
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  double clamp(double x) const noexcept { return x < lo ? lo : (x > hi ? hi : x); }
  /** `count` equispaced points with exact endpoints. */
  std::vector<double> linspace(std::size_t count) const;

  friend bool operator==(const Interval &, const Interval &) = default;
};

/** \brief A real function of one variable: either a parsed expression or a built-in closure. */
class RealFunction {
public:
  RealFunction() = default;
  explicit RealFunction(Expr expr);
  RealFunction(std::string label, std::function<double(double)> fn);

  static RealFunction parse(std::string_view source) { return RealFunction(Expr::parse(source)); }
  static RealFunction constant(double c);

  double operator()(double x) const { return fn_(x); }
  const std::string &label() const noexcept { return label_; }
  /** Non-null when the function came from an expression. */
  const Expr *expr() const noexcept { return expr_.get(); }
  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

private:
  std::string label_;
  std::shared_ptr<const Expr> expr_;
  std::function<double(double)> fn_;
};

/** \brief Word J = (j_1 ... j_n) over the branch alphabet. Letters are zero based. */
class MultiIndex {
public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> letters) : letters_(letters) {}
  explicit MultiIndex(std::vector<int> letters) : letters_(std::move(letters)) {}

  /** Builds from one-based letters, as written in reports. */
  static MultiIndex from_one_based(std::span<const int> letters);

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  std::span<const int> letters() const noexcept { return letters_; }

  /** Concatenation J·K. */
  friend MultiIndex operator*(const MultiIndex &a, const MultiIndex &b);
  friend bool operator==(const MultiIndex &, const MultiIndex &) = default;

  std::string to_string() const;

private:
  std::vector<int> letters_;
};

/** \brief Point of an orbit segment: w_J(x) together with the weight product p_{w_J}(x). */
struct WeightedPoint {
  double point = 0.0;
  double weight = 1.0;
};

/**
 * \brief Iterated function system on an interval with positive potentials.
 *
 * Immutable after construction. The constructor audits on a sample grid that
 * every map sends X into X and every potential is strictly positive.
 */
class IfsSystem {
public:
  struct Options {
    std::size_t audit_points = 1025;
    double range_tolerance = 1e-12; // relative to the width of X
  };

  IfsSystem(Interval domain, std::vector<RealFunction> maps, std::vector<RealFunction> potentials,
            std::vector<std::optional<RealFunction>> stretches = {});
  IfsSystem(Interval domain, std::vector<RealFunction> maps, std::vector<RealFunction> potentials,
            std::vector<std::optional<RealFunction>> stretches, const Options &options);

  const Interval &domain() const noexcept { return domain_; }
  std::size_t size() const noexcept { return maps_.size(); }
  const RealFunction &map(std::size_t j) const { return maps_.at(j); }
  const RealFunction &potential(std::size_t j) const { return potentials_.at(j); }
  /** Closed-form local stretch of branch j, if supplied. */
  const std::optional<RealFunction> &stretch(std::size_t j) const { return stretches_.at(j); }
  bool has_all_stretches() const noexcept;

  double map(std::size_t j, double x) const { return maps_[j](x); }
  double potential(std::size_t j, double x) const { return potentials_[j](x); }
  /** Sum of potentials at x; equals T1(x). */
  double potential_sum(double x) const;

  void check_word(const MultiIndex &word) const;

private:
  void audit(const Options &options) const;

  Interval domain_;
  std::vector<RealFunction> maps_;
  std::vector<RealFunction> potentials_;
  std::vector<std::optional<RealFunction>> stretches_;
};

/** w_J(x) = w_{j_1}(w_{j_2}(... w_{j_n}(x))); the empty word is the identity. */
double compose_word(const IfsSystem &system, const MultiIndex &word, double x);

/** p_{w_J}(x) = p_{j_1}(w_{j_2...j_n}x) ... p_{j_{n-1}}(w_{j_n}x) p_{j_n}(x); the empty word gives 1. */
double weight_product(const IfsSystem &system, const MultiIndex &word, double x);

/** Both of the above in one pass along the orbit. */
WeightedPoint word_orbit(const IfsSystem &system, const MultiIndex &word, double x);

/** All words of length n in lexicographic order. */
std::vector<MultiIndex> all_words(std::size_t alphabet, std::size_t length);

} // namespace ruelle

#endif // RUELLE_SYSTEM_HPP
