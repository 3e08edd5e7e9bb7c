#ifndef RUELLE_CONDITIONS_HPP
#define RUELLE_CONDITIONS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruelle/grid_function.hpp"
#include "ruelle/modulus.hpp"
#include "ruelle/system.hpp"
#include "ruelle/transfer_operator.hpp"

namespace ruelle {

enum class StretchMethod { ClosedForm, Sampled, ChainBound };

std::string_view to_string(StretchMethod m);

/**
 * \brief gamma_J(x) = sup_{y != x} |w_J(x) - w_J(y)| / |x - y| on a grid.
 *
 * Sampled values are lower bounds of the true supremum; chain-bound values
 * are upper bounds.
 */
struct StretchEstimate {
  MultiIndex word;
  std::vector<double> points;
  std::vector<double> values;
  StretchMethod method = StretchMethod::Sampled;
  double sup = 0.0;
};

/** Offsets added to the grid when sampling difference quotients near x. */
inline constexpr double kStretchOffsets[] = {1e-3, 1e-4, 1e-5};

/** Safety factor applied to sampled single-letter stretches used as upper bounds. */
inline constexpr double kSampledStretchInflation = 1.02;

/**
 * \brief Per-letter upper bounds on gamma_j, evaluated at arbitrary points.
 *
 * Uses the system's closed-form stretches where present. Otherwise it
 * samples the difference quotient against the grid and inflates the result
 * by kSampledStretchInflation; such bounds are flagged uncertified.
 */
class StretchModel {
public:
  StretchModel(IfsSystem system, Interval grid, std::size_t nodes);

  const IfsSystem &system() const noexcept { return system_; }
  const std::vector<double> &grid() const noexcept { return grid_; }
  const Interval &hull() const noexcept { return hull_; }

  /** Upper bound on gamma_j(x). */
  double upper(std::size_t j, double x) const;
  /** Max difference quotient of w_J at x over grid and offset points; a lower bound on gamma_J(x). */
  double sampled(const MultiIndex &word, double x) const;

  bool closed_form(std::size_t j) const { return system_.stretch(j).has_value(); }
  bool certified() const noexcept { return certified_; }
  std::string provenance() const;

private:
  double sampled_letter(std::size_t j, double x) const;

  IfsSystem system_;
  Interval hull_;
  std::vector<double> grid_;
  std::vector<std::vector<double>> letter_images_; // w_j on the grid
  bool certified_ = true;
};

StretchEstimate local_stretch(const StretchModel &model, const MultiIndex &word, StretchMethod method);

/**
 * prod_{i=0}^{n-1} gamma_{j_{n-i}}(w_{j_{n-i+1}} o ... o w_{j_n}(x)): the
 * chain-rule product of single-letter stretches along the orbit of x.
 */
double chain_stretch_bound(const StretchModel &model, const MultiIndex &word, double x);

enum class Verdict { Holds, Fails, Inconclusive };

std::string_view to_string(Verdict v);

/** Minimum clearance for a verdict, relative to the comparator. */
inline constexpr double kVerdictFloor = 1e-9;

/** \brief One evaluated sufficient condition: s compared against a threshold. */
struct ConditionReport {
  std::string id;
  double s = 0.0;
  double comparator = 0.0;
  double margin = 0.0; ///< comparator - s
  double width = 0.0;  ///< uncertainty band around the comparator
  Verdict verdict = Verdict::Inconclusive;
  std::string method;
  bool certified = false;
  std::size_t grid_nodes = 0;
  std::size_t depth = 1;
};

/** Holds iff margin > width, fails iff margin < -width. */
Verdict decide(double margin, double width);

struct MainTheoremReport {
  ConditionReport pointwise; ///< sup_x sum_j p_j(x) gamma_j(x) < rho
  ConditionReport global;    ///< sup_x sum_j p_j(x) sup_z gamma_j(z) < rho
};

MainTheoremReport main_theorem_check(const StretchModel &model, const SpectralEstimate &rho);

/** Same s as the main check against min_x sum_j p_j(x); needs no estimate of rho. */
ConditionReport corollary_check(const StretchModel &model);

/** sup_x sum_{|J|=k} p_{w_J}(x) gamma_J(x) < rho^k with gamma_J from chain bounds. */
ConditionReport depth_k_check(const StretchModel &model, std::size_t k, const SpectralEstimate &rho,
                              std::size_t word_budget = 1u << 16);

/** r = sup_x min_j gamma_j(x) < 1. */
ConditionReport single_branch_check(const StretchModel &model);

/** \brief Bounded-distortion audit of p_{w_J}(x) <= e^a p_{w_J}(y). */
struct DistortionReport {
  bool premise_holds = false;
  std::size_t failed_index = 0; ///< first i violating the shadowing premise, when it fails
  double ratio = 0.0;           ///< p_{w_J}(x) / p_{w_J}(y)
  double exponent = 0.0;        ///< sum_n alpha(theta^n a), alpha = max_j modulus of log p_j
  double bound = 0.0;           ///< e^exponent
  bool holds = false;
};

struct DistortionOptions {
  std::size_t depth = 40;
  ModulusOptions modulus{};
};

/**
 * The premise |w_{j_{i+1}...j_n}(x) - w_{j_{i+1}...j_n}(y)| <= theta^{n-i} a,
 * 1 <= i < n, a the diameter of X, is checked first; when it fails the
 * conclusion is not evaluated.
 */
DistortionReport distortion_audit(const IfsSystem &system, const MultiIndex &word, double x, double y,
                                  double theta, const DistortionOptions &options = {});

struct IrreducibilityResult {
  std::optional<std::size_t> n; ///< smallest n with T^n f(x) > threshold
  double value = 0.0;           ///< T^n f(x) at that n, or at n_max
  std::size_t words = 0;
  bool budget_exhausted = false;
};

/**
 * Smallest n <= n_max with T^n f(x) > threshold, T^n f(x) evaluated exactly as
 * the word sum sum_{|J|=n} p_{w_J}(x) f(w_J x).
 */
IrreducibilityResult irreducibility_probe(const IfsSystem &system, const GridFunction &f, double x,
                                          std::size_t n_max, double threshold = 0.0,
                                          std::size_t word_budget = 1u << 22);

} // namespace ruelle

#endif // RUELLE_CONDITIONS_HPP
