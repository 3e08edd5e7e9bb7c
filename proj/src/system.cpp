#include "ruelle/system.hpp"

#include <cmath>
#include <sstream>

namespace ruelle {

std::vector<double> Interval::linspace(std::size_t count) const {
  if (count < 2)
    throw SystemError("linspace needs at least two points");
  std::vector<double> xs(count);
  const double h = width() / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    xs[i] = lo + static_cast<double>(i) * h;
  xs.back() = hi;
  return xs;
}

RealFunction::RealFunction(Expr expr)
    : label_(expr.source()), expr_(std::make_shared<const Expr>(std::move(expr))) {
  fn_ = [e = expr_](double x) { return e->evaluate(x); };
}

RealFunction::RealFunction(std::string label, std::function<double(double)> fn)
    : label_(std::move(label)), fn_(std::move(fn)) {}

RealFunction RealFunction::constant(double c) {
  std::ostringstream os;
  os.precision(17);
  os << c;
  return RealFunction(os.str(), [c](double) { return c; });
}

MultiIndex MultiIndex::from_one_based(std::span<const int> letters) {
  std::vector<int> v;
  v.reserve(letters.size());
  for (int l : letters) {
    if (l < 1)
      throw SystemError("word letters are one based; got " + std::to_string(l));
    v.push_back(l - 1);
  }
  return MultiIndex(std::move(v));
}

MultiIndex operator*(const MultiIndex &a, const MultiIndex &b) {
  std::vector<int> v(a.letters_);
  v.insert(v.end(), b.letters_.begin(), b.letters_.end());
  return MultiIndex(std::move(v));
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i)
      s += ',';
    s += std::to_string(letters_[i] + 1);
  }
  return s + ")";
}

IfsSystem::IfsSystem(Interval domain, std::vector<RealFunction> maps, std::vector<RealFunction> potentials,
                     std::vector<std::optional<RealFunction>> stretches)
    : IfsSystem(domain, std::move(maps), std::move(potentials), std::move(stretches), Options{}) {}

IfsSystem::IfsSystem(Interval domain, std::vector<RealFunction> maps, std::vector<RealFunction> potentials,
                     std::vector<std::optional<RealFunction>> stretches, const Options &options)
    : domain_(domain), maps_(std::move(maps)), potentials_(std::move(potentials)),
      stretches_(std::move(stretches)) {
  if (!(std::isfinite(domain_.lo) && std::isfinite(domain_.hi) && domain_.lo < domain_.hi))
    throw SystemError("domain must be a finite interval with lo < hi");
  if (maps_.empty())
    throw SystemError("system needs at least one map");
  if (potentials_.size() != maps_.size())
    throw SystemError("got " + std::to_string(maps_.size()) + " maps but " + std::to_string(potentials_.size()) +
                      " potentials");
  if (stretches_.empty())
    stretches_.resize(maps_.size());
  if (stretches_.size() != maps_.size())
    throw SystemError("stretch list must be empty or have one entry per map");
  for (std::size_t j = 0; j < maps_.size(); ++j)
    if (!maps_[j] || !potentials_[j])
      throw SystemError("branch " + std::to_string(j + 1) + " has an empty map or potential");
  audit(options);
}

void IfsSystem::audit(const Options &options) const {
  const double slack = options.range_tolerance * domain_.width();
  for (double x : domain_.linspace(options.audit_points)) {
    for (std::size_t j = 0; j < maps_.size(); ++j) {
      double y = 0.0;
      double p = 0.0;
      try {
        y = maps_[j](x);
        p = potentials_[j](x);
      } catch (const DomainError &e) {
        throw SystemError("branch " + std::to_string(j + 1) + " fails to evaluate at x = " + std::to_string(x) +
                          ": " + e.what());
      }
      if (y < domain_.lo - slack || y > domain_.hi + slack)
        throw SystemError("map " + std::to_string(j + 1) + " sends x = " + std::to_string(x) + " to " +
                          std::to_string(y) + ", outside the domain");
      if (!(p > 0.0))
        throw SystemError("potential " + std::to_string(j + 1) + " is not positive at x = " + std::to_string(x));
    }
  }
}

bool IfsSystem::has_all_stretches() const noexcept {
  for (const auto &s : stretches_)
    if (!s)
      return false;
  return true;
}

double IfsSystem::potential_sum(double x) const {
  double s = 0.0;
  for (const auto &p : potentials_)
    s += p(x);
  return s;
}

void IfsSystem::check_word(const MultiIndex &word) const {
  for (int l : word.letters())
    if (l < 0 || static_cast<std::size_t>(l) >= maps_.size())
      throw SystemError("word letter " + std::to_string(l + 1) + " out of range 1.." + std::to_string(maps_.size()));
}

double compose_word(const IfsSystem &system, const MultiIndex &word, double x) {
  system.check_word(word);
  for (std::size_t i = word.size(); i-- > 0;)
    x = system.map(static_cast<std::size_t>(word[i]), x);
  return x;
}

double weight_product(const IfsSystem &system, const MultiIndex &word, double x) {
  return word_orbit(system, word, x).weight;
}

WeightedPoint word_orbit(const IfsSystem &system, const MultiIndex &word, double x) {
  system.check_word(word);
  WeightedPoint wp{x, 1.0};
  for (std::size_t i = word.size(); i-- > 0;) {
    const auto j = static_cast<std::size_t>(word[i]);
    wp.weight *= system.potential(j, wp.point);
    wp.point = system.map(j, wp.point);
  }
  return wp;
}

std::vector<MultiIndex> all_words(std::size_t alphabet, std::size_t length) {
  std::vector<MultiIndex> out;
  std::vector<int> letters(length, 0);
  for (;;) {
    out.emplace_back(letters);
    std::size_t pos = length;
    while (pos > 0) {
      --pos;
      if (static_cast<std::size_t>(++letters[pos]) < alphabet)
        break;
      letters[pos] = 0;
      if (pos == 0)
        return out;
    }
    if (length == 0)
      return out;
  }
}

} // namespace ruelle
