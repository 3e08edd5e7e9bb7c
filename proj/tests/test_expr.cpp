#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "ruelle/expr.hpp"

using ruelle::DomainError;
using ruelle::Expr;
using ruelle::ParseError;

TEST_CASE("expr: reference expressions") {
  CHECK(Expr::parse("x - x^2/2")(1.0) == 0.5);
  CHECK(Expr::parse("1+2*3")(0.0) == 7.0);
  CHECK(Expr::parse("0.5 + x^2/2")(1.0) == 1.0);
  CHECK(Expr::parse("sqrt(x)")(0.25) == 0.5);
  CHECK_THROWS_AS(Expr::parse("log(x)")(0.0), DomainError);
}

TEST_CASE("expr: unknown identifier reports its offset") {
  try {
    Expr::parse("foo(x)");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.offset() == 0);
  }
  try {
    Expr::parse("1 + bar");
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("expr: malformed input") {
  for (const char *bad : {"", "   ", "1 +", "(x", "x)", "sqrt()", "sqrt(x, x)", "min(x)", "2 3", "x ^", "1e", "@"})
    CHECK_THROWS_AS(Expr::parse(bad), ParseError);
}

TEST_CASE("expr: precedence and associativity") {
  CHECK(Expr::parse("-x^2")(3.0) == -9.0);
  CHECK(Expr::parse("2^-1")(0.0) == 0.5);
  CHECK(Expr::parse("2^3^2")(0.0) == 512.0);
  CHECK(Expr::parse("8/4/2")(0.0) == 1.0);
  CHECK(Expr::parse("8-4-2")(0.0) == 2.0);
  CHECK(Expr::parse("-(-x)")(2.5) == 2.5);
  CHECK(Expr::parse("min(x, 1 - x)")(0.3) == doctest::Approx(0.3));
  CHECK(Expr::parse("max(x, 1 - x)")(0.3) == doctest::Approx(0.7));
  CHECK(Expr::parse("pow(x, 3)")(2.0) == 8.0);
  CHECK(Expr::parse("abs(-x) + exp(0) + cos(0) + sin(0)")(1.5) == 3.5);
  CHECK(Expr::parse("1.5e-1 * 2")(0.0) == doctest::Approx(0.3));
}

TEST_CASE("expr: domain errors") {
  CHECK_THROWS_AS(Expr::parse("1/x")(0.0), DomainError);
  CHECK_THROWS_AS(Expr::parse("sqrt(x)")(-1.0), DomainError);
  CHECK_THROWS_AS(Expr::parse("exp(x)")(1000.0), DomainError);
  CHECK_NOTHROW(Expr::parse("sqrt(x)")(0.0));
}

TEST_CASE("expr: constants fold, failing folds are deferred") {
  CHECK(Expr::parse("1 + 2 * 3").is_constant());
  CHECK_FALSE(Expr::parse("x + 1").is_constant());
  // log(0) must not fail at parse time; it fails when evaluated.
  const Expr e = Expr::parse("log(0) * 0 + x");
  CHECK_THROWS_AS(e(1.0), DomainError);
}

TEST_CASE("expr: evaluation is pure") {
  const Expr e = Expr::parse("0.5 + sqrt(x)/10 - sin(3*x)^2");
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    CHECK(e(x) == e(x));
  }
}

namespace {

// Random expression text over the full grammar. Depth-limited.
std::string random_expr(std::mt19937_64 &rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 12);
  std::uniform_real_distribution<double> num(-3.0, 3.0);
  switch (pick(rng)) {
  case 0:
  case 1: return "x";
  case 2: {
    const double v = std::round(num(rng) * 1000.0) / 1000.0;
    return v < 0 ? "(" + std::to_string(v) + ")" : std::to_string(v);
  }
  case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
  case 4: return "(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
  case 5: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
  case 6: return random_expr(rng, depth - 1) + " / (1 + " + random_expr(rng, depth - 1) + "^2)";
  case 7: return "-(" + random_expr(rng, depth - 1) + ")"; // factor allows a single leading minus
  case 8: return "sqrt(abs(" + random_expr(rng, depth - 1) + "))";
  case 9: return "sin(" + random_expr(rng, depth - 1) + ")";
  case 10: return "cos(" + random_expr(rng, depth - 1) + ")";
  case 11: return "min(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
  default: return "(" + random_expr(rng, depth - 1) + ")^2";
  }
}

// Value or "threw DomainError", compared exactly.
struct Outcome {
  bool threw = false;
  double value = 0.0;
  bool operator==(const Outcome &o) const {
    return threw == o.threw && (threw || value == o.value || (std::isnan(value) && std::isnan(o.value)));
  }
};

Outcome run(const Expr &e, double x) {
  try {
    return {false, e(x)};
  } catch (const DomainError &) {
    return {true, 0.0};
  }
}

} // namespace

TEST_CASE("expr: parse-print-parse is idempotent (1000 random expressions)") {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  for (int c = 0; c < 1000; ++c) {
    const std::string text = random_expr(rng, 4);
    const Expr a = Expr::parse(text);
    const Expr b = Expr::parse(a.print());
    failures += b.print() != a.print();
    for (int k = 0; k < 20; ++k) {
      const double x = u(rng);
      failures += !(run(a, x) == run(b, x));
    }
  }
  CHECK(failures == 0);

  // One fixed expression against 1000 points, as a direct statement of the invariant.
  const Expr a = Expr::parse("x - x^2/2 + 0.1*sqrt(x) - -x/3");
  const Expr b = Expr::parse(a.print());
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng);
    REQUIRE(a(x) == b(x));
  }
}
