#ifndef RUELLE_EXPR_HPP
#define RUELLE_EXPR_HPP

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/** \file expr.hpp
 * \brief Arithmetic expressions in the single real variable `x`.
 *
 * Grammar:
 *
 *     expr   := term (('+'|'-') term)*
 *     term   := factor (('*'|'/') factor)*
 *     factor := ('-')? power
 *     power  := atom ('^' factor)?
 *     atom   := number | 'x' | ident '(' args ')' | '(' expr ')'
 *     args   := expr (',' expr)*
 *
 * `^` is right associative and binds tighter than unary minus, so `-x^2`
 * is `-(x^2)` while `2^-1` is `0.5`. Functions: sqrt abs exp log sin cos
 * (one argument) and min max pow (two arguments).
 */

namespace ruelle {

/** \brief Malformed source text; carries the byte offset of the problem. */
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

/** \brief Evaluation left the real domain (log of non-positive, sqrt of negative, ...). */
class DomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Constant, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

enum class Builtin { Sqrt, Abs, Exp, Log, Sin, Cos, Min, Max, Pow };

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;           // Constant only
  Builtin function = Builtin::Abs; // Call only
  std::vector<int> children;
  SourceSpan span;
};

/** \brief Immutable parsed expression. Nodes are stored flat; the root is the last node. */
class Expr {
public:
  /** Parses and constant-folds `source`. */
  static Expr parse(std::string_view source);

  double operator()(double x) const { return evaluate(x); }
  double evaluate(double x) const;

  /** Fully parenthesized canonical text; reparsing it gives an identical evaluator. */
  std::string print() const;

  const std::string &source() const noexcept { return source_; }
  const std::vector<ExprNode> &nodes() const noexcept { return nodes_; }
  int root() const noexcept { return static_cast<int>(nodes_.size()) - 1; }

  bool is_constant() const noexcept { return nodes_[root()].kind == NodeKind::Constant; }

private:
  friend class ExprParser;
  double eval_node(int index, double x) const;
  void print_node(int index, std::string &out) const;

  std::string source_;
  std::vector<ExprNode> nodes_;
};

/** Applies a builtin to already-evaluated arguments; shared by folding and evaluation. */
double apply_builtin(Builtin f, double a, double b = 0.0);

std::string_view builtin_name(Builtin f);

} // namespace ruelle

#endif // RUELLE_EXPR_HPP
