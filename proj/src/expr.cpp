#include "ruelle/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

namespace ruelle {

namespace {

struct BuiltinInfo {
  std::string_view name;
  Builtin id;
  int arity;
};

constexpr std::array<BuiltinInfo, 9> kBuiltins{{
    {"sqrt", Builtin::Sqrt, 1},
    {"abs", Builtin::Abs, 1},
    {"exp", Builtin::Exp, 1},
    {"log", Builtin::Log, 1},
    {"sin", Builtin::Sin, 1},
    {"cos", Builtin::Cos, 1},
    {"min", Builtin::Min, 2},
    {"max", Builtin::Max, 2},
    {"pow", Builtin::Pow, 2},
}};

const BuiltinInfo *find_builtin(std::string_view name) {
  for (const auto &b : kBuiltins)
    if (b.name == name)
      return &b;
  return nullptr;
}

double checked(double v, const char *what) {
  if (!std::isfinite(v))
    throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

double apply_binary(NodeKind kind, double a, double b) {
  switch (kind) {
  case NodeKind::Add:
    return checked(a + b, "addition");
  case NodeKind::Sub:
    return checked(a - b, "subtraction");
  case NodeKind::Mul:
    return checked(a * b, "multiplication");
  case NodeKind::Div:
    if (b == 0.0)
      throw DomainError("division by zero");
    return checked(a / b, "division");
  case NodeKind::Pow:
    return apply_builtin(Builtin::Pow, a, b);
  default:
    throw std::logic_error("apply_binary: not a binary node");
  }
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

std::string_view builtin_name(Builtin f) {
  for (const auto &b : kBuiltins)
    if (b.id == f)
      return b.name;
  return "?";
}

double apply_builtin(Builtin f, double a, double b) {
  switch (f) {
  case Builtin::Sqrt:
    if (a < 0.0)
      throw DomainError("sqrt of negative argument");
    return std::sqrt(a);
  case Builtin::Abs:
    return std::fabs(a);
  case Builtin::Exp:
    return checked(std::exp(a), "exp");
  case Builtin::Log:
    if (a <= 0.0)
      throw DomainError("log of non-positive argument");
    return std::log(a);
  case Builtin::Sin:
    return std::sin(a);
  case Builtin::Cos:
    return std::cos(a);
  case Builtin::Min:
    return std::fmin(a, b);
  case Builtin::Max:
    return std::fmax(a, b);
  case Builtin::Pow:
    if (a == 0.0 && b < 0.0)
      throw DomainError("pow of zero to a negative power");
    return checked(std::pow(a, b), "pow");
  }
  return 0.0;
}

class ExprParser {
public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  Expr run() {
    if (src_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw ParseError("empty expression", 0);
    parse_expr();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    Expr e;
    e.source_ = std::string(src_);
    e.nodes_ = std::move(nodes_);
    return e;
  }

private:
  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r' || src_[pos_] == '\n'))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size())
        throw ParseError(std::string("expected '") + c + "' at end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  int push(ExprNode node) {
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Folds a node whose children are all constants; leaves it alone if the
  // fold would raise so that the error surfaces at evaluation time.
  int make(NodeKind kind, std::vector<int> children, SourceSpan span, Builtin f = Builtin::Abs) {
    bool all_const = true;
    for (int c : children)
      all_const = all_const && nodes_[c].kind == NodeKind::Constant;
    if (all_const) {
      try {
        double v = 0.0;
        if (kind == NodeKind::Negate)
          v = -nodes_[children[0]].value;
        else if (kind == NodeKind::Call)
          v = apply_builtin(f, nodes_[children[0]].value,
                            children.size() > 1 ? nodes_[children[1]].value : 0.0);
        else
          v = apply_binary(kind, nodes_[children[0]].value, nodes_[children[1]].value);
        ExprNode n;
        n.kind = NodeKind::Constant;
        n.value = v;
        n.span = span;
        return push(std::move(n));
      } catch (const DomainError &) {
      }
    }
    ExprNode n;
    n.kind = kind;
    n.function = f;
    n.children = std::move(children);
    n.span = span;
    return push(std::move(n));
  }

  int parse_expr() {
    skip_ws();
    std::size_t begin = pos_;
    int lhs = parse_term();
    for (;;) {
      skip_ws();
      if (accept('+'))
        lhs = make(NodeKind::Add, {lhs, parse_term()}, {begin, pos_});
      else if (accept('-'))
        lhs = make(NodeKind::Sub, {lhs, parse_term()}, {begin, pos_});
      else
        return lhs;
    }
  }

  int parse_term() {
    skip_ws();
    std::size_t begin = pos_;
    int lhs = parse_factor();
    for (;;) {
      if (accept('*'))
        lhs = make(NodeKind::Mul, {lhs, parse_factor()}, {begin, pos_});
      else if (accept('/'))
        lhs = make(NodeKind::Div, {lhs, parse_factor()}, {begin, pos_});
      else
        return lhs;
    }
  }

  int parse_factor() {
    skip_ws();
    std::size_t begin = pos_;
    if (accept('-'))
      return make(NodeKind::Negate, {parse_power()}, {begin, pos_});
    return parse_power();
  }

  int parse_power() {
    skip_ws();
    std::size_t begin = pos_;
    int base = parse_atom();
    if (accept('^'))
      return make(NodeKind::Pow, {base, parse_factor()}, {begin, pos_});
    return base;
  }

  int parse_atom() {
    skip_ws();
    std::size_t begin = pos_;
    if (pos_ >= src_.size())
      throw ParseError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (is_digit(c) || c == '.')
      return parse_number();
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(src_[pos_]))
        ++pos_;
      std::string_view name = src_.substr(begin, pos_ - begin);
      skip_ws();
      bool call = pos_ < src_.size() && src_[pos_] == '(';
      if (name == "x" && !call) {
        ExprNode n;
        n.kind = NodeKind::Variable;
        n.span = {begin, pos_};
        return push(std::move(n));
      }
      const BuiltinInfo *info = find_builtin(name);
      if (info == nullptr)
        throw ParseError("unknown identifier '" + std::string(name) + "'", begin);
      if (!call)
        throw ParseError("function '" + std::string(name) + "' requires arguments", pos_);
      ++pos_;
      std::vector<int> args;
      skip_ws();
      if (!(pos_ < src_.size() && src_[pos_] == ')')) {
        args.push_back(parse_expr());
        while (accept(','))
          args.push_back(parse_expr());
      }
      expect(')');
      if (static_cast<int>(args.size()) != info->arity)
        throw ParseError("function '" + std::string(name) + "' expects " + std::to_string(info->arity) +
                             " argument(s), got " + std::to_string(args.size()),
                         begin);
      return make(NodeKind::Call, std::move(args), {begin, pos_}, info->id);
    }
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  int parse_number() {
    std::size_t begin = pos_;
    while (pos_ < src_.size() && (is_digit(src_[pos_]) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
        ++pos_;
      if (pos_ < src_.size() && is_digit(src_[pos_])) {
        while (pos_ < src_.size() && is_digit(src_[pos_]))
          ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    const char *first = src_.data() + begin;
    const char *last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
      throw ParseError("malformed number '" + std::string(first, last) + "'", begin);
    ExprNode n;
    n.kind = NodeKind::Constant;
    n.value = v;
    n.span = {begin, pos_};
    return push(std::move(n));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

Expr Expr::parse(std::string_view source) {
  Expr e = ExprParser(source).run();
  // Folding may leave dead constant children behind; compact to the reachable tree.
  std::vector<ExprNode> compact;
  compact.reserve(e.nodes_.size());
  auto copy = [&](auto &&self, int index) -> int {
    ExprNode n = e.nodes_[index];
    for (int &c : n.children)
      c = self(self, c);
    compact.push_back(std::move(n));
    return static_cast<int>(compact.size()) - 1;
  };
  copy(copy, e.root());
  e.nodes_ = std::move(compact);
  return e;
}

double Expr::evaluate(double x) const {
  if (!std::isfinite(x))
    throw DomainError("non-finite argument");
  return eval_node(root(), x);
}

double Expr::eval_node(int index, double x) const {
  const ExprNode &n = nodes_[index];
  switch (n.kind) {
  case NodeKind::Constant:
    return n.value;
  case NodeKind::Variable:
    return x;
  case NodeKind::Negate:
    return -eval_node(n.children[0], x);
  case NodeKind::Call:
    if (n.children.size() == 1)
      return apply_builtin(n.function, eval_node(n.children[0], x));
    return apply_builtin(n.function, eval_node(n.children[0], x), eval_node(n.children[1], x));
  default:
    return apply_binary(n.kind, eval_node(n.children[0], x), eval_node(n.children[1], x));
  }
}

std::string Expr::print() const {
  std::string out;
  print_node(root(), out);
  return out;
}

void Expr::print_node(int index, std::string &out) const {
  const ExprNode &n = nodes_[index];
  switch (n.kind) {
  case NodeKind::Constant: {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), n.value);
    (void)ec;
    if (n.value < 0.0 || std::signbit(n.value)) {
      // Keep the sign inside parentheses; "-0" must survive as negative zero.
      out += "(-";
      out.append(buf.data() + 1, ptr);
      out += ')';
    } else {
      out.append(buf.data(), ptr);
    }
    return;
  }
  case NodeKind::Variable:
    out += 'x';
    return;
  case NodeKind::Negate:
    out += "(-";
    print_node(n.children[0], out);
    out += ')';
    return;
  case NodeKind::Call:
    out += builtin_name(n.function);
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i)
        out += ", ";
      print_node(n.children[i], out);
    }
    out += ')';
    return;
  default: {
    char op = '+';
    switch (n.kind) {
    case NodeKind::Sub: op = '-'; break;
    case NodeKind::Mul: op = '*'; break;
    case NodeKind::Div: op = '/'; break;
    case NodeKind::Pow: op = '^'; break;
    default: break;
    }
    out += '(';
    print_node(n.children[0], out);
    out += ' ';
    out += op;
    out += ' ';
    print_node(n.children[1], out);
    out += ')';
    return;
  }
  }
}

} // namespace ruelle
