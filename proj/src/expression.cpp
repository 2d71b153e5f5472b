#include "aniso_dbvp/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include "aniso_dbvp/error.hpp"

namespace adbvp {

enum class Op {
  constant, var_k, var_x, neg, add, sub, mul, div, pow,
  exp, ln, abs, sqrt, atan, sin, cos, min, max,
};

struct Expression::Node {
  Op op;
  double value = 0.0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  return std::make_shared<const Expression::Node>(Expression::Node{op, value, std::move(lhs), std::move(rhs)});
}

struct FunctionEntry {
  std::string_view name;
  Op op;
  int arity;
};

constexpr FunctionEntry kFunctions[] = {
    {"exp", Op::exp, 1},   {"ln", Op::ln, 1},     {"abs", Op::abs, 1},   {"sqrt", Op::sqrt, 1},
    {"atan", Op::atan, 1}, {"sin", Op::sin, 1},   {"cos", Op::cos, 1},   {"pow", Op::pow, 2},
    {"min", Op::min, 2},   {"max", Op::max, 2},
};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr n = sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return n;
  }

  bool uses_k = false;
  bool uses_x = false;

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(Errc::syntax_error, msg + " at offset " + std::to_string(pos_), pos_);
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (accept('+')) n = make(Op::add, n, product());
      else if (accept('-')) n = make(Op::sub, n, product());
      else return n;
    }
  }

  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Op::mul, n, unary());
      else if (accept('/')) n = make(Op::div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr n = sum();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    // Locale-independent; accepts 1, 1.5, .5, 1e-11, 2.5E+3.
    std::size_t end = pos_;
    while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
        while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
        end = e;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + end, v);
    if (ec != std::errc() || ptr != src_.data() + end) fail("malformed number");
    pos_ = end;
    return make(Op::constant, nullptr, nullptr, v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);

    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      for (const auto& fn : kFunctions) {
        if (fn.name != id) continue;
        ++pos_;
        NodePtr a = sum();
        NodePtr b;
        if (fn.arity == 2) {
          if (!accept(',')) fail("expected ',' in call to " + std::string(id));
          b = sum();
        }
        if (!accept(')')) fail("expected ')' closing call to " + std::string(id));
        return make(fn.op, a, b);
      }
      throw ParseError(Errc::unknown_identifier, "unknown function '" + std::string(id) + "'", start);
    }
    if (id == "k") {
      uses_k = true;
      return make(Op::var_k);
    }
    if (id == "x" || id == "t") {
      uses_x = true;
      return make(Op::var_x);
    }
    if (id == "pi") return make(Op::constant, nullptr, nullptr, std::numbers::pi);
    if (id == "e") return make(Op::constant, nullptr, nullptr, std::numbers::e);
    throw ParseError(Errc::unknown_identifier, "unknown identifier '" + std::string(id) + "'", start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

double eval_node(const Expression::Node& n, const Variables& v) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::var_k: return v.k;
    case Op::var_x: return v.x;
    case Op::neg: return -eval_node(*n.lhs, v);
    case Op::add: return eval_node(*n.lhs, v) + eval_node(*n.rhs, v);
    case Op::sub: return eval_node(*n.lhs, v) - eval_node(*n.rhs, v);
    case Op::mul: return eval_node(*n.lhs, v) * eval_node(*n.rhs, v);
    case Op::div: return eval_node(*n.lhs, v) / eval_node(*n.rhs, v);
    case Op::pow: return std::pow(eval_node(*n.lhs, v), eval_node(*n.rhs, v));
    case Op::exp: return std::exp(eval_node(*n.lhs, v));
    case Op::ln: return std::log(eval_node(*n.lhs, v));
    case Op::abs: return std::fabs(eval_node(*n.lhs, v));
    case Op::sqrt: return std::sqrt(eval_node(*n.lhs, v));
    case Op::atan: return std::atan(eval_node(*n.lhs, v));
    case Op::sin: return std::sin(eval_node(*n.lhs, v));
    case Op::cos: return std::cos(eval_node(*n.lhs, v));
    case Op::min: return std::fmin(eval_node(*n.lhs, v), eval_node(*n.rhs, v));
    case Op::max: return std::fmax(eval_node(*n.lhs, v), eval_node(*n.rhs, v));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

Expression Expression::parse(std::string_view src) {
  Parser parser(src);
  Expression e;
  e.root_ = parser.parse_all();
  e.source_ = std::string(src);
  e.uses_k_ = parser.uses_k;
  e.uses_x_ = parser.uses_x;
  return e;
}

double Expression::eval(const Variables& vars) const { return eval_node(*root_, vars); }

}  // namespace adbvp
