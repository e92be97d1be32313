#include "rkit/potential.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <sstream>

namespace rkit {

namespace {

using Node = PotentialExpr::Node;
using Kind = PotentialExpr::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
  return std::make_shared<const Node>(Node{kind, value, std::move(lhs), std::move(rhs)});
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_space();
    if (at_end()) error("empty expression");
    NodePtr out = expr();
    skip_space();
    if (!at_end()) error(std::string("unexpected '") + text_[pos_] + "'; expected operator or end of input");
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void error(const std::string& msg) const { error_at(pos_, msg); }

  [[noreturn]] void error_at(std::size_t at, const std::string& msg) const {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw PotentialSyntaxError(line, col, msg);
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (at_end()) error("unexpected end of input; expected number, 'r', 'exp(' or '('");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) {
        skip_space();
        error("expected ')'");
      }
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "r") return make(Kind::Var);
      if (name == "exp") {
        if (!accept('(')) {
          skip_space();
          error("expected '(' after exp");
        }
        NodePtr arg = expr();
        if (!accept(')')) {
          skip_space();
          error("expected ')'");
        }
        return make(Kind::Exp, arg);
      }
      error_at(start, "unknown identifier '" + std::string(name) + "'; expected 'r' or 'exp'");
    }
    error(std::string("unexpected '") + c + "'; expected number, 'r', 'exp(' or '('");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v, std::chars_format::general);
    if (res.ec == std::errc::invalid_argument) error("malformed number");
    if (res.ec == std::errc::result_out_of_range) error_at(start, "number out of range");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    return make(Kind::Number, nullptr, nullptr, v);
  }
};

double eval(const Node& n, double r) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Var: return r;
    case Kind::Neg: return -eval(*n.lhs, r);
    case Kind::Add: return eval(*n.lhs, r) + eval(*n.rhs, r);
    case Kind::Sub: return eval(*n.lhs, r) - eval(*n.rhs, r);
    case Kind::Mul: return eval(*n.lhs, r) * eval(*n.rhs, r);
    case Kind::Div: return eval(*n.lhs, r) / eval(*n.rhs, r);
    case Kind::Pow: {
      const double b = eval(*n.lhs, r);
      const double e = eval(*n.rhs, r);
      if (e == 2.0) return b * b;
      return std::pow(b, e);
    }
    case Kind::Exp: return std::exp(eval(*n.lhs, r));
  }
  return 0.0;
}

void print(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*n.lhs, out);
    out += op;
    print(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::Number: out += format_number(n.value); break;
    case Kind::Var: out += 'r'; break;
    case Kind::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      break;
    case Kind::Add: binary(" + "); break;
    case Kind::Sub: binary(" - "); break;
    case Kind::Mul: binary("*"); break;
    case Kind::Div: binary("/"); break;
    case Kind::Pow: binary("^"); break;
    case Kind::Exp:
      out += "exp(";
      print(*n.lhs, out);
      out += ')';
      break;
  }
}

bool same(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Kind::Number) return a.value == b.value || (std::isnan(a.value) && std::isnan(b.value));
  if ((a.lhs == nullptr) != (b.lhs == nullptr) || (a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !same(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !same(*a.rhs, *b.rhs)) return false;
  return true;
}

}  // namespace

PotentialSyntaxError::PotentialSyntaxError(int line, int column, const std::string& message)
    : ConfigError("potential: line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

PotentialExpr::PotentialExpr() : root_(make(Kind::Number)) {}

PotentialExpr::PotentialExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

double PotentialExpr::operator()(double r) const { return eval(*root_, r); }

std::string PotentialExpr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool PotentialExpr::is_zero() const { return root_->kind == Kind::Number && root_->value == 0.0; }

bool operator==(const PotentialExpr& a, const PotentialExpr& b) { return same(*a.root_, *b.root_); }

PotentialExpr parse_potential(std::string_view text) { return PotentialExpr(Parser(text).parse()); }

void check_short_range(const PotentialExpr& v, double range, double tail_tolerance) {
  for (int i = 0; i <= 400; ++i) {
    const double r = range * 4.0 * std::pow(10.0, -8.0 + 8.0 * i / 400.0);
    const double value = v(r);
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os.precision(17);
      os << "potential is not finite at r = " << r;
      throw ConfigError(os.str());
    }
    if (r >= range && std::abs(value) > tail_tolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "potential is not short-range: |V(" << r << ")| = " << std::abs(value) << " exceeds " << tail_tolerance;
      throw ConfigError(os.str());
    }
  }
}

}  // namespace rkit
