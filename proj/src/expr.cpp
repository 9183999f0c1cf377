#include "gmap/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace gmap {

namespace {

bool is_integral(double v, long long& out) {
  if (!std::isfinite(v) || std::abs(v) > 1e15) return false;
  double r = std::round(v);
  if (r != v) return false;
  out = static_cast<long long>(r);
  return true;
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Ln: return "ln";
    case UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

} // namespace

ExprPtr Expr::constant(double value) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Constant;
  e->value_ = value;
  return e;
}

ExprPtr Expr::variable(int index) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Variable;
  e->index_ = index;
  return e;
}

ExprPtr Expr::unary(UnaryOp op, ExprPtr operand) {
  if (operand->kind() == Kind::Constant) {
    double v = operand->constant_value();
    double folded = 0.0;
    bool ok = true;
    switch (op) {
      case UnaryOp::Neg: folded = -v; break;
      case UnaryOp::Sin: folded = std::sin(v); break;
      case UnaryOp::Cos: folded = std::cos(v); break;
      case UnaryOp::Tan: folded = std::tan(v); break;
      case UnaryOp::Sinh: folded = std::sinh(v); break;
      case UnaryOp::Cosh: folded = std::cosh(v); break;
      case UnaryOp::Exp: folded = std::exp(v); break;
      case UnaryOp::Ln: ok = v > 0.0; folded = ok ? std::log(v) : 0.0; break;
      case UnaryOp::Sqrt: ok = v >= 0.0; folded = ok ? std::sqrt(v) : 0.0; break;
    }
    // Leave out-of-domain constants unfolded so evaluation reports them.
    if (ok && std::isfinite(folded)) return constant(folded);
  }
  if (op == UnaryOp::Neg && operand->kind() == Kind::Unary &&
      operand->unary_op() == UnaryOp::Neg) {
    return operand->operand();
  }
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Unary;
  e->unary_ = op;
  e->lhs_ = std::move(operand);
  return e;
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  const bool lc = lhs->kind() == Kind::Constant;
  const bool rc = rhs->kind() == Kind::Constant;
  if (lc && rc) {
    double a = lhs->constant_value(), b = rhs->constant_value();
    double folded = 0.0;
    bool ok = true;
    switch (op) {
      case BinaryOp::Add: folded = a + b; break;
      case BinaryOp::Sub: folded = a - b; break;
      case BinaryOp::Mul: folded = a * b; break;
      case BinaryOp::Div: ok = b != 0.0; folded = ok ? a / b : 0.0; break;
      case BinaryOp::Pow: {
        long long k = 0;
        ok = a > 0.0 || (a == 0.0 && b >= 0.0) || is_integral(b, k);
        folded = ok ? std::pow(a, b) : 0.0;
        break;
      }
    }
    if (ok && std::isfinite(folded)) return constant(folded);
  }
  switch (op) {
    case BinaryOp::Add:
      if (lhs->is_constant(0.0)) return rhs;
      if (rhs->is_constant(0.0)) return lhs;
      break;
    case BinaryOp::Sub:
      if (rhs->is_constant(0.0)) return lhs;
      if (lhs->is_constant(0.0)) return unary(UnaryOp::Neg, rhs);
      break;
    case BinaryOp::Mul:
      if (lhs->is_constant(0.0) || rhs->is_constant(0.0)) return constant(0.0);
      if (lhs->is_constant(1.0)) return rhs;
      if (rhs->is_constant(1.0)) return lhs;
      break;
    case BinaryOp::Div:
      if (rhs->is_constant(1.0)) return lhs;
      break;
    case BinaryOp::Pow:
      if (rhs->is_constant(1.0)) return lhs;
      if (rhs->is_constant(0.0)) return constant(1.0);
      break;
  }
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind_ = Kind::Binary;
  e->binary_ = op;
  e->lhs_ = std::move(lhs);
  e->rhs_ = std::move(rhs);
  return e;
}

double Expr::evaluate(std::span<const double> point) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Variable:
      return point[static_cast<std::size_t>(index_)];
    case Kind::Unary: {
      double v = lhs_->evaluate(point);
      double r = 0.0;
      switch (unary_) {
        case UnaryOp::Neg: r = -v; break;
        case UnaryOp::Sin: r = std::sin(v); break;
        case UnaryOp::Cos: r = std::cos(v); break;
        case UnaryOp::Tan: r = std::tan(v); break;
        case UnaryOp::Sinh: r = std::sinh(v); break;
        case UnaryOp::Cosh: r = std::cosh(v); break;
        case UnaryOp::Exp: r = std::exp(v); break;
        case UnaryOp::Ln:
          if (v <= 0.0) throw DomainError("ln of non-positive value", str());
          r = std::log(v);
          break;
        case UnaryOp::Sqrt:
          if (v < 0.0) throw DomainError("sqrt of negative value", str());
          r = std::sqrt(v);
          break;
      }
      if (!std::isfinite(r)) throw DomainError("non-finite value", str());
      return r;
    }
    case Kind::Binary: {
      double a = lhs_->evaluate(point);
      double b = rhs_->evaluate(point);
      double r = 0.0;
      switch (binary_) {
        case BinaryOp::Add: r = a + b; break;
        case BinaryOp::Sub: r = a - b; break;
        case BinaryOp::Mul: r = a * b; break;
        case BinaryOp::Div:
          if (b == 0.0) throw DomainError("division by zero", str());
          r = a / b;
          break;
        case BinaryOp::Pow: {
          long long k = 0;
          if (a < 0.0 && !is_integral(b, k))
            throw DomainError("negative base with non-integer exponent", str());
          if (a == 0.0 && b < 0.0)
            throw DomainError("zero base with negative exponent", str());
          r = std::pow(a, b);
          break;
        }
      }
      if (!std::isfinite(r)) throw DomainError("non-finite value", str());
      return r;
    }
  }
  return 0.0;
}

namespace {

// Precedence used by the printer: higher binds tighter.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.constant_value() < 0.0 ? 25 : 40;
    case Expr::Kind::Variable:
      return 40;
    case Expr::Kind::Unary:
      return e.unary_op() == UnaryOp::Neg ? 25 : 40;
    case Expr::Kind::Binary:
      switch (e.binary_op()) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 10;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 20;
        case BinaryOp::Pow: return 30;
      }
  }
  return 40;
}

void print_number(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, end);
}

void print_node(std::string& out, const Expr& e, int parent_prec) {
  int prec = precedence(e);
  bool need_parens = prec < parent_prec;
  if (need_parens) out.push_back('(');
  switch (e.kind()) {
    case Expr::Kind::Constant:
      print_number(out, e.constant_value());
      break;
    case Expr::Kind::Variable:
      out.push_back('x');
      out.append(std::to_string(e.variable_index() + 1));
      break;
    case Expr::Kind::Unary:
      if (e.unary_op() == UnaryOp::Neg) {
        out.push_back('-');
        print_node(out, *e.operand(), 26);
      } else {
        out.append(unary_name(e.unary_op()));
        out.push_back('(');
        print_node(out, *e.operand(), 0);
        out.push_back(')');
      }
      break;
    case Expr::Kind::Binary: {
      const char* sym = "?";
      int lp = prec, rp = prec + 1;
      switch (e.binary_op()) {
        case BinaryOp::Add: sym = " + "; break;
        case BinaryOp::Sub: sym = " - "; break;
        case BinaryOp::Mul: sym = "*"; break;
        case BinaryOp::Div: sym = "/"; break;
        case BinaryOp::Pow:
          sym = "^";
          lp = prec + 1;  // right associative
          rp = prec;
          break;
      }
      print_node(out, *e.left(), lp);
      out.append(sym);
      print_node(out, *e.right(), rp);
      break;
    }
  }
  if (need_parens) out.push_back(')');
}

} // namespace

std::string Expr::str() const {
  std::string out;
  print_node(out, *this, 0);
  return out;
}

ExprPtr differentiate(const ExprPtr& e, int coord) {
  using K = Expr::Kind;
  switch (e->kind()) {
    case K::Constant:
      return Expr::constant(0.0);
    case K::Variable:
      return Expr::constant(e->variable_index() == coord ? 1.0 : 0.0);
    case K::Unary: {
      const ExprPtr& u = e->operand();
      ExprPtr du = differentiate(u, coord);
      auto chain = [&](ExprPtr outer) {
        return Expr::binary(BinaryOp::Mul, std::move(outer), du);
      };
      switch (e->unary_op()) {
        case UnaryOp::Neg:
          return Expr::unary(UnaryOp::Neg, du);
        case UnaryOp::Sin:
          return chain(Expr::unary(UnaryOp::Cos, u));
        case UnaryOp::Cos:
          return chain(Expr::unary(UnaryOp::Neg, Expr::unary(UnaryOp::Sin, u)));
        case UnaryOp::Tan:
          return Expr::binary(
              BinaryOp::Div, du,
              Expr::binary(BinaryOp::Pow, Expr::unary(UnaryOp::Cos, u),
                           Expr::constant(2.0)));
        case UnaryOp::Sinh:
          return chain(Expr::unary(UnaryOp::Cosh, u));
        case UnaryOp::Cosh:
          return chain(Expr::unary(UnaryOp::Sinh, u));
        case UnaryOp::Exp:
          return chain(Expr::unary(UnaryOp::Exp, u));
        case UnaryOp::Ln:
          return Expr::binary(BinaryOp::Div, du, u);
        case UnaryOp::Sqrt:
          return Expr::binary(
              BinaryOp::Div, du,
              Expr::binary(BinaryOp::Mul, Expr::constant(2.0),
                           Expr::unary(UnaryOp::Sqrt, u)));
      }
      break;
    }
    case K::Binary: {
      const ExprPtr& a = e->left();
      const ExprPtr& b = e->right();
      ExprPtr da = differentiate(a, coord);
      ExprPtr db = differentiate(b, coord);
      switch (e->binary_op()) {
        case BinaryOp::Add:
          return Expr::binary(BinaryOp::Add, da, db);
        case BinaryOp::Sub:
          return Expr::binary(BinaryOp::Sub, da, db);
        case BinaryOp::Mul:
          return Expr::binary(BinaryOp::Add,
                              Expr::binary(BinaryOp::Mul, da, b),
                              Expr::binary(BinaryOp::Mul, a, db));
        case BinaryOp::Div:
          return Expr::binary(
              BinaryOp::Div,
              Expr::binary(BinaryOp::Sub, Expr::binary(BinaryOp::Mul, da, b),
                           Expr::binary(BinaryOp::Mul, a, db)),
              Expr::binary(BinaryOp::Pow, b, Expr::constant(2.0)));
        case BinaryOp::Pow: {
          if (b->kind() == K::Constant) {
            // power rule; for integer exponents this avoids spurious domain
            // errors on negative bases, and for non-integer exponents the
            // base must be positive anyway for a^b itself to evaluate
            double w = b->constant_value();
            return Expr::binary(
                BinaryOp::Mul, Expr::constant(w),
                Expr::binary(BinaryOp::Mul,
                             Expr::binary(BinaryOp::Pow, a,
                                          Expr::constant(w - 1.0)),
                             da));
          }
          // general case via the exp/ln rewrite of a^b
          ExprPtr term1 = Expr::binary(BinaryOp::Mul, db,
                                       Expr::unary(UnaryOp::Ln, a));
          ExprPtr term2 = Expr::binary(BinaryOp::Mul, b,
                                       Expr::binary(BinaryOp::Div, da, a));
          return Expr::binary(BinaryOp::Mul, e,
                              Expr::binary(BinaryOp::Add, term1, term2));
        }
      }
      break;
    }
  }
  return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Type type = End;
  std::size_t pos = 0;  // 1-based offset in the input
  double number = 0.0;
  std::string ident;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& current() const { return tok_; }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    tok_ = Token{};
    tok_.pos = pos_ + 1;
    if (pos_ >= text_.size()) {
      tok_.type = Token::End;
      return;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.data() + pos_;
      const char* end = text_.data() + text_.size();
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr == begin)
        throw ParseError("malformed number", tok_.pos);
      tok_.type = Token::Number;
      tok_.number = value;
      pos_ += static_cast<std::size_t>(ptr - begin);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      tok_.type = Token::Ident;
      tok_.ident = std::string(text_.substr(start, pos_ - start));
      return;
    }
    ++pos_;
    switch (c) {
      case '+': tok_.type = Token::Plus; return;
      case '-': tok_.type = Token::Minus; return;
      case '*': tok_.type = Token::Star; return;
      case '/': tok_.type = Token::Slash; return;
      case '^': tok_.type = Token::Caret; return;
      case '(': tok_.type = Token::LParen; return;
      case ')': tok_.type = Token::RParen; return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", tok_.pos);
    }
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

const std::map<std::string, UnaryOp, std::less<>>& function_table() {
  static const std::map<std::string, UnaryOp, std::less<>> table = {
      {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},  {"tan", UnaryOp::Tan},
      {"sinh", UnaryOp::Sinh}, {"cosh", UnaryOp::Cosh}, {"exp", UnaryOp::Exp},
      {"ln", UnaryOp::Ln},     {"sqrt", UnaryOp::Sqrt}};
  return table;
}

class Parser {
public:
  Parser(std::string_view text, std::span<const std::string> coords)
      : lex_(text), coords_(coords) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    if (lex_.current().type != Token::End)
      throw ParseError("unexpected trailing input", lex_.current().pos);
    return e;
  }

private:
  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (true) {
      Token::Type t = lex_.current().type;
      if (t == Token::Plus || t == Token::Minus) {
        lex_.advance();
        ExprPtr rhs = parse_term();
        e = Expr::binary(t == Token::Plus ? BinaryOp::Add : BinaryOp::Sub,
                         std::move(e), std::move(rhs));
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (true) {
      Token::Type t = lex_.current().type;
      if (t == Token::Star || t == Token::Slash) {
        lex_.advance();
        ExprPtr rhs = parse_factor();
        e = Expr::binary(t == Token::Star ? BinaryOp::Mul : BinaryOp::Div,
                         std::move(e), std::move(rhs));
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_factor() {
    if (lex_.current().type == Token::Minus) {
      lex_.advance();
      return Expr::unary(UnaryOp::Neg, parse_power());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (lex_.current().type == Token::Caret) {
      lex_.advance();
      ExprPtr exponent = parse_factor();  // right associative
      return Expr::binary(BinaryOp::Pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  ExprPtr parse_atom() {
    const Token tok = lex_.current();
    switch (tok.type) {
      case Token::Number:
        lex_.advance();
        return Expr::constant(tok.number);
      case Token::Ident: {
        lex_.advance();
        const auto& functions = function_table();
        auto fn = functions.find(tok.ident);
        int coord = coord_index(tok.ident);
        if (lex_.current().type == Token::LParen) {
          if (fn == functions.end()) {
            if (coord >= 0)
              throw ParseError("arity mismatch: '" + tok.ident +
                                   "' is a coordinate, not a function",
                               tok.pos);
            throw ParseError("unknown function '" + tok.ident + "'", tok.pos);
          }
          lex_.advance();
          ExprPtr arg = parse_expr();
          expect(Token::RParen, "')'");
          return Expr::unary(fn->second, std::move(arg));
        }
        if (coord >= 0) return Expr::variable(coord);
        if (fn != functions.end())
          throw ParseError("arity mismatch: function '" + tok.ident +
                               "' needs an argument list",
                           tok.pos);
        throw ParseError("unknown identifier '" + tok.ident + "'", tok.pos);
      }
      case Token::LParen: {
        lex_.advance();
        ExprPtr e = parse_expr();
        expect(Token::RParen, "')'");
        return e;
      }
      default:
        throw ParseError("expected a number, identifier or '('", tok.pos);
    }
  }

  void expect(Token::Type type, const char* what) {
    if (lex_.current().type != type)
      throw ParseError(std::string("expected ") + what, lex_.current().pos);
    lex_.advance();
  }

  int coord_index(std::string_view name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return static_cast<int>(i);
    return -1;
  }

  Lexer lex_;
  std::span<const std::string> coords_;
};

} // namespace

ExprPtr parse_expression(std::string_view text,
                         std::span<const std::string> coords) {
  if (coords.empty()) throw InputError("coordinate list is empty");
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = i + 1; j < coords.size(); ++j)
      if (coords[i] == coords[j])
        throw InputError("duplicate coordinate name '" + coords[i] + "'");
  Parser parser(text, coords);
  return parser.parse();
}

} // namespace gmap
