#include "germ/cli/dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "germ/spectrum.hpp"

namespace germ::cli {

Expr Expr::real_literal(double v) {
  Expr e;
  e.kind = Kind::real;
  e.number = v;
  return e;
}

Expr Expr::imaginary_literal(double v) {
  Expr e;
  e.kind = Kind::imaginary;
  e.number = v;
  return e;
}

Expr Expr::variable(int index) {
  Expr e;
  e.kind = Kind::variable;
  e.index = index;
  return e;
}

Expr Expr::unity(long long p, long long q) {
  Expr e;
  e.kind = Kind::unity;
  e.p = p;
  e.q = q;
  return e;
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = kind;
  e.children.push_back(std::move(lhs));
  e.children.push_back(std::move(rhs));
  return e;
}

Expr Expr::negate(Expr operand) {
  Expr e;
  e.kind = Kind::neg;
  e.children.push_back(std::move(operand));
  return e;
}

Expr Expr::power(Expr base, int exponent) {
  Expr e;
  e.kind = Kind::pow;
  e.exponent = exponent;
  e.children.push_back(std::move(base));
  return e;
}

DslError::DslError(ErrorCode code, int line, int column, const std::string& message)
    : Error(code, std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

constexpr int kMaxExponent = 255;

enum class Tok { ident, meta, real, imaginary, integer, plus, minus, star, caret, lparen, rparen, comma, equals,
                 separator, end };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::separator: return "end of statement";
    case Tok::end: return "end of input";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    int depth = 0;
    while (true) {
      skip_blanks();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::end;
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (c == '\n' || c == ';') {
        advance();
        if (depth > 0 && c == '\n') continue;
        t.kind = Tok::separator;
        t.text = std::string(1, c);
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        lex_number(t);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::ident;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          t.text += text_[pos_];
          advance();
        }
      } else if (c == '@') {
        t.kind = Tok::meta;
        t.text = "@";
        advance();
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
          t.text += text_[pos_];
          advance();
        }
      } else {
        t.text = std::string(1, c);
        switch (c) {
          case '+': t.kind = Tok::plus; break;
          case '-': t.kind = Tok::minus; break;
          case '*': t.kind = Tok::star; break;
          case '^': t.kind = Tok::caret; break;
          case '(': t.kind = Tok::lparen; ++depth; break;
          case ')': t.kind = Tok::rparen; depth = std::max(0, depth - 1); break;
          case ',': t.kind = Tok::comma; break;
          case '=': t.kind = Tok::equals; break;
          default:
            throw DslError(ErrorCode::syntax, line_, column_, std::string("unexpected character '") + c + "'");
        }
        advance();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blanks() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_number(Token& t) {
    const int line = line_, column = column_;
    std::string digits;
    bool integral = true;
    auto take_digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits += text_[pos_];
        advance();
      }
    };
    take_digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      integral = false;
      digits += '.';
      advance();
      take_digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      integral = false;
      digits += 'e';
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        digits += text_[pos_];
        advance();
      }
      const std::size_t before = digits.size();
      take_digits();
      if (digits.size() == before) throw DslError(ErrorCode::syntax, line, column, "malformed exponent in number");
    }
    if (digits == "." || digits.empty()) throw DslError(ErrorCode::syntax, line, column, "malformed number");
    t.text = digits;
    char* end = nullptr;
    t.number = std::strtod(digits.c_str(), &end);
    if (!std::isfinite(t.number)) throw DslError(ErrorCode::syntax, line, column, "number out of range");
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        !(pos_ + 1 < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '_'))) {
      advance();
      t.kind = Tok::imaginary;
      t.text += 'i';
    } else {
      t.kind = integral ? Tok::integer : Tok::real;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

struct VariableUse {
  int index;
  int line;
  int column;
};

struct ComponentSite {
  int line;
  int column;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  MapSpecAst run() {
    std::map<int, std::pair<Expr, ComponentSite>> components;
    MapSpecAst ast;
    while (peek().kind != Tok::end) {
      if (peek().kind == Tok::separator) {
        ++pos_;
        continue;
      }
      if (peek().kind == Tok::meta) {
        parse_meta(ast);
      } else {
        const Token& name = expect(Tok::ident, "component name such as f1");
        const int index = indexed_name(name, 'f');
        if (index == 0) fail(name, "expected a component name such as f1, got " + describe(name));
        if (index > static_cast<int>(kMaxDimension)) {
          throw DslError(ErrorCode::dimension_mismatch, name.line, name.column,
                         "dimension exceeds " + std::to_string(kMaxDimension));
        }
        expect(Tok::equals, "'='");
        Expr e = parse_expr();
        if (components.count(index)) {
          throw DslError(ErrorCode::dimension_mismatch, name.line, name.column,
                         "component f" + std::to_string(index) + " defined twice");
        }
        components.emplace(index, std::make_pair(std::move(e), ComponentSite{name.line, name.column}));
      }
      if (peek().kind != Tok::end) expect(Tok::separator, "end of statement");
    }
    if (components.empty()) {
      const Token& t = peek();
      throw DslError(ErrorCode::syntax, t.line, t.column, "no components defined");
    }
    const int n = components.rbegin()->first;
    for (int k = 1; k <= n; ++k) {
      if (!components.count(k)) {
        const auto& site = components.rbegin()->second.second;
        throw DslError(ErrorCode::dimension_mismatch, site.line, site.column,
                       "component f" + std::to_string(k) + " is missing for dimension " + std::to_string(n));
      }
    }
    for (const auto& use : variables_) {
      if (use.index > n) {
        throw DslError(ErrorCode::dimension_mismatch, use.line, use.column,
                       "variable x" + std::to_string(use.index) + " exceeds dimension " + std::to_string(n));
      }
    }
    ast.dimension = static_cast<std::size_t>(n);
    for (auto& [k, entry] : components) {
      sites_.push_back(entry.second);
      ast.components.push_back(std::move(entry.first));
    }
    return ast;
  }

  const std::vector<ComponentSite>& sites() const { return sites_; }

 private:
  const Token& peek() const { return tokens_[pos_]; }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw DslError(ErrorCode::syntax, t.line, t.column, message);
  }

  const Token& expect(Tok kind, const std::string& what) {
    const Token& t = peek();
    if (t.kind != kind) fail(t, "expected " + what + ", got " + describe(t));
    ++pos_;
    return t;
  }

  // f12 -> 12 for prefix 'f'; 0 when the name has another shape.
  static int indexed_name(const Token& t, char prefix) {
    if (t.text.size() < 2 || t.text[0] != prefix || t.text[1] == '0') return 0;
    int value = 0;
    for (std::size_t k = 1; k < t.text.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(t.text[k]))) return 0;
      value = value * 10 + (t.text[k] - '0');
      if (value > static_cast<int>(kMaxDimension)) return static_cast<int>(kMaxDimension) + 1;
    }
    return value;
  }

  void parse_meta(MapSpecAst& ast) {
    const Token& meta = peek();
    ++pos_;
    if (meta.text == "@degree") {
      const Token& v = expect(Tok::integer, "an integer degree");
      if (v.number < 1 || v.number > kMaxExponent) fail(v, "degree must lie in 1..255");
      ast.degree = static_cast<int>(v.number);
    } else if (meta.text == "@radius") {
      const Token& v = peek();
      if (v.kind != Tok::integer && v.kind != Tok::real) fail(v, "expected a radius, got " + describe(v));
      ++pos_;
      if (!(v.number > 0.0)) fail(v, "radius must be positive");
      ast.radius = v.number;
    } else {
      fail(meta, "unknown metadata " + meta.text);
    }
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const auto kind = peek().kind == Tok::plus ? Expr::Kind::add : Expr::Kind::sub;
      ++pos_;
      lhs = Expr::binary(kind, std::move(lhs), parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (peek().kind == Tok::star) {
      ++pos_;
      lhs = Expr::binary(Expr::Kind::mul, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().kind == Tok::minus) {
      ++pos_;
      return Expr::negate(parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (peek().kind == Tok::caret) {
      ++pos_;
      const Token& e = peek();
      if (e.kind == Tok::minus) fail(e, "exponents must be nonnegative integers");
      if (e.kind != Tok::integer) fail(e, "expected an integer exponent, got " + describe(e));
      ++pos_;
      if (e.number > kMaxExponent) fail(e, "exponent exceeds 255");
      base = Expr::power(std::move(base), static_cast<int>(e.number));
      if (peek().kind == Tok::caret) fail(peek(), "chained powers need parentheses");
    }
    return base;
  }

  long long parse_signed_integer() {
    bool negative = false;
    if (peek().kind == Tok::minus) {
      negative = true;
      ++pos_;
    }
    const Token& t = expect(Tok::integer, "an integer");
    if (t.number > 1e15) fail(t, "integer too large");
    const auto v = static_cast<long long>(t.number);
    return negative ? -v : v;
  }

  Expr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::integer:
      case Tok::real:
        ++pos_;
        return Expr::real_literal(t.number);
      case Tok::imaginary:
        ++pos_;
        return Expr::imaginary_literal(t.number);
      case Tok::lparen: {
        ++pos_;
        Expr inner = parse_expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::ident: {
        ++pos_;
        if (t.text == "unity") {
          expect(Tok::lparen, "'(' after unity");
          const long long p = parse_signed_integer();
          expect(Tok::comma, "','");
          const Token& qt = peek();
          const long long q = parse_signed_integer();
          if (q < 1) fail(qt, "unity denominator must be positive");
          expect(Tok::rparen, "')'");
          return Expr::unity(p, q);
        }
        const int index = indexed_name(t, 'x');
        if (index == 0) fail(t, "unknown identifier '" + t.text + "'; variables are x1, x2, ...");
        if (index > static_cast<int>(kMaxDimension)) {
          throw DslError(ErrorCode::dimension_mismatch, t.line, t.column,
                         "variable index exceeds " + std::to_string(kMaxDimension));
        }
        variables_.push_back({index, t.line, t.column});
        return Expr::variable(index);
      }
      default:
        fail(t, "expected an expression, got " + describe(t));
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<VariableUse> variables_;
  std::vector<ComponentSite> sites_;
};

Complex constant_value(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::real: return {e.number, 0.0};
    case Expr::Kind::imaginary: return {0.0, e.number};
    case Expr::Kind::variable: return 0.0;
    case Expr::Kind::unity: return unity_root(e.p, e.q);
    case Expr::Kind::add: return constant_value(e.children[0]) + constant_value(e.children[1]);
    case Expr::Kind::sub: return constant_value(e.children[0]) - constant_value(e.children[1]);
    case Expr::Kind::mul: return constant_value(e.children[0]) * constant_value(e.children[1]);
    case Expr::Kind::neg: return -constant_value(e.children[0]);
    case Expr::Kind::pow: {
      const Complex base = constant_value(e.children[0]);
      Complex out = 1.0;
      for (int k = 0; k < e.exponent; ++k) out *= base;
      return out;
    }
  }
  return 0.0;
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub: return 1;
    case Expr::Kind::mul: return 2;
    case Expr::Kind::neg: return 3;
    case Expr::Kind::pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_into(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_into(child, out);
  if (parens) out += ')';
}

void print_into(const Expr& e, std::string& out) {
  const int prec = precedence(e);
  switch (e.kind) {
    case Expr::Kind::real: out += format_number(e.number); break;
    case Expr::Kind::imaginary: out += format_number(e.number) + "i"; break;
    case Expr::Kind::variable: out += "x" + std::to_string(e.index); break;
    case Expr::Kind::unity: out += "unity(" + std::to_string(e.p) + "," + std::to_string(e.q) + ")"; break;
    case Expr::Kind::add:
    case Expr::Kind::sub:
    case Expr::Kind::mul:
      print_child(e.children[0], precedence(e.children[0]) < prec, out);
      out += e.kind == Expr::Kind::add ? " + " : e.kind == Expr::Kind::sub ? " - " : "*";
      print_child(e.children[1], precedence(e.children[1]) <= prec, out);
      break;
    case Expr::Kind::neg:
      out += '-';
      print_child(e.children[0], precedence(e.children[0]) < prec, out);
      break;
    case Expr::Kind::pow:
      print_child(e.children[0], precedence(e.children[0]) <= prec, out);
      out += "^" + std::to_string(e.exponent);
      break;
  }
}

Jet expand(const Expr& e, std::size_t n, int degree) {
  switch (e.kind) {
    case Expr::Kind::real: return Jet::constant(n, degree, {e.number, 0.0});
    case Expr::Kind::imaginary: return Jet::constant(n, degree, {0.0, e.number});
    case Expr::Kind::variable: return Jet::variable(n, degree, static_cast<std::size_t>(e.index - 1));
    case Expr::Kind::unity: return Jet::constant(n, degree, unity_root(e.p, e.q));
    case Expr::Kind::add: return expand(e.children[0], n, degree) + expand(e.children[1], n, degree);
    case Expr::Kind::sub: return expand(e.children[0], n, degree) - expand(e.children[1], n, degree);
    case Expr::Kind::mul: return expand(e.children[0], n, degree) * expand(e.children[1], n, degree);
    case Expr::Kind::neg: return -expand(e.children[0], n, degree);
    case Expr::Kind::pow: return expand(e.children[0], n, degree).pow(e.exponent);
  }
  return Jet(n, degree);
}

}  // namespace

MapSpecAst parse(std::string_view text) {
  Parser parser(Lexer(text).run());
  MapSpecAst ast = parser.run();
  for (std::size_t j = 0; j < ast.components.size(); ++j) {
    const Complex c = constant_value(ast.components[j]);
    if (std::abs(c) > kDropTolerance) {
      const auto& site = parser.sites()[j];
      char buf[96];
      std::snprintf(buf, sizeof buf, "component f%zu has constant term %.6g%+.6gi; a germ must fix the origin", j + 1,
                    c.real(), c.imag());
      throw DslError(ErrorCode::nonzero_constant, site.line, site.column, buf);
    }
  }
  return ast;
}

std::string print(const Expr& expr) {
  std::string out;
  print_into(expr, out);
  return out;
}

std::string print(const MapSpecAst& ast) {
  std::string out;
  if (ast.degree) out += "@degree " + std::to_string(*ast.degree) + "\n";
  if (ast.radius) out += "@radius " + format_number(*ast.radius) + "\n";
  for (std::size_t j = 0; j < ast.components.size(); ++j) {
    out += "f" + std::to_string(j + 1) + " = " + print(ast.components[j]) + "\n";
  }
  return out;
}

int syntactic_degree(const Expr& e) {
  constexpr long long cap = 1 << 20;
  switch (e.kind) {
    case Expr::Kind::real:
    case Expr::Kind::imaginary:
    case Expr::Kind::unity: return 0;
    case Expr::Kind::variable: return 1;
    case Expr::Kind::add:
    case Expr::Kind::sub: return std::max(syntactic_degree(e.children[0]), syntactic_degree(e.children[1]));
    case Expr::Kind::mul:
      return static_cast<int>(std::min<long long>(cap, 0LL + syntactic_degree(e.children[0]) + syntactic_degree(e.children[1])));
    case Expr::Kind::neg: return syntactic_degree(e.children[0]);
    case Expr::Kind::pow:
      return static_cast<int>(std::min<long long>(cap, 1LL * e.exponent * syntactic_degree(e.children[0])));
  }
  return 0;
}

MapGerm lower(const MapSpecAst& ast) {
  int degree = 1;
  if (ast.degree) {
    degree = *ast.degree;
  } else {
    for (const auto& c : ast.components) degree = std::max(degree, syntactic_degree(c));
    if (degree > kMaxExponent) {
      throw Error(ErrorCode::syntax, "polynomial degree " + std::to_string(degree) + " exceeds 255; set @degree");
    }
  }
  std::vector<Jet> components;
  for (const auto& c : ast.components) components.push_back(expand(c, ast.dimension, degree));
  return MapGerm(std::move(components));
}

}  // namespace germ::cli
