#include "spdo/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "spdo/harmonics.hpp"
#include "spdo/sphere.hpp"

namespace spdo {

bool SpectralSymbol::in_kernel(int l) const {
  return std::binary_search(kernel_set.begin(), kernel_set.end(), l);
}

int SpectralSymbol::kernel_dim(int n) const {
  int m = 0;
  for (int l : kernel_set) m += static_cast<int>(harmonic_dim(n, l));
  return m;
}

SpectralSymbol weakly_singular_symbol() {
  return {"weakly-singular", -1.0, [](int l) { return 1.0 / (2.0 * l + 1.0); }, {}};
}

SpectralSymbol double_layer_symbol() {
  return {"double-layer", -1.0, [](int l) { return -1.0 / (4.0 * l + 2.0); }, {}};
}

SpectralSymbol laplace_beltrami_symbol(int n) {
  if (n < 2) throw std::invalid_argument("laplace_beltrami_symbol: need n >= 2");
  return {"laplace-beltrami", 2.0,
          [n](int l) { return static_cast<double>(l) * (l + n - 2.0); },
          {0}};
}

SpectralSymbol hypersingular_symbol() {
  return {"hypersingular", 1.0,
          [](int l) { return static_cast<double>(l) * (l + 1.0) / (2.0 * l + 1.0); },
          {0}};
}

SpectralSymbol identity_symbol() {
  return {"identity", 0.0, [](int) { return 1.0; }, {}};
}

SpectralSymbol custom_symbol(std::string name, double order,
                             std::function<double(int)> value, int scan_l_max) {
  if (scan_l_max < 16) throw std::invalid_argument("custom_symbol: scan window too small");
  std::vector<int> zeros;
  for (int l = 0; l <= scan_l_max; ++l) {
    const double v = value(l);
    if (!std::isfinite(v)) {
      throw std::invalid_argument("custom_symbol '" + name + "': value(" +
                                  std::to_string(l) + ") is not finite");
    }
    if (v == 0.0 || std::abs(v) < 1e-14) zeros.push_back(l);
  }
  // Finite-scan heuristic: zeros confined to the lower half of the window
  // are treated as the (finite) kernel; zeros in the upper half suggest an
  // infinite kernel and the symbol is rejected.
  for (int z : zeros) {
    if (z > scan_l_max / 2) {
      throw std::invalid_argument("custom_symbol '" + name + "': zero at l=" +
                                  std::to_string(z) +
                                  " in the upper scan window; kernel may be infinite");
    }
  }
  return {std::move(name), order, std::move(value), std::move(zeros)};
}

// ---------------------------------------------------------------------------
// expression grammar:  expr := term (('+'|'-') term)*
//                      term := factor (('*'|'/') factor)*
//                      factor := '-' factor | primary ['^' int]
//                      primary := number | 'l' | '(' expr ')'
namespace {

struct Expr {
  virtual ~Expr() = default;
  virtual double eval(double l) const = 0;
};
using ExprPtr = std::shared_ptr<const Expr>;

struct Const : Expr {
  double v;
  explicit Const(double v) : v(v) {}
  double eval(double) const override { return v; }
};
struct Var : Expr {
  double eval(double l) const override { return l; }
};
struct Bin : Expr {
  char op;
  ExprPtr a, b;
  Bin(char op, ExprPtr a, ExprPtr b) : op(op), a(std::move(a)), b(std::move(b)) {}
  double eval(double l) const override {
    const double x = a->eval(l), y = b->eval(l);
    switch (op) {
      case '+': return x + y;
      case '-': return x - y;
      case '*': return x * y;
      default: return x / y;  // '/'
    }
  }
};
struct Pow : Expr {
  ExprPtr a;
  int k;
  Pow(ExprPtr a, int k) : a(std::move(a)), k(k) {}
  double eval(double l) const override {
    const double x = a->eval(l);
    return std::pow(x, k);
  }
};
struct Neg : Expr {
  ExprPtr a;
  explicit Neg(ExprPtr a) : a(std::move(a)) {}
  double eval(double l) const override { return -a->eval(l); }
};

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) {
      throw std::invalid_argument("symbol expression: trailing input at '" +
                                  s_.substr(pos_) + "'");
    }
    return e;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+')) e = std::make_shared<Bin>('+', e, term());
      else if (eat('-')) e = std::make_shared<Bin>('-', e, term());
      else return e;
    }
  }
  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*')) e = std::make_shared<Bin>('*', e, factor());
      else if (eat('/')) e = std::make_shared<Bin>('/', e, factor());
      else return e;
    }
  }
  ExprPtr factor() {
    if (eat('-')) return std::make_shared<Neg>(factor());
    ExprPtr e = primary();
    if (eat('^')) {
      skip_ws();
      bool neg = eat('-');
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start) throw std::invalid_argument("symbol expression: '^' needs an integer");
      int k = std::stoi(s_.substr(start, pos_ - start));
      e = std::make_shared<Pow>(e, neg ? -k : k);
    }
    return e;
  }
  ExprPtr primary() {
    skip_ws();
    if (eat('(')) {
      ExprPtr e = expr();
      if (!eat(')')) throw std::invalid_argument("symbol expression: missing ')'");
      return e;
    }
    const char c = peek();
    if (c == 'l' || c == 'L') {
      ++pos_;
      return std::make_shared<Var>();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
              s_[pos_] == 'e' || s_[pos_] == 'E' ||
              ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > start &&
               (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')))) {
        ++pos_;
      }
      return std::make_shared<Const>(std::stod(s_.substr(start, pos_ - start)));
    }
    throw std::invalid_argument("symbol expression: unexpected character '" +
                                std::string(1, c) + "'");
  }
};

std::string canonical(std::string s) {
  std::replace(s.begin(), s.end(), '_', '-');
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::function<double(int)> parse_symbol_expression(const std::string& expr) {
  ExprPtr ast = Parser(expr).parse();
  return [ast](int l) { return ast->eval(static_cast<double>(l)); };
}

SpectralSymbol parse_symbol(const std::string& text, int n) {
  const std::string name = canonical(text);
  if (name == "weakly-singular") return weakly_singular_symbol();
  if (name == "double-layer") return double_layer_symbol();
  if (name == "laplace-beltrami") return laplace_beltrami_symbol(n);
  if (name == "hypersingular") return hypersingular_symbol();
  if (name == "identity") return identity_symbol();
  if (name.rfind("custom:", 0) == 0) {
    const std::string rest = text.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("parse_symbol: expected custom:ORDER:EXPR");
    }
    const double order = std::stod(rest.substr(0, colon));
    const std::string expr = rest.substr(colon + 1);
    return custom_symbol("custom[" + expr + "]", order, parse_symbol_expression(expr));
  }
  throw std::invalid_argument("parse_symbol: unknown operator '" + text + "'");
}

EllipticityScan ellipticity_scan(const SpectralSymbol& symbol, int l_max) {
  if (l_max < 1) throw std::invalid_argument("ellipticity_scan: need l_max >= 1");
  EllipticityScan scan;
  scan.c1 = std::numeric_limits<double>::infinity();
  scan.c2 = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int l = 0; l <= l_max; ++l) {
    if (symbol.in_kernel(l)) continue;
    const double scaled = symbol.value(l) * std::pow(1.0 + l, -symbol.order);
    scan.c1 = std::min(scan.c1, scaled);
    scan.c2 = std::max(scan.c2, scaled);
    any = true;
  }
  if (!any) throw std::invalid_argument("ellipticity_scan: kernel covers the whole range");
  scan.strongly_elliptic = scan.c1 > 0.0;
  return scan;
}

SpectralFunction apply(const SpectralSymbol& symbol, const SpectralFunction& v) {
  if (v.l_max() < 0) return v;
  if (v.is_zonal()) {
    std::vector<double> a(static_cast<std::size_t>(v.l_max()) + 1);
    for (int l = 0; l <= v.l_max(); ++l) {
      a[static_cast<std::size_t>(l)] =
          symbol.in_kernel(l) ? 0.0 : symbol.value(l) * v.zonal_coeff(l);
    }
    return SpectralFunction::zonal(v.n(), v.axis(), std::move(a));
  }
  std::vector<double> flat = v.flat();
  for (int l = 0; l <= v.l_max(); ++l) {
    const double f = symbol.in_kernel(l) ? 0.0 : symbol.value(l);
    for (int m = -l; m <= l; ++m) {
      flat[static_cast<std::size_t>(harmonic_index(l, m))] *= f;
    }
  }
  return SpectralFunction::general3(std::move(flat));
}

double bilinear_a(const SpectralSymbol& symbol, const SpectralFunction& w,
                  const SpectralFunction& v) {
  const int lmax = std::min(w.l_max(), v.l_max());
  double acc = 0.0;
  for (int l = 0; l <= lmax; ++l) {
    if (symbol.in_kernel(l)) continue;
    acc += symbol.value(l) * cross_l(w, v, l);
  }
  return acc;
}

}  // namespace spdo
