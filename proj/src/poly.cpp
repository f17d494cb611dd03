#include "eik/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace eik {

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt p{std::string(text.substr(0, slash))};
    BigInt q{std::string(text.substr(slash + 1))};
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p) / Rational(q);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("bad rational '" + std::string(text) + "': " + e.what());
  }
}

std::string format_rational(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
  auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Poly::Poly(int nvars) : nvars_(nvars) {
  if (nvars < 0) throw std::invalid_argument("negative variable count");
}

Poly Poly::constant(int nvars, const Rational& c) {
  Poly p(nvars);
  if (c != 0) p.terms_.emplace(Monomial(nvars, 0), c);
  return p;
}

Poly Poly::variable(int nvars, int index) {
  if (index < 0 || index >= nvars)
    throw std::invalid_argument("variable index out of range");
  Poly p(nvars);
  Monomial m(nvars, 0);
  m[index] = 1;
  p.terms_.emplace(std::move(m), Rational(1));
  return p;
}

int Poly::degree() const {
  if (terms_.empty()) return -1;
  const Monomial& lead = terms_.rbegin()->first;
  return static_cast<int>(std::accumulate(lead.begin(), lead.end(), std::uint64_t{0}));
}

Rational Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != nvars_)
    throw std::invalid_argument("monomial size != variable count");
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else if (c == 0) {
    terms_.erase(it);
  }
}

void Poly::check_compatible(const Poly& o) const {
  if (nvars_ != o.nvars_)
    throw std::invalid_argument("variable count mismatch between polynomials");
}

Poly& Poly::operator+=(const Poly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  check_compatible(o);
  Poly out(nvars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m(nvars_);
      for (int v = 0; v < nvars_; ++v) m[v] = ma[v] + mb[v];
      out.add_term(m, ca * cb);
    }
  terms_ = std::move(out.terms_);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly Poly::operator-() const {
  Poly out(nvars_);
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

Poly Poly::diff(int index) const {
  if (index < 0 || index >= nvars_)
    throw std::invalid_argument("diff: variable index out of range");
  Poly out(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[index] == 0) continue;
    Monomial d = m;
    d[index] -= 1;
    out.add_term(d, c * Rational(m[index]));
  }
  return out;
}

Poly Poly::extended(int new_nvars) const {
  if (new_nvars < nvars_)
    throw std::invalid_argument("extended: cannot shrink variable count");
  Poly out(new_nvars);
  for (const auto& [m, c] : terms_) {
    Monomial e(new_nvars, 0);
    std::copy(m.begin(), m.end(), e.begin());
    out.terms_.emplace(std::move(e), c);
  }
  return out;
}

Poly Poly::pow(unsigned k) const {
  Poly acc = Poly::constant(nvars_, 1);
  Poly base = *this;
  while (k) {
    if (k & 1u) acc *= base;
    base *= base;
    k >>= 1u;
  }
  return acc;
}

Poly subst_univariate(const Poly& f, const Poly& arg) {
  if (f.nvars() != 1) throw std::invalid_argument("subst_univariate: f must be univariate");
  // Horner over coefficients of ascending degree.
  int deg = f.degree();
  Poly acc(arg.nvars());
  for (int d = deg; d >= 0; --d) {
    acc *= arg;
    acc += Poly::constant(arg.nvars(), f.coeff(Monomial{static_cast<std::uint32_t>(d)}));
  }
  return acc;
}

std::string Poly::str(std::span<const std::string> names) const {
  if (static_cast<int>(names.size()) != nvars_)
    throw std::invalid_argument("str: name list size != variable count");
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool has_vars = std::any_of(m.begin(), m.end(), [](auto e) { return e > 0; });
    bool wrote_coeff = false;
    if (!has_vars || a != 1) {
      os << format_rational(a);
      wrote_coeff = true;
    }
    for (int v = 0; v < nvars_; ++v) {
      if (m[v] == 0) continue;
      if (wrote_coeff) os << '*';
      wrote_coeff = true;
      os << names[v];
      if (m[v] > 1) os << '^' << m[v];
    }
  }
  return os.str();
}

namespace {

struct Lexer {
  std::string_view s;
  std::size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string number() {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw std::invalid_argument("expected integer in polynomial text");
    return std::string(s.substr(start, i - start));
  }
  std::string ident() {
    skip_ws();
    std::size_t start = i;
    auto ok_first = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto ok_rest = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (i < s.size() && ok_first(s[i])) {
      ++i;
      while (i < s.size() && ok_rest(s[i])) ++i;
    }
    if (i == start) throw std::invalid_argument("expected identifier in polynomial text");
    return std::string(s.substr(start, i - start));
  }
};

}  // namespace

Poly Poly::parse(std::string_view text, std::span<const std::string> names) {
  const int n = static_cast<int>(names.size());
  auto var_index = [&](const std::string& name) {
    for (int v = 0; v < n; ++v)
      if (names[v] == name) return v;
    throw std::invalid_argument("unknown variable '" + name + "' in polynomial text");
  };

  Lexer lx{text};
  Poly out(n);
  if (lx.eof()) throw std::invalid_argument("empty polynomial text");

  bool first = true;
  while (!lx.eof()) {
    int sign = 1;
    if (lx.consume('+')) {
      sign = 1;
    } else if (lx.consume('-')) {
      sign = -1;
    } else if (!first) {
      throw std::invalid_argument("expected '+' or '-' between terms");
    }
    first = false;

    Rational coeff(sign);
    Monomial mono(n, 0);
    bool more = true;
    while (more) {
      char c = lx.peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        BigInt p{lx.number()};
        if (lx.consume('/')) {
          BigInt q{lx.number()};
          if (q == 0) throw std::invalid_argument("zero denominator in polynomial text");
          coeff *= Rational(p) / Rational(q);
        } else {
          coeff *= Rational(p);
        }
      } else {
        int v = var_index(lx.ident());
        std::uint32_t e = 1;
        if (lx.consume('^')) e = static_cast<std::uint32_t>(std::stoul(lx.number()));
        mono[v] += e;
      }
      more = lx.consume('*');
    }
    out.add_term(mono, coeff);
  }
  return out;
}

std::vector<std::string> xu_names(int n) {
  std::vector<std::string> names;
  for (int mu = 0; mu <= n; ++mu) names.push_back("x" + std::to_string(mu));
  names.push_back("u");
  return names;
}

std::vector<std::string> xu_grad_names(int n) {
  auto names = xu_names(n);
  for (int mu = 0; mu <= n; ++mu) names.push_back("u" + std::to_string(mu));
  return names;
}

std::vector<std::string> tau_names(int k) {
  std::vector<std::string> names;
  for (int b = 1; b <= k; ++b) names.push_back("t" + std::to_string(b));
  return names;
}

}  // namespace eik
