#include "tepui/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tepui/errors.hpp"

namespace tepui {

// ---------------------------------------------------------------- Ring

Ring::Ring(std::vector<std::string> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const auto& v = vars_[i];
    if (v.empty() || !(std::isalpha(static_cast<unsigned char>(v[0])) || v[0] == '_'))
      throw ParseError("invalid variable name '" + v + "'");
    for (char c : v)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw ParseError("invalid variable name '" + v + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (vars_[j] == v) throw ParseError("duplicate variable '" + v + "'");
  }
}

std::optional<std::size_t> Ring::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return i;
  return std::nullopt;
}

RingPtr make_ring(std::vector<std::string> vars) {
  return std::make_shared<const Ring>(std::move(vars));
}

RingPtr extend_ring(const RingPtr& base, const std::vector<std::string>& extra) {
  auto vars = base->vars();
  vars.insert(vars.end(), extra.begin(), extra.end());
  return make_ring(std::move(vars));
}

std::string fresh_variable(const Ring& ring, const std::string& stem) {
  std::string name = stem;
  for (int i = 0; ring.index_of(name); ++i) name = stem + std::to_string(i);
  return name;
}

RingPtr common_ring(const RingPtr& a, const RingPtr& b) {
  if (a == b || *a == *b) return a;
  if (a->size() == 0) return b;
  if (b->size() == 0) return a;
  throw DimensionError("polynomials live in different rings");
}

namespace {

const RingPtr& empty_ring() {
  static const RingPtr ring = make_ring({});
  return ring;
}

Monomial add_exps(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

int degree_of(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

}  // namespace

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial() : ring_(empty_ring()) {}

Polynomial::Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

Polynomial::Polynomial(RingPtr ring, TermMap terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.size() != ring_->size()) throw DimensionError("exponent tuple length does not match ring");
    if (it->second == 0)
      it = terms_.erase(it);
    else
      ++it;
  }
}

Polynomial Polynomial::constant(RingPtr ring, const Rational& c) {
  Polynomial p(std::move(ring));
  if (c != 0) p.terms_.emplace(Monomial(p.nvars(), 0), c);
  return p;
}

Polynomial Polynomial::variable(RingPtr ring, std::size_t index) {
  if (index >= ring->size()) throw DimensionError("variable index out of range");
  Monomial m(ring->size(), 0);
  m[index] = 1;
  return monomial(std::move(ring), std::move(m));
}

Polynomial Polynomial::variable(RingPtr ring, std::string_view name) {
  auto idx = ring->index_of(name);
  if (!idx) throw DimensionError("unknown variable '" + std::string(name) + "'");
  return variable(std::move(ring), *idx);
}

Polynomial Polynomial::monomial(RingPtr ring, Monomial exps, const Rational& c) {
  if (exps.size() != ring->size()) throw DimensionError("exponent tuple length does not match ring");
  Polynomial p(std::move(ring));
  if (c != 0) p.terms_.emplace(std::move(exps), c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && degree_of(terms_.begin()->first) == 0);
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial(nvars(), 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, degree_of(m));
  return d;
}

int Polynomial::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.at(var));
  return d;
}

void Polynomial::adopt_ring(const RingPtr& other) {
  RingPtr target = common_ring(ring_, other);
  if (target->size() != ring_->size()) *this = in_ring(target);
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  adopt_ring(other.ring_);
  const Polynomial& o = other.nvars() == nvars() ? other : other.in_ring(ring_);
  for (const auto& [m, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) { return *this += -other; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  RingPtr ring = common_ring(a.ring_, b.ring_);
  const Polynomial& x = a.nvars() == ring->size() ? a : a.in_ring(ring);
  const Polynomial& y = b.nvars() == ring->size() ? b : b.in_ring(ring);
  Polynomial r(ring);
  for (const auto& [ma, ca] : x.terms_)
    for (const auto& [mb, cb] : y.terms_) {
      Rational prod = ca * cb;
      auto [it, inserted] = r.terms_.try_emplace(add_exps(ma, mb), prod);
      if (!inserted) it->second += prod;
    }
  std::erase_if(r.terms_, [](const auto& t) { return t.second == 0; });
  return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) { return *this = *this * other; }

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result = constant(ring_, 1);
  Polynomial base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (nvars() == other.nvars()) return (nvars() == 0 || *ring_ == *other.ring_) && terms_ == other.terms_;
  RingPtr ring = common_ring(ring_, other.ring_);
  return in_ring(ring).terms_ == other.in_ring(ring).terms_;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars())
    throw DimensionError("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                         std::to_string(nvars()) + " variables");
  Rational total = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int k = 0; k < m[i]; ++k) t *= point[i];
    total += t;
  }
  return total;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (point.size() != nvars())
    throw DimensionError("point has " + std::to_string(point.size()) + " coordinates, polynomial has " +
                         std::to_string(nvars()) + " variables");
  double total = 0;
  for (const auto& [m, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int k = 0; k < m[i]; ++k) t *= point[i];
    total += t;
  }
  return total;
}

Polynomial Polynomial::differentiate(std::size_t var) const {
  if (var >= nvars()) throw DimensionError("variable index out of range");
  Polynomial r(ring_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.terms_.emplace(std::move(d), c * m[var]);
  }
  return r;
}

Polynomial Polynomial::differentiate(std::string_view var) const {
  auto idx = ring_->index_of(var);
  if (!idx) throw DimensionError("unknown variable '" + std::string(var) + "'");
  return differentiate(*idx);
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& images, const RingPtr& target) const {
  if (images.size() != nvars()) throw DimensionError("substitution needs one image per variable");
  std::vector<Polynomial> imgs;
  imgs.reserve(images.size());
  for (const auto& img : images) imgs.push_back(img.in_ring(target));
  // Cache powers per variable.
  std::vector<std::vector<Polynomial>> powers(nvars());
  auto power = [&](std::size_t i, int e) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(constant(target, 1));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * imgs[i]);
    return cache[static_cast<std::size_t>(e)];
  };
  Polynomial r(target);
  for (const auto& [m, c] : terms_) {
    Polynomial t = constant(target, c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) t *= power(i, m[i]);
    r += t;
  }
  return r;
}

Polynomial Polynomial::in_ring(const RingPtr& target) const {
  if (ring_ == target || *ring_ == *target) return Polynomial(target, terms_);
  std::vector<std::size_t> map(nvars());
  std::vector<bool> used(nvars(), false);
  for (const auto& [m, c] : terms_)
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) used[i] = true;
  for (std::size_t i = 0; i < nvars(); ++i) {
    auto idx = target->index_of(ring_->vars()[i]);
    if (!idx) {
      if (used[i]) throw DimensionError("variable '" + ring_->vars()[i] + "' missing from target ring");
      map[i] = SIZE_MAX;
    } else {
      map[i] = *idx;
    }
  }
  TermMap out;
  for (const auto& [m, c] : terms_) {
    Monomial e(target->size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i]) e[map[i]] = m[i];
    out.emplace(std::move(e), c);
  }
  return Polynomial(target, std::move(out));
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<const Monomial*, const Rational*>> order;
  for (const auto& [m, c] : terms_) order.emplace_back(&m, &c);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    int da = degree_of(*a.first), db = degree_of(*b.first);
    if (da != db) return da > db;
    return *a.first > *b.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [mp, cp] : order) {
    const Monomial& m = *mp;
    Rational c = *cp;
    bool negative = c < 0;
    if (negative) c = -c;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    bool is_const = degree_of(m) == 0;
    bool wrote = false;
    if (c != 1 || is_const) {
      os << c.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      if (wrote) os << '*';
      os << ring_->vars()[i];
      if (m[i] > 1) os << '^' << m[i];
      wrote = true;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, RingPtr ring) : text_(text), ring_(std::move(ring)) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial acc = term();
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        Polynomial d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
        acc *= Rational(1 / d.constant_term());
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (e > 10000) fail("exponent too large");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t save = pos_;
        ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      return Polynomial::constant(ring_, parse_rational(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto idx = ring_->index_of(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Polynomial::variable(ring_, *idx);
    }
    fail("unexpected character");
  }

  std::string_view text_;
  RingPtr ring_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, const RingPtr& ring) { return Parser(text, ring).parse(); }

}  // namespace tepui
