#include "tepui/univariate.hpp"

#include <algorithm>
#include <set>

#include "tepui/errors.hpp"

namespace tepui {

UPoly to_upoly(const Polynomial& p) {
  if (p.nvars() > 1) throw DimensionError("univariate operation applied to a polynomial in " +
                                          std::to_string(p.nvars()) + " variables");
  UPoly out;
  for (const auto& [m, c] : p.terms()) {
    std::size_t d = m.empty() ? 0 : static_cast<std::size_t>(m[0]);
    if (out.size() <= d) out.resize(d + 1);
    out[d] = c;
  }
  trim(out);
  return out;
}

Polynomial from_upoly(const UPoly& p, const RingPtr& ring) {
  if (ring->size() > 1) throw DimensionError("univariate polynomial placed in a multivariate ring");
  Polynomial::TermMap t;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    if (ring->size() == 0 && i > 0) throw DimensionError("nonconstant polynomial in a ring without variables");
    t.emplace(ring->size() ? Monomial{static_cast<int>(i)} : Monomial{}, p[i]);
  }
  return Polynomial(ring, std::move(t));
}

void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int degree(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

UPoly operator+(const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

UPoly operator*(const Rational& c, const UPoly& a) {
  if (c == 0) return {};
  UPoly r = a;
  for (auto& x : r) x *= c;
  return r;
}

UPoly derivative(const UPoly& p) {
  if (p.size() <= 1) return {};
  UPoly r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * static_cast<long>(i);
  trim(r);
  return r;
}

Rational eval(const UPoly& p, const Rational& x) {
  Rational v = 0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.empty()) throw DomainError("division by the zero polynomial");
  UPoly r = a;
  if (r.size() < b.size()) return {{}, r};
  UPoly q(r.size() - b.size() + 1);
  Rational lead = b.back();
  for (std::size_t k = q.size(); k-- > 0;) {
    Rational c = r[k + b.size() - 1] / lead;
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] -= c * b[j];
  }
  trim(q);
  trim(r);
  return {q, r};
}

UPoly monic(const UPoly& p) {
  if (p.empty()) return p;
  return Rational(1 / p.back()) * p;
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.empty()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

UPoly square_free_part(const UPoly& p) {
  if (p.empty()) return p;
  UPoly g = gcd(p, derivative(p));
  return monic(divmod(p, g).first);
}

namespace {

/// Primitive integer polynomial proportional to p.
std::vector<Integer> integer_primitive(const UPoly& p) {
  Integer l = 1;
  for (const auto& c : p) l = lcm(l, Integer(c.get_den()));
  std::vector<Integer> z;
  z.reserve(p.size());
  for (const auto& c : p) z.push_back(Integer(c * l));
  Integer g = 0;
  for (const auto& c : z) g = gcd(g, c);
  if (g != 0)
    for (auto& c : z) c /= g;
  if (!z.empty() && z.back() < 0)
    for (auto& c : z) c = -c;
  return z;
}

/// Positive divisors of |n|, or an empty list when n is too large to factor by trial division.
std::vector<Integer> divisors(Integer n) {
  n = abs(n);
  std::vector<std::pair<Integer, int>> primes;
  Integer m = n;
  for (Integer d = 2; d * d <= m; ++d) {
    if (d > 1000000) return {};
    int e = 0;
    while (m % d == 0) {
      m /= d;
      ++e;
    }
    if (e) primes.emplace_back(d, e);
  }
  if (m > 1) primes.emplace_back(m, 1);
  std::vector<Integer> out{1};
  for (const auto& [pr, e] : primes) {
    std::size_t base = out.size();
    Integer pw = 1;
    for (int k = 1; k <= e; ++k) {
      pw *= pr;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pw);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int sign(const Rational& q) { return sgn(q); }

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq{p, derivative(p)};
  while (!seq.back().empty()) {
    UPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.empty()) break;
    seq.push_back(Rational(-1) * r);
  }
  if (seq.back().empty()) seq.pop_back();
  return seq;
}

int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int variations_at(const std::vector<UPoly>& seq, const Rational& x) {
  std::vector<int> s;
  for (const auto& q : seq) s.push_back(sign(eval(q, x)));
  return variations(s);
}

int variations_at_infinity(const std::vector<UPoly>& seq, bool positive) {
  std::vector<int> s;
  for (const auto& q : seq) {
    int sg = sign(q.back());
    if (!positive && degree(q) % 2) sg = -sg;
    s.push_back(sg);
  }
  return variations(s);
}

/// Strict bound on the absolute value of every root.
Rational root_bound(const UPoly& p) {
  Rational m = 0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) m = std::max(m, Rational(abs(p[i] / p.back())));
  return m + 1;
}

}  // namespace

std::vector<Rational> rational_roots(const UPoly& p) {
  std::set<Rational> roots;
  if (degree(p) < 1) return {};
  auto z = integer_primitive(p);
  std::size_t low = 0;
  while (z[low] == 0) ++low;
  if (low > 0) roots.insert(Rational(0));
  std::vector<Integer> w(z.begin() + static_cast<long>(low), z.end());
  if (w.size() > 1) {
    auto num = divisors(w.front());
    auto den = divisors(w.back());
    UPoly q;
    for (const auto& c : w) q.emplace_back(c);
    for (const auto& a : num)
      for (const auto& b : den)
        for (int s : {1, -1}) {
          Rational r(a * s, b);
          r.canonicalize();
          if (eval(q, r) == 0) roots.insert(r);
        }
  }
  return {roots.begin(), roots.end()};
}

std::size_t count_real_roots(const UPoly& p) {
  if (degree(p) < 1) return 0;
  auto seq = sturm_sequence(square_free_part(p));
  return static_cast<std::size_t>(variations_at_infinity(seq, false) - variations_at_infinity(seq, true));
}

std::size_t count_roots_in(const UPoly& p, const Rational& a, const Rational& b) {
  if (degree(p) < 1 || !(a < b)) return 0;
  auto seq = sturm_sequence(square_free_part(p));
  return static_cast<std::size_t>(variations_at(seq, a) - variations_at(seq, b));
}

std::vector<RootInterval> isolate_real_roots(const UPoly& p, const Rational& width) {
  std::vector<RootInterval> out;
  if (degree(p) < 1) return out;
  UPoly s = square_free_part(p);
  for (const auto& r : rational_roots(s)) {
    out.push_back({r, r});
    s = divmod(s, UPoly{-r, 1}).first;
  }
  if (degree(s) >= 1) {
    // No rational roots remain, so rational bisection points are never roots.
    auto seq = sturm_sequence(s);
    Rational b = root_bound(s);
    struct Job {
      Rational lo, hi;
      int vlo, vhi;
    };
    std::vector<Job> stack{{-b, b, variations_at(seq, -b), variations_at(seq, b)}};
    while (!stack.empty()) {
      Job j = stack.back();
      stack.pop_back();
      int n = j.vlo - j.vhi;
      if (n == 0) continue;
      if (n == 1 && j.hi - j.lo <= width) {
        out.push_back({j.lo, j.hi});
        continue;
      }
      Rational mid = (j.lo + j.hi) / 2;
      int vm = variations_at(seq, mid);
      stack.push_back({mid, j.hi, vm, j.vhi});
      stack.push_back({j.lo, mid, j.vlo, vm});
    }
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.lo < b.lo; });
  return out;
}

namespace {

constexpr std::size_t kKroneckerCap = 200000;

UPoly lagrange(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  UPoly out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    UPoly basis{Rational(1)};
    Rational denom = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      basis = basis * UPoly{-xs[j], 1};
      denom *= xs[i] - xs[j];
    }
    out = out + Rational(ys[i] / denom) * basis;
  }
  return out;
}

/// Finds a nontrivial factor of the square-free, rational-root-free polynomial f
/// of degree >= 4; empty when none is found (irreducible or search capped).
UPoly kronecker_split(const UPoly& f) {
  auto z = integer_primitive(f);
  UPoly fz;
  for (const auto& c : z) fz.emplace_back(c);
  const int n = degree(fz);
  for (int d = 2; d <= n / 2; ++d) {
    std::vector<Rational> xs;
    std::vector<std::vector<Integer>> choices;
    std::size_t combos = 1;
    for (long t = 0; static_cast<int>(xs.size()) < d + 1; ++t) {
      long x = (t % 2 ? -1 : 1) * ((t + 1) / 2);
      Rational v = eval(fz, Rational(x));
      if (v == 0) continue;
      auto divs = divisors(Integer(v));
      if (divs.empty()) return {};
      xs.emplace_back(x);
      choices.push_back(divs);
      combos *= 2 * divs.size();
      if (combos > kKroneckerCap) return {};
    }
    std::vector<std::size_t> idx(d + 1, 0);
    std::vector<int> sg(d + 1, 1);
    for (;;) {
      std::vector<Rational> ys;
      for (int i = 0; i <= d; ++i) ys.emplace_back(choices[i][idx[i]] * sg[i]);
      UPoly g = lagrange(xs, ys);
      if (degree(g) == d) {
        auto [q, r] = divmod(fz, g);
        if (r.empty()) return monic(g);
      }
      // Advance the mixed-radix counter; the first sign stays positive.
      int i = 0;
      for (; i <= d; ++i) {
        if (i > 0 && sg[i] == 1) {
          sg[i] = -1;
          break;
        }
        sg[i] = 1;
        if (++idx[i] < choices[i].size()) break;
        idx[i] = 0;
      }
      if (i > d) break;
    }
  }
  return {};
}

void factor_rec(const UPoly& f, std::vector<UPoly>& out) {
  if (degree(f) < 1) return;
  if (degree(f) <= 3) {
    out.push_back(monic(f));
    return;
  }
  UPoly g = kronecker_split(f);
  if (g.empty()) {
    out.push_back(monic(f));
    return;
  }
  factor_rec(g, out);
  factor_rec(divmod(f, g).first, out);
}

}  // namespace

std::vector<UPoly> irreducible_factors(const UPoly& p) {
  std::vector<UPoly> out;
  if (degree(p) < 1) return out;
  UPoly s = square_free_part(p);
  for (const auto& r : rational_roots(s)) {
    out.push_back({-r, 1});
    s = divmod(s, UPoly{-r, 1}).first;
  }
  factor_rec(s, out);
  return out;
}

UPoly real_radical_part(const UPoly& p) {
  UPoly rho{Rational(1)};
  for (const auto& f : irreducible_factors(p))
    if (count_real_roots(f) > 0) rho = rho * f;
  return rho;
}

}  // namespace tepui
