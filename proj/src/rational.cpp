#include "tepui/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "tepui/errors.hpp"

namespace tepui {

namespace {

Integer pow10(long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty number");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }

  bool negative = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = s[pos] == '-';
    ++pos;
  }
  std::string mantissa;
  long exponent = 0;
  auto epos = s.find_first_of("eE", pos);
  std::string body = s.substr(pos, epos == std::string::npos ? std::string::npos : epos - pos);
  if (epos != std::string::npos) {
    std::string ex = s.substr(epos + 1);
    std::string_view digits = ex;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) digits.remove_prefix(1);
    if (!all_digits(digits)) throw ParseError("bad exponent in '" + s + "'");
    exponent = std::stol(ex);
  }
  auto dot = body.find('.');
  std::string int_part = body.substr(0, dot);
  std::string frac_part = dot == std::string::npos ? "" : body.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw ParseError("bad number '" + s + "'");
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
    throw ParseError("bad number '" + s + "'");
  mantissa = int_part + frac_part;
  exponent -= static_cast<long>(frac_part.size());

  Rational q{Integer(mantissa, 10)};
  if (exponent > 0) q *= pow10(exponent);
  if (exponent < 0) q /= pow10(-exponent);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

RealPoint to_real(const RationalPoint& p) {
  RealPoint r;
  r.reserve(p.size());
  for (const auto& q : p) r.push_back(q.get_d());
  return r;
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw DomainError("non-finite value cannot be made rational");
  Rational q(v);
  q.canonicalize();
  return q;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace tepui
