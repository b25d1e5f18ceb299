#include "fractop/rational.hpp"

#include <cctype>
#include <cstdio>

#include "fractop/error.hpp"

namespace fractop {

namespace {

bool valid_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den.front() == '-' || den.front() == '+') {
    fail(ErrorCode::InvalidInput, "malformed rational '" + std::string(text) + "'");
  }
  if (num.front() == '+') num.remove_prefix(1);
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) fail(ErrorCode::InvalidInput, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

std::string to_decimal(const Rational& r, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, r.get_d());
  return buf;
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Rational rational_pow(const Rational& base, unsigned exp) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exp);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exp);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

mpz_class floor(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

}  // namespace fractop
