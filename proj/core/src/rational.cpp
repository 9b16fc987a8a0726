#include "adcal/rational.hpp"

#include <cctype>
#include <ostream>

#include "adcal/errors.hpp"

namespace adcal {
namespace {

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  std::string digits(s);
  if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
  return mpz_class(digits, 10);
}

}  // namespace

static_assert(sizeof(long) == sizeof(long long), "LP64 platform expected");

Rational::Rational(long long value) : value_(static_cast<long>(value)) {}

Rational::Rational(long long numerator, long long denominator) {
  if (denominator == 0) throw InvalidArgument("rational with zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(numerator)),
                     mpz_class(static_cast<long>(denominator)));
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_integer_token(text)) {
      throw ParseError("malformed rational '" + std::string(text) + "'");
    }
    return Rational(mpq_class(parse_integer(text)));
  }
  const auto num = text.substr(0, slash);
  const auto den = text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den) || den[0] == '-' ||
      den[0] == '+') {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  mpz_class d = parse_integer(den);
  if (d == 0) {
    throw ParseError("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(mpq_class(parse_integer(num), d));
}

bool Rational::is_integer() const { return value_.get_den() == 1; }

std::string Rational::str() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_str();
}

std::string Rational::fraction() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::numerator_str() const { return value_.get_num().get_str(); }
std::string Rational::denominator_str() const { return value_.get_den().get_str(); }

Rational Rational::inverse() const {
  if (is_zero()) throw InvalidArgument("inverse of zero");
  return Rational(mpq_class(1) / value_);
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(value_))); }

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InvalidArgument("division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace adcal
