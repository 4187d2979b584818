#include "storygame/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace storygame {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(long exponent) {
  cpp_int result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Decimal with optional sign, fraction and exponent.
Rational::Impl parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) throw std::invalid_argument("bad exponent in number");
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  std::size_t dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("empty number");
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<long>(frac_part.size());
  // cpp_int reads a leading zero as an octal prefix
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  cpp_int mantissa(digits);
  if (negative) mantissa = -mantissa;
  if (exponent >= 0) return Rational::Impl(mantissa * pow10(exponent));
  return Rational::Impl(mantissa, pow10(-exponent));
}

}  // namespace

Rational::Rational(long long numerator, long long denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  value_ = Impl(cpp_int(numerator), cpp_int(denominator));
}

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Impl num = parse_decimal(text.substr(0, slash));
    Impl den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(Impl(num / den));
  }
  return Rational(parse_decimal(text));
}

Rational Rational::from_double(double value, int digits) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << value;
  Rational r = parse(out.str());
  return r;
}

double Rational::to_double() const { return static_cast<double>(value_); }

bool Rational::is_dyadic() const {
  cpp_int den = boost::multiprecision::denominator(value_);
  return (den & (den - 1)) == 0;
}

std::string Rational::to_string() const {
  cpp_int num = boost::multiprecision::numerator(value_);
  cpp_int den = boost::multiprecision::denominator(value_);
  if (den == 1) return num.str();
  if (!is_dyadic()) return num.str() + "/" + den.str();
  // den = 2^k: value = num * 5^k / 10^k.
  std::size_t k = 0;
  for (cpp_int d = den; d > 1; d >>= 1) ++k;
  cpp_int scaled = num;
  for (std::size_t i = 0; i < k; ++i) scaled *= 5;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  if (digits.size() <= k) digits.insert(0, k - digits.size() + 1, '0');
  digits.insert(digits.size() - k, ".");
  return (negative ? "-" : "") + digits;
}

}  // namespace storygame
