#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace storygame {

/// Exact rational number used for chance probabilities.
class Rational {
 public:
  using Impl = boost::multiprecision::cpp_rational;

  Rational() = default;
  Rational(long long numerator, long long denominator = 1);
  explicit Rational(Impl value) : value_(std::move(value)) {}

  /// Parses "3/10", "0.3", "-2", "1e-3" or "+.5". Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  /// Nearest rational with a power-of-ten denominator (at most 10^digits).
  static Rational from_double(double value, int digits = 12);

  double to_double() const;

  /// True when the reduced denominator is a power of two, i.e. the value has a
  /// finite decimal expansion that round-trips exactly through `to_string`.
  bool is_dyadic() const;

  /// Exact decimal text for dyadic values, "p/q" otherwise.
  std::string to_string() const;

  const Impl& impl() const { return value_; }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Impl(a.value_ + b.value_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Impl(a.value_ - b.value_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Impl(a.value_ * b.value_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }

 private:
  Impl value_{0};
};

}  // namespace storygame
