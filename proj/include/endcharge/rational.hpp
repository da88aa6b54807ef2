#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace endcharge {

// Exact arithmetic everywhere; there is no floating point in the pipeline.
using Rational = mpq_class;

// Accepts "p/q" with q > 0, or a bare integer "p". Throws Error(kParse).
Rational parse_rational(std::string_view text);

// "p" for integers, "p/q" in lowest terms otherwise.
std::string format_rational(const Rational& value);

Rational abs_value(const Rational& value);

/// A nonnegative rational or +inf. Infinity absorbs under addition, which is
/// how tails of infinite mass swallow finite transfers.
class ExtendedMass {
 public:
  ExtendedMass() = default;
  // Throws std::invalid_argument for negative values.
  ExtendedMass(const Rational& value);  // NOLINT(google-explicit-constructor)

  static ExtendedMass infinity();
  // "inf" or a nonnegative rational.
  static ExtendedMass parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  // Throws std::logic_error when infinite.
  const Rational& value() const;

  ExtendedMass& operator+=(const ExtendedMass& other);
  friend ExtendedMass operator+(ExtendedMass lhs, const ExtendedMass& rhs) { return lhs += rhs; }

  friend bool operator==(const ExtendedMass& lhs, const ExtendedMass& rhs);
  // Strict order with +inf as the top element.
  friend bool operator<(const ExtendedMass& lhs, const ExtendedMass& rhs);

  std::string to_string() const;

 private:
  bool infinite_ = false;
  Rational value_ = 0;
};

}  // namespace endcharge
