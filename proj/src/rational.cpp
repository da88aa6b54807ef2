#include "endcharge/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "endcharge/errors.hpp"

namespace endcharge {
namespace {

bool is_integer_literal(std::string_view text) {
  if (text.empty()) {
    return false;
  }
  std::size_t start = (text.front() == '-' || text.front() == '+') ? 1 : 0;
  if (start == text.size()) {
    return false;
  }
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      return false;
    }
  }
  return true;
}

mpz_class parse_integer(std::string_view text) {
  std::string digits(text.front() == '+' ? text.substr(1) : text);
  return mpz_class(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  if (!is_integer_literal(num)) {
    throw Error(ErrorCode::kParse, "not a rational: \"" + std::string(text) + "\"");
  }
  Rational out;
  if (slash == std::string_view::npos) {
    out = Rational(parse_integer(num));
  } else {
    const std::string_view den = text.substr(slash + 1);
    if (!is_integer_literal(den) || den.front() == '-' || den.front() == '+') {
      throw Error(ErrorCode::kParse, "bad denominator in \"" + std::string(text) + "\"");
    }
    const mpz_class q = parse_integer(den);
    if (q == 0) {
      throw Error(ErrorCode::kParse, "zero denominator in \"" + std::string(text) + "\"");
    }
    out = Rational(parse_integer(num), q);
  }
  out.canonicalize();
  return out;
}

std::string format_rational(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q.get_den() == 1) {
    return q.get_num().get_str();
  }
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational abs_value(const Rational& value) { return value < 0 ? Rational(-value) : value; }

ExtendedMass::ExtendedMass(const Rational& value) : value_(value) {
  if (value < 0) {
    throw std::invalid_argument("ExtendedMass must be nonnegative, got " + format_rational(value));
  }
}

ExtendedMass ExtendedMass::infinity() {
  ExtendedMass m;
  m.infinite_ = true;
  return m;
}

ExtendedMass ExtendedMass::parse(std::string_view text) {
  if (text == "inf") {
    return infinity();
  }
  Rational q = parse_rational(text);
  if (q < 0) {
    throw Error(ErrorCode::kParse, "negative mass \"" + std::string(text) + "\"");
  }
  return ExtendedMass(q);
}

const Rational& ExtendedMass::value() const {
  if (infinite_) {
    throw std::logic_error("value() of an infinite mass");
  }
  return value_;
}

ExtendedMass& ExtendedMass::operator+=(const ExtendedMass& other) {
  if (infinite_ || other.infinite_) {
    infinite_ = true;
    value_ = 0;
  } else {
    value_ += other.value_;
  }
  return *this;
}

bool operator==(const ExtendedMass& lhs, const ExtendedMass& rhs) {
  if (lhs.infinite_ || rhs.infinite_) {
    return lhs.infinite_ == rhs.infinite_;
  }
  return lhs.value_ == rhs.value_;
}

bool operator<(const ExtendedMass& lhs, const ExtendedMass& rhs) {
  if (lhs.infinite_) {
    return false;
  }
  if (rhs.infinite_) {
    return true;
  }
  return lhs.value_ < rhs.value_;
}

std::string ExtendedMass::to_string() const { return infinite_ ? "inf" : format_rational(value_); }

}  // namespace endcharge
