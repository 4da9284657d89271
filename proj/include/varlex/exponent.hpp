#ifndef VARLEX_EXPONENT_HPP
#define VARLEX_EXPONENT_HPP

#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include "varlex/errors.hpp"

namespace varlex {

/// An exponent value in [1, inf]. Infinity is a distinct state, never a
/// float that arithmetic can corrupt; every operation pattern-matches on it.
class Exponent {
 public:
  Exponent() : value_(1.0), inf_(false) {}

  explicit Exponent(double v) : value_(v), inf_(false) {
    if (std::isnan(v)) throw validation_error("exponent is NaN");
    if (std::isinf(v)) {
      if (v < 0) throw validation_error("exponent is -inf");
      inf_ = true;
      value_ = 0.0;
      return;
    }
    if (v < 1.0) throw validation_error("exponent " + std::to_string(v) + " < 1");
  }

  static Exponent infinity() {
    Exponent e;
    e.inf_ = true;
    e.value_ = 0.0;
    return e;
  }

  bool is_infinite() const { return inf_; }
  bool is_one() const { return !inf_ && value_ == 1.0; }

  /// Finite value; calling this on the infinite exponent is a logic error.
  double value() const {
    if (inf_) throw validation_error("value() called on infinite exponent");
    return value_;
  }

  /// Lossless embedding into double (IEEE +inf for the infinite state);
  /// used only for comparisons and printing.
  double as_double() const {
    return inf_ ? std::numeric_limits<double>::infinity() : value_;
  }

  std::string str() const { return inf_ ? "inf" : std::to_string(value_); }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.value_ == b.value_);
  }
  friend std::partial_ordering operator<=>(const Exponent& a, const Exponent& b) {
    return a.as_double() <=> b.as_double();
  }

 private:
  double value_;
  bool inf_;
};

/// Conjugate exponent: 1/p + 1/p' = 1, with 1 <-> inf.
inline Exponent conjugate(const Exponent& e) {
  if (e.is_infinite()) return Exponent(1.0);
  if (e.is_one()) return Exponent::infinity();
  const double p = e.value();
  return Exponent(p / (p - 1.0));
}

inline Exponent min(const Exponent& a, const Exponent& b) { return a <= b ? a : b; }
inline Exponent max(const Exponent& a, const Exponent& b) { return a <= b ? b : a; }

}  // namespace varlex

#endif
