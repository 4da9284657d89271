#ifndef VARLEX_INTERVAL_HPP
#define VARLEX_INTERVAL_HPP

#include "varlex/exponent.hpp"

namespace varlex {

/// An interval of exponents with independently open/closed endpoints.
struct IntervalIpq {
  Exponent lo;
  Exponent hi;
  bool lo_closed = true;
  bool hi_closed = true;

  bool is_empty() const {
    if (lo > hi) return true;
    if (lo == hi) return !(lo_closed && hi_closed);
    return false;
  }

  bool contains(const Exponent& r) const {
    if (is_empty()) return false;
    if (r == lo) return lo_closed && (r <= hi);
    if (r == hi) return hi_closed;
    return lo < r && r < hi;
  }

  /// Open-interior version: both endpoints stripped.
  IntervalIpq interior() const { return {lo, hi, false, false}; }

  friend bool operator==(const IntervalIpq& a, const IntervalIpq& b) {
    return a.lo == b.lo && a.hi == b.hi && a.lo_closed == b.lo_closed &&
           a.hi_closed == b.hi_closed;
  }
};

/// The extension interval I(p,q):
///   (q,2]              if p < q < 2,
///   [2,p)              if 2 < p < q,
///   [min{2,q}, max{2,p}]  otherwise.
inline IntervalIpq interval_ipq(const Exponent& p, const Exponent& q) {
  const Exponent two(2.0);
  if (p < q && q < two) return {q, two, false, true};
  if (two < p && p < q) return {two, p, true, false};
  return {min(two, q), max(two, p), true, true};
}

}  // namespace varlex

#endif
