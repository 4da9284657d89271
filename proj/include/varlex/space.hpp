#ifndef VARLEX_SPACE_HPP
#define VARLEX_SPACE_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "varlex/exponent.hpp"

namespace varlex {

enum class CellKind { atom, diffuse };

/// One piece of a measure space: an atom of mass `weight`, or a non-atomic
/// block of total mass `weight` on which the exponent is constant.
struct Cell {
  double weight = 1.0;
  Exponent exponent;
  CellKind kind = CellKind::atom;
};

/// Countable atomic tail with counting measure (every tail atom has weight 1).
/// Built-in family "shifted": exponent(n) = base + lambda(n),
/// lambda(n) = scale / sqrt(log(n+2)), chosen so that lambda(n) decreases to 0
/// while n^{lambda(n)} -> infinity. A conjugated tail applies the conjugate
/// exponent map pointwise; conjugating twice restores the original.
class TailSpec {
 public:
  enum class Direction { from_above, from_below, constant };

  TailSpec(double base, double scale, bool conjugated = false);

  Exponent exponent_at(std::size_t n) const;  // n >= 1
  Exponent limit() const;
  Direction direction() const;

  /// Declared bounds [lo, hi]: every generated exponent lies inside.
  std::pair<Exponent, Exponent> bounds() const;

  double base() const { return base_; }
  double scale() const { return scale_; }
  bool conjugated() const { return conjugated_; }

  static double lambda(std::size_t n, double scale);

 private:
  double base_;
  double scale_;
  bool conjugated_;
};

/// A sigma-finite measure space as a finite list of cells plus an optional
/// countable atomic tail.
struct SpaceSpec {
  std::vector<Cell> cells;
  std::optional<TailSpec> tail;

  std::size_t cell_count() const { return cells.size(); }
  bool has_tail() const { return tail.has_value(); }

  /// True when the space is a union of finitely many atoms.
  bool finitely_atomic() const;
  /// True when the space has no atoms at all (only diffuse cells).
  bool non_atomic() const;

  /// Throws validation_error when empty or a cell is malformed.
  void validate() const;
};

/// p_-, p_+ together with the tilde summaries that ignore finitely many atoms.
struct ExponentSummary {
  Exponent ess_inf;
  Exponent ess_sup;
  bool tilde_defined = false;  // false iff the space is finitely atomic
  Exponent tilde_inf;
  Exponent tilde_sup;
};

ExponentSummary summarize(const SpaceSpec& space);

/// Cell-wise conjugation; weights and kinds are preserved, the tail limit is
/// conjugated with its direction flipped.
SpaceSpec conjugate_space(const SpaceSpec& space);

/// Materializes tail atoms 1..n as explicit cells; the result has no tail.
/// Spaces without a tail are returned unchanged.
SpaceSpec truncate(const SpaceSpec& space, std::size_t n);

}  // namespace varlex

#endif
