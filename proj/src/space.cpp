#include "varlex/space.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace varlex {

double TailSpec::lambda(std::size_t n, double scale) {
  return scale / std::sqrt(std::log(static_cast<double>(n) + 2.0));
}

TailSpec::TailSpec(double base, double scale, bool conjugated)
    : base_(base), scale_(scale), conjugated_(conjugated) {
  if (!std::isfinite(base) || base < 1.0)
    throw validation_error("tail base must be finite and >= 1");
  if (!std::isfinite(scale) || scale < 0.0)
    throw validation_error("tail scale must be finite and >= 0");
}

Exponent TailSpec::exponent_at(std::size_t n) const {
  if (n == 0) throw validation_error("tail index starts at 1");
  const Exponent raw(base_ + lambda(n, scale_));
  return conjugated_ ? conjugate(raw) : raw;
}

Exponent TailSpec::limit() const {
  const Exponent raw(base_);
  return conjugated_ ? conjugate(raw) : raw;
}

TailSpec::Direction TailSpec::direction() const {
  if (scale_ == 0.0) return Direction::constant;
  return conjugated_ ? Direction::from_below : Direction::from_above;
}

std::pair<Exponent, Exponent> TailSpec::bounds() const {
  const Exponent a = limit();
  const Exponent b = exponent_at(1);
  return {min(a, b), max(a, b)};
}

void SpaceSpec::validate() const {
  if (cells.empty() && !tail) throw validation_error("space is empty");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double w = cells[i].weight;
    if (!std::isfinite(w) || w <= 0.0)
      throw validation_error("cell " + std::to_string(i) +
                             " has non-positive or non-finite weight");
  }
}

bool SpaceSpec::finitely_atomic() const {
  if (tail) return false;
  for (const Cell& c : cells)
    if (c.kind == CellKind::diffuse) return false;
  return true;
}

bool SpaceSpec::non_atomic() const {
  if (tail) return false;
  if (cells.empty()) return false;
  for (const Cell& c : cells)
    if (c.kind == CellKind::atom) return false;
  return true;
}

ExponentSummary summarize(const SpaceSpec& space) {
  space.validate();

  ExponentSummary s;
  bool any = false;
  Exponent lo = Exponent::infinity();
  Exponent hi(1.0);
  auto absorb = [&](const Exponent& e) {
    lo = min(lo, e);
    hi = max(hi, e);
    any = true;
  };
  for (const Cell& c : space.cells) absorb(c.exponent);
  if (space.tail) {
    const auto [tlo, thi] = space.tail->bounds();
    absorb(tlo);
    absorb(thi);
  }
  (void)any;
  s.ess_inf = lo;
  s.ess_sup = hi;

  if (space.finitely_atomic()) {
    s.tilde_defined = false;
    s.tilde_inf = s.ess_inf;
    s.tilde_sup = s.ess_sup;
    return s;
  }

  // Finitely many atoms never influence the tilde summaries: only diffuse
  // cells and the tail limit count.
  Exponent tlo = Exponent::infinity();
  Exponent thi(1.0);
  for (const Cell& c : space.cells) {
    if (c.kind != CellKind::diffuse) continue;
    tlo = min(tlo, c.exponent);
    thi = max(thi, c.exponent);
  }
  if (space.tail) {
    const Exponent l = space.tail->limit();
    tlo = min(tlo, l);
    thi = max(thi, l);
  }
  s.tilde_defined = true;
  s.tilde_inf = tlo;
  s.tilde_sup = thi;
  return s;
}

SpaceSpec conjugate_space(const SpaceSpec& space) {
  SpaceSpec out;
  out.cells.reserve(space.cells.size());
  for (const Cell& c : space.cells)
    out.cells.push_back({c.weight, conjugate(c.exponent), c.kind});
  if (space.tail)
    out.tail = TailSpec(space.tail->base(), space.tail->scale(),
                        !space.tail->conjugated());
  return out;
}

SpaceSpec truncate(const SpaceSpec& space, std::size_t n) {
  if (!space.tail) return space;
  SpaceSpec out;
  out.cells = space.cells;
  out.cells.reserve(space.cells.size() + n);
  for (std::size_t k = 1; k <= n; ++k)
    out.cells.push_back({1.0, space.tail->exponent_at(k), CellKind::atom});
  out.validate();
  return out;
}

}  // namespace varlex
