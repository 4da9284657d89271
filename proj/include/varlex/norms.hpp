#ifndef VARLEX_NORMS_HPP
#define VARLEX_NORMS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "varlex/space.hpp"

namespace varlex {

/// One real value per cell of an associated (truncated) SpaceSpec.
struct SimpleFunction {
  std::vector<double> values;

  SimpleFunction() = default;
  explicit SimpleFunction(std::vector<double> v) : values(std::move(v)) {}
  std::size_t size() const { return values.size(); }
};

struct NormResult {
  double value = 0.0;
  double residual = 0.0;  // |rho(f/value) - 1| when value > 0
  int iterations = 0;
};

struct AssocOptions {
  bool force_ascent = false;  // skip the KKT fast path (used by tests)
  std::uint64_t seed = 1;
  int max_iterations = 2000;
};

/// Modular rho_{p(.)}(f): sum over finite-exponent cells of w*|f|^p plus the
/// sup over infinite-exponent cells of |f|.
double modular(const SpaceSpec& space, const SimpleFunction& f);

/// Luxemburg norm inf{lambda>0 : rho(f/lambda) <= 1} by exponential
/// bracketing and bisection; relative tolerance 1e-13 on lambda.
NormResult luxemburg_norm(const SpaceSpec& space, const SimpleFunction& f);

/// Associate norm: max of sum(w*|f|*g) over g >= 0 with
/// modular(conjugate_space, g) <= 1. KKT closed form when every conjugate
/// exponent is finite and > 1, projected ascent otherwise. Requires p_+ < inf.
NormResult associate_norm_detailed(const SpaceSpec& space, const SimpleFunction& f,
                                   const AssocOptions& opts = {});
double associate_norm(const SpaceSpec& space, const SimpleFunction& f);

/// Pointwise l^r aggregation of a finite family followed by the Luxemburg
/// norm; r = inf takes the pointwise max.
NormResult vector_norm_detailed(const SpaceSpec& space,
                                const std::vector<SimpleFunction>& family,
                                const Exponent& r);
double vector_norm(const SpaceSpec& space, const std::vector<SimpleFunction>& family,
                   const Exponent& r);

/// (lhs, rhs) of the variable-exponent Hoelder inequality
/// sum w|fg| <= 2 ||f||_{p(.)} ||g||_{p'(.)}.
std::pair<double, double> holder_check(const SpaceSpec& space, const SimpleFunction& f,
                                       const SimpleFunction& g);

}  // namespace varlex

#endif
