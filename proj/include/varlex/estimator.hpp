#ifndef VARLEX_ESTIMATOR_HPP
#define VARLEX_ESTIMATOR_HPP

#include <cstdint>
#include <vector>

#include "varlex/norms.hpp"
#include "varlex/space.hpp"

namespace varlex {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  static Matrix identity(std::size_t r, std::size_t c);
};

/// A linear operator between truncated spaces, acting on coordinates:
/// (Tf)_i = sum_j t_ij f_j.
struct OperatorMatrix {
  Matrix entries;
  SpaceSpec source;  // n cells = columns
  SpaceSpec target;  // m cells = rows
  void validate() const;
};

SimpleFunction apply(const OperatorMatrix& T, const SimpleFunction& f);

/// Norm quotient ||Tf||_target / ||f||_source (0 when f has norm 0).
double op_norm_ratio(const OperatorMatrix& T, const std::vector<double>& f);

/// Central finite-difference gradient of op_norm_ratio at f with step h.
std::vector<double> op_norm_fd_gradient(const OperatorMatrix& T,
                                        const std::vector<double>& f, double h);

/// Lower estimate of the operator norm: gradient ascent on the norm
/// quotient with restarts; monotone within each run, max over runs.
/// When `trace` is given it receives one value sequence per restart.
double op_norm_lower(const OperatorMatrix& T, int restarts, int iters,
                     std::uint64_t seed,
                     std::vector<std::vector<double>>* trace = nullptr);

/// Certified upper bound via the row-wise variable-exponent Hoelder
/// inequality (constant 2): always >= the true operator norm.
double op_norm_upper_certified(const OperatorMatrix& T);

/// vector_norm(target, TF, r) / (op_norm_upper_certified(T) *
/// vector_norm(source, F, r)): a rigorous lower bound on k up to solver
/// tolerance. Invariant under positive rescaling of T.
double mz_certified_ratio(const OperatorMatrix& T,
                          const std::vector<SimpleFunction>& F, const Exponent& r);

struct MzWitness {
  OperatorMatrix op;
  std::vector<SimpleFunction> functions;
  Exponent r;
  double certified_lower_bound = 0.0;
  double optimistic_ratio = 0.0;
};

/// Best certified ratio over witness families: (a) i.i.d. Gaussian matrices,
/// (b) matrices with i.i.d. symmetric stable entries, (c) identity and random
/// diagonals, (d) local alternating ascent on (T, F) from the best start.
/// `budget` counts the random draws shared between (a) and (b); the ascent
/// runs 2 sweeps per 100 budget units. Deterministic given seed.
MzWitness estimate_k_lower(const SpaceSpec& source, const SpaceSpec& target,
                           const Exponent& r, std::size_t N, std::size_t budget,
                           std::uint64_t seed);

struct BlowupRow {
  std::size_t n = 0;
  double certified = 0.0;
  double optimistic = 0.0;
  double predicted = 0.0;
};

/// Atomic blow-up experiment: source = first n atoms of the shifted tail
/// q(k) = q0 + lambda_k, target = n unit atoms with exponent p0, r = q0;
/// predicted column is n^{1/q0 - 1/(q0+lambda_n)}.
std::vector<BlowupRow> blowup_experiment(double q0, double p0, double scale,
                                         const std::vector<std::size_t>& n_list,
                                         std::size_t budget, std::uint64_t seed);

}  // namespace varlex

#endif
