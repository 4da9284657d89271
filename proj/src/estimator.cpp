#include "varlex/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varlex/errors.hpp"
#include "varlex/rng.hpp"

namespace varlex {

Matrix Matrix::identity(std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < std::min(r, c); ++i) m.at(i, i) = 1.0;
  return m;
}

void OperatorMatrix::validate() const {
  source.validate();
  target.validate();
  if (source.has_tail() || target.has_tail())
    throw validation_error("operator spaces must be truncated");
  if (entries.rows != target.cell_count() || entries.cols != source.cell_count())
    throw validation_error("operator is " + std::to_string(entries.rows) + "x" +
                           std::to_string(entries.cols) + " but spaces have " +
                           std::to_string(target.cell_count()) + "/" +
                           std::to_string(source.cell_count()) + " cells");
  for (double v : entries.data)
    if (!std::isfinite(v)) throw validation_error("operator entry not finite");
}

SimpleFunction apply(const OperatorMatrix& T, const SimpleFunction& f) {
  if (f.size() != T.entries.cols)
    throw validation_error("apply: function length mismatch");
  SimpleFunction out(std::vector<double>(T.entries.rows, 0.0));
  for (std::size_t i = 0; i < T.entries.rows; ++i) {
    double acc = 0.0;
    const double* row = &T.entries.data[i * T.entries.cols];
    for (std::size_t j = 0; j < T.entries.cols; ++j) acc += row[j] * f.values[j];
    out.values[i] = acc;
  }
  return out;
}

double op_norm_ratio(const OperatorMatrix& T, const std::vector<double>& f) {
  const SimpleFunction fx(f);
  const double den = luxemburg_norm(T.source, fx).value;
  if (den <= 0.0) return 0.0;
  const double num = luxemburg_norm(T.target, apply(T, fx)).value;
  return num / den;
}

std::vector<double> op_norm_fd_gradient(const OperatorMatrix& T,
                                        const std::vector<double>& f, double h) {
  std::vector<double> g(f.size(), 0.0);
  std::vector<double> probe = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double fi = f[i];
    probe[i] = fi + h;
    const double up = op_norm_ratio(T, probe);
    probe[i] = fi - h;
    const double dn = op_norm_ratio(T, probe);
    probe[i] = fi;
    g[i] = (up - dn) / (2.0 * h);
  }
  return g;
}

namespace {

bool is_zero_matrix(const Matrix& m) {
  for (double v : m.data)
    if (v != 0.0) return false;
  return true;
}

void normalize_source(const OperatorMatrix& T, std::vector<double>& f) {
  const double n = luxemburg_norm(T.source, SimpleFunction(f)).value;
  if (n > 0.0)
    for (double& x : f) x /= n;
}

}  // namespace

double op_norm_lower(const OperatorMatrix& T, int restarts, int iters,
                     std::uint64_t seed,
                     std::vector<std::vector<double>>* trace) {
  T.validate();
  if (is_zero_matrix(T.entries)) return 0.0;
  if (restarts < 1) throw validation_error("op_norm_lower: restarts must be >= 1");

  const std::size_t n = T.entries.cols;
  double best = 0.0;
  for (int rs = 0; rs < restarts; ++rs) {
    std::vector<double> f(n, 1.0);
    if (rs > 0) {
      SplitMix64 rng(SplitMix64::derive(seed, static_cast<std::uint64_t>(rs)));
      for (double& x : f) x = rng.next_gaussian();
    }
    normalize_source(T, f);
    double val = op_norm_ratio(T, f);
    if (trace) trace->push_back({val});
    double eta = 0.25;
    for (int it = 0; it < iters && eta > 1e-13; ++it) {
      const std::vector<double> grad = op_norm_fd_gradient(T, f, 1e-6);
      double gmax = 0.0;
      for (double g : grad) gmax = std::max(gmax, std::fabs(g));
      if (gmax == 0.0) break;
      bool accepted = false;
      while (eta > 1e-13) {
        std::vector<double> cand(n);
        for (std::size_t i = 0; i < n; ++i) cand[i] = f[i] + eta * grad[i] / gmax;
        normalize_source(T, cand);
        const double cval = op_norm_ratio(T, cand);
        if (cval > val) {
          f.swap(cand);
          val = cval;
          eta = std::min(eta * 1.3, 2.0);
          accepted = true;
          break;
        }
        eta *= 0.5;
      }
      if (trace) trace->back().push_back(val);
      if (!accepted) break;
    }
    best = std::max(best, val);
  }
  return best;
}

double op_norm_upper_certified(const OperatorMatrix& T) {
  T.validate();
  const SpaceSpec conj_source = conjugate_space(T.source);
  SimpleFunction h(std::vector<double>(T.entries.rows, 0.0));
  std::vector<double> row(T.entries.cols, 0.0);
  for (std::size_t i = 0; i < T.entries.rows; ++i) {
    for (std::size_t j = 0; j < T.entries.cols; ++j)
      row[j] = T.entries.at(i, j) / T.source.cells[j].weight;
    h.values[i] = luxemburg_norm(conj_source, SimpleFunction(row)).value;
  }
  return 2.0 * luxemburg_norm(T.target, h).value;
}

double mz_certified_ratio(const OperatorMatrix& T,
                          const std::vector<SimpleFunction>& F, const Exponent& r) {
  T.validate();
  std::vector<SimpleFunction> TF;
  TF.reserve(F.size());
  for (const SimpleFunction& f : F) TF.push_back(apply(T, f));
  const double num = vector_norm(T.target, TF, r);
  const double den =
      op_norm_upper_certified(T) * vector_norm(T.source, F, r);
  if (den <= 0.0) throw validation_error("mz_certified_ratio: zero denominator");
  return num / den;
}

namespace {

// Stable index for the witness mechanism: r itself when r <= 2, the
// conjugate exponent (the dual mechanism) when r > 2 or r = inf.
double witness_alpha(const Exponent& r) {
  if (!r.is_infinite() && r.value() <= 2.0) return r.value();
  const Exponent c = conjugate(r);
  return c.is_infinite() ? 1.0 : c.value();
}

double stable_draw_local(double alpha, SplitMix64& rng) {
  constexpr double pi = 3.14159265358979323846264338327950288;
  const double v = pi * (rng.next_open01() - 0.5);
  const double w = -std::log(rng.next_open01());
  if (alpha == 1.0) return std::tan(v);
  const double c = std::cos(v);
  return std::sin(alpha * v) / std::pow(c, 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

// op_norm_upper_certified(T) depends on T only; callers cache it across the
// F candidates tried against one operator.
double certified_with_upper(const OperatorMatrix& T, double upper,
                            const std::vector<SimpleFunction>& F,
                            const Exponent& r) {
  if (upper <= 0.0) return 0.0;
  const double den = vector_norm(T.source, F, r);
  if (den <= 0.0) return 0.0;
  std::vector<SimpleFunction> TF;
  TF.reserve(F.size());
  for (const SimpleFunction& f : F) TF.push_back(apply(T, f));
  const double num = vector_norm(T.target, TF, r);
  return num / (upper * den);
}

std::vector<SimpleFunction> basis_family(std::size_t N, std::size_t n) {
  std::vector<SimpleFunction> F;
  F.reserve(N);
  for (std::size_t k = 0; k < N; ++k) {
    SimpleFunction f(std::vector<double>(n, 0.0));
    f.values[k % n] = 1.0;
    F.push_back(std::move(f));
  }
  return F;
}

std::vector<SimpleFunction> random_family(std::size_t N, std::size_t n, bool stable,
                                          double alpha, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<SimpleFunction> F;
  F.reserve(N);
  for (std::size_t k = 0; k < N; ++k) {
    SimpleFunction f(std::vector<double>(n, 0.0));
    for (double& x : f.values)
      x = stable ? stable_draw_local(alpha, rng) : rng.next_gaussian();
    F.push_back(std::move(f));
  }
  return F;
}

Matrix random_matrix(std::size_t m, std::size_t n, bool stable, double alpha,
                     std::uint64_t seed) {
  SplitMix64 rng(seed);
  Matrix M(m, n);
  for (double& v : M.data)
    v = stable ? stable_draw_local(alpha, rng) : rng.next_gaussian();
  return M;
}

}  // namespace

MzWitness estimate_k_lower(const SpaceSpec& source, const SpaceSpec& target,
                           const Exponent& r, std::size_t N, std::size_t budget,
                           std::uint64_t seed) {
  source.validate();
  target.validate();
  if (source.has_tail() || target.has_tail())
    throw validation_error("estimate_k_lower: spaces must be truncated");
  if (budget == 0) throw validation_error("estimate_k_lower: budget must be >= 1");
  if (N == 0) throw validation_error("estimate_k_lower: N must be >= 1");

  const std::size_t n = source.cell_count();
  const std::size_t m = target.cell_count();
  const double alpha = witness_alpha(r);

  // Candidate operators, deterministic order: identity, seeded diagonals,
  // Gaussian draws, stable draws. The two stochastic families share the
  // budget evenly.
  std::vector<Matrix> candidates;
  candidates.push_back(Matrix::identity(m, n));
  {
    SplitMix64 rng(SplitMix64::derive(seed, 0xd1a6ULL));
    const std::size_t diag_draws = std::min<std::size_t>(budget, 8) - 1;
    for (std::size_t d = 0; d < diag_draws; ++d) {
      Matrix M(m, n);
      for (std::size_t i = 0; i < std::min(m, n); ++i)
        M.at(i, i) = std::exp(rng.next_gaussian());
      candidates.push_back(std::move(M));
    }
  }
  const std::size_t gauss_draws = (budget + 1) / 2;
  const std::size_t stable_draws = budget / 2;
  for (std::size_t d = 0; d < gauss_draws; ++d)
    candidates.push_back(
        random_matrix(m, n, false, alpha, SplitMix64::derive(seed, 0xa000ULL + d)));
  for (std::size_t d = 0; d < stable_draws; ++d)
    candidates.push_back(
        random_matrix(m, n, true, alpha, SplitMix64::derive(seed, 0xb000ULL + d)));

  // F candidates per operator: basis, Gaussian, stable.
  const std::vector<SimpleFunction> f_basis = basis_family(N, n);
  const std::vector<SimpleFunction> f_gauss =
      random_family(N, n, false, alpha, SplitMix64::derive(seed, 0xf001ULL));
  const std::vector<SimpleFunction> f_stable =
      random_family(N, n, true, alpha, SplitMix64::derive(seed, 0xf002ULL));
  const std::vector<const std::vector<SimpleFunction>*> f_candidates = {
      &f_basis, &f_gauss, &f_stable};

  MzWitness best;
  best.r = r;
  best.certified_lower_bound = -1.0;

  for (const Matrix& M : candidates) {
    OperatorMatrix T{M, source, target};
    if (is_zero_matrix(M)) continue;
    const double upper = op_norm_upper_certified(T);
    for (const auto* F : f_candidates) {
      const double val = certified_with_upper(T, upper, *F, r);
      if (val > best.certified_lower_bound) {
        best.certified_lower_bound = val;
        best.op = T;
        best.functions = *F;
      }
    }
  }

  // Local alternating ascent from the best start: random-direction trial
  // steps with backtracking halving, F block then T block, 2 sweeps per 100
  // budget units.
  const std::size_t sweeps = 2 * std::max<std::size_t>(1, budget / 100);
  SplitMix64 rng(SplitMix64::derive(seed, 0xa5ce17ULL));
  double upper_best = op_norm_upper_certified(best.op);
  double eta_f = 0.5, eta_t = 0.5;
  constexpr int kTrialsPerBlock = 10;
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (int trial = 0; trial < kTrialsPerBlock; ++trial) {
      std::vector<SimpleFunction> cand = best.functions;
      double scale = 0.0;
      for (const SimpleFunction& f : cand)
        for (double v : f.values) scale = std::max(scale, std::fabs(v));
      if (scale == 0.0) scale = 1.0;
      for (SimpleFunction& f : cand)
        for (double& v : f.values) v += eta_f * scale * rng.next_gaussian();
      const double val = certified_with_upper(best.op, upper_best, cand, r);
      if (val > best.certified_lower_bound) {
        best.certified_lower_bound = val;
        best.functions = std::move(cand);
        eta_f = std::min(eta_f * 1.3, 2.0);
      } else {
        eta_f = std::max(eta_f * 0.5, 1e-6);
      }
    }
    for (int trial = 0; trial < kTrialsPerBlock; ++trial) {
      OperatorMatrix cand = best.op;
      double scale = 0.0;
      for (double v : cand.entries.data) scale = std::max(scale, std::fabs(v));
      if (scale == 0.0) scale = 1.0;
      for (double& v : cand.entries.data) v += eta_t * scale * rng.next_gaussian();
      const double upper = op_norm_upper_certified(cand);
      const double val = certified_with_upper(cand, upper, best.functions, r);
      if (val > best.certified_lower_bound) {
        best.certified_lower_bound = val;
        best.op = std::move(cand);
        upper_best = upper;
        eta_t = std::min(eta_t * 1.3, 2.0);
      } else {
        eta_t = std::max(eta_t * 0.5, 1e-6);
      }
    }
  }

  const double lower =
      op_norm_lower(best.op, 2, 40, SplitMix64::derive(seed, 0x10e3ULL));
  const double den_f = vector_norm(best.op.source, best.functions, r);
  if (lower > 0.0 && den_f > 0.0) {
    std::vector<SimpleFunction> TF;
    for (const SimpleFunction& f : best.functions) TF.push_back(apply(best.op, f));
    best.optimistic_ratio = vector_norm(best.op.target, TF, r) / (lower * den_f);
  } else {
    best.optimistic_ratio = best.certified_lower_bound;
  }
  return best;
}

std::vector<BlowupRow> blowup_experiment(double q0, double p0, double scale,
                                         const std::vector<std::size_t>& n_list,
                                         std::size_t budget, std::uint64_t seed) {
  if (!(1.0 < q0 && q0 < p0 && p0 < 2.0))
    throw validation_error("blowup_experiment requires 1 < q0 < p0 < 2");
  if (n_list.empty()) throw validation_error("blowup_experiment: empty n list");

  SpaceSpec base;
  base.tail = TailSpec(q0, scale);

  std::vector<BlowupRow> rows;
  rows.reserve(n_list.size());
  for (const std::size_t n : n_list) {
    if (n == 0) throw validation_error("blowup_experiment: n must be >= 1");
    const SpaceSpec source = truncate(base, n);
    SpaceSpec target;
    target.cells.assign(n, Cell{1.0, Exponent(p0), CellKind::atom});
    const MzWitness w = estimate_k_lower(source, target, Exponent(q0), n, budget,
                                         SplitMix64::derive(seed, n));
    BlowupRow row;
    row.n = n;
    row.certified = w.certified_lower_bound;
    row.optimistic = w.optimistic_ratio;
    row.predicted =
        std::pow(static_cast<double>(n),
                 1.0 / q0 - 1.0 / (q0 + TailSpec::lambda(n, scale)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace varlex
