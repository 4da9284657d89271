#include "varlex/norms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varlex/errors.hpp"
#include "varlex/rng.hpp"

namespace varlex {

namespace {

void require_truncated(const SpaceSpec& space, const char* op) {
  if (space.has_tail())
    throw validation_error(std::string(op) + ": space has a tail; truncate it first");
}

void require_match(const SpaceSpec& space, const SimpleFunction& f, const char* op) {
  space.validate();
  if (f.size() != space.cell_count())
    throw validation_error(std::string(op) + ": function length " +
                           std::to_string(f.size()) + " != cell count " +
                           std::to_string(space.cell_count()));
  for (double v : f.values)
    if (!std::isfinite(v))
      throw validation_error(std::string(op) + ": function value not finite");
}

// rho(f/lambda) evaluated without forming the quotient function.
double modular_scaled(const SpaceSpec& space, const std::vector<double>& absf,
                      double lambda) {
  double sum = 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < absf.size(); ++i) {
    const double x = absf[i] / lambda;
    const Cell& c = space.cells[i];
    if (c.exponent.is_infinite())
      sup = std::max(sup, x);
    else
      sum += c.weight * std::pow(x, c.exponent.value());
  }
  return sum + sup;
}

std::vector<double> abs_values(const SimpleFunction& f) {
  std::vector<double> a(f.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::fabs(f.values[i]);
  return a;
}

bool all_zero(const std::vector<double>& a) {
  for (double v : a)
    if (v != 0.0) return false;
  return true;
}

}  // namespace

double modular(const SpaceSpec& space, const SimpleFunction& f) {
  require_truncated(space, "modular");
  require_match(space, f, "modular");
  const std::vector<double> a = abs_values(f);
  return modular_scaled(space, a, 1.0);
}

NormResult luxemburg_norm(const SpaceSpec& space, const SimpleFunction& f) {
  require_truncated(space, "luxemburg_norm");
  require_match(space, f, "luxemburg_norm");
  const std::vector<double> a = abs_values(f);
  if (all_zero(a)) return {0.0, 0.0, 0};

  int iterations = 0;
  auto rho = [&](double lambda) {
    ++iterations;
    return modular_scaled(space, a, lambda);
  };

  // rho(f/lambda) is strictly decreasing where positive, so an exponential
  // bracket always exists.
  double lambda = *std::max_element(a.begin(), a.end());
  double lo, hi;
  if (rho(lambda) > 1.0) {
    lo = lambda;
    hi = lambda;
    do {
      hi *= 2.0;
    } while (rho(hi) > 1.0 && iterations < 4000);
  } else {
    hi = lambda;
    lo = lambda;
    do {
      lo *= 0.5;
    } while (rho(lo) <= 1.0 && lo > 1e-300 && iterations < 4000);
  }

  while ((hi - lo) > 1e-13 * hi && iterations < 4000) {
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double value = hi;
  const double residual = std::fabs(modular_scaled(space, a, value) - 1.0);
  return {value, residual, iterations};
}

namespace {

struct AssocProblem {
  const SpaceSpec* space = nullptr;     // primal space
  std::vector<double> a;                // |f|
  std::vector<double> w;                // weights
  std::vector<double> pc;               // conjugate exponents; inf as +inf double
  SpaceSpec conj;                       // conjugate space (for projections)
};

// Budget sum(w*g^pc) + max-term, the conjugate modular.
double assoc_budget(const AssocProblem& pr, const std::vector<double>& g) {
  double sum = 0.0, sup = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::isinf(pr.pc[i]))
      sup = std::max(sup, g[i]);
    else
      sum += pr.w[i] * std::pow(g[i], pr.pc[i]);
  }
  return sum + sup;
}

double assoc_value(const AssocProblem& pr, const std::vector<double>& g) {
  double v = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) v += pr.w[i] * pr.a[i] * g[i];
  return v;
}

// Scales g so the conjugate modular equals 1 (valid by monotonicity of
// scaling). Uses the Luxemburg solver on the conjugate space.
void assoc_project(const AssocProblem& pr, std::vector<double>& g) {
  NormResult t = luxemburg_norm(pr.conj, SimpleFunction(g));
  if (t.value <= 0.0) return;
  for (double& x : g) x /= t.value;
}

NormResult assoc_kkt(const AssocProblem& pr) {
  // Stationarity: a_i = mu * pc_i * g_i^{pc_i - 1} on cells with a_i > 0.
  // The budget is strictly decreasing in mu; bisect on it.
  int iterations = 0;
  auto g_of_mu = [&](double mu, std::vector<double>& g) {
    for (std::size_t i = 0; i < pr.a.size(); ++i) {
      if (pr.a[i] == 0.0) {
        g[i] = 0.0;
        continue;
      }
      const double e = 1.0 / (pr.pc[i] - 1.0);
      g[i] = std::exp(e * (std::log(pr.a[i]) - std::log(mu * pr.pc[i])));
    }
  };
  std::vector<double> g(pr.a.size(), 0.0);
  auto budget = [&](double mu) {
    ++iterations;
    g_of_mu(mu, g);
    return assoc_budget(pr, g);
  };

  double mu = *std::max_element(pr.a.begin(), pr.a.end());
  double lo, hi;
  if (budget(mu) > 1.0) {
    lo = mu;
    hi = mu;
    do {
      hi *= 2.0;
    } while (budget(hi) > 1.0 && iterations < 6000);
  } else {
    hi = mu;
    lo = mu;
    do {
      lo *= 0.5;
    } while (budget(lo) <= 1.0 && lo > 1e-300 && iterations < 6000);
  }
  while ((hi - lo) > 1e-15 * hi && iterations < 6000) {
    const double mid = 0.5 * (lo + hi);
    if (budget(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  budget(hi);  // leaves g at the feasible endpoint
  const double residual = std::fabs(assoc_budget(pr, g) - 1.0);
  return {assoc_value(pr, g), residual, iterations};
}

// Projected concave ascent. State: one value per finite-conjugate cell with
// f != 0, plus a shared level s for the p=1 block (at an optimum every p=1
// cell carries the same value, since only their max is charged by the
// budget). Steps rebalance the per-coordinate value/cost ratios
// multiplicatively -- exact per-coordinate stationarity at full step -- then
// rescale back to the budget boundary; backtracking halving guards ascent.
// Fixed points satisfy the KKT condition.
NormResult assoc_ascent(const AssocProblem& pr, const AssocOptions& opts,
                        double lux_value) {
  const std::size_t n = pr.a.size();
  std::vector<std::size_t> A;  // finite conjugate exponent, f nonzero
  double c_B = 0.0;            // total objective weight of the p=1 block
  bool has_B = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isinf(pr.pc[i])) {
      has_B = true;
      c_B += pr.w[i] * pr.a[i];
    } else if (pr.a[i] > 0.0) {
      A.push_back(i);
    }
  }
  const bool use_s = has_B && c_B > 0.0;

  struct State {
    std::vector<double> g;  // indexed like A
    double s = 0.0;
  };

  // Budget sum_A w g^pc + s; radial projection divides the state by t with
  // rho(state/t) = 1, found by bracketing and bisection.
  auto project = [&](State& st) {
    auto rho = [&](double t) {
      double acc = st.s / t;
      for (std::size_t k = 0; k < A.size(); ++k) {
        const std::size_t i = A[k];
        acc += pr.w[i] * std::pow(st.g[k] / t, pr.pc[i]);
      }
      return acc;
    };
    double t = st.s;
    for (std::size_t k = 0; k < A.size(); ++k) t = std::max(t, st.g[k]);
    if (t <= 0.0) return false;
    double lo = t, hi = t;
    if (rho(t) > 1.0) {
      while (rho(hi) > 1.0 && hi < 1e300) hi *= 2.0;
    } else {
      while (rho(lo) <= 1.0 && lo > 1e-300) lo *= 0.5;
    }
    for (int it = 0; it < 120 && (hi - lo) > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (rho(mid) > 1.0 ? lo : hi) = mid;
    }
    for (double& x : st.g) x /= hi;
    st.s /= hi;
    return true;
  };
  auto value = [&](const State& st) {
    double v = c_B * st.s;
    for (std::size_t k = 0; k < A.size(); ++k)
      v += pr.w[A[k]] * pr.a[A[k]] * st.g[k];
    return v;
  };

  std::vector<State> starts;
  {
    // Norming start: reaches value >= lux/2, which pins the sandwich bound.
    State st;
    st.g.resize(A.size());
    for (std::size_t k = 0; k < A.size(); ++k) {
      const std::size_t i = A[k];
      const double p = pr.space->cells[i].exponent.value();
      st.g[k] = std::pow(pr.a[i] / lux_value, p - 1.0);
    }
    st.s = use_s ? 1.0 : 0.0;
    starts.push_back(std::move(st));
  }
  starts.push_back({std::vector<double>(A.size(), 1.0), use_s ? 1.0 : 0.0});
  {
    State st;
    st.g.resize(A.size());
    for (std::size_t k = 0; k < A.size(); ++k)
      st.g[k] = pr.w[A[k]] * pr.a[A[k]];
    st.s = use_s ? c_B : 0.0;
    starts.push_back(std::move(st));
  }
  SplitMix64 rng(SplitMix64::derive(opts.seed, 0x5eedULL));
  for (int sidx = 0; sidx < 2; ++sidx) {
    State st;
    st.g.resize(A.size());
    for (double& x : st.g) x = -std::log(rng.next_open01());
    st.s = use_s ? -std::log(rng.next_open01()) : 0.0;
    starts.push_back(std::move(st));
  }

  double best = 0.0;
  State best_state;
  int accepted = 0;
  const int per_start =
      std::max(60, opts.max_iterations / static_cast<int>(starts.size()));

  for (State& st : starts) {
    if (!project(st)) continue;
    double val = value(st);
    if (val > best) {
      best = val;
      best_state = st;
    }
    double theta = 1.0;
    int stall = 0;
    for (int it = 0; it < per_start && stall < 25 && theta > 1e-12; ++it) {
      // Value-per-cost ratios and budget shares.
      double log_mu_num = 0.0, share_sum = 0.0;
      std::vector<double> log_ratio(A.size(), 0.0);
      for (std::size_t k = 0; k < A.size(); ++k) {
        const std::size_t i = A[k];
        const double pc = pr.pc[i];
        const double lr =
            std::log(pr.a[i] / pc) - (pc - 1.0) * std::log(st.g[k]);
        log_ratio[k] = lr;
        const double share = pr.w[i] * std::pow(st.g[k], pc);
        log_mu_num += share * lr;
        share_sum += share;
      }
      const double log_ratio_s = use_s ? std::log(c_B) : 0.0;
      if (use_s && st.s > 0.0) {
        log_mu_num += st.s * log_ratio_s;
        share_sum += st.s;
      }
      if (share_sum <= 0.0) break;
      const double log_mu = log_mu_num / share_sum;

      bool improved = false;
      while (theta > 1e-12) {
        State cand = st;
        for (std::size_t k = 0; k < A.size(); ++k) {
          const double pc = pr.pc[A[k]];
          const double step =
              std::clamp(theta * (log_ratio[k] - log_mu) / (pc - 1.0), -40.0, 40.0);
          cand.g[k] = std::max(st.g[k] * std::exp(step), 1e-300);
        }
        if (use_s && cand.s > 0.0) {
          const double step = std::clamp(theta * (log_ratio_s - log_mu), -40.0, 40.0);
          cand.s = std::max(st.s * std::exp(step), 1e-300);
        }
        if (!project(cand)) break;
        const double cval = value(cand);
        if (cval > val) {
          st = std::move(cand);
          val = cval;
          theta = std::min(theta * 1.3, 1.0);
          improved = true;
          ++accepted;
          break;
        }
        theta *= 0.5;
      }
      stall = improved ? 0 : stall + 1;
      if (val > best) {
        best = val;
        best_state = st;
      }
    }
  }

  // Materialize the full g for the budget residual.
  std::vector<double> gfull(n, 0.0);
  for (std::size_t k = 0; k < A.size(); ++k) gfull[A[k]] = best_state.g[k];
  for (std::size_t i = 0; i < n; ++i)
    if (std::isinf(pr.pc[i]) && pr.a[i] > 0.0) gfull[i] = best_state.s;
  const double residual =
      best > 0.0 ? std::fabs(assoc_budget(pr, gfull) - 1.0) : 0.0;
  return {best, residual, accepted};
}

}  // namespace

NormResult associate_norm_detailed(const SpaceSpec& space, const SimpleFunction& f,
                                   const AssocOptions& opts) {
  require_truncated(space, "associate_norm");
  require_match(space, f, "associate_norm");
  for (const Cell& c : space.cells)
    if (c.exponent.is_infinite())
      throw validation_error(
          "associate_norm: cells with infinite exponent are unsupported (needs p_+ < inf)");

  AssocProblem pr;
  pr.space = &space;
  pr.a = abs_values(f);
  if (all_zero(pr.a)) return {0.0, 0.0, 0};
  pr.w.resize(pr.a.size());
  pr.pc.resize(pr.a.size());
  bool kkt_ok = true;
  for (std::size_t i = 0; i < pr.a.size(); ++i) {
    pr.w[i] = space.cells[i].weight;
    const Exponent c = conjugate(space.cells[i].exponent);
    pr.pc[i] = c.as_double();
    if (c.is_infinite()) kkt_ok = false;  // p = 1 cells go to the ascent path
  }
  pr.conj = conjugate_space(space);

  if (kkt_ok && !opts.force_ascent) return assoc_kkt(pr);
  const NormResult lux = luxemburg_norm(space, f);
  return assoc_ascent(pr, opts, lux.value);
}

double associate_norm(const SpaceSpec& space, const SimpleFunction& f) {
  return associate_norm_detailed(space, f).value;
}

NormResult vector_norm_detailed(const SpaceSpec& space,
                                const std::vector<SimpleFunction>& family,
                                const Exponent& r) {
  require_truncated(space, "vector_norm");
  if (family.empty()) throw validation_error("vector_norm: empty family");
  for (const SimpleFunction& f : family) require_match(space, f, "vector_norm");

  const std::size_t n = space.cell_count();
  SimpleFunction g(std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    double m = 0.0;
    for (const SimpleFunction& f : family) m = std::max(m, std::fabs(f.values[i]));
    if (m == 0.0) continue;
    if (r.is_infinite()) {
      g.values[i] = m;
      continue;
    }
    double s = 0.0;
    for (const SimpleFunction& f : family)
      s += std::pow(std::fabs(f.values[i]) / m, r.value());
    g.values[i] = m * std::pow(s, 1.0 / r.value());
  }
  return luxemburg_norm(space, g);
}

double vector_norm(const SpaceSpec& space, const std::vector<SimpleFunction>& family,
                   const Exponent& r) {
  return vector_norm_detailed(space, family, r).value;
}

std::pair<double, double> holder_check(const SpaceSpec& space, const SimpleFunction& f,
                                       const SimpleFunction& g) {
  require_truncated(space, "holder_check");
  require_match(space, f, "holder_check");
  require_match(space, g, "holder_check");
  double lhs = 0.0;
  for (std::size_t i = 0; i < space.cell_count(); ++i)
    lhs += space.cells[i].weight * std::fabs(f.values[i] * g.values[i]);
  const double nf = luxemburg_norm(space, f).value;
  const double ng = luxemburg_norm(conjugate_space(space), g).value;
  return {lhs, 2.0 * nf * ng};
}

}  // namespace varlex
