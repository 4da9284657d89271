#include "varlex/stable.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varlex/errors.hpp"
#include "varlex/parallel.hpp"
#include "varlex/rng.hpp"

namespace varlex {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Kahan-compensated accumulator; shards are summed independently and the
// shard partials combined in index order, so totals do not depend on how
// shards are scheduled.
struct KahanSum {
  double sum = 0.0;
  double c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

constexpr std::size_t kShardSize = 1 << 16;

double stable_draw(double r, SplitMix64& rng) {
  // Chambers-Mallows-Stuck, symmetric case, cf exp(-|t|^r):
  //   X = sin(rV) / cos(V)^{1/r} * (cos((1-r)V)/W)^{(1-r)/r},
  // V uniform on (-pi/2, pi/2), W standard exponential.
  const double v = kPi * (rng.next_open01() - 0.5);
  const double w = -std::log(rng.next_open01());
  if (r == 1.0) return std::tan(v);
  const double c = std::cos(v);
  return std::sin(r * v) / std::pow(c, 1.0 / r) *
         std::pow(std::cos((1.0 - r) * v) / w, (1.0 - r) / r);
}

void require_stable_index(double r) {
  if (!(r > 0.0) || r > 2.0)
    throw domain_error("stable index r must lie in (0,2], got " + std::to_string(r));
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw domain_error("log_gamma requires x > 0");
  if (x < 0.5) {
    // Reflection keeps the series argument away from 0.
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

double moment_c(const Exponent& r, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw domain_error("moment_c requires p > 0");
  if (r.is_infinite() || r.value() > 2.0)
    throw domain_error("moment_c requires r in (0,2]");
  const double rv = r.value();
  if (rv == 2.0) {
    // Cancelled branch: Gamma((r-p)/r) == Gamma((2-p)/2) at r = 2.
    const double log_c = (log_gamma((1.0 + p) / 2.0) - log_gamma(0.5)) / p;
    return std::exp(log_c);
  }
  if (!(p < rv))
    throw domain_error("moment_c requires p < r when r < 2 (got p=" +
                       std::to_string(p) + ", r=" + std::to_string(rv) + ")");
  const double log_c = (log_gamma((rv - p) / rv) + log_gamma((1.0 + p) / 2.0) -
                        log_gamma((2.0 - p) / 2.0) - log_gamma(0.5)) /
                       p;
  return std::exp(log_c);
}

std::vector<double> sample_stable(double r, std::size_t n, std::uint64_t seed) {
  require_stable_index(r);
  if (n == 0) throw validation_error("sample_stable requires n >= 1");
  std::vector<double> out(n);
  const std::size_t shards = (n + kShardSize - 1) / kShardSize;
  parallel_for(shards, [&](std::size_t s) {
    SplitMix64 rng(SplitMix64::derive(seed, s));
    const std::size_t begin = s * kShardSize;
    const std::size_t end = std::min(n, begin + kShardSize);
    for (std::size_t i = begin; i < end; ++i) out[i] = stable_draw(r, rng);
  });
  return out;
}

double moment_ratio(const std::vector<double>& samples, double p, double q) {
  if (samples.empty()) throw validation_error("moment_ratio: empty sample set");
  const std::size_t n = samples.size();
  // Normalizing by the max makes the computation scale-free (the common
  // factor cancels algebraically) and keeps the powers in range.
  double m = 0.0;
  for (double x : samples) m = std::max(m, std::fabs(x));
  if (m == 0.0) throw validation_error("moment_ratio: all samples are zero");
  const std::size_t shards = (n + kShardSize - 1) / kShardSize;
  std::vector<double> part_p(shards, 0.0), part_q(shards, 0.0);
  parallel_for(shards, [&](std::size_t s) {
    KahanSum sp, sq;
    const std::size_t begin = s * kShardSize;
    const std::size_t end = std::min(n, begin + kShardSize);
    for (std::size_t i = begin; i < end; ++i) {
      const double ax = std::fabs(samples[i]) / m;
      sp.add(std::pow(ax, p));
      sq.add(std::pow(ax, q));
    }
    part_p[s] = sp.sum;
    part_q[s] = sq.sum;
  });
  KahanSum tp, tq;
  for (std::size_t s = 0; s < shards; ++s) {
    tp.add(part_p[s]);
    tq.add(part_q[s]);
  }
  const double mean_p = tp.sum / static_cast<double>(n);
  const double mean_q = tq.sum / static_cast<double>(n);
  return std::pow(mean_q, 1.0 / q) / std::pow(mean_p, 1.0 / p);
}

McRatio mc_ratio_check(double r, double p, double q, std::size_t samples,
                       std::uint64_t seed) {
  const Exponent re(r);
  McRatio out;
  out.formula_ratio = moment_c(re, q) / moment_c(re, p);  // validates domains
  if (samples == 0) throw validation_error("mc_ratio_check requires samples >= 1");
  out.mc_ratio = moment_ratio(sample_stable(r, samples, seed), p, q);
  return out;
}

McLemmaRatios mc_integration_lemma(double r, double s, const std::vector<double>& a,
                                   const std::vector<double>& b, std::size_t samples,
                                   std::uint64_t seed) {
  require_stable_index(r);
  if (!(s > 0.0)) throw domain_error("mc_integration_lemma requires s > 0");
  if (r < 2.0 && !(s < r))
    throw domain_error("mc_integration_lemma requires s < r when r < 2");
  if (a.empty() || b.empty())
    throw validation_error("mc_integration_lemma: empty coefficient list");
  if (std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; }) ||
      std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; }))
    throw validation_error("mc_integration_lemma: coefficients must not all vanish");
  if (samples == 0) throw validation_error("mc_integration_lemma requires samples >= 1");

  const std::size_t dim = std::max(a.size(), b.size());
  const std::size_t shards = (samples + kShardSize - 1) / kShardSize;
  std::vector<double> part_a(shards, 0.0), part_b(shards, 0.0);
  parallel_for(shards, [&](std::size_t sh) {
    SplitMix64 rng(SplitMix64::derive(seed, sh));
    KahanSum sa, sb;
    const std::size_t begin = sh * kShardSize;
    const std::size_t end = std::min(samples, begin + kShardSize);
    std::vector<double> w(dim);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t k = 0; k < dim; ++k) w[k] = stable_draw(r, rng);
      double za = 0.0, zb = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) za += a[k] * w[k];
      for (std::size_t k = 0; k < b.size(); ++k) zb += b[k] * w[k];
      sa.add(std::pow(std::fabs(za), s));
      sb.add(std::pow(std::fabs(zb), s));
    }
    part_a[sh] = sa.sum;
    part_b[sh] = sb.sum;
  });
  KahanSum ta, tb;
  for (std::size_t sh = 0; sh < shards; ++sh) {
    ta.add(part_a[sh]);
    tb.add(part_b[sh]);
  }
  const double mean_a = ta.sum / static_cast<double>(samples);
  const double mean_b = tb.sum / static_cast<double>(samples);

  auto lr_norm = [&](const std::vector<double>& c) {
    double m = 0.0;
    for (double x : c) m = std::max(m, std::fabs(x));
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (double x : c) acc += std::pow(std::fabs(x) / m, r);
    return m * std::pow(acc, 1.0 / r);
  };

  McLemmaRatios out;
  out.lhs_ratio = std::pow(mean_a, 1.0 / s) / std::pow(mean_b, 1.0 / s);
  out.rhs_ratio = lr_norm(a) / lr_norm(b);
  return out;
}

}  // namespace varlex
