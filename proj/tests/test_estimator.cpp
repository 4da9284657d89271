#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "testutil.hpp"
#include "varlex/estimator.hpp"

using namespace varlex;
using testutil::ell;

namespace {

OperatorMatrix make_op(Matrix m, SpaceSpec source, SpaceSpec target) {
  OperatorMatrix T;
  T.entries = std::move(m);
  T.source = std::move(source);
  T.target = std::move(target);
  T.validate();
  return T;
}

Matrix random_gaussian(std::size_t rows, std::size_t cols, SplitMix64& rng,
                       bool nonnegative = false) {
  Matrix m(rows, cols);
  for (double& v : m.data) {
    v = rng.next_gaussian();
    if (nonnegative) v = std::fabs(v);
  }
  return m;
}

std::vector<SimpleFunction> random_family(std::size_t N, std::size_t n,
                                          SplitMix64& rng) {
  std::vector<SimpleFunction> F;
  for (std::size_t k = 0; k < N; ++k)
    F.push_back(testutil::random_function(rng, n, 2.0, 0.2));
  return F;
}

}  // namespace

TEST_CASE("operator validation") {
  OperatorMatrix T;
  T.entries = Matrix(2, 3);
  T.source = ell(2.0, 3);
  T.target = ell(2.0, 2);
  CHECK_NOTHROW(T.validate());
  T.entries = Matrix(2, 2);
  CHECK_THROWS_AS(T.validate(), validation_error);
}

TEST_CASE("op_norm_upper_certified examples") {
  SUBCASE("1x1 matrix has bound 2|t| while the lower estimate finds |t|") {
    Matrix m(1, 1);
    m.at(0, 0) = -3.0;
    const auto T = make_op(m, ell(2.0, 1), ell(2.0, 1));
    CHECK(op_norm_upper_certified(T) == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(op_norm_lower(T, 2, 30, 1) == doctest::Approx(3.0).epsilon(1e-9));
  }
  SUBCASE("zero matrix") {
    const auto T = make_op(Matrix(3, 3), ell(2.0, 3), ell(2.0, 3));
    CHECK(op_norm_upper_certified(T) == 0.0);
    CHECK(op_norm_lower(T, 2, 10, 1) == 0.0);
  }
  SUBCASE("identity on euclidean space: coherent, not tight") {
    const auto T = make_op(Matrix::identity(4, 4), ell(2.0, 4), ell(2.0, 4));
    const double upper = op_norm_upper_certified(T);
    const double lower = op_norm_lower(T, 2, 30, 1);
    CHECK(lower == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(upper >= lower);
    CHECK(upper == doctest::Approx(4.0).epsilon(1e-9));  // 2*sqrt(n)-type bound
  }
}

TEST_CASE("op_norm_lower recovers identity embedding norms") {
  // source l^3, target l^2: the extremal f is the constant vector.
  for (std::size_t n : {4ul, 16ul, 64ul}) {
    const auto T = make_op(Matrix::identity(n, n), ell(3.0, n), ell(2.0, n));
    const double expect = std::pow(double(n), 1.0 / 2.0 - 1.0 / 3.0);
    CHECK(op_norm_lower(T, 2, 40, 7) == doctest::Approx(expect).epsilon(1e-4));
  }
}

// Exact dual norm of f |-> sum_j v_j f_j on the Luxemburg unit ball: the sup
// runs over the source modular ball, and the per-coordinate stationarity
// c_j = mu * w_j p_j g^{p_j - 1} solves it by a scalar root-find. Independent
// of the associate-norm code.
static double dual_pairing_norm(const SpaceSpec& source,
                                const std::vector<double>& v) {
  const std::size_t n = v.size();
  auto g_of_mu = [&](double mu, std::vector<double>& g) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = std::fabs(v[j]);
      if (c == 0.0) {
        g[j] = 0.0;
        continue;
      }
      const double p = source.cells[j].exponent.value();
      g[j] = std::exp(
          (std::log(c) - std::log(mu * source.cells[j].weight * p)) / (p - 1.0));
    }
  };
  std::vector<double> g(n, 0.0);
  auto budget = [&](double mu) {
    g_of_mu(mu, g);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += source.cells[j].weight *
             std::pow(g[j], source.cells[j].exponent.value());
    return acc;
  };
  double lo = 1.0, hi = 1.0;
  while (budget(lo) <= 1.0 && lo > 1e-280) lo *= 0.5;
  while (budget(hi) > 1.0 && hi < 1e280) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (budget(mid) > 1.0 ? lo : hi) = mid;
  }
  budget(hi);
  double value = 0.0;
  for (std::size_t j = 0; j < n; ++j) value += std::fabs(v[j]) * g[j];
  return value;
}

TEST_CASE("op_norm_lower on rank-one operators matches the norm product") {
  SplitMix64 rng(5150);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + rng.next_u64() % 4;
    const std::size_t m = 2 + rng.next_u64() % 4;
    SpaceSpec source, target;
    for (std::size_t j = 0; j < n; ++j)
      source.cells.push_back({0.5 + rng.next_open01(),
                              Exponent(1.2 + 3.8 * rng.next_open01()),
                              CellKind::atom});
    for (std::size_t i = 0; i < m; ++i)
      target.cells.push_back({0.5 + rng.next_open01(),
                              Exponent(1.2 + 3.8 * rng.next_open01()),
                              CellKind::atom});

    std::vector<double> u(m), v(n);
    for (double& x : u) x = rng.next_gaussian();
    for (double& x : v) x = rng.next_gaussian();
    Matrix M(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) M.at(i, j) = u[i] * v[j];
    const auto T = make_op(M, source, target);

    const double expect = luxemburg_norm(target, SimpleFunction(u)).value *
                          dual_pairing_norm(source, v);
    const double got = op_norm_lower(T, 8, 200, 99 + trial);
    CHECK(got == doctest::Approx(expect).epsilon(1e-3));
    CHECK(got <= op_norm_upper_certified(T) * (1.0 + 1e-9));
  }
}

TEST_CASE("finite-difference gradient agrees with the half-step stencil") {
  SplitMix64 rng(246810);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng.next_u64() % 5;
    const std::size_t m = 3 + rng.next_u64() % 5;
    SpaceSpec source, target;
    for (std::size_t j = 0; j < n; ++j)
      source.cells.push_back({0.5 + rng.next_open01(),
                              Exponent(1.3 + 3.0 * rng.next_open01()),
                              CellKind::atom});
    for (std::size_t i = 0; i < m; ++i)
      target.cells.push_back({0.5 + rng.next_open01(),
                              Exponent(1.3 + 3.0 * rng.next_open01()),
                              CellKind::atom});
    const auto T = make_op(random_gaussian(m, n, rng), source, target);

    std::vector<double> f(n);
    for (double& x : f) x = 0.5 + rng.next_open01();
    const auto g1 = op_norm_fd_gradient(T, f, 1e-5);
    const auto g2 = op_norm_fd_gradient(T, f, 5e-6);
    double gmax = 0.0;
    for (double g : g1) gmax = std::max(gmax, std::fabs(g));
    for (std::size_t i = 0; i < n; ++i) {
      if (std::fabs(g1[i]) < 1e-3 * gmax) continue;
      CHECK(g2[i] == doctest::Approx(g1[i]).epsilon(1e-4));
    }
  }
}

TEST_CASE("ascent trace is monotone non-decreasing per run") {
  SplitMix64 rng(1212);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.next_u64() % 6;
    testutil::SpaceGenOptions o;
    o.max_cells = 1;
    o.inf_prob = 0.05;
    SpaceSpec source, target;
    for (std::size_t j = 0; j < n; ++j) {
      source.cells.push_back(
          {0.5 + rng.next_open01(), testutil::random_exponent(rng, o), CellKind::atom});
      target.cells.push_back(
          {0.5 + rng.next_open01(), testutil::random_exponent(rng, o), CellKind::atom});
    }
    const auto T = make_op(random_gaussian(n, n, rng), source, target);
    std::vector<std::vector<double>> trace;
    op_norm_lower(T, 3, 25, 17 + trial, &trace);
    CHECK(trace.size() == 3);
    for (const auto& run : trace)
      for (std::size_t i = 1; i < run.size(); ++i)
        CHECK(run[i] >= run[i - 1] - 1e-12);
  }
}

TEST_CASE("mz_certified_ratio basics") {
  SUBCASE("single function never exceeds one") {
    SplitMix64 rng(31);
    testutil::SpaceGenOptions o;
    o.max_cells = 6;
    for (int trial = 0; trial < 30; ++trial) {
      SpaceSpec source = testutil::random_space(rng, o);
      SpaceSpec target = testutil::random_space(rng, o);
      const auto T = make_op(
          random_gaussian(target.cell_count(), source.cell_count(), rng), source,
          target);
      const auto F = random_family(1, source.cell_count(), rng);
      if (vector_norm(source, F, Exponent(2.0)) == 0.0) continue;
      CHECK(mz_certified_ratio(T, F, Exponent(2.0)) <= 1.0 + 1e-9);
    }
  }
  SUBCASE("identity with one basis function on one euclidean cell is exactly half") {
    const auto T = make_op(Matrix::identity(1, 1), ell(2.0, 1), ell(2.0, 1));
    CHECK(mz_certified_ratio(T, {SimpleFunction({1.0})}, Exponent(2.0)) ==
          doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("identity with the full basis follows the direct evaluation") {
    // num = sqrt(n), certified upper = 2 sqrt(n), family norm = sqrt(n).
    for (std::size_t n : {4ul, 9ul}) {
      const auto T = make_op(Matrix::identity(n, n), ell(2.0, n), ell(2.0, n));
      std::vector<SimpleFunction> F;
      for (std::size_t k = 0; k < n; ++k) {
        SimpleFunction f(std::vector<double>(n, 0.0));
        f.values[k] = 1.0;
        F.push_back(f);
      }
      CHECK(mz_certified_ratio(T, F, Exponent(2.0)) ==
            doctest::Approx(0.5 / std::sqrt(double(n))).epsilon(1e-10));
    }
  }
  SUBCASE("zero denominator is rejected") {
    const auto T = make_op(Matrix::identity(2, 2), ell(2.0, 2), ell(2.0, 2));
    const std::vector<SimpleFunction> F = {SimpleFunction({0.0, 0.0})};
    CHECK_THROWS_AS(mz_certified_ratio(T, F, Exponent(2.0)), validation_error);
  }
}

TEST_CASE("mz_certified_ratio is invariant under positive rescaling of T") {
  SplitMix64 rng(6060);
  testutil::SpaceGenOptions o;
  o.max_cells = 5;
  o.inf_prob = 0.1;
  for (int trial = 0; trial < 20; ++trial) {
    SpaceSpec source = testutil::random_space(rng, o);
    SpaceSpec target = testutil::random_space(rng, o);
    const std::size_t n = source.cell_count(), m = target.cell_count();
    const Matrix M = random_gaussian(m, n, rng);
    const auto T = make_op(M, source, target);
    const auto F = random_family(3, n, rng);
    if (vector_norm(source, F, Exponent(1.5)) == 0.0) continue;
    const double base = mz_certified_ratio(T, F, Exponent(1.5));

    // power-of-two factors rescale every solver bracket exactly
    for (double c : {0.25, 2.0, 1024.0}) {
      Matrix Mc = M;
      for (double& v : Mc.data) v *= c;
      CHECK(mz_certified_ratio(make_op(Mc, source, target), F, Exponent(1.5)) ==
            base);
    }
    for (double c : {3.7, 1e-4}) {
      Matrix Mc = M;
      for (double& v : Mc.data) v *= c;
      CHECK(mz_certified_ratio(make_op(Mc, source, target), F, Exponent(1.5)) ==
            doctest::Approx(base).epsilon(1e-11));
    }
  }
}

TEST_CASE("positive operators never exceed the MZ bound with constant one") {
  SplitMix64 rng(8088);
  const Exponent rs[] = {Exponent(1.0), Exponent(1.5), Exponent(2.0), Exponent(3.0),
                         Exponent::infinity()};
  testutil::SpaceGenOptions o;
  o.max_cells = 8;
  o.inf_prob = 0.1;
  for (int trial = 0; trial < 40; ++trial) {
    SpaceSpec source = testutil::random_space(rng, o);
    SpaceSpec target = testutil::random_space(rng, o);
    const auto T = make_op(
        random_gaussian(target.cell_count(), source.cell_count(), rng, true),
        source, target);
    const auto F = random_family(1 + rng.next_u64() % 4, source.cell_count(), rng);
    const Exponent r = rs[rng.next_u64() % 5];
    if (vector_norm(source, F, r) == 0.0) continue;
    CHECK(mz_certified_ratio(T, F, r) <= 1.0 + 1e-9);
  }
}

TEST_CASE("zero-extended witnesses keep the certified ratio") {
  SplitMix64 rng(990);
  testutil::SpaceGenOptions o;
  o.max_cells = 4;
  o.inf_prob = 0.1;
  for (int trial = 0; trial < 20; ++trial) {
    SpaceSpec source = testutil::random_space(rng, o);
    SpaceSpec target = testutil::random_space(rng, o);
    const std::size_t n = source.cell_count(), m = target.cell_count();
    const auto T = make_op(random_gaussian(m, n, rng), source, target);
    auto F = random_family(2, n, rng);
    if (vector_norm(source, F, Exponent(2.0)) == 0.0) continue;
    const double base = mz_certified_ratio(T, F, Exponent(2.0));

    // Extend both spaces by fresh cells; pad T and F with zeros there.
    SpaceSpec big_source = source, big_target = target;
    const std::size_t extra_n = 1 + rng.next_u64() % 3;
    const std::size_t extra_m = 1 + rng.next_u64() % 3;
    for (std::size_t j = 0; j < extra_n; ++j)
      big_source.cells.push_back({0.5 + rng.next_open01(),
                                  testutil::random_exponent(rng, o), CellKind::atom});
    for (std::size_t i = 0; i < extra_m; ++i)
      big_target.cells.push_back({0.5 + rng.next_open01(),
                                  testutil::random_exponent(rng, o), CellKind::atom});
    Matrix big(m + extra_m, n + extra_n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) big.at(i, j) = T.entries.at(i, j);
    std::vector<SimpleFunction> bigF;
    for (const auto& f : F) {
      SimpleFunction g(std::vector<double>(n + extra_n, 0.0));
      for (std::size_t j = 0; j < n; ++j) g.values[j] = f.values[j];
      bigF.push_back(g);
    }
    const double extended = mz_certified_ratio(make_op(big, big_source, big_target),
                                               bigF, Exponent(2.0));
    CHECK(extended == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("estimate_k_lower") {
  SUBCASE("euclidean pair stays at or below one") {
    const MzWitness w =
        estimate_k_lower(ell(2.0, 4), ell(2.0, 4), Exponent(2.0), 4, 20, 3);
    CHECK(w.certified_lower_bound <= 1.0 + 1e-9);
    CHECK(w.certified_lower_bound > 0.0);
    CHECK(w.certified_lower_bound <= w.optimistic_ratio + 1e-9);
  }
  SUBCASE("source with q=1 stays at or below one") {
    const MzWitness w =
        estimate_k_lower(ell(1.0, 4), ell(1.5, 4), Exponent(3.0), 4, 20, 3);
    CHECK(w.certified_lower_bound <= 1.0 + 1e-9);
  }
  SUBCASE("budget zero is rejected") {
    CHECK_THROWS_AS(
        estimate_k_lower(ell(2.0, 2), ell(2.0, 2), Exponent(2.0), 2, 0, 1),
        validation_error);
  }
  SUBCASE("deterministic in the seed") {
    const MzWitness a =
        estimate_k_lower(ell(4.0, 5), ell(2.0, 5), Exponent(1.5), 3, 12, 77);
    const MzWitness b =
        estimate_k_lower(ell(4.0, 5), ell(2.0, 5), Exponent(1.5), 3, 12, 77);
    CHECK(a.certified_lower_bound == b.certified_lower_bound);
    CHECK(a.optimistic_ratio == b.optimistic_ratio);
    CHECK(a.op.entries.data == b.op.entries.data);
  }
}

TEST_CASE("blowup_experiment") {
  SUBCASE("parameter ordering enforced") {
    CHECK_THROWS_AS(blowup_experiment(1.5, 1.2, 1.0, {4}, 4, 1), validation_error);
    CHECK_THROWS_AS(blowup_experiment(0.9, 1.5, 1.0, {4}, 4, 1), validation_error);
    CHECK_THROWS_AS(blowup_experiment(1.2, 2.5, 1.0, {4}, 4, 1), validation_error);
  }
  SUBCASE("predicted exponent is positive and the run is deterministic") {
    const auto rows = blowup_experiment(1.2, 1.5, 1.0, {2, 4}, 6, 9);
    CHECK(rows.size() == 2);
    CHECK(rows[1].n == 4);
    const double lam4 = 1.0 / std::sqrt(std::log(6.0));
    CHECK(rows[1].predicted ==
          doctest::Approx(std::pow(4.0, 1.0 / 1.2 - 1.0 / (1.2 + lam4))));
    CHECK(rows[1].predicted > 1.0);
    CHECK(rows[1].certified > 0.0);
    const auto again = blowup_experiment(1.2, 1.5, 1.0, {2, 4}, 6, 9);
    CHECK(again[1].certified == rows[1].certified);
  }
}
