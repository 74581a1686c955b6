#include <gtest/gtest.h>

#include <cmath>

#include <curvdim/cd_check.hpp>

#include "oracle.hpp"

using namespace curvdim;

namespace {

const Graph kEdge = generate_graph({Family::path, {2}});
const Graph kCycle5 = generate_graph({Family::cycle, {5}});
const Graph kCube = generate_graph({Family::hypercube, {3}});

VertexFunction vf(std::vector<double> v) { return VertexFunction(std::move(v)); }

// Residual of CD(d, K) straight from the oracle's whole-graph formulas.
double cd_residual_oracle(const Graph& g, const std::vector<double>& f, vertex_t v, double d,
                          double k) {
  const double lap = oracle::lap(g, f)[v];
  return oracle::gamma2(g, f, f)[v] - lap * lap / d - k * oracle::gamma(g, f, f)[v];
}

SearchConfig quick(std::uint64_t seed, std::size_t starts = 30) {
  SearchConfig c(seed);
  c.starts = starts;
  return c;
}

}  // namespace

TEST(Dimension, Validation) {
  EXPECT_THROW(Dimension(0.0), std::invalid_argument);
  EXPECT_THROW(Dimension(-1.0), std::invalid_argument);
  EXPECT_THROW(Dimension(std::nan("")), std::invalid_argument);
  EXPECT_EQ(Dimension::infinite().inverse(), 0.0);
  EXPECT_DOUBLE_EQ(Dimension(4.0).inverse(), 0.25);
}

TEST(ExactCurvature, SingleEdgeClosedForm) {
  for (double d : {1.0, 2.0, 5.0, 0.5, 3.7}) {
    EXPECT_NEAR(cd_curvature_exact(kEdge, Dimension(d), 0), 2.0 - 2.0 / d, 1e-9) << d;
  }
  EXPECT_NEAR(cd_curvature_exact(kEdge, Dimension::infinite(), 1), 2.0, 1e-9);
}

TEST(ExactCurvature, IsolatedVertex) {
  const Graph g(3, std::vector<std::pair<vertex_t, vertex_t>>{{0, 1}});
  EXPECT_TRUE(std::isinf(cd_curvature_exact(g, Dimension(2.0), 2)));
  EXPECT_GT(cd_curvature_exact(g, Dimension(2.0), 2), 0.0);
}

TEST(ExactCurvature, WitnessAttainsCurvature) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = oracle::random_connected_graph(rng, 3 + rng.below(6), 0.4);
    const vertex_t v = rng.below(g.vertex_count());
    const double d = rng.uniform(0.5, 10.0);
    const auto exact = cd_curvature_exact_detail(g, Dimension(d), v);
    ASSERT_TRUE(std::isfinite(exact.kappa));
    ASSERT_EQ(exact.witness.size(), g.vertex_count());
    EXPECT_NEAR(oracle::gamma(g, exact.witness, exact.witness)[v], 1.0, 1e-9);
    EXPECT_NEAR(cd_residual_oracle(g, exact.witness, v, d, exact.kappa), 0.0, 1e-8);
    // No random f does better than the exact minimum.
    for (int probe = 0; probe < 50; ++probe) {
      const auto f = oracle::random_vector(rng, g.vertex_count(), -1, 1);
      EXPECT_GE(cd_residual_oracle(g, f, v, d, exact.kappa), -1e-9);
    }
  }
}

TEST(CdVerify, SingleEdge) {
  EXPECT_EQ(cd_verify(kEdge, Dimension(2.0), 1.0).global, Verdict::holds);
  const auto bad = cd_verify(kEdge, Dimension(2.0), 1.1);
  EXPECT_EQ(bad.global, Verdict::violated);
  for (const auto& row : bad.vertices) {
    ASSERT_TRUE(row.witness.has_value());
    const ConditionSpec spec{ConditionKind::cd, {}, {}, Dimension(2.0), 1.1};
    EXPECT_LT(nonlinear_residual(kEdge, spec, *row.witness, row.v).value, 0.0);
    EXPECT_NEAR(row.residual, -0.1, 1e-9);
  }
  EXPECT_EQ(cd_verify(kCycle5, Dimension(2.0), -1e6).global, Verdict::holds);
}

TEST(CdVerify, CycleFiveIsFlat) {
  for (vertex_t v = 0; v < 5; ++v) {
    for (double d : {2.0, 4.53, 100.0}) EXPECT_NEAR(cd_curvature_exact(kCycle5, Dimension(d), v), 0.0, 1e-9);
  }
  // Below dimension 2 the cycle loses flatness; compare with the search instead.
  const ConditionSpec spec{ConditionKind::cd, {}, {}, Dimension(1.0), 0.0};
  const auto found = nonlinear_curvature_search(kCycle5, spec, 0, quick(2, 40));
  EXPECT_NEAR(found.best_kappa, cd_curvature_exact(kCycle5, Dimension(1.0), 0), 1e-6);
  EXPECT_LT(cd_curvature_exact(kCycle5, Dimension(1.0), 0), 0.0);
}

TEST(Residual, ConstantsAndSkips) {
  const ConditionSpec cdep{ConditionKind::cde_prime, {}, {}, Dimension(2.0), 0.5};
  const auto one = VertexFunction::constant(5, 3.0);
  EXPECT_NEAR(nonlinear_residual(kCycle5, cdep, one, 0).value, 0.0, 1e-15);

  const ConditionSpec cde{ConditionKind::cde, {}, {}, Dimension(2.0), 0.0};
  EXPECT_TRUE(nonlinear_residual(kCycle5, cde, vf({1, 2, 2, 2, 2}), 0).skipped);
  EXPECT_FALSE(nonlinear_residual(kCycle5, cde, vf({3, 2, 2, 2, 2}), 0).skipped);
  EXPECT_THROW(nonlinear_residual(kCycle5, cde, vf({3, 0, 2, 2, 2}), 0), std::domain_error);

  const ConditionSpec missing{ConditionKind::cdpsi, {}, {}, Dimension(2.0), 0.0};
  EXPECT_THROW(nonlinear_residual(kCycle5, missing, one, 0), std::invalid_argument);
}

TEST(Residual, CdePrimeMatchesOracle) {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = oracle::random_positive(rng, 8, 1.5);
    const double d = rng.uniform(0.5, 10), k = rng.uniform(-2, 2);
    const ConditionSpec spec{ConditionKind::cde_prime, {}, {}, Dimension(d), k};
    const auto logf = oracle::map(f, [](double x) { return std::log(x); });
    const auto lap_log = oracle::lap(kCube, logf);
    const auto tilde = oracle::gamma2_tilde(kCube, f);
    const auto gam = oracle::gamma(kCube, f, f);
    for (vertex_t v = 0; v < 8; ++v) {
      const double expected = tilde[v] - f[v] * f[v] * lap_log[v] * lap_log[v] / d - k * gam[v];
      EXPECT_NEAR(nonlinear_residual(kCube, spec, vf(f), v).value, expected,
                  1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(Residual, CdePrimeEquivalenceAndHomogeneity) {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_connected_graph(rng, 3 + rng.below(6), 0.4);
    const auto h = oracle::random_positive(rng, g.vertex_count(), 3.0);
    const auto root = oracle::map(h, [](double x) { return std::sqrt(x); });
    const double d = rng.uniform(0.5, 10), k = rng.uniform(-1, 1);
    const double c = std::exp(rng.uniform(-2, 2));
    const ConditionSpec prime{ConditionKind::cde_prime, {}, {}, Dimension(d), k};
    const ConditionSpec phi_psi{ConditionKind::cd_phi_psi, psi::sqrt(), psi::log(),
                                Dimension(4 * d), k};
    for (vertex_t v = 0; v < g.vertex_count(); ++v) {
      const double lhs = nonlinear_residual(g, prime, vf(root), v).value;
      const double rhs = h[v] * nonlinear_residual(g, phi_psi, vf(h), v).value;
      EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs)));
      const double scaled =
          nonlinear_residual(g, prime, vf(oracle::map(root, [c](double x) { return c * x; })), v).value;
      EXPECT_NEAR(scaled, c * c * lhs, 1e-9 * std::max(1.0, c * c * std::abs(lhs)));
    }
  }
}

TEST(Search, RejectsBadConfig) {
  SearchConfig c(1);
  c.starts = 0;
  const ConditionSpec spec{ConditionKind::cde_prime, {}, {}, Dimension(2.0), 0.0};
  EXPECT_THROW(check_condition(kCycle5, spec, c), std::invalid_argument);
  EXPECT_THROW(check_condition(kCycle5, spec, std::nullopt), std::invalid_argument);
}

TEST(Search, AgreesWithExactOnCd) {
  Rng rng(34);
  for (int trial = 0; trial < 8; ++trial) {
    const auto g = oracle::random_connected_graph(rng, 3 + rng.below(4), 0.4);
    const vertex_t v = rng.below(g.vertex_count());
    const Dimension d(rng.uniform(1.0, 6.0));
    const double exact = cd_curvature_exact(g, d, v);
    const ConditionSpec spec{ConditionKind::cd, {}, {}, d, 0.0};
    const auto found = nonlinear_curvature_search(g, spec, v, quick(trial, 40));
    // f = exp(u) only sees positive f, but CD is translation invariant.
    EXPECT_NEAR(found.best_kappa, exact, 1e-4);
  }
}

TEST(Search, FindsEdgeViolation) {
  const ConditionSpec spec{ConditionKind::cd, {}, {}, Dimension(2.0), 1.05};
  const auto r = nonlinear_curvature_search(kEdge, spec, 0, quick(5));
  EXPECT_EQ(r.verdict, Verdict::violated);
  ASSERT_TRUE(r.witness.has_value());
  const auto values = r.witness->values();
  EXPECT_LT(cd_residual_oracle(kEdge, {values.begin(), values.end()}, 0, 2.0, 1.05), 0.0);
}

TEST(Search, ViolationWitnessesRevalidate) {
  // CDE'(d, K) fails on cycle(5) for large K.
  const ConditionSpec spec{ConditionKind::cde_prime, {}, {}, Dimension(4.53), 0.5};
  const auto report = check_condition(kCycle5, spec, quick(6));
  EXPECT_EQ(report.global, Verdict::violated);
  for (const auto& row : report.vertices) {
    ASSERT_EQ(row.verdict, Verdict::violated);
    ASSERT_TRUE(row.witness.has_value());
    const auto r = nonlinear_residual(kCycle5, spec, *row.witness, row.v);
    EXPECT_LT(r.value, 0.0);
    EXPECT_NEAR(row.residual, row.best_kappa - 0.5, 1e-12);
  }
}

TEST(Search, WitnessIsLocalized) {
  const Graph path = generate_graph({Family::path, {7}});
  const ConditionSpec spec{ConditionKind::cde_prime, {}, {}, Dimension(1.0), 5.0};
  const auto r = nonlinear_curvature_search(path, spec, 0, quick(7));
  ASSERT_TRUE(r.witness.has_value());
  for (vertex_t u = 3; u < 7; ++u) EXPECT_EQ((*r.witness)[u], 1.0);
}

TEST(Search, EquivalenceWitnessTransfers) {
  const ConditionSpec prime{ConditionKind::cde_prime, {}, {}, Dimension(1.0), 0.3};
  const ConditionSpec phi_psi{ConditionKind::cd_phi_psi, psi::sqrt(), psi::log(), Dimension(4.0), 0.3};
  const auto r = nonlinear_curvature_search(kCube, prime, 0, quick(8));
  ASSERT_EQ(r.verdict, Verdict::violated);
  std::vector<double> squared;
  for (double x : r.witness->values()) squared.push_back(x * x);
  EXPECT_LT(nonlinear_residual(kCube, phi_psi, vf(squared), 0).value, 0.0);
}

TEST(Search, Deterministic) {
  const ConditionSpec spec{ConditionKind::cdpsi, psi::log(), {}, Dimension(3.0), 0.0};
  const auto a = check_condition(kCycle5, spec, quick(99, 10));
  const auto b = check_condition(kCycle5, spec, quick(99, 10));
  ASSERT_EQ(a.vertices.size(), b.vertices.size());
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    EXPECT_EQ(a.vertices[i].best_kappa, b.vertices[i].best_kappa);
  }
}

TEST(Implication, ImpliedDimension) {
  EXPECT_NEAR(implied_cd_dimension(psi::sqrt(), psi::log(), 1.0), 0.25, 1e-15);
  EXPECT_NEAR(implied_cd_dimension(psi::log(), psi::log(), 3.0), 3.0, 1e-15);
  // CDE'(2.265 D) <=> CD^log_√(9.06 D) => CD(2.265 D).
  EXPECT_NEAR(implied_cd_dimension(psi::sqrt(), psi::log(), 4 * 2.265 * 2), 2.265 * 2, 1e-12);
  EXPECT_THROW(implied_cd_dimension(psi::identity(), psi::log(), 1.0), std::invalid_argument);
}

TEST(Implication, CycleFive) {
  EXPECT_EQ(cd_verify(kCycle5, Dimension(4.53), 0.0).global, Verdict::holds);
  const auto r = implication_check(kCycle5, psi::sqrt(), psi::log(), Dimension(4 * 4.53), 0.0, quick(3, 20));
  EXPECT_FALSE(r.inconsistent);
  EXPECT_NEAR(r.implied_dim, 4.53, 1e-12);
}

TEST(Implication, ViolationsLift) {
  // K above the exact curvature: CD fails, so CD^φ_ψ must fail too.
  const auto r = implication_check(kCube, psi::log(), psi::log(), Dimension(3.0), 1.5, quick(4, 20));
  EXPECT_FALSE(r.inconsistent);
  for (const auto& row : r.vertices) {
    EXPECT_EQ(row.cd, Verdict::violated);
    EXPECT_EQ(row.phi_psi, Verdict::violated);
  }
}
