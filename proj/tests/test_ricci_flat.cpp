#include <gtest/gtest.h>

#include <curvdim/report_io.hpp>
#include <curvdim/ricci_flat.hpp>

using namespace curvdim;

namespace {

Graph gen(Family f, std::vector<long long> p) { return generate_graph({f, std::move(p)}); }

const RicciFlatCertificate& certificate(const RicciFlatOutcome& o) {
  return std::get<RicciFlatCertificate>(o);
}

}  // namespace

TEST(RicciFlat, CycleFiveCertificate) {
  const auto g = gen(Family::cycle, {5});
  const auto o = ricci_flat_at(g, 0);
  ASSERT_TRUE(std::holds_alternative<RicciFlatCertificate>(o));
  const auto& c = certificate(o);
  EXPECT_EQ(c.degree, 2u);
  EXPECT_TRUE(validate_certificate(g, c));
  EXPECT_EQ(c.eta.size(), 3u);
}

TEST(RicciFlat, PathCenterDegreeMismatch) {
  const auto o = ricci_flat_at(gen(Family::path, {3}), 1);
  ASSERT_TRUE(std::holds_alternative<Refutation>(o));
  const auto& r = std::get<Refutation>(o);
  EXPECT_EQ(r.reason, RefutationReason::degree_mismatch);
  EXPECT_EQ(r.expected_degree, 2u);
  EXPECT_EQ(r.offending_degree, 1u);
  ASSERT_TRUE(r.offending_vertex.has_value());
  EXPECT_EQ(*r.offending_vertex, 0u);
}

TEST(RicciFlat, StarRefuted) {
  const auto report = ricci_flat(gen(Family::star, {3}));
  EXPECT_FALSE(report.ricci_flat);
  for (const auto& o : report.outcomes) EXPECT_TRUE(std::holds_alternative<Refutation>(o));
}

TEST(RicciFlat, AbelianCayleyGraphsCertified) {
  const std::vector<std::pair<Graph, std::size_t>> cases = {
      {gen(Family::cycle, {3}), 2},        {gen(Family::cycle, {4}), 2},
      {gen(Family::cycle, {8}), 2},        {gen(Family::torus2d, {3, 3}), 4},
      {gen(Family::torus2d, {3, 4}), 4},   {gen(Family::hypercube, {2}), 2},
      {gen(Family::hypercube, {3}), 3},    {gen(Family::hypercube, {4}), 4},
      {gen(Family::complete, {2}), 1}};
  for (const auto& [g, d] : cases) {
    const auto report = ricci_flat(g);
    EXPECT_TRUE(report.ricci_flat);
    ASSERT_TRUE(report.common_degree.has_value());
    EXPECT_EQ(*report.common_degree, d);
    for (const auto& o : report.outcomes) {
      ASSERT_TRUE(std::holds_alternative<RicciFlatCertificate>(o));
      EXPECT_TRUE(validate_certificate(g, certificate(o)));
      EXPECT_TRUE(validate_certificate(g, certificate(o), CommutationMode::multiset));
    }
  }
}

TEST(RicciFlat, PetersenExhausted) {
  const auto g = gen(Family::petersen, {});
  const auto report = ricci_flat(g);
  EXPECT_FALSE(report.ricci_flat);
  for (const auto& o : report.outcomes) {
    ASSERT_TRUE(std::holds_alternative<Refutation>(o));
    EXPECT_EQ(std::get<Refutation>(o).reason, RefutationReason::exhausted_search);
  }
}

TEST(RicciFlat, StrictModeAgreesWithSetMode) {
  for (const auto& g : {gen(Family::cycle, {6}), gen(Family::torus2d, {3, 3}),
                        gen(Family::hypercube, {3}), gen(Family::petersen, {}),
                        gen(Family::complete, {4})}) {
    RicciFlatOptions strict;
    strict.mode = CommutationMode::multiset;
    for (vertex_t v = 0; v < g.vertex_count(); ++v) {
      EXPECT_EQ(ricci_flat_at(g, v).index(), ricci_flat_at(g, v, strict).index());
    }
  }
}

TEST(RicciFlat, Deterministic) {
  const auto g = gen(Family::torus2d, {3, 4});
  for (vertex_t v = 0; v < g.vertex_count(); ++v) {
    EXPECT_EQ(dump(to_json(ricci_flat_at(g, v))), dump(to_json(ricci_flat_at(g, v))));
  }
}

TEST(RicciFlat, BudgetExhaustion) {
  RicciFlatOptions tiny;
  tiny.node_budget = 1;
  const auto o = ricci_flat_at(gen(Family::petersen, {}), 0, tiny);
  ASSERT_TRUE(std::holds_alternative<Refutation>(o));
  EXPECT_EQ(std::get<Refutation>(o).reason, RefutationReason::budget_exhausted);
}

TEST(RicciFlat, TamperedCertificatesFail) {
  const auto g = gen(Family::hypercube, {3});
  const auto good = certificate(ricci_flat_at(g, 0));
  ASSERT_TRUE(validate_certificate(g, good));

  auto swapped = good;
  auto& row = swapped.eta.at(g.neighbors(0)[0]);
  std::swap(row[0], row[1]);
  EXPECT_FALSE(validate_certificate(g, swapped));

  auto repeated = good;
  auto& rep = repeated.eta.at(g.neighbors(0)[1]);
  rep[1] = rep[0];
  EXPECT_FALSE(validate_certificate(g, repeated));

  auto non_adjacent = good;
  non_adjacent.eta.at(0)[0] = 7;  // 000 and 111 are not adjacent
  EXPECT_FALSE(validate_certificate(g, non_adjacent));

  auto missing = good;
  missing.eta.erase(g.neighbors(0)[2]);
  EXPECT_FALSE(validate_certificate(g, missing));

  auto wrong_degree = good;
  wrong_degree.degree = 2;
  EXPECT_FALSE(validate_certificate(g, wrong_degree));
}

TEST(RicciFlat, CertificateJsonRoundTrip) {
  const auto g = gen(Family::torus2d, {3, 3});
  const auto c = certificate(ricci_flat_at(g, 4));
  const auto back = certificate_from_json(parse_json(dump(to_json(c))));
  EXPECT_EQ(back.vertex, c.vertex);
  EXPECT_EQ(back.degree, c.degree);
  EXPECT_EQ(back.eta, c.eta);
  EXPECT_TRUE(validate_certificate(g, back));
}

TEST(DimensionFromConstant, Examples) {
  const auto a = dimension_from_constant(1, 0.1104);
  EXPECT_NEAR(a.cd_phi_psi, 9.058, 1e-3);
  EXPECT_NEAR(a.cde_prime, 2.265, 1e-3);
  const auto b = dimension_from_constant(2, 0.5);
  EXPECT_DOUBLE_EQ(b.cd_phi_psi, 4.0);
  EXPECT_DOUBLE_EQ(b.cde_prime, 1.0);
  const auto c = dimension_from_constant(2, 0.1104);
  EXPECT_NEAR(c.cd_phi_psi, 18.116, 1e-3);
  EXPECT_NEAR(c.cde_prime, 4.529, 1e-3);
  EXPECT_THROW(dimension_from_constant(2, 0.0), std::domain_error);
  EXPECT_THROW(dimension_from_constant(2, -1.0), std::domain_error);
}
