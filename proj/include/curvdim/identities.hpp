// Randomized identity suites over one graph:
//   f Γ^√(f) = Γ(√f)                       (gradient identity)
//   f Γ₂^√(f) = Γ̃₂(√f)                     (second-gradient identity)
//   R_CDE'(d,K)(√g) = g · R_CD^log_√(4d,K)(g)
//   heat identity residual = 0
//   ψ-operators invariant under f -> cf
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cd_check.hpp"
#include "gamma.hpp"
#include "psi_calc.hpp"
#include "random.hpp"

namespace curvdim {

struct IdentitySuiteResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool relative = false;  // error scaled by max(1, |value|)
  std::size_t checks = 0;
  std::optional<VertexFunction> worst_input;
  vertex_t worst_vertex = 0;

  bool passed() const { return max_error <= tolerance; }
};

struct IdentityReport {
  std::vector<IdentitySuiteResult> suites;
  bool passed() const {
    for (const auto& s : suites)
      if (!s.passed()) return false;
    return true;
  }
};

inline constexpr double kGradientTolerance = 1e-9;
inline constexpr double kEquivalenceTolerance = 1e-9;
inline constexpr double kHeatTolerance = 1e-12;
inline constexpr double kScaleTolerance = 1e-12;

/// f = exp(uniform[-spread, spread]) per vertex.
inline VertexFunction random_positive_function(Rng& rng, std::size_t n, double spread) {
  std::vector<double> values(n);
  for (auto& x : values) x = std::exp(rng.uniform(-spread, spread));
  return VertexFunction(std::move(values));
}

namespace detail {

inline void record(IdentitySuiteResult& suite, double error, const VertexFunction& f, vertex_t v) {
  ++suite.checks;
  if (!(error <= suite.max_error)) {
    suite.max_error = error;
    suite.worst_input = f;
    suite.worst_vertex = v;
  }
}

inline VertexFunction sqrt_of(const VertexFunction& f) {
  std::vector<double> r(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r[i] = std::sqrt(f[i]);
  return VertexFunction(std::move(r));
}

}  // namespace detail

/// Each trial draws f = exp(uniform[-3, 3]) (heat suite: u = exp(uniform[-1, 1]))
/// and checks every vertex.
inline IdentityReport run_identity_suites(const Graph& g, std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  auto suite = [](std::string name, double tolerance, bool relative = false) {
    IdentitySuiteResult s;
    s.name = std::move(name);
    s.tolerance = tolerance;
    s.relative = relative;
    return s;
  };
  IdentitySuiteResult grad = suite("gradient-identity", kGradientTolerance);
  IdentitySuiteResult second = suite("second-gradient-identity", kGradientTolerance);
  IdentitySuiteResult equivalence = suite("cde-prime-equivalence", kEquivalenceTolerance);
  IdentitySuiteResult heat = suite("heat-identity", kHeatTolerance);
  IdentitySuiteResult scale = suite("scale-invariance", kScaleTolerance, true);

  const auto sqrt_psi = psi::sqrt();
  const auto log_psi = psi::log();
  const std::size_t n = g.vertex_count();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const auto f = random_positive_function(rng, n, 3.0);
    const auto root = detail::sqrt_of(f);
    const auto u = random_positive_function(rng, n, 1.0);
    const double c = std::exp(rng.uniform(-2.0, 2.0));
    std::vector<double> scaled_values(n);
    for (std::size_t i = 0; i < n; ++i) scaled_values[i] = c * f[i];
    const VertexFunction scaled(std::move(scaled_values));

    for (vertex_t v = 0; v < n; ++v) {
      detail::record(grad, std::abs(f[v] * psi_gamma(g, sqrt_psi, f, v) - gamma(g, root, v)), f, v);
      detail::record(second,
                     std::abs(f[v] * psi_gamma2(g, sqrt_psi, f, v) - gamma2_tilde(g, root, v)),
                     f, v);
      for (double d : {1.0, 2.0, 10.0}) {
        for (double k : {-1.0, 0.0, 1.0}) {
          ConditionSpec cde_prime{ConditionKind::cde_prime, {}, {}, Dimension(d), k};
          ConditionSpec phi_psi{ConditionKind::cd_phi_psi, sqrt_psi, log_psi, Dimension(4.0 * d), k};
          const double lhs = nonlinear_residual(g, cde_prime, root, v).value;
          const double rhs = f[v] * nonlinear_residual(g, phi_psi, f, v).value;
          detail::record(equivalence, std::abs(lhs - rhs), f, v);
        }
      }
      detail::record(heat, std::abs(heat_identity_residual(g, u, v)), u, v);
      for (const auto* p : {&sqrt_psi, &log_psi}) {
        const double pairs[4][2] = {
            {psi_laplacian(g, *p, f, v), psi_laplacian(g, *p, scaled, v)},
            {psi_gamma(g, *p, f, v), psi_gamma(g, *p, scaled, v)},
            {psi_omega(g, *p, f, v), psi_omega(g, *p, scaled, v)},
            {psi_gamma2(g, *p, f, v), psi_gamma2(g, *p, scaled, v)},
        };
        for (const auto& pair : pairs) {
          const double err = std::abs(pair[0] - pair[1]) / std::max(1.0, std::abs(pair[0]));
          detail::record(scale, err, f, v);
        }
      }
    }
  }
  return {{grad, second, equivalence, heat, scale}};
}

}  // namespace curvdim
