// ψ-operators: Δ^ψ, Γ^ψ = Δ^{ψ̄}, Ω^ψ, Γ₂^ψ, and probes of their ε -> 0
// limits along 1 + εf.
#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gamma.hpp"
#include "psi.hpp"

namespace curvdim {

namespace detail {

inline double psi_laplacian_at(const Graph& g, const PsiFunction& psi, std::span<const double> f,
                               vertex_t v) {
  const double base = psi.value_at_one();
  double acc = 0.0;
  for (vertex_t w : g.neighbors(v)) acc += psi(f[w] / f[v]) - base;
  return acc;
}

inline double psi_gamma_at(const Graph& g, const PsiFunction& psi, std::span<const double> f,
                           vertex_t v) {
  const double slope = psi.deriv1_at_one();
  const double base = psi.value_at_one();
  double acc = 0.0;
  for (vertex_t w : g.neighbors(v)) {
    const double r = f[w] / f[v];
    acc += slope * (r - 1.0) - (psi(r) - base);
  }
  return acc;
}

inline double psi_omega_at(const Graph& g, const PsiFunction& psi, std::span<const double> f,
                           vertex_t v) {
  const double drift_v = laplacian_at(g, f, v) / f[v];
  double acc = 0.0;
  for (vertex_t w : g.neighbors(v)) {
    const double r = f[w] / f[v];
    acc += psi.deriv1(r) * r * (laplacian_at(g, f, w) / f[w] - drift_v);
  }
  return acc;
}

inline double psi_gamma2_at(const Graph& g, const PsiFunction& psi, std::span<const double> f,
                            vertex_t v) {
  const double lap_psi_v = psi_laplacian_at(g, psi, f, v);
  const double weighted_v = f[v] * lap_psi_v;
  double delta_weighted = 0.0;
  for (vertex_t w : g.neighbors(v)) {
    delta_weighted += f[w] * psi_laplacian_at(g, psi, f, w) - weighted_v;
  }
  return 0.5 * (psi_omega_at(g, psi, f, v) + laplacian_at(g, f, v) * lap_psi_v / f[v] -
                delta_weighted / f[v]);
}

inline void require_positive_input(const Graph& g, const VertexFunction& f, vertex_t v) {
  require_defined_on(g, f);
  require_positive(f);
  g.check_vertex(v);
}

}  // namespace detail

/// (Δ^ψ f)(v) = Σ_{w~v} [ψ(f(w)/f(v)) - ψ(1)].
inline double psi_laplacian(const Graph& g, const PsiFunction& psi, const VertexFunction& f,
                            vertex_t v) {
  detail::require_positive_input(g, f, v);
  return detail::psi_laplacian_at(g, psi, f.values(), v);
}

/// Γ^ψ f(v) = Δ^{ψ̄} f(v); nonnegative for concave ψ.
inline double psi_gamma(const Graph& g, const PsiFunction& psi, const VertexFunction& f,
                        vertex_t v) {
  detail::require_positive_input(g, f, v);
  return detail::psi_gamma_at(g, psi, f.values(), v);
}

inline double psi_omega(const Graph& g, const PsiFunction& psi, const VertexFunction& f,
                        vertex_t v) {
  detail::require_positive_input(g, f, v);
  return detail::psi_omega_at(g, psi, f.values(), v);
}

/// 2Γ₂^ψ f = Ω^ψ f + Δf Δ^ψ f / f - Δ(f Δ^ψ f) / f, evaluated at v.
inline double psi_gamma2(const Graph& g, const PsiFunction& psi, const VertexFunction& f,
                         vertex_t v) {
  detail::require_positive_input(g, f, v);
  return detail::psi_gamma2_at(g, psi, f.values(), v);
}

enum class LimitKind { laplacian, gamma, gamma2 };

inline std::string limit_kind_name(LimitKind k) {
  switch (k) {
    case LimitKind::laplacian: return "laplacian";
    case LimitKind::gamma: return "gamma";
    case LimitKind::gamma2: return "gamma2";
  }
  return "?";
}

struct LimitProbeResult {
  double estimated_limit = 0.0;
  double reference_value = 0.0;
  /// Least-squares slope of log|F(ε) - reference| against log ε; NaN when the
  /// error never rises above rounding level (e.g. ψ'' = 0 or f constant).
  double observed_order = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> epsilon_schedule;
  std::vector<double> scaled_values;
  /// Schedule index of the smallest ε feeding the chosen tableau entry.
  std::size_t extrapolation_index = 0;
};

struct LimitProbeOptions {
  int first_exponent = 3;
  int last_exponent = 20;
  double min_positive = 0.1;
  std::size_t max_tableau_order = 4;
};

/// Evaluates ε^{-p} · Op^ψ(1 + εf)(v) on ε_k = 2^{-k} and extrapolates ε -> 0
/// to ε = 0, compared against
///   laplacian: ψ'(1) Δf(v)        (p = 1)
///   gamma:     -ψ''(1) Γ(f)(v)    (p = 2)
///   gamma2:    -ψ''(1) Γ₂(f)(v)   (p = 2).
///
/// ε values that would push min(1 + εf) below `min_positive` are dropped. The
/// quotients lose roughly u/ε² to cancellation at small ε, so extrapolation
/// uses a Richardson tableau and keeps the entry with the smallest error
/// estimate instead of relying on the tiniest steps.
inline LimitProbeResult limit_probe(const Graph& g, const PsiFunction& psi,
                                    const VertexFunction& f, LimitKind which, vertex_t v,
                                    const LimitProbeOptions& options = {}) {
  detail::require_defined_on(g, f);
  g.check_vertex(v);

  double most_negative = 0.0;
  for (double x : f.values()) most_negative = std::min(most_negative, x);
  const double cap = most_negative < 0.0 ? (1.0 - options.min_positive) / -most_negative
                                          : std::numeric_limits<double>::infinity();

  LimitProbeResult out;
  for (int k = options.first_exponent; k <= options.last_exponent; ++k) {
    const double eps = std::ldexp(1.0, -k);
    if (eps <= cap) out.epsilon_schedule.push_back(eps);
  }
  if (out.epsilon_schedule.size() < 3) {
    throw std::domain_error("limit_probe: 1 + eps f is not positive enough on the schedule");
  }

  const int power = which == LimitKind::laplacian ? 1 : 2;
  std::vector<double> shifted(f.size());
  for (double eps : out.epsilon_schedule) {
    for (std::size_t i = 0; i < f.size(); ++i) shifted[i] = 1.0 + eps * f[i];
    double value = 0.0;
    switch (which) {
      case LimitKind::laplacian: value = detail::psi_laplacian_at(g, psi, shifted, v); break;
      case LimitKind::gamma: value = detail::psi_gamma_at(g, psi, shifted, v); break;
      case LimitKind::gamma2: value = detail::psi_gamma2_at(g, psi, shifted, v); break;
    }
    out.scaled_values.push_back(value / std::pow(eps, power));
  }

  switch (which) {
    case LimitKind::laplacian:
      out.reference_value = psi.deriv1_at_one() * detail::laplacian_at(g, f.values(), v);
      break;
    case LimitKind::gamma:
      out.reference_value = -psi.deriv2_at_one() * detail::gamma_at(g, f.values(), f.values(), v);
      break;
    case LimitKind::gamma2:
      out.reference_value = -psi.deriv2_at_one() * detail::gamma2_at(g, f.values(), f.values(), v);
      break;
  }

  // Neville tableau for ratio-2 steps (Ridders): T[k][j] cancels error terms
  // through order j; the entry with the smallest local error estimate wins.
  const auto& eps = out.epsilon_schedule;
  const auto& vals = out.scaled_values;
  const std::size_t n = eps.size();
  const std::size_t depth = std::min<std::size_t>(options.max_tableau_order, n - 1);
  std::vector<std::vector<double>> tableau(n);
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    tableau[k].push_back(vals[k]);
    for (std::size_t j = 1; j <= std::min(k, depth); ++j) {
      const double factor = std::ldexp(1.0, static_cast<int>(j)) - 1.0;
      const double t = tableau[k][j - 1] + (tableau[k][j - 1] - tableau[k - 1][j - 1]) / factor;
      tableau[k].push_back(t);
      const double err =
          std::max(std::abs(t - tableau[k][j - 1]), std::abs(t - tableau[k - 1][j - 1]));
      if (err < best_err) {
        best_err = err;
        out.estimated_limit = t;
        out.extrapolation_index = k;
      }
    }
    // Stop once the highest-order entry drifts: cancellation has taken over.
    const std::size_t top = std::min(k, depth);
    if (k >= 1 && top >= 1 && top <= k - 1 &&
        std::abs(tableau[k][top] - tableau[k - 1][top]) >= 2.0 * best_err) {
      break;
    }
  }

  // Fit the longest run of ε where the error shrinks by at least a quarter per
  // halving, i.e. where truncation rather than cancellation dominates. An
  // early sign change of the error can cut the first run short.
  const double floor = 1e-11 * (1.0 + std::abs(out.reference_value));
  std::size_t best_begin = 0, best_len = 0;
  for (std::size_t k = 0; k < n;) {
    std::size_t len = 0;
    double previous = std::numeric_limits<double>::infinity();
    while (k + len < n) {
      const double err = std::abs(vals[k + len] - out.reference_value);
      if (err <= floor || err > 0.75 * previous) break;
      previous = err;
      ++len;
    }
    if (len > best_len) {
      best_begin = k;
      best_len = len;
    }
    k += std::max<std::size_t>(len, 1);
  }
  if (best_len >= 3) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = best_begin; k < best_begin + best_len; ++k) {
      const double x = std::log(eps[k]);
      const double y = std::log(std::abs(vals[k] - out.reference_value));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(best_len);
    out.observed_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return out;
}

}  // namespace curvdim
