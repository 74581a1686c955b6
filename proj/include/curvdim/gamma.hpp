// Classical Gamma calculus for the unweighted, non-normalized graph Laplacian
//   Δf(v) = Σ_{w~v} (f(w) - f(v)).
// Every operator is evaluated locally at one vertex; neighbor sums run in
// sorted vertex order.
#pragma once

#include <cmath>
#include <vector>

#include "graph.hpp"

namespace curvdim {

namespace detail {

inline double laplacian_at(const Graph& g, std::span<const double> f, vertex_t v) {
  double acc = 0.0;
  for (vertex_t w : g.neighbors(v)) acc += f[w] - f[v];
  return acc;
}

inline double gamma_at(const Graph& g, std::span<const double> f, std::span<const double> h,
                       vertex_t v) {
  double acc = 0.0;
  for (vertex_t w : g.neighbors(v)) acc += (f[w] - f[v]) * (h[w] - h[v]);
  return 0.5 * acc;
}

// 2Γ₂(f,h)(v) = ΔΓ(f,h)(v) - Γ(f,Δh)(v) - Γ(h,Δf)(v), expanded into neighbor
// sums so only the radius-2 ball of v is touched.
inline double gamma2_at(const Graph& g, std::span<const double> f, std::span<const double> h,
                        vertex_t v) {
  const double gamma_v = gamma_at(g, f, h, v);
  const double lap_f_v = laplacian_at(g, f, v);
  const double lap_h_v = laplacian_at(g, h, v);
  double delta_gamma = 0.0;
  double cross_f = 0.0;
  double cross_h = 0.0;
  for (vertex_t w : g.neighbors(v)) {
    delta_gamma += gamma_at(g, f, h, w) - gamma_v;
    cross_f += (f[w] - f[v]) * (laplacian_at(g, h, w) - lap_h_v);
    cross_h += (h[w] - h[v]) * (laplacian_at(g, f, w) - lap_f_v);
  }
  return 0.5 * (delta_gamma - 0.5 * cross_f - 0.5 * cross_h);
}

// Γ(f)/f on the closed neighborhood of v; zero elsewhere (never read).
inline std::vector<double> gamma_quotient_near(const Graph& g, std::span<const double> f,
                                               vertex_t v) {
  std::vector<double> q(f.size(), 0.0);
  q[v] = gamma_at(g, f, f, v) / f[v];
  for (vertex_t w : g.neighbors(v)) q[w] = gamma_at(g, f, f, w) / f[w];
  return q;
}

inline double gamma2_tilde_at(const Graph& g, std::span<const double> f, vertex_t v) {
  const auto quotient = gamma_quotient_near(g, f, v);
  return gamma2_at(g, f, f, v) - gamma_at(g, f, quotient, v);
}

}  // namespace detail

inline double laplacian(const Graph& g, const VertexFunction& f, vertex_t v) {
  detail::require_defined_on(g, f);
  return detail::laplacian_at(g, f.values(), v);
}

/// Carré du champ Γ(f,h)(v) = ½ Σ_{w~v} (f(w)-f(v))(h(w)-h(v)).
inline double gamma(const Graph& g, const VertexFunction& f, const VertexFunction& h,
                    vertex_t v) {
  detail::require_defined_on(g, f);
  detail::require_defined_on(g, h);
  return detail::gamma_at(g, f.values(), h.values(), v);
}

inline double gamma(const Graph& g, const VertexFunction& f, vertex_t v) {
  return gamma(g, f, f, v);
}

inline double gamma2(const Graph& g, const VertexFunction& f, const VertexFunction& h,
                     vertex_t v) {
  detail::require_defined_on(g, f);
  detail::require_defined_on(g, h);
  g.check_vertex(v);
  return detail::gamma2_at(g, f.values(), h.values(), v);
}

inline double gamma2(const Graph& g, const VertexFunction& f, vertex_t v) {
  return gamma2(g, f, f, v);
}

/// Γ̃₂(f)(v) = Γ₂(f)(v) - Γ(f, Γ(f)/f)(v), defined for strictly positive f.
inline double gamma2_tilde(const Graph& g, const VertexFunction& f, vertex_t v) {
  detail::require_defined_on(g, f);
  detail::require_positive(f);
  g.check_vertex(v);
  return detail::gamma2_tilde_at(g, f.values(), v);
}

/// Residual of 2Γ̃₂(√u) = L(Γ√u) at v, with the time derivative of √u along
/// the heat flow replaced by Δu / (2√u):
///   ΔΓ(√u)(v) - 2Γ(√u, Δu/(2√u))(v) - 2Γ̃₂(√u)(v).
/// Vanishes identically; a nonzero value beyond rounding is a bug.
inline double heat_identity_residual(const Graph& g, const VertexFunction& u, vertex_t v) {
  detail::require_defined_on(g, u);
  detail::require_positive(u);
  g.check_vertex(v);
  const auto vals = u.values();
  std::vector<double> root(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) root[i] = std::sqrt(vals[i]);

  std::vector<double> time_derivative(vals.size(), 0.0);
  time_derivative[v] = detail::laplacian_at(g, vals, v) / (2.0 * root[v]);
  for (vertex_t w : g.neighbors(v)) {
    time_derivative[w] = detail::laplacian_at(g, vals, w) / (2.0 * root[w]);
  }

  const double gamma_v = detail::gamma_at(g, root, root, v);
  double delta_gamma = 0.0;
  for (vertex_t w : g.neighbors(v)) delta_gamma += detail::gamma_at(g, root, root, w) - gamma_v;

  return delta_gamma - 2.0 * detail::gamma_at(g, root, time_derivative, v) -
         2.0 * detail::gamma2_tilde_at(g, root, v);
}

}  // namespace curvdim
