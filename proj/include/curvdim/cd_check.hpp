// Curvature-dimension conditions at a vertex:
//   CD(d,K)       Γ₂(f) >= (1/d)(Δf)² + KΓ(f)                 for all f
//   CDE(d,K)      Γ̃₂(f) >= (1/d)(Δf)² + KΓ(f)                 f > 0 with Δf(v) < 0
//   CDE'(d,K)     Γ̃₂(f) >= (1/d) f²(Δ log f)² + KΓ(f)         f > 0
//   CDψ(d,K)      Γ₂^ψ(f) >= (1/d)(Δ^ψ f)² + KΓ^ψ(f)          f > 0
//   CD^φ_ψ(d,K)   Γ₂^ψ(f) >= (1/d)(Δ^φ f)² + KΓ^ψ(f)          f > 0
//
// CD is decided exactly through a generalized eigenvalue problem on the
// radius-2 ball. The nonlinear conditions are falsified (or not) by multistart
// minimization; "not falsified" is never upgraded to "holds".
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gamma.hpp"
#include "nelder_mead.hpp"
#include "psi_calc.hpp"
#include "random.hpp"

namespace curvdim {

/// Dimension parameter d in (0, ∞]; ∞ drops the (1/d) term.
class Dimension {
public:
  explicit Dimension(double d) : value_(d) {
    if (!(d > 0.0)) throw std::invalid_argument("dimension must be > 0");
  }
  static Dimension infinite() { return Dimension(std::numeric_limits<double>::infinity()); }

  bool is_infinite() const noexcept { return std::isinf(value_); }
  double value() const noexcept { return value_; }
  double inverse() const noexcept { return is_infinite() ? 0.0 : 1.0 / value_; }

private:
  double value_;
};

enum class ConditionKind { cd, cde, cde_prime, cdpsi, cd_phi_psi };

inline std::string condition_name(ConditionKind k) {
  switch (k) {
    case ConditionKind::cd: return "cd";
    case ConditionKind::cde: return "cde";
    case ConditionKind::cde_prime: return "cde-prime";
    case ConditionKind::cdpsi: return "cdpsi";
    case ConditionKind::cd_phi_psi: return "cdphipsi";
  }
  return "?";
}

inline ConditionKind parse_condition(const std::string& name) {
  for (auto k : {ConditionKind::cd, ConditionKind::cde, ConditionKind::cde_prime,
                 ConditionKind::cdpsi, ConditionKind::cd_phi_psi}) {
    if (condition_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown condition '" + name + "'");
}

struct ConditionSpec {
  ConditionKind kind = ConditionKind::cd;
  std::optional<PsiFunction> psi;
  std::optional<PsiFunction> phi;
  Dimension dim = Dimension::infinite();
  double kappa = 0.0;

  void validate() const {
    if (kind == ConditionKind::cdpsi && !psi) {
      throw std::invalid_argument("cdpsi needs psi");
    }
    if (kind == ConditionKind::cd_phi_psi && (!psi || !phi)) {
      throw std::invalid_argument("cdphipsi needs psi and phi");
    }
    if (!std::isfinite(kappa)) throw std::invalid_argument("kappa must be finite");
  }
};

/// Left side minus right side at one vertex; >= 0 means the inequality holds
/// for that f. `skipped` marks CDE at a vertex with Δf(v) >= 0.
struct Residual {
  double value = 0.0;
  bool skipped = false;
};

namespace detail {

// The three ingredients of every condition at v:
//   lhs - (1/d) * dimension_term - K * normalizer.
struct ConditionTerms {
  double lhs = 0.0;
  double dimension_term = 0.0;
  double normalizer = 0.0;
  bool applicable = true;
};

inline ConditionTerms condition_terms(const Graph& g, const ConditionSpec& spec,
                                      std::span<const double> f, vertex_t v) {
  ConditionTerms t;
  switch (spec.kind) {
    case ConditionKind::cd: {
      const double lap = laplacian_at(g, f, v);
      t.lhs = gamma2_at(g, f, f, v);
      t.dimension_term = lap * lap;
      t.normalizer = gamma_at(g, f, f, v);
      break;
    }
    case ConditionKind::cde: {
      const double lap = laplacian_at(g, f, v);
      t.applicable = lap < 0.0;
      t.lhs = gamma2_tilde_at(g, f, v);
      t.dimension_term = lap * lap;
      t.normalizer = gamma_at(g, f, f, v);
      break;
    }
    case ConditionKind::cde_prime: {
      double lap_log = 0.0;
      for (vertex_t w : g.neighbors(v)) lap_log += std::log(f[w] / f[v]);
      t.lhs = gamma2_tilde_at(g, f, v);
      t.dimension_term = f[v] * f[v] * lap_log * lap_log;
      t.normalizer = gamma_at(g, f, f, v);
      break;
    }
    case ConditionKind::cdpsi:
    case ConditionKind::cd_phi_psi: {
      const PsiFunction& psi = *spec.psi;
      const PsiFunction& dim_fn = spec.kind == ConditionKind::cdpsi ? psi : *spec.phi;
      const double lap = psi_laplacian_at(g, dim_fn, f, v);
      t.lhs = psi_gamma2_at(g, psi, f, v);
      t.dimension_term = lap * lap;
      t.normalizer = psi_gamma_at(g, psi, f, v);
      break;
    }
  }
  return t;
}

}  // namespace detail

/// Residual of the condition at v for one f. CD accepts any real f; all other
/// kinds need f strictly positive.
inline Residual nonlinear_residual(const Graph& g, const ConditionSpec& spec,
                                   const VertexFunction& f, vertex_t v) {
  spec.validate();
  detail::require_defined_on(g, f);
  if (spec.kind != ConditionKind::cd) detail::require_positive(f);
  g.check_vertex(v);
  const auto t = detail::condition_terms(g, spec, f.values(), v);
  Residual r;
  r.skipped = !t.applicable;
  r.value = t.lhs - spec.dim.inverse() * t.dimension_term - spec.kappa * t.normalizer;
  return r;
}

// ---------------------------------------------------------------------------
// Exact CD curvature.

struct ExactCurvature {
  /// sup{K : CD(d,K) holds at v}; -inf when Γ₂ - (1/d)(Δ·)² fails to be PSD on
  /// ker Γ(·)(v), +inf when v is isolated (Γ vanishes identically).
  double kappa = 0.0;
  /// A minimizing f with f(v) = 0 and Γ(f)(v) = 1, so its CD(d,K) residual is
  /// kappa - K. Empty when kappa is infinite.
  std::vector<double> witness;
};

/// Translation invariance lets f(v) = 0; the forms at v only see the radius-2
/// ball. With A (Γ₂), B (Γ) and ℓ (Δ) as quadratic/linear forms on that ball,
/// K* is the least generalized eigenvalue of (A - ℓℓᵀ/d, B) on range B after
/// eliminating ker B through a Schur complement. Directions with B-eigenvalue
/// below 1e-10 (relative) count as ker B, where A - ℓℓᵀ/d must be >= -1e-10.
inline ExactCurvature cd_curvature_exact_detail(const Graph& g, Dimension d, vertex_t v) {
  g.check_vertex(v);
  std::vector<vertex_t> local;
  for (vertex_t u : ball(g, v, 2))
    if (u != v) local.push_back(u);
  const auto n = static_cast<Eigen::Index>(local.size());

  ExactCurvature out;
  if (g.degree(v) == 0) {
    out.kappa = std::numeric_limits<double>::infinity();
    return out;
  }

  std::vector<std::vector<double>> basis(local.size(), std::vector<double>(g.vertex_count(), 0.0));
  for (std::size_t i = 0; i < local.size(); ++i) basis[i][local[i]] = 1.0;

  Eigen::MatrixXd a(n, n), b(n, n);
  Eigen::VectorXd ell(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ell(i) = detail::laplacian_at(g, basis[i], v);
    for (Eigen::Index j = 0; j <= i; ++j) {
      a(i, j) = a(j, i) = detail::gamma2_at(g, basis[i], basis[j], v);
      b(i, j) = b(j, i) = detail::gamma_at(g, basis[i], basis[j], v);
    }
  }
  const Eigen::MatrixXd m = a - d.inverse() * ell * ell.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b_eig(b);
  const Eigen::VectorXd& lambda = b_eig.eigenvalues();
  const double threshold = 1e-10 * lambda.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> range_cols, kernel_cols;
  for (Eigen::Index i = 0; i < n; ++i) (lambda(i) > threshold ? range_cols : kernel_cols).push_back(i);

  const auto nr = static_cast<Eigen::Index>(range_cols.size());
  const auto nk = static_cast<Eigen::Index>(kernel_cols.size());
  Eigen::MatrixXd range(n, nr), kernel(n, nk);
  for (Eigen::Index i = 0; i < nr; ++i) range.col(i) = b_eig.eigenvectors().col(range_cols[i]);
  for (Eigen::Index i = 0; i < nk; ++i) kernel.col(i) = b_eig.eigenvectors().col(kernel_cols[i]);

  Eigen::MatrixXd schur = range.transpose() * m * range;
  Eigen::MatrixXd lift = Eigen::MatrixXd::Zero(nk, nr);  // x_kernel = lift * x_range
  if (nk > 0) {
    const Eigen::MatrixXd m_kk = kernel.transpose() * m * kernel;
    const Eigen::MatrixXd m_kr = kernel.transpose() * m * range;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> k_eig(m_kk);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (k_eig.eigenvalues().minCoeff() < -1e-10 * scale) {
      out.kappa = -std::numeric_limits<double>::infinity();
      return out;
    }
    Eigen::MatrixXd pinv = Eigen::MatrixXd::Zero(nk, nk);
    for (Eigen::Index i = 0; i < nk; ++i) {
      const double mu = k_eig.eigenvalues()(i);
      const Eigen::VectorXd z = k_eig.eigenvectors().col(i);
      if (mu > 1e-10 * scale) {
        pinv += z * z.transpose() / mu;
      } else if ((m_kr.transpose() * z).norm() > 1e-9 * scale) {
        // A flat kernel direction coupled to the range: the form is unbounded below.
        out.kappa = -std::numeric_limits<double>::infinity();
        return out;
      }
    }
    lift = -pinv * m_kr;
    schur -= m_kr.transpose() * pinv * m_kr;
  }

  Eigen::VectorXd inv_sqrt(nr);
  for (Eigen::Index i = 0; i < nr; ++i) inv_sqrt(i) = 1.0 / std::sqrt(lambda(range_cols[i]));
  const Eigen::MatrixXd pencil = inv_sqrt.asDiagonal() * schur * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> p_eig(pencil);
  out.kappa = p_eig.eigenvalues()(0);

  const Eigen::VectorXd x_range = inv_sqrt.asDiagonal() * p_eig.eigenvectors().col(0);
  Eigen::VectorXd x = range * x_range;
  if (nk > 0) x += kernel * (lift * x_range);
  out.witness.assign(g.vertex_count(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) out.witness[local[static_cast<std::size_t>(i)]] = x(i);
  return out;
}

inline double cd_curvature_exact(const Graph& g, Dimension d, vertex_t v) {
  return cd_curvature_exact_detail(g, d, v).kappa;
}

// ---------------------------------------------------------------------------
// Reports.

enum class Verdict { holds, violated, not_falsified, skipped };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::not_falsified: return "not falsified";
    case Verdict::skipped: return "skipped";
  }
  return "?";
}

struct VertexReport {
  vertex_t v = 0;
  Verdict verdict = Verdict::skipped;
  /// Largest K certified (CD) or not falsified by the search (other kinds).
  double best_kappa = 0.0;
  /// Residual at the minimizing f, normalized so the Γ-type term equals 1,
  /// i.e. best_kappa - K. Negative exactly when the condition fails.
  double residual = 0.0;
  /// For violations: an f whose nonlinear_residual is negative.
  std::optional<VertexFunction> witness;
  /// Search only: the minimizer touched the coordinate box.
  bool boundary_hit = false;
};

struct SearchConfig {
  explicit SearchConfig(std::uint64_t seed_) : seed(seed_) {}

  std::uint64_t seed;
  std::size_t starts = 200;
  std::size_t max_iterations = 2000;
  double box = 12.0;         // u = log f in [-box, box] per coordinate
  double start_range = 2.0;  // starting u drawn from uniform[-range, range]

  void validate() const {
    if (starts == 0 || max_iterations == 0 || !(box > 0.0) || !(start_range > 0.0) ||
        start_range > box) {
      throw std::invalid_argument("invalid search configuration");
    }
  }
};

struct CurvatureReport {
  ConditionKind kind = ConditionKind::cd;
  Dimension dim = Dimension::infinite();
  double kappa = 0.0;
  std::vector<VertexReport> vertices;
  /// holds / violated for CD; not_falsified / violated otherwise.
  Verdict global = Verdict::holds;
  std::optional<SearchConfig> search;
};

inline constexpr double kExactTolerance = 1e-10;
inline constexpr double kSearchTolerance = 1e-9;

inline VertexReport cd_vertex_report(const Graph& g, Dimension d, double kappa, vertex_t v) {
  const auto exact = cd_curvature_exact_detail(g, d, v);
  VertexReport r;
  r.v = v;
  r.best_kappa = exact.kappa;
  r.residual = exact.kappa - kappa;
  r.verdict = exact.kappa >= kappa - kExactTolerance ? Verdict::holds : Verdict::violated;
  if (r.verdict == Verdict::violated && !exact.witness.empty()) {
    r.witness = VertexFunction(exact.witness);
  }
  return r;
}

inline CurvatureReport cd_verify(const Graph& g, Dimension d, double kappa) {
  CurvatureReport report;
  report.kind = ConditionKind::cd;
  report.dim = d;
  report.kappa = kappa;
  for (vertex_t v = 0; v < g.vertex_count(); ++v) {
    report.vertices.push_back(cd_vertex_report(g, d, kappa, v));
    if (report.vertices.back().verdict == Verdict::violated) report.global = Verdict::violated;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Search for the nonlinear conditions.

namespace detail {

class CurvatureObjective {
public:
  CurvatureObjective(const Graph& g, const ConditionSpec& spec, vertex_t v, double box)
      : g_(g), spec_(spec), v_(v), box_(box), f_(g.vertex_count(), 1.0) {
    for (vertex_t u : ball(g, v, 2))
      if (u != v) local_.push_back(u);
  }

  std::size_t dimension() const { return local_.size(); }

  /// (lhs - dimension term / d) / normalizer, the smallest K violated by this
  /// f; +inf outside the box, where the condition does not apply, or where
  /// the normalizer vanishes.
  double operator()(const std::vector<double>& u) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!(std::abs(u[i]) <= box_)) return std::numeric_limits<double>::infinity();
      f_[local_[i]] = std::exp(u[i]);
    }
    const auto t = condition_terms(g_, spec_, f_, v_);
    if (!t.applicable || !(t.normalizer > 1e-300)) return std::numeric_limits<double>::infinity();
    return (t.lhs - spec_.dim.inverse() * t.dimension_term) / t.normalizer;
  }

  std::vector<double> function_at(const std::vector<double>& u) const {
    std::vector<double> f(g_.vertex_count(), 1.0);
    for (std::size_t i = 0; i < u.size(); ++i) f[local_[i]] = std::exp(u[i]);
    return f;
  }

private:
  const Graph& g_;
  const ConditionSpec& spec_;
  vertex_t v_;
  double box_;
  std::vector<double> f_;
  std::vector<vertex_t> local_;
};

template <class Objective>
double coordinate_polish(Objective& objective, std::vector<double>& u, double value) {
  for (double step = 0.1; step >= 1e-6; step *= 0.1) {
    for (int sweep = 0; sweep < 50; ++sweep) {
      bool improved = false;
      for (std::size_t i = 0; i < u.size(); ++i) {
        for (double sign : {1.0, -1.0}) {
          const double keep = u[i];
          u[i] = keep + sign * step;
          const double trial = objective(u);
          if (trial < value) {
            value = trial;
            improved = true;
            break;
          }
          u[i] = keep;
        }
      }
      if (!improved) break;
    }
  }
  return value;
}

}  // namespace detail

/// Minimizes the curvature ratio (lhs - dimension term / d) / Γ-type term over
/// f = exp(u) on the radius-2 ball of v with u(v) = 0 and u = 0 elsewhere.
/// Every condition is invariant (CDE, CDE': 2-homogeneous) under f -> cf, so
/// fixing f(v) = 1 loses nothing. The smallest ratio found is best_kappa: the
/// largest K without a violating f among those explored, i.e. the limit of
/// bisecting K over the witnesses. best_kappa is clamped to [-100, 100].
inline VertexReport nonlinear_curvature_search(const Graph& g, const ConditionSpec& spec,
                                               vertex_t v, const SearchConfig& config) {
  spec.validate();
  config.validate();
  g.check_vertex(v);

  VertexReport report;
  report.v = v;
  detail::CurvatureObjective objective(g, spec, v, config.box);
  const std::size_t n = objective.dimension();
  if (g.degree(v) == 0) {
    report.verdict = Verdict::not_falsified;
    report.best_kappa = std::numeric_limits<double>::infinity();
    return report;
  }

  // Each vertex draws from its own stream so per-vertex results do not depend
  // on which other vertices are checked.
  Rng rng(config.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(v) + 1)));
  NelderMeadOptions nm;
  nm.initial_step = 0.5;
  nm.max_iterations = config.max_iterations;
  nm.value_tolerance = 1e-15;
  nm.point_tolerance = 1e-9;

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_u;
  for (std::size_t s = 0; s < config.starts; ++s) {
    std::vector<double> u(n);
    double value = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 1000 && !std::isfinite(value); ++attempt) {
      for (auto& x : u) x = rng.uniform(-config.start_range, config.start_range);
      value = objective(u);
    }
    if (!std::isfinite(value)) continue;

    auto run = nelder_mead(objective, u, nm);
    NelderMeadOptions restart = nm;
    restart.initial_step = 0.05;
    auto again = nelder_mead(objective, run.point, restart);
    if (again.value <= run.value) run = std::move(again);
    u = run.point;
    value = detail::coordinate_polish(objective, u, run.value);
    if (value < best) {
      best = value;
      best_u = u;
    }
  }

  if (best_u.empty()) {
    report.verdict = Verdict::skipped;
    report.best_kappa = std::numeric_limits<double>::infinity();
    return report;
  }

  report.best_kappa = std::clamp(best, -100.0, 100.0);
  report.residual = best - spec.kappa;
  for (double x : best_u) report.boundary_hit = report.boundary_hit || std::abs(x) >= config.box - 1e-6;
  if (report.residual < -kSearchTolerance) {
    report.verdict = Verdict::violated;
    report.witness = VertexFunction(objective.function_at(best_u));
  } else {
    report.verdict = Verdict::not_falsified;
  }
  return report;
}

/// Runs the condition at every vertex (or only `only_vertex`): exact for CD,
/// search otherwise.
inline CurvatureReport check_condition(const Graph& g, const ConditionSpec& spec,
                                       const std::optional<SearchConfig>& config,
                                       std::optional<vertex_t> only_vertex = std::nullopt) {
  spec.validate();
  CurvatureReport report;
  report.kind = spec.kind;
  report.dim = spec.dim;
  report.kappa = spec.kappa;
  const bool exact = spec.kind == ConditionKind::cd;
  if (!exact && !config) throw std::invalid_argument("nonlinear conditions need a search config");
  if (!exact) report.search = config;
  report.global = exact ? Verdict::holds : Verdict::not_falsified;

  std::vector<vertex_t> targets;
  if (only_vertex) {
    g.check_vertex(*only_vertex);
    targets.push_back(*only_vertex);
  } else {
    for (vertex_t v = 0; v < g.vertex_count(); ++v) targets.push_back(v);
  }
  for (vertex_t v : targets) {
    report.vertices.push_back(exact ? cd_vertex_report(g, spec.dim, spec.kappa, v)
                                    : nonlinear_curvature_search(g, spec, v, *config));
    if (report.vertices.back().verdict == Verdict::violated) report.global = Verdict::violated;
  }
  return report;
}

// ---------------------------------------------------------------------------
// CD^φ_ψ(d,K) => CD(-ψ''(1) d / φ'(1)², K).

struct ImplicationVertex {
  vertex_t v = 0;
  Verdict cd = Verdict::holds;
  Verdict phi_psi = Verdict::not_falsified;
  /// CD^φ_ψ witness obtained as 1 + εh from the CD witness h, when found.
  std::optional<VertexFunction> lifted_witness;
};

struct ImplicationReport {
  double implied_dim = 0.0;
  CurvatureReport cd;
  CurvatureReport phi_psi;
  std::vector<ImplicationVertex> vertices;
  /// CD violated at some vertex while CD^φ_ψ is not falsified there even with
  /// the lifted witness: impossible if the implication and the code are right.
  bool inconsistent = false;
};

inline double implied_cd_dimension(const PsiFunction& psi, const PsiFunction& phi, double d) {
  const double curvature = psi.deriv2_at_one();
  const double slope = phi.deriv1_at_one();
  if (curvature == 0.0 || slope == 0.0) {
    throw std::invalid_argument("implication needs psi''(1) != 0 and phi'(1) != 0");
  }
  return -curvature / (slope * slope) * d;
}

inline ImplicationReport implication_check(const Graph& g, const PsiFunction& psi,
                                           const PsiFunction& phi, Dimension d, double kappa,
                                           const SearchConfig& config) {
  ImplicationReport out;
  out.implied_dim = d.is_infinite() ? d.value() : implied_cd_dimension(psi, phi, d.value());
  if (d.is_infinite()) implied_cd_dimension(psi, phi, 1.0);  // degeneracy check only

  ConditionSpec phi_psi{ConditionKind::cd_phi_psi, psi, phi, d, kappa};
  out.cd = cd_verify(g, Dimension(out.implied_dim), kappa);
  out.phi_psi = check_condition(g, phi_psi, config);

  for (std::size_t i = 0; i < out.cd.vertices.size(); ++i) {
    ImplicationVertex row;
    row.v = out.cd.vertices[i].v;
    row.cd = out.cd.vertices[i].verdict;
    row.phi_psi = out.phi_psi.vertices[i].verdict;
    if (row.cd == Verdict::violated && out.cd.vertices[i].witness) {
      const auto h = out.cd.vertices[i].witness->values();
      double scale = 0.0;
      for (double x : h) scale = std::max(scale, std::abs(x));
      for (double eps : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3}) {
        std::vector<double> lifted(h.size());
        for (std::size_t j = 0; j < h.size(); ++j) lifted[j] = 1.0 + eps * h[j] / scale;
        VertexFunction candidate(std::move(lifted));
        if (nonlinear_residual(g, phi_psi, candidate, row.v).value < 0.0) {
          row.lifted_witness = std::move(candidate);
          break;
        }
      }
      if (row.lifted_witness) {
        row.phi_psi = Verdict::violated;
      } else if (row.phi_psi != Verdict::violated) {
        out.inconsistent = true;
      }
    }
    out.vertices.push_back(std::move(row));
  }
  return out;
}

}  // namespace curvdim
