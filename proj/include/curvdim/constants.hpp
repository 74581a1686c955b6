// The two-point kernel ψ̃(x, y) and the constant
//   C_ψ^φ = inf_{φ(x)+φ(y) != 2φ(1)} ψ̃(x,y) / (φ(x) + φ(y) - 2φ(1))²
// that turns D-Ricci-flatness into the dimension bound d = D / C_ψ^φ.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nelder_mead.hpp"
#include "psi.hpp"

namespace curvdim {

/// ψ̃(x,y) = [ψ'(x) + ψ'(y)](1 - xy) + x[ψ(y) - ψ(1/x)] + y[ψ(x) - ψ(1/y)].
inline double psi_tilde(const PsiFunction& psi, double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("psi_tilde: arguments must be positive");
  return (psi.deriv1(x) + psi.deriv1(y)) * (1.0 - x * y) + x * (psi(y) - psi(1.0 / x)) +
         y * (psi(x) - psi(1.0 / y));
}

enum class MinimumLocation { interior, box_edge, near_denominator_zero, none };

inline std::string location_name(MinimumLocation l) {
  switch (l) {
    case MinimumLocation::interior: return "interior";
    case MinimumLocation::box_edge: return "box-edge";
    case MinimumLocation::near_denominator_zero: return "near-denominator-zero";
    case MinimumLocation::none: return "none";
  }
  return "?";
}

struct ConstantSearchConfig {
  double box = 8.0;               // s, t in [-box, box], x = e^s, y = e^t
  std::size_t grid = 400;         // grid nodes per axis
  double exclusion = 1e-8;        // drop |φ(x) + φ(y) - 2φ(1)| < exclusion
  std::size_t refine_starts = 50;
};

struct RefinementStep {
  std::pair<double, double> start;  // (s, t)
  std::pair<double, double> end;
  double value;
};

struct ConstantEstimate {
  double value = std::numeric_limits<double>::infinity();
  std::pair<double, double> argmin{1.0, 1.0};  // (x, y)
  MinimumLocation location = MinimumLocation::none;
  double grid_min = std::numeric_limits<double>::infinity();
  double refined_min = std::numeric_limits<double>::infinity();
  std::vector<RefinementStep> trace;

  bool is_infinite() const { return std::isinf(value) && value > 0; }
};

/// Estimates C_ψ^φ by a grid scan in log coordinates followed by downhill
/// simplex runs from the best grid nodes. Returns +inf when every grid node
/// falls inside the excluded band (A_φ empty as far as the box can tell).
/// The result is numerical evidence for the infimum, not a proof.
inline ConstantEstimate cd_constant(const PsiFunction& psi, const PsiFunction& phi,
                                    const ConstantSearchConfig& config = {}) {
  if (!(config.box > 0.0) || !std::isfinite(config.box) || config.grid < 2 ||
      !(config.exclusion >= 0.0)) {
    throw std::invalid_argument("cd_constant: degenerate search configuration");
  }
  const double phi_one = phi.value_at_one();
  const double box = config.box;
  auto denominator_base = [&](double s, double t) {
    return phi(std::exp(s)) + phi(std::exp(t)) - 2.0 * phi_one;
  };
  auto ratio = [&](double s, double t) {
    if (std::abs(s) > box || std::abs(t) > box) return std::numeric_limits<double>::infinity();
    const double base = denominator_base(s, t);
    if (!(std::abs(base) >= config.exclusion) || base == 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    return psi_tilde(psi, std::exp(s), std::exp(t)) / (base * base);
  };

  ConstantEstimate out;
  const std::size_t r = config.grid;
  const double spacing = 2.0 * box / static_cast<double>(r - 1);
  struct Node {
    double value;
    double s;
    double t;
  };
  std::vector<Node> nodes;
  nodes.reserve(r * r);
  for (std::size_t i = 0; i < r; ++i) {
    const double s = -box + spacing * static_cast<double>(i);
    for (std::size_t j = 0; j < r; ++j) {
      const double t = -box + spacing * static_cast<double>(j);
      const double q = ratio(s, t);
      if (std::isfinite(q)) nodes.push_back({q, s, t});
    }
  }
  if (nodes.empty()) return out;

  const std::size_t keep = std::min(config.refine_starts, nodes.size());
  std::partial_sort(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(std::max<std::size_t>(keep, 1)),
                    nodes.end(), [](const Node& a, const Node& b) {
                      return a.value < b.value || (a.value == b.value && (a.s < b.s || (a.s == b.s && a.t < b.t)));
                    });
  out.grid_min = nodes.front().value;
  double best_s = nodes.front().s;
  double best_t = nodes.front().t;
  double best = out.grid_min;

  NelderMeadOptions nm;
  nm.initial_step = spacing;
  nm.max_iterations = 1000;
  nm.value_tolerance = 1e-16;
  nm.point_tolerance = 1e-11;
  for (std::size_t k = 0; k < keep; ++k) {
    const Node& start = nodes[k];
    auto run = nelder_mead([&](const std::vector<double>& p) { return ratio(p[0], p[1]); },
                           {start.s, start.t}, nm);
    out.trace.push_back({{start.s, start.t}, {run.point[0], run.point[1]}, run.value});
    if (run.value < best) {
      best = run.value;
      best_s = run.point[0];
      best_t = run.point[1];
    }
  }

  out.refined_min = best;
  out.value = best;
  out.argmin = {std::exp(best_s), std::exp(best_t)};
  if (std::abs(denominator_base(best_s, best_t)) < 10.0 * config.exclusion) {
    out.location = MinimumLocation::near_denominator_zero;
  } else if (std::max(std::abs(best_s), std::abs(best_t)) >= box - 1e-6 * box) {
    out.location = MinimumLocation::box_edge;
  } else {
    out.location = MinimumLocation::interior;
  }
  return out;
}

struct BoundCheckRow {
  double t;
  double identity_relative_error;  // |(e^{3t}-e^{-t})/(e^t-e^{-t}) - (e^{2t}+1)| / (e^{2t}+1)
  double sinh_term;                // (e^t - e^{-t}) / (8t), must be >= 1/4
  double squared_term;             // ((e^{3t} - e^{-t}) / (8t))², must be >= 1/16
  bool identity_ok;
  bool sinh_ok;
  bool squared_ok;
};

struct BoundCheckReport {
  std::vector<BoundCheckRow> rows;
  bool all_ok = true;
};

/// Checks, at each t, the steps that bound C^log_√ from below by 1/16:
///   (e^{3t} - e^{-t}) / (e^t - e^{-t}) = e^{2t} + 1,
///   (e^t - e^{-t}) / (8t) >= 1/4,
///   ((e^{3t} - e^{-t}) / (8t))² >= 1/16.
/// Differences of exponentials go through expm1 so small |t| stays accurate;
/// the two inequalities allow 4 ulp of slack for rounding.
inline BoundCheckReport sqrt_log_bound_check(const std::vector<double>& t_grid) {
  constexpr double slack = 1.0 - 4.0 * std::numeric_limits<double>::epsilon();
  BoundCheckReport report;
  for (double t : t_grid) {
    if (t == 0.0 || !std::isfinite(t)) {
      throw std::domain_error("sqrt_log_bound_check: t must be finite and nonzero");
    }
    const double numerator = std::expm1(3.0 * t) - std::expm1(-t);  // e^{3t} - e^{-t}
    const double denominator = 2.0 * std::sinh(t);                   // e^t - e^{-t}
    const double lhs = numerator / denominator;
    const double rhs = std::exp(2.0 * t) + 1.0;
    BoundCheckRow row;
    row.t = t;
    row.identity_relative_error = std::abs(lhs - rhs) / rhs;
    row.sinh_term = denominator / (8.0 * t);
    const double root = numerator / (8.0 * t);
    row.squared_term = root * root;
    row.identity_ok = row.identity_relative_error <= 1e-12;
    row.sinh_ok = row.sinh_term >= 0.25 * slack;
    row.squared_ok = row.squared_term >= (1.0 / 16.0) * slack;
    report.all_ok = report.all_ok && row.identity_ok && row.sinh_ok && row.squared_ok;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace curvdim
