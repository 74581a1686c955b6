// Downhill simplex minimization (Nelder-Mead) with standard coefficients.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace curvdim {

struct NelderMeadOptions {
  double initial_step = 0.5;
  std::size_t max_iterations = 2000;
  /// Stop when the simplex value spread and its diameter both fall below these.
  double value_tolerance = 1e-14;
  double point_tolerance = 1e-10;
};

struct NelderMeadResult {
  std::vector<double> point;
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

/// Minimizes `objective(const std::vector<double>&)`. Non-finite values are
/// treated as +inf, which lets callers encode constraints by rejection.
template <class Objective>
NelderMeadResult nelder_mead(Objective&& objective, std::vector<double> start,
                             const NelderMeadOptions& options = {}) {
  const std::size_t n = start.size();
  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double y = objective(x);
    return std::isfinite(y) ? y : std::numeric_limits<double>::infinity();
  };
  if (n == 0) {
    result.value = eval(start);
    result.point = std::move(start);
    return result;
  }

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), second(n);
  auto blend = [&](std::vector<double>& out, double t, const std::vector<double>& towards) {
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (towards[j] - centroid[j]);
  };

  for (; result.iterations < options.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        diameter = std::max(diameter, std::abs(simplex[i][j] - simplex[best][j]));
    const double spread = values[worst] - values[best];
    if (std::isfinite(spread) && spread <= options.value_tolerance &&
        diameter <= options.point_tolerance) {
      break;
    }
    if (diameter <= 1e-3 * options.point_tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / static_cast<double>(n);
    }

    blend(trial, -1.0, simplex[worst]);
    const double reflected = eval(trial);
    if (reflected < values[best]) {
      blend(second, -2.0, simplex[worst]);
      const double expanded = eval(second);
      if (expanded < reflected) {
        simplex[worst] = second;
        values[worst] = expanded;
      } else {
        simplex[worst] = trial;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }
    const bool outside = reflected < values[worst];
    blend(second, outside ? -0.5 : 0.5, simplex[worst]);
    const double contracted = eval(second);
    if (contracted < (outside ? reflected : values[worst])) {
      simplex[worst] = second;
      values[worst] = contracted;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < n; ++j)
        simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
      values[i] = eval(simplex[i]);
    }
  }

  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  result.point = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace curvdim
