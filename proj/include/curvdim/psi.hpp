// Concave test functions ψ on (0, ∞) with first and second derivatives.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace curvdim {

/// A function on the positive reals together with ψ' and ψ''.
///
/// Construction checks both derivatives against central finite differences at
/// x in {0.1, 0.5, 1, 2, 10} and, when the function is declared concave, that
/// ψ'' <= 1e-12 there. A mismatch throws; downstream formulas trust ψ'.
/// The callables must be pure and reentrant.
class PsiFunction {
public:
  using Fn = std::function<double(double)>;

  PsiFunction(std::string name, Fn eval, Fn deriv1, Fn deriv2, bool concave)
      : impl_(std::make_shared<const Impl>(Impl{std::move(name), std::move(eval),
                                                std::move(deriv1), std::move(deriv2), concave})) {
    self_check();
  }

  const std::string& name() const noexcept { return impl_->name; }
  bool concave() const noexcept { return impl_->concave; }

  double operator()(double x) const { return impl_->eval(x); }
  double deriv1(double x) const { return impl_->deriv1(x); }
  double deriv2(double x) const { return impl_->deriv2(x); }

  double value_at_one() const { return impl_->eval(1.0); }
  double deriv1_at_one() const { return impl_->deriv1(1.0); }
  double deriv2_at_one() const { return impl_->deriv2(1.0); }

  static constexpr std::array<double, 5> sample_points{0.1, 0.5, 1.0, 2.0, 10.0};

private:
  struct Impl {
    std::string name;
    Fn eval;
    Fn deriv1;
    Fn deriv2;
    bool concave;
  };

  static bool close(double analytic, double numeric) {
    return std::abs(analytic - numeric) <= 1e-6 * std::max(1.0, std::abs(analytic));
  }

  void self_check() const {
    for (double x : sample_points) {
      const double h = 1e-5 * x;
      const double fd1 = ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
      const double fd2 = (deriv1(x + h) - deriv1(x - h)) / (2.0 * h);
      if (!close(deriv1(x), fd1)) {
        throw std::invalid_argument("psi '" + name() + "': first derivative mismatch at x=" +
                                    std::to_string(x));
      }
      if (!close(deriv2(x), fd2)) {
        throw std::invalid_argument("psi '" + name() + "': second derivative mismatch at x=" +
                                    std::to_string(x));
      }
      if (concave() && deriv2(x) > 1e-12) {
        throw std::invalid_argument("psi '" + name() + "' declared concave but psi''(" +
                                    std::to_string(x) + ") > 0");
      }
    }
  }

  std::shared_ptr<const Impl> impl_;
};

namespace psi {

inline PsiFunction log() {
  return {"log", [](double x) { return std::log(x); }, [](double x) { return 1.0 / x; },
          [](double x) { return -1.0 / (x * x); }, true};
}

inline PsiFunction sqrt() {
  return {"sqrt", [](double x) { return std::sqrt(x); },
          [](double x) { return 0.5 / std::sqrt(x); },
          [](double x) { return -0.25 / (x * std::sqrt(x)); }, true};
}

inline PsiFunction identity() {
  return {"id", [](double x) { return x; }, [](double) { return 1.0; },
          [](double) { return 0.0; }, true};
}

/// x^alpha for alpha in (0, 1).
inline PsiFunction power(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("pow: alpha must lie in (0, 1)");
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "pow:%.17g", alpha);
  return {buf, [alpha](double x) { return std::pow(x, alpha); },
          [alpha](double x) { return alpha * std::pow(x, alpha - 1.0); },
          [alpha](double x) { return alpha * (alpha - 1.0) * std::pow(x, alpha - 2.0); }, true};
}

/// Parses `log`, `sqrt`, `id`, or `pow:<alpha>`.
inline PsiFunction by_name(const std::string& name) {
  if (name == "log") return log();
  if (name == "sqrt") return sqrt();
  if (name == "id") return identity();
  if (name.rfind("pow:", 0) == 0) {
    const std::string tail = name.substr(4);
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(tail, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tail.size()) {
      throw std::invalid_argument("malformed psi name '" + name + "'");
    }
    return power(alpha);
  }
  throw std::invalid_argument("unknown psi '" + name + "' (expected log, sqrt, id, pow:<alpha>)");
}

/// ψ + c; the ψ-operators and ψ̃ are invariant under this shift.
inline PsiFunction shifted(const PsiFunction& p, double c) {
  return {p.name() + "+const", [p, c](double x) { return p(x) + c; },
          [p](double x) { return p.deriv1(x); }, [p](double x) { return p.deriv2(x); },
          p.concave()};
}

}  // namespace psi

/// ψ̄(x) = ψ'(1)(x - 1) - (ψ(x) - ψ(1)). Vanishes with its derivative at 1 and
/// is convex (hence >= 0) whenever ψ is concave.
inline PsiFunction psi_bar(const PsiFunction& p) {
  const double slope = p.deriv1_at_one();
  const double base = p.value_at_one();
  return {"bar(" + p.name() + ")",
          [p, slope, base](double x) { return slope * (x - 1.0) - (p(x) - base); },
          [p, slope](double x) { return slope - p.deriv1(x); },
          [p](double x) { return -p.deriv2(x); }, false};
}

}  // namespace curvdim
