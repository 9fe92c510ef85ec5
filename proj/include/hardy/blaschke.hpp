// Finite Blaschke products b(z) = c * prod_k ((lambda_k - z) / (1 - conj(lambda_k) z))^{d_k}.
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hardy/policy.hpp"

namespace hardy {

struct BlaschkeZero {
  cplx point;
  int multiplicity = 1;
};

/// Finite Blaschke product with an optional unimodular constant `phase`.
///
/// The factor convention is b_lambda(z) = (lambda - z) / (1 - conj(lambda) z),
/// so the product with a single zero at 0 is -z. `monomial(d)` builds z^d by
/// choosing phase = (-1)^d. Zeros closer than `Tolerances::merge_radius` are
/// merged into one zero with summed multiplicity. Immutable after construction.
class BlaschkeProduct {
public:
  static constexpr int kMaxDerivativeOrder = 64;

  explicit BlaschkeProduct(std::vector<BlaschkeZero> zeros, cplx phase = 1.0,
                           const Tolerances& tol = {})
      : phase_(phase), tol_(tol) {
    if (zeros.empty()) throw DomainError("Blaschke product needs at least one zero");
    if (std::abs(std::abs(phase) - 1.0) > tol.unimodularity) {
      throw DomainError("Blaschke phase must be unimodular");
    }
    for (const auto& z : zeros) {
      if (!std::isfinite(z.point.real()) || !std::isfinite(z.point.imag())) {
        throw DomainError("Blaschke zero is not finite");
      }
      if (z.multiplicity < 1) throw DomainError("zero multiplicity must be >= 1");
      if (std::abs(z.point) >= 1.0 - tol.boundary_margin) {
        throw DomainError("zero too close to the unit circle: |lambda| = " +
                          std::to_string(std::abs(z.point)));
      }
      auto same = std::find_if(zeros_.begin(), zeros_.end(), [&](const BlaschkeZero& w) {
        return std::abs(w.point - z.point) <= tol.merge_radius;
      });
      if (same != zeros_.end()) {
        same->multiplicity += z.multiplicity;
      } else {
        zeros_.push_back(z);
      }
    }
    for (const auto& z : zeros_) degree_ += z.multiplicity;
  }

  /// b(z) = z^d.
  static BlaschkeProduct monomial(int d, const Tolerances& tol = {}) {
    if (d < 1) throw DomainError("monomial degree must be >= 1");
    return BlaschkeProduct({{0.0, d}}, (d % 2 == 0) ? 1.0 : -1.0, tol);
  }

  std::span<const BlaschkeZero> zeros() const noexcept { return zeros_; }
  int degree() const noexcept { return degree_; }
  cplx phase() const noexcept { return phase_; }
  const Tolerances& tolerances() const noexcept { return tol_; }

  /// True when b = c z^d, where T_{conj b} is a block shift of coefficients.
  bool is_monomial() const noexcept {
    return zeros_.size() == 1 && zeros_.front().point == cplx(0.0);
  }

  /// The constant c with b(z) = c z^d; only meaningful when is_monomial().
  cplx monomial_constant() const noexcept {
    return (degree_ % 2 == 0) ? phase_ : -phase_;
  }

  /// Single factor b_lambda(w) for the i-th distinct zero (no multiplicity).
  cplx factor(std::size_t i, cplx w) const {
    const cplx lam = zeros_.at(i).point;
    const cplx den = 1.0 - std::conj(lam) * w;
    if (std::abs(den) < tol_.pole_guard) throw DomainError("evaluation at a pole of b");
    return (lam - w) / den;
  }

  cplx operator()(cplx w) const { return evaluate(w); }

  cplx evaluate(cplx w) const {
    check_disk(w);
    cplx value = phase_;
    for (std::size_t i = 0; i < zeros_.size(); ++i) {
      value *= ipow(factor(i, w), zeros_[i].multiplicity);
    }
    return value;
  }

  /// (b / b_i)(w): the product with one factor of the i-th zero removed.
  cplx evaluate_without(std::size_t i, cplx w) const {
    check_disk(w);
    cplx value = phase_;
    for (std::size_t j = 0; j < zeros_.size(); ++j) {
      const int mult = zeros_[j].multiplicity - (j == i ? 1 : 0);
      if (mult > 0) value *= ipow(factor(j, w), mult);
    }
    return value;
  }

  /// order-th complex derivative at an interior point, from the exact Taylor
  /// expansion of each factor multiplied out with the product rule.
  cplx derivative(cplx w, int order) const {
    if (order < 0) throw DomainError("derivative order must be >= 0");
    if (order > kMaxDerivativeOrder) {
      throw DomainError("derivative order above " + std::to_string(kMaxDerivativeOrder));
    }
    if (std::abs(w) >= 1.0) throw DomainError("derivative needs |w| < 1");
    const auto n = static_cast<std::size_t>(order) + 1;
    std::vector<cplx> total(n, 0.0);
    total[0] = phase_;
    for (const auto& z : zeros_) {
      const auto series = factor_taylor(z.point, w, n);
      for (int m = 0; m < z.multiplicity; ++m) total = truncated_product(total, series);
    }
    double fact = 1.0;
    for (int k = 2; k <= order; ++k) fact *= k;
    return fact * total[static_cast<std::size_t>(order)];
  }

  /// Values b(exp(2 pi i j / M)) for j = 0..M-1.
  std::vector<cplx> boundary_samples(std::size_t grid_size) const {
    if (grid_size < 8 || (grid_size & (grid_size - 1)) != 0) {
      throw DomainError("grid size must be a power of two >= 8");
    }
    std::vector<cplx> out(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) {
      out[j] = evaluate(unit_root(j, grid_size));
    }
    return out;
  }

  static cplx unit_root(std::size_t j, std::size_t m) {
    return std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m));
  }

private:
  void check_disk(cplx w) const {
    if (std::abs(w) > 1.0 + tol_.disk_slack) {
      throw DomainError("evaluation outside the closed unit disk");
    }
  }

  static cplx ipow(cplx x, int n) {
    cplx r = 1.0;
    for (int k = 0; k < n; ++k) r *= x;
    return r;
  }

  // Taylor coefficients in h of (lambda - w - h) / (A - conj(lambda) h),
  // A = 1 - conj(lambda) w:  c_j = (lambda - w) r^j / A - r^{j-1} / A,  r = conj(lambda) / A.
  std::vector<cplx> factor_taylor(cplx lam, cplx w, std::size_t n) const {
    const cplx a = 1.0 - std::conj(lam) * w;
    if (std::abs(a) < tol_.pole_guard) throw DomainError("evaluation at a pole of b");
    const cplx ratio = std::conj(lam) / a;
    std::vector<cplx> c(n);
    cplx prev = 0.0;  // r^{j-1}
    cplx pw = 1.0;    // r^j
    for (std::size_t j = 0; j < n; ++j) {
      c[j] = ((lam - w) * pw - prev) / a;
      prev = pw;
      pw *= ratio;
    }
    return c;
  }

  static std::vector<cplx> truncated_product(const std::vector<cplx>& a,
                                             const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }

  std::vector<BlaschkeZero> zeros_;
  cplx phase_;
  Tolerances tol_;
  int degree_ = 0;
};

}  // namespace hardy
