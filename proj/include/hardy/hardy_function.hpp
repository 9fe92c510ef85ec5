// Truncated Taylor representation of H^p functions with a boundary-sample view.
#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "hardy/fft.hpp"
#include "hardy/policy.hpp"

namespace hardy {

/// f(z) = sum_{k < N} a_k z^k.
///
/// `tail_fraction` is metadata left by riesz_project: the share of boundary
/// energy sitting in analytic frequencies >= N that the truncation dropped.
class HardyFunction {
public:
  HardyFunction() = default;

  explicit HardyFunction(std::vector<cplx> coeffs, double tail_fraction = 0.0)
      : coeffs_(std::move(coeffs)), tail_fraction_(tail_fraction) {
    for (const auto& c : coeffs_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw DomainError("HardyFunction coefficients must be finite");
      }
    }
  }

  static HardyFunction zero(std::size_t n) { return HardyFunction(std::vector<cplx>(n, 0.0)); }

  static HardyFunction monomial(std::size_t n, std::size_t k, cplx c = 1.0) {
    if (k >= n) throw BandwidthError("monomial degree exceeds truncation", 0);
    std::vector<cplx> a(n, 0.0);
    a[k] = c;
    return HardyFunction(std::move(a));
  }

  /// Polynomial with the given low-order coefficients, zero-padded to n.
  static HardyFunction polynomial(std::size_t n, std::initializer_list<cplx> low) {
    return polynomial(n, std::span<const cplx>(low.begin(), low.size()));
  }

  static HardyFunction polynomial(std::size_t n, std::span<const cplx> low) {
    if (low.size() > n) throw BandwidthError("polynomial degree exceeds truncation", 0);
    std::vector<cplx> a(n, 0.0);
    std::copy(low.begin(), low.end(), a.begin());
    return HardyFunction(std::move(a));
  }

  /// scale / (1 - alpha z), truncated.
  static HardyFunction geometric(std::size_t n, cplx alpha, cplx scale = 1.0) {
    std::vector<cplx> a(n);
    cplx p = scale;
    for (auto& c : a) {
      c = p;
      p *= alpha;
    }
    return HardyFunction(std::move(a));
  }

  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  const cplx& operator[](std::size_t k) const { return coeffs_[k]; }
  double tail_fraction() const noexcept { return tail_fraction_; }

  /// Index of the last nonzero coefficient, or -1 for the zero function.
  long degree() const noexcept {
    for (auto k = static_cast<long>(coeffs_.size()) - 1; k >= 0; --k) {
      if (coeffs_[static_cast<std::size_t>(k)] != cplx(0.0)) return k;
    }
    return -1;
  }

  /// Coefficient l2 norm, which is the H^2 norm.
  double norm2() const noexcept {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
  }

  cplx evaluate(cplx w) const {
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
    return acc;
  }

  /// l-th derivative by Horner on the differentiated coefficient sequence.
  cplx derivative(cplx w, int l) const {
    if (l < 0) throw DomainError("derivative order must be >= 0");
    const auto n = coeffs_.size();
    cplx acc = 0.0;
    for (auto k = static_cast<long>(n) - 1; k >= l; --k) {
      double falling = 1.0;  // k (k-1) ... (k-l+1)
      for (int j = 0; j < l; ++j) falling *= static_cast<double>(k - j);
      acc = acc * w + falling * coeffs_[static_cast<std::size_t>(k)];
    }
    return acc;
  }

  HardyFunction& operator+=(const HardyFunction& g) {
    check_same(g);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += g.coeffs_[k];
    return *this;
  }
  HardyFunction& operator-=(const HardyFunction& g) {
    check_same(g);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= g.coeffs_[k];
    return *this;
  }
  HardyFunction& operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend HardyFunction operator+(HardyFunction a, const HardyFunction& b) { return a += b; }
  friend HardyFunction operator-(HardyFunction a, const HardyFunction& b) { return a -= b; }
  friend HardyFunction operator*(cplx s, HardyFunction a) { return a *= s; }
  friend HardyFunction operator*(HardyFunction a, cplx s) { return a *= s; }

private:
  void check_same(const HardyFunction& g) const {
    if (g.size() != size()) throw DomainError("HardyFunction truncation degrees differ");
  }

  std::vector<cplx> coeffs_;
  double tail_fraction_ = 0.0;
};

inline double distance(const HardyFunction& f, const HardyFunction& g) { return (f - g).norm2(); }

namespace detail {

inline void require_truncation(const HardyFunction& f, const NumericPolicy& policy) {
  if (f.size() != policy.truncation_degree) {
    throw DomainError("HardyFunction has " + std::to_string(f.size()) +
                      " coefficients, policy expects " + std::to_string(policy.truncation_degree));
  }
}

}  // namespace detail

/// f(exp(2 pi i j / M)) for j = 0..M-1.
inline std::vector<cplx> boundary_values(const HardyFunction& f, std::size_t grid_size) {
  if (f.size() > grid_size) throw BandwidthError("grid smaller than truncation", f.size());
  std::vector<cplx> padded(grid_size, 0.0);
  std::copy(f.coeffs().begin(), f.coeffs().end(), padded.begin());
  std::vector<cplx> out(grid_size);
  fft::backward(padded, out);
  return out;
}

inline std::vector<cplx> boundary_values(const HardyFunction& f, const NumericPolicy& policy) {
  return boundary_values(f, policy.grid_size);
}

/// Fourier coefficients (divided by M) of a boundary-sample vector; index
/// k < M/2 is frequency k, index k >= M/2 is frequency k - M.
inline std::vector<cplx> fourier_coefficients(std::span<const cplx> samples) {
  std::vector<cplx> out(samples.size());
  fft::forward(samples, out);
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (auto& c : out) c *= inv;
  return out;
}

/// P_+ followed by truncation to N coefficients.
inline HardyFunction riesz_project(std::span<const cplx> samples, const NumericPolicy& policy) {
  if (samples.size() != policy.grid_size) {
    throw DomainError("sample vector length " + std::to_string(samples.size()) +
                      " differs from grid size " + std::to_string(policy.grid_size));
  }
  const auto spectrum = fourier_coefficients(samples);
  const std::size_t n = policy.truncation_degree;
  const std::size_t half = samples.size() / 2;
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double e = std::norm(spectrum[k]);
    total += e;
    if (k >= n && k < half) tail += e;
  }
  std::vector<cplx> a(spectrum.begin(), spectrum.begin() + static_cast<long>(n));
  return HardyFunction(std::move(a), total > 0.0 ? tail / total : 0.0);
}

/// Pointwise boundary product then Riesz projection. The sample vector is taken
/// as given; its bandwidth is not checked.
inline HardyFunction multiply(const HardyFunction& f, std::span<const cplx> g_samples,
                              const NumericPolicy& policy) {
  detail::require_truncation(f, policy);
  if (g_samples.size() != policy.grid_size) throw DomainError("sample vector length mismatch");
  auto fs = boundary_values(f, policy);
  for (std::size_t j = 0; j < fs.size(); ++j) fs[j] *= g_samples[j];
  return riesz_project(fs, policy);
}

/// Product of two truncated functions; rejects products whose degree reaches
/// M/2, where the grid can no longer separate positive from negative frequencies.
inline HardyFunction multiply(const HardyFunction& f, const HardyFunction& g,
                              const NumericPolicy& policy) {
  detail::require_truncation(f, policy);
  detail::require_truncation(g, policy);
  const long combined = std::max(0L, f.degree()) + std::max(0L, g.degree());
  if (combined >= static_cast<long>(policy.grid_size / 2)) {
    throw BandwidthError("product bandwidth " + std::to_string(combined) +
                             " exceeds half the grid; use grid_size >= " +
                             std::to_string(next_power_of_two(2 * static_cast<std::size_t>(combined) + 2)),
                         next_power_of_two(2 * static_cast<std::size_t>(combined) + 2));
  }
  const auto gs = boundary_values(g, policy);
  return multiply(f, gs, policy);
}

/// ||f||_p from the M-point boundary quadrature.
inline double norm_p(std::span<const cplx> samples, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("norm_p needs 1 <= p < inf");
  double s = 0.0;
  const auto m = static_cast<double>(samples.size());
  if (p == 2.0) {
    for (const auto& v : samples) s += std::norm(v);
    return std::sqrt(s / m);
  }
  if (p == 1.0) {
    for (const auto& v : samples) s += std::abs(v);
    return s / m;
  }
  if (p == 4.0) {
    for (const auto& v : samples) s += std::norm(v) * std::norm(v);
    return std::sqrt(std::sqrt(s / m));
  }
  for (const auto& v : samples) s += std::pow(std::abs(v), p);
  return std::pow(s / m, 1.0 / p);
}

inline double norm_p(const HardyFunction& f, double p, const NumericPolicy& policy) {
  return norm_p(boundary_values(f, policy), p);
}

/// H^2 pairing <f, g> = sum a_k conj(b_k).
inline cplx inner_product(const HardyFunction& f, const HardyFunction& g) {
  if (f.size() != g.size()) throw DomainError("inner_product: truncation degrees differ");
  cplx s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * std::conj(g[k]);
  return s;
}

}  // namespace hardy
