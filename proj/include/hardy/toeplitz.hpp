// The anti-analytic Toeplitz operator T = T_{conj b}, its right inverse R f = b f,
// and the orthogonal decomposition f ~ sum_k f_k b^k built from them.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <optional>
#include <vector>

#include "hardy/blaschke.hpp"
#include "hardy/hardy_function.hpp"
#include "hardy/model_space.hpp"

namespace hardy {

/// T and R for one Blaschke product on one grid. Boundary samples of b are
/// computed once; the object is immutable and safe to share between threads.
class ToeplitzPair {
public:
  ToeplitzPair(BlaschkeProduct b, const NumericPolicy& policy)
      : product_(std::move(b)), policy_(policy) {
    policy_.validate();
    samples_ = product_.boundary_samples(policy_.grid_size);
    conj_samples_.resize(samples_.size());
    for (std::size_t j = 0; j < samples_.size(); ++j) conj_samples_[j] = std::conj(samples_[j]);
  }

  const BlaschkeProduct& product() const noexcept { return product_; }
  const NumericPolicy& policy() const noexcept { return policy_; }
  std::span<const cplx> samples() const noexcept { return samples_; }
  std::span<const cplx> conj_samples() const noexcept { return conj_samples_; }

  /// T f = P_+(conj(b) f). Uses the block shift when b = c z^d.
  HardyFunction T(const HardyFunction& f) const {
    return product_.is_monomial() ? T_shift(f) : T_grid(f);
  }

  /// Grid path: boundary multiplication by conj(b) then Riesz projection.
  HardyFunction T_grid(const HardyFunction& f) const {
    detail::require_truncation(f, policy_);
    return multiply(f, conj_samples_, policy_);
  }

  /// Exact coefficient shift for b = c z^d: (T f)_k = conj(c) a_{k+d}.
  HardyFunction T_shift(const HardyFunction& f) const {
    if (!product_.is_monomial()) throw DomainError("T_shift needs b = c z^d");
    detail::require_truncation(f, policy_);
    const auto d = static_cast<std::size_t>(product_.degree());
    const cplx c = std::conj(product_.monomial_constant());
    std::vector<cplx> a(f.size(), 0.0);
    for (std::size_t k = 0; k + d < f.size(); ++k) a[k] = c * f[k + d];
    return HardyFunction(std::move(a));
  }

  /// R f = b f. Throws BandwidthError when the truncation would drop more
  /// than residual_tolerance * reference_norm of the product.
  HardyFunction R(const HardyFunction& f, std::optional<double> reference_norm = {}) const {
    detail::require_truncation(f, policy_);
    const double ref = reference_norm.value_or(f.norm2());
    if (product_.is_monomial()) {
      const auto d = static_cast<std::size_t>(product_.degree());
      const cplx c = product_.monomial_constant();
      std::vector<cplx> a(f.size(), 0.0);
      double dropped = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (k + d < f.size()) {
          a[k + d] = c * f[k];
        } else {
          dropped += std::norm(f[k]);
        }
      }
      if (std::sqrt(dropped) > policy_.residual_tolerance * ref) {
        throw BandwidthError("R: b f exceeds the truncation degree; raise truncation_degree to " +
                                 std::to_string(f.degree() + static_cast<long>(d) + 1),
                             next_power_of_two(4 * static_cast<std::size_t>(f.degree() + static_cast<long>(d) + 1)));
      }
      return HardyFunction(std::move(a));
    }
    auto out = multiply(f, samples_, policy_);
    const double total = boundary_energy(f);
    if (std::sqrt(out.tail_fraction() * total) > policy_.residual_tolerance * ref) {
      throw BandwidthError("R: b f has significant Taylor mass beyond the truncation degree " +
                               std::to_string(policy_.truncation_degree),
                           2 * policy_.grid_size);
    }
    return out;
  }

  HardyFunction T_power(HardyFunction f, int k) const {
    for (int i = 0; i < k; ++i) f = T(f);
    return f;
  }

  HardyFunction R_power(HardyFunction f, int k, std::optional<double> reference_norm = {}) const {
    const double ref = reference_norm.value_or(f.norm2());
    for (int i = 0; i < k; ++i) f = R(f, ref);
    return f;
  }

  /// P = I - R T, the orthogonal projection onto K_b.
  HardyFunction P(const HardyFunction& f, std::optional<double> reference_norm = {}) const {
    const double ref = reference_norm.value_or(f.norm2());
    return f - R(T(f), ref);
  }

  /// P_k f = R^k T^k f - R^{k+1} T^{k+1} f = b^k P T^k f.
  HardyFunction Pk(const HardyFunction& f, int k) const {
    if (k < 0) throw DomainError("P_k needs k >= 0");
    const double ref = f.norm2();
    const auto tk = T_power(f, k);
    return R_power(P(tk, ref), k, ref);
  }

private:
  static double boundary_energy(const HardyFunction& f) {
    double s = 0.0;
    for (const auto& c : f.coeffs()) s += std::norm(c);
    return s;
  }

  BlaschkeProduct product_;
  NumericPolicy policy_;
  std::vector<cplx> samples_;
  std::vector<cplx> conj_samples_;
};

inline HardyFunction apply_T(const BlaschkeProduct& b, const HardyFunction& f,
                             const NumericPolicy& policy) {
  return ToeplitzPair(b, policy).T(f);
}

inline HardyFunction apply_R(const BlaschkeProduct& b, const HardyFunction& f,
                             const NumericPolicy& policy) {
  return ToeplitzPair(b, policy).R(f);
}

inline HardyFunction project_Pk(const BlaschkeProduct& b, const HardyFunction& f, int k,
                                const NumericPolicy& policy) {
  return ToeplitzPair(b, policy).Pk(f, k);
}

// ---------------------------------------------------------------------------
// Boundary-integral path.
//
// Functions defined by Cauchy-type integrals over the circle are evaluated at
// M interior points z_j = rho * w^j (w = exp(2 pi i / M)) by the M-point
// trapezoid rule, and their Taylor coefficients are read off by a DFT on that
// circle: a_n = rho^{-n} (1/M) sum_j F(z_j) w^{-jn}. The radius is fixed by
// rho^M = 1e-16, so trapezoid aliasing sits at machine precision and the
// reconstruction loses about 16 N / M digits to the rho^{-n} factor.

struct InteriorGrid {
  double radius = 0.0;
  double amplification = 1.0;   // rho^{-N}
  double error_estimate = 0.0;  // rough roundoff bound on reconstructed coefficients
  bool under_resolved = false;  // error_estimate above 1e-8
};

inline InteriorGrid interior_grid(const NumericPolicy& policy) {
  InteriorGrid g;
  const auto m = static_cast<double>(policy.grid_size);
  g.radius = std::exp(std::log(1e-16) / m);
  g.amplification = std::pow(g.radius, -static_cast<double>(policy.truncation_degree));
  g.error_estimate = DBL_EPSILON * g.amplification / (1.0 - g.radius);
  g.under_resolved = g.error_estimate > 1e-8;
  return g;
}

namespace detail {

/// (1/M) sum_t g(zeta_t) / (1 - z_j conj(zeta_t)) at z_j = rho w^j, as a circular convolution.
inline std::vector<cplx> cauchy_interior(std::span<const cplx> g, double rho) {
  const std::size_t m = g.size();
  std::vector<cplx> kern(m);
  for (std::size_t s = 0; s < m; ++s) kern[s] = 1.0 / (1.0 - rho * BlaschkeProduct::unit_root(s, m));
  std::vector<cplx> gf(m), kf(m), prod(m), out(m);
  fft::forward(g, gf);
  fft::forward(kern, kf);
  for (std::size_t n = 0; n < m; ++n) prod[n] = gf[n] * kf[n];
  fft::backward(prod, out);
  const double scale = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
  for (auto& v : out) v *= scale;
  return out;
}

/// Taylor coefficients 0..N-1 from values on the circle |z| = rho.
inline HardyFunction reconstruct_from_circle(std::span<const cplx> values, double rho,
                                             std::size_t n) {
  const auto spec = fourier_coefficients(values);
  std::vector<cplx> a(n);
  double scale = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = spec[k] * scale;
    scale /= rho;
  }
  return HardyFunction(std::move(a));
}

inline std::vector<cplx> interior_values(const BlaschkeProduct& b, double rho, std::size_t m) {
  std::vector<cplx> out(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = b.evaluate(rho * BlaschkeProduct::unit_root(j, m));
  return out;
}

}  // namespace detail

struct IntegralProjection {
  HardyFunction value;
  InteriorGrid grid;
};

/// b(z)^k f_k(z) with f_k(z) = int conj(b)^k f (1 - b(z) conj(b)) / (1 - z e^{-i theta}) dm,
/// evaluated by quadrature at interior points.
inline IntegralProjection project_Pk_integral(const BlaschkeProduct& b, const HardyFunction& f,
                                              int k, const NumericPolicy& policy) {
  if (k < 0) throw DomainError("P_k needs k >= 0");
  detail::require_truncation(f, policy);
  const auto grid = interior_grid(policy);
  const auto m = policy.grid_size;
  const auto bs = b.boundary_samples(m);
  const auto fs = boundary_values(f, policy);
  std::vector<cplx> g(m), h(m);
  for (std::size_t t = 0; t < m; ++t) {
    cplx w = 1.0;
    for (int i = 0; i < k; ++i) w *= std::conj(bs[t]);
    g[t] = w * fs[t];
    h[t] = w * std::conj(bs[t]) * fs[t];
  }
  const auto cg = detail::cauchy_interior(g, grid.radius);
  const auto ch = detail::cauchy_interior(h, grid.radius);
  const auto bz = detail::interior_values(b, grid.radius, m);
  std::vector<cplx> vals(m);
  for (std::size_t j = 0; j < m; ++j) {
    cplx bk = 1.0;
    for (int i = 0; i < k; ++i) bk *= bz[j];
    vals[j] = bk * (cg[j] - bz[j] * ch[j]);
  }
  return {detail::reconstruct_from_circle(vals, grid.radius, policy.truncation_degree), grid};
}

// ---------------------------------------------------------------------------
// Decomposition f ~ sum_k f_k b^k.

struct Decomposition {
  std::vector<Eigen::VectorXcd> components;  // orthonormal K_b coordinates of f_0..f_K
  int truncation_index = 0;                  // K
  double residual_norm = 0.0;                // ||T^{K+1} f||
  HardyFunction residual;                    // T^{K+1} f

  /// Default depth: smallest k with ||T^{k+1} f|| < residual_tolerance ||f||, capped at N/d.
  static int default_depth(const ToeplitzPair& op, const HardyFunction& f) {
    const auto& policy = op.policy();
    const int cap = static_cast<int>(policy.truncation_degree) / op.product().degree();
    const double target = policy.residual_tolerance * f.norm2();
    HardyFunction v = op.T(f);
    for (int k = 0; k < cap; ++k) {
      if (v.norm2() < target) return k;
      v = op.T(v);
    }
    return cap;
  }
};

/// f_k = P T^k f in K_b coordinates for k = 0..K, residual T^{K+1} f.
inline Decomposition decompose(const ModelSpaceBasis& basis, const HardyFunction& f,
                               std::optional<int> depth = {}) {
  const ToeplitzPair op(basis.product(), basis.policy());
  const int k_max = depth ? *depth : Decomposition::default_depth(op, f);
  if (k_max < 0) throw DomainError("decomposition depth must be >= 0");
  Decomposition out;
  out.truncation_index = k_max;
  const double ref = f.norm2();
  HardyFunction v = f;
  for (int k = 0; k <= k_max; ++k) {
    HardyFunction next = op.T(v);
    const HardyFunction fk = v - op.R(next, ref);
    out.components.push_back(basis.coordinates(fk));
    v = std::move(next);
  }
  out.residual_norm = v.norm2();
  out.residual = std::move(v);
  return out;
}

inline Decomposition decompose(const BlaschkeProduct& b, const HardyFunction& f,
                               const NumericPolicy& policy, std::optional<int> depth = {}) {
  return decompose(ModelSpaceBasis(b, policy), f, depth);
}

/// sum_{k=m+1}^{K} f_k b^{k-m} + b^{K+1-m} T^{K+1} f, evaluated by Horner in R.
inline HardyFunction tail_sum(const ModelSpaceBasis& basis, const Decomposition& dec, int m) {
  const ToeplitzPair op(basis.product(), basis.policy());
  const int k_max = dec.truncation_index;
  double ref = dec.residual_norm;
  for (const auto& c : dec.components) ref = std::hypot(ref, c.norm());
  HardyFunction acc = dec.residual;
  for (int k = k_max; k > m; --k) {
    acc = basis.function(dec.components[static_cast<std::size_t>(k)]) + op.R(acc, ref);
  }
  if (m > k_max) return op.T_power(acc, m - k_max);
  return op.R(acc, ref);
}

/// sum_{k <= K} f_k b^k + b^{K+1} residual.
inline HardyFunction reassemble(const ModelSpaceBasis& basis, const Decomposition& dec) {
  const ToeplitzPair op(basis.product(), basis.policy());
  double ref = dec.residual_norm;
  for (const auto& c : dec.components) ref = std::hypot(ref, c.norm());
  HardyFunction acc = dec.residual;
  for (int k = dec.truncation_index; k >= 0; --k) {
    acc = basis.function(dec.components[static_cast<std::size_t>(k)]) + op.R(acc, ref);
  }
  return acc;
}

/// | ||f||^2 - sum ||f_k||^2 - residual^2 | / ||f||^2.
inline double parseval_defect(const HardyFunction& f, const Decomposition& dec) {
  const double total = f.norm2() * f.norm2();
  double parts = dec.residual_norm * dec.residual_norm;
  for (const auto& c : dec.components) parts += c.squaredNorm();
  return total > 0.0 ? std::abs(total - parts) / total : std::abs(parts);
}

// ---------------------------------------------------------------------------
// Remainders r_m = T^m f - f_m = sum_{k>m} f_k b^{k-m}.

/// Which printed integrand is used for the boundary-integral path of r_m.
enum class RemainderKernel {
  /// b(z) int f conj(b)^{m+1} / (1 - z e^{-i theta}) dm, by FFT convolution.
  conjugate_power,
  /// b(z) int f e^{i theta} / (b^{m+1} (e^{i theta} - z)) dm, by direct summation.
  reciprocal_power,
};

inline HardyFunction remainder_integral(const BlaschkeProduct& b, const HardyFunction& f, int m,
                                        const NumericPolicy& policy,
                                        RemainderKernel form = RemainderKernel::conjugate_power) {
  if (m < 0) throw DomainError("remainder needs m >= 0");
  detail::require_truncation(f, policy);
  const auto grid = interior_grid(policy);
  const auto mm = policy.grid_size;
  const auto bs = b.boundary_samples(mm);
  const auto fs = boundary_values(f, policy);
  const auto bz = detail::interior_values(b, grid.radius, mm);
  std::vector<cplx> vals(mm);
  if (form == RemainderKernel::conjugate_power) {
    std::vector<cplx> g(mm);
    for (std::size_t t = 0; t < mm; ++t) {
      cplx w = 1.0;
      for (int i = 0; i <= m; ++i) w *= std::conj(bs[t]);
      g[t] = fs[t] * w;
    }
    const auto cg = detail::cauchy_interior(g, grid.radius);
    for (std::size_t j = 0; j < mm; ++j) vals[j] = bz[j] * cg[j];
  } else {
    std::vector<cplx> g(mm), zeta(mm);
    for (std::size_t t = 0; t < mm; ++t) {
      zeta[t] = BlaschkeProduct::unit_root(t, mm);
      cplx w = 1.0;
      for (int i = 0; i <= m; ++i) w *= bs[t];
      g[t] = fs[t] * zeta[t] / w;
    }
    const double inv = 1.0 / static_cast<double>(mm);
    for (std::size_t j = 0; j < mm; ++j) {
      const cplx z = grid.radius * zeta[j];
      cplx s = 0.0;
      for (std::size_t t = 0; t < mm; ++t) s += g[t] / (zeta[t] - z);
      vals[j] = bz[j] * s * inv;
    }
  }
  return detail::reconstruct_from_circle(vals, grid.radius, policy.truncation_degree);
}

struct RemainderResult {
  HardyFunction operator_path;  // T^m f - f_m
  HardyFunction integral_path;  // boundary integral
  HardyFunction tail_sum;       // sum_{k>m} f_k b^{k-m}
  double max_disagreement = 0.0;
};

inline constexpr double kRemainderConsistencyLimit = 1e-6;

inline RemainderResult remainder(const ModelSpaceBasis& basis, const HardyFunction& f, int m,
                                 const Decomposition& dec) {
  if (m < 0) throw DomainError("remainder needs m >= 0");
  const auto& policy = basis.policy();
  const ToeplitzPair op(basis.product(), policy);
  RemainderResult out;
  const HardyFunction tm = op.T_power(f, m);
  const auto fm = basis.coordinates(tm - op.R(op.T(tm), f.norm2()));
  out.operator_path = tm - basis.function(fm);
  out.integral_path = remainder_integral(basis.product(), f, m, policy);
  out.tail_sum = tail_sum(basis, dec, m);
  out.max_disagreement = std::max({distance(out.operator_path, out.integral_path),
                                   distance(out.operator_path, out.tail_sum),
                                   distance(out.integral_path, out.tail_sum)});
  if (out.max_disagreement > kRemainderConsistencyLimit * std::max(1.0, f.norm2())) {
    throw ConsistencyError("remainder paths disagree by " + std::to_string(out.max_disagreement) +
                           " (grid too coarse for the truncation?)");
  }
  return out;
}

inline RemainderResult remainder(const ModelSpaceBasis& basis, const HardyFunction& f, int m) {
  const auto dec = decompose(basis, f, std::max(m, Decomposition::default_depth(
                                                       ToeplitzPair(basis.product(), basis.policy()), f)));
  return remainder(basis, f, m, dec);
}

// ---------------------------------------------------------------------------
// Wold identities for V = R, V* = T.

struct WoldOptions {
  int max_power = 200;
  std::vector<int> partial_sum_depths{10, 50, 100, 200};
  int isometry_checks = 8;  // n <= this: compare ||R^n T^n f|| with ||T^n f||
};

struct WoldReport {
  std::size_t samples = 0;
  double idempotence_residual = 0.0;     // max ||P P f - P f|| / ||f||
  double range_orthogonality = 0.0;      // max |<P f, b z^j>| / ||f|| = max |(T P f)_j| / ||f||
  double rt_isometry_defect = 0.0;       // max | ||R^n T^n f|| - ||T^n f|| | / ||f||
  bool rt_norms_decreasing = true;       // ||R^n T^n f|| non-increasing (1e-12 slack)
  std::vector<double> t_norms;           // worst-case ||T^n f|| / ||f|| per n
  int first_below_1e6 = -1;              // first n with every ||T^n f|| / ||f|| < 1e-6
  std::vector<std::pair<int, double>> partial_sum_errors;  // (J, max ||sum_{j<=J} R^j P T^j f - f|| / ||f||)
};

inline WoldReport wold_checks(const BlaschkeProduct& b, std::span<const HardyFunction> sample_f,
                              const NumericPolicy& policy, const WoldOptions& opt = {}) {
  if (sample_f.empty()) throw DomainError("wold_checks needs at least one sample");
  const ToeplitzPair op(b, policy);
  WoldReport rep;
  rep.samples = sample_f.size();
  rep.t_norms.assign(static_cast<std::size_t>(opt.max_power) + 1, 0.0);
  for (auto j : opt.partial_sum_depths) rep.partial_sum_errors.emplace_back(j, 0.0);

  for (const auto& f : sample_f) {
    const double nf = f.norm2();
    if (nf == 0.0) continue;
    const auto pf = op.P(f);
    rep.idempotence_residual = std::max(rep.idempotence_residual, distance(op.P(pf, nf), pf) / nf);
    const auto tpf = op.T(pf);
    double worst = 0.0;
    for (const auto& c : tpf.coeffs()) worst = std::max(worst, std::abs(c));
    rep.range_orthogonality = std::max(rep.range_orthogonality, worst / nf);

    std::vector<HardyFunction> iterates;
    iterates.reserve(static_cast<std::size_t>(opt.max_power) + 1);
    iterates.push_back(f);
    for (int n = 1; n <= opt.max_power; ++n) iterates.push_back(op.T(iterates.back()));
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= opt.max_power; ++n) {
      const double tn = iterates[static_cast<std::size_t>(n)].norm2();
      rep.t_norms[static_cast<std::size_t>(n)] = std::max(rep.t_norms[static_cast<std::size_t>(n)], tn / nf);
      if (n <= opt.isometry_checks) {
        const double rt = op.R_power(iterates[static_cast<std::size_t>(n)], n, nf).norm2();
        rep.rt_isometry_defect = std::max(rep.rt_isometry_defect, std::abs(rt - tn) / nf);
        if (rt > prev + 1e-12 * nf) rep.rt_norms_decreasing = false;
        prev = rt;
      } else if (tn > prev + 1e-12 * nf) {
        rep.rt_norms_decreasing = false;
      }
      if (n > opt.isometry_checks) prev = tn;
    }
    // sum_{j<=J} R^j P T^j f by Horner: g <- P T^j f + R g.
    for (auto& [depth, err] : rep.partial_sum_errors) {
      const int jmax = std::min(depth, opt.max_power);
      HardyFunction g = op.P(iterates[static_cast<std::size_t>(jmax)], nf);
      for (int j = jmax - 1; j >= 0; --j) g = op.P(iterates[static_cast<std::size_t>(j)], nf) + op.R(g, nf);
      err = std::max(err, distance(g, f) / nf);
    }
  }
  for (int n = 0; n <= opt.max_power; ++n) {
    if (rep.t_norms[static_cast<std::size_t>(n)] < 1e-6) {
      rep.first_below_1e6 = n;
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// H^1 norm growth of e_r = 1 / (1 - r z) as r -> 1.

struct KernelGrowthRow {
  double r = 0.0;
  double norm1 = 0.0;
  std::optional<double> ratio;  // norm1 / log(1/(1-r)); absent at r = 0
  std::size_t grid = 0;         // quadrature points used
};

struct KernelGrowthTable {
  std::vector<KernelGrowthRow> rows;
  bool strictly_increasing = true;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
};

/// int dm / |1 - r e^{i theta}| by the periodic trapezoid rule with grid doubling.
inline KernelGrowthRow h1_kernel_norm(double r) {
  if (!(r >= 0.0) || r > 1.0 - 1e-6) throw DomainError("h1 kernel radius must lie in [0, 1 - 1e-6]");
  auto trapezoid = [r](std::size_t m) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
      s += 1.0 / std::sqrt(1.0 + r * r - 2.0 * r * std::cos(th));
    }
    return s / static_cast<double>(m);
  };
  std::size_t m = 64;
  double prev = trapezoid(m);
  constexpr std::size_t kMaxGrid = std::size_t{1} << 24;
  while (true) {
    const double next = trapezoid(2 * m);
    m *= 2;
    if (std::abs(next - prev) <= 1e-13 * next) {
      prev = next;
      break;
    }
    if (m >= kMaxGrid) {
      if (std::abs(next - prev) > 1e-4 * next) {
        throw ConsistencyError("h1 kernel quadrature under-resolved at r = " + std::to_string(r));
      }
      prev = next;
      break;
    }
    prev = next;
  }
  KernelGrowthRow row;
  row.r = r;
  row.norm1 = prev;
  row.grid = m;
  if (r > 0.0) row.ratio = prev / std::log(1.0 / (1.0 - r));
  return row;
}

inline KernelGrowthTable h1_kernel_growth_witness(std::span<const double> r_values) {
  KernelGrowthTable tab;
  double prev_r = -1.0;
  for (double r : r_values) {
    if (r <= prev_r) throw DomainError("r values must be strictly increasing");
    prev_r = r;
    tab.rows.push_back(h1_kernel_norm(r));
  }
  bool first_ratio = true;
  for (std::size_t i = 0; i < tab.rows.size(); ++i) {
    if (i > 0 && !(tab.rows[i].norm1 > tab.rows[i - 1].norm1)) tab.strictly_increasing = false;
    if (tab.rows[i].ratio) {
      const double q = *tab.rows[i].ratio;
      tab.ratio_min = first_ratio ? q : std::min(tab.ratio_min, q);
      tab.ratio_max = first_ratio ? q : std::max(tab.ratio_max, q);
      first_ratio = false;
    }
  }
  return tab;
}

}  // namespace hardy
