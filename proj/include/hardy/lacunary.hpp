// Lacunary decompositions f ~ sum_k f_k b^{n_k} and the hypothesis/diagnostic checks on them.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "hardy/model_space.hpp"
#include "hardy/toeplitz.hpp"

namespace hardy {

/// Exponents n_0 < n_1 < ... with one K_b coordinate vector per exponent.
struct LacunarySpec {
  BlaschkeProduct product;
  std::vector<long> exponents;
  std::vector<Eigen::VectorXcd> components;
  /// Zero components are only accepted when this is set.
  bool zeros_flagged = false;

  std::size_t count() const noexcept { return exponents.size(); }

  void validate() const {
    if (exponents.size() != components.size()) {
      throw DomainError("lacunary spec: " + std::to_string(exponents.size()) + " exponents but " +
                        std::to_string(components.size()) + " components");
    }
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      if (exponents[k] < 1) throw DomainError("lacunary exponents must be positive");
      if (k > 0 && exponents[k] <= exponents[k - 1]) {
        throw DomainError("lacunary exponents must be strictly increasing");
      }
      if (components[k].size() != product.degree()) {
        throw DomainError("component " + std::to_string(k) + " has dimension " +
                          std::to_string(components[k].size()) + ", expected " +
                          std::to_string(product.degree()));
      }
      if (!components[k].allFinite()) throw DomainError("component " + std::to_string(k) + " is not finite");
      if (!zeros_flagged && components[k].isZero(0.0)) {
        throw DomainError("component " + std::to_string(k) + " is zero; set zeros_flagged to allow it");
      }
    }
  }
};

namespace detail {

inline std::size_t terms_within_degree(const LacunarySpec& spec, std::size_t n) {
  const long d = spec.product.degree();
  std::size_t k = 0;
  while (k < spec.count() && spec.exponents[k] * d + d < static_cast<long>(n)) ++k;
  return k;
}

inline HardyFunction assemble(const ModelSpaceBasis& basis, const LacunarySpec& spec,
                              std::size_t terms, double& tail_norm) {
  const auto& policy = basis.policy();
  const auto m = policy.grid_size;
  const ToeplitzPair op(basis.product(), policy);
  const auto bs = op.samples();
  std::vector<cplx> acc(m, 0.0);
  std::vector<cplx> bpow(m, 1.0);
  long current = 0;
  for (std::size_t k = 0; k < terms; ++k) {
    for (; current < spec.exponents[k]; ++current) {
      for (std::size_t j = 0; j < m; ++j) bpow[j] *= bs[j];
    }
    const auto g = basis.boundary_samples(spec.components[k]);
    for (std::size_t j = 0; j < m; ++j) acc[j] += g[j] * bpow[j];
  }
  auto f = riesz_project(acc, policy);
  const double energy = norm_p(acc, 2.0);
  tail_norm = std::sqrt(f.tail_fraction()) * energy;
  return f;
}

}  // namespace detail

/// sum_k f_k b^{n_k} on the grid. Throws BandwidthError carrying the number of
/// leading terms that still fit when the truncation would cut significant mass.
inline HardyFunction build(const ModelSpaceBasis& basis, const LacunarySpec& spec) {
  spec.validate();
  const auto& policy = basis.policy();
  const std::size_t n = policy.truncation_degree;
  if (spec.count() == 0) return HardyFunction::zero(n);
  auto fits = [&](std::size_t terms) {
    double tail = 0.0;
    const auto f = detail::assemble(basis, spec, terms, tail);
    return tail <= policy.residual_tolerance * std::max(f.norm2(), DBL_MIN);
  };
  std::size_t feasible = detail::terms_within_degree(spec, n);
  if (feasible == spec.count()) {
    double tail = 0.0;
    auto f = detail::assemble(basis, spec, spec.count(), tail);
    if (tail <= policy.residual_tolerance * std::max(f.norm2(), DBL_MIN)) return f;
  }
  while (feasible > 0 && !fits(feasible)) --feasible;
  const long top = spec.exponents.back() * basis.product().degree() + basis.product().degree();
  throw BandwidthError("lacunary build exceeds truncation degree " + std::to_string(n) +
                           "; at most " + std::to_string(feasible) + " leading terms fit",
                       next_power_of_two(4 * static_cast<std::size_t>(top)), feasible);
}

inline HardyFunction build(const LacunarySpec& spec, const NumericPolicy& policy) {
  return build(ModelSpaceBasis(spec.product, policy), spec);
}

/// Places spec components at their exponent slots: slot n_k holds f_k, others are zero.
inline std::vector<Eigen::VectorXcd> expand_to_slots(const LacunarySpec& spec, std::size_t slots) {
  std::vector<Eigen::VectorXcd> out(slots, Eigen::VectorXcd::Zero(spec.product.degree()));
  for (std::size_t k = 0; k < spec.count(); ++k) {
    const auto s = static_cast<std::size_t>(spec.exponents[k]);
    if (s < slots) out[s] = spec.components[k];
  }
  return out;
}

// ---------------------------------------------------------------------------

struct LeastSquaresLine {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

inline LeastSquaresLine fit_line(std::span<const double> x, std::span<const double> y) {
  LeastSquaresLine out;
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) {
    if (!y.empty()) out.intercept = y[0];
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.intercept = (sy - out.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.max_residual = std::max(out.max_residual, std::abs(y[i] - out.intercept - out.slope * x[i]));
  }
  return out;
}

/// Finite-horizon verdicts on the hypotheses of the cyclicity criterion.
struct HypothesisReport {
  double p = 2.0;
  double q = 2.0;

  double lacunarity_threshold = 1.5;
  double lacunarity_min_ratio = std::numeric_limits<double>::infinity();
  bool lacunary = true;

  std::vector<double> component_norms;  // ||f_k||_p
  std::vector<double> summability_partial_sums;  // sum_{j<=k} ||f_j||_p^q
  double summability_tail_slope = 0.0;  // fitted log-slope of the trailing half of the terms
  bool summable = true;

  bool dominated = true;
  double domination_rho = 0.0;  // ||f_k||_p <= c rho^k
  double domination_c = 0.0;
  double domination_max_residual = 0.0;

  bool b2 = true;
  std::optional<std::array<long, 4>> b2_collision;  // n_a + n_b = n_c + n_d

  bool finite_horizon = true;
  /// The last component is zero: the sequence terminates, so summability and
  /// (eventual) domination hold trivially.
  bool finite_support = false;

  bool all_pass() const noexcept { return lacunary && summable && dominated && b2; }
};

/// Exact pairwise-sum check: every n_j + n_k (j <= k) is distinct.
inline std::optional<std::array<long, 4>> b2_collision(std::span<const long> exps) {
  std::unordered_map<long, std::pair<long, long>> seen;
  seen.reserve(exps.size() * (exps.size() + 1) / 2);
  for (std::size_t j = 0; j < exps.size(); ++j) {
    for (std::size_t k = j; k < exps.size(); ++k) {
      const long s = exps[j] + exps[k];
      auto [it, inserted] = seen.emplace(s, std::make_pair(exps[j], exps[k]));
      if (!inserted) return std::array<long, 4>{it->second.first, it->second.second, exps[j], exps[k]};
    }
  }
  return std::nullopt;
}

inline HypothesisReport check_hypotheses(const ModelSpaceBasis& basis, const LacunarySpec& spec,
                                         double p, double lacunarity_threshold = 1.5) {
  spec.validate();
  if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("check_hypotheses needs finite p >= 2");
  HypothesisReport rep;
  rep.p = p;
  rep.q = p / (p - 1.0);
  rep.lacunarity_threshold = lacunarity_threshold;

  for (std::size_t k = 1; k < spec.count(); ++k) {
    rep.lacunarity_min_ratio = std::min(
        rep.lacunarity_min_ratio,
        static_cast<double>(spec.exponents[k]) / static_cast<double>(spec.exponents[k - 1]));
  }
  rep.lacunary = rep.lacunarity_min_ratio >= lacunarity_threshold;

  double partial = 0.0;
  std::vector<double> ks, logs, term_logs;
  for (std::size_t k = 0; k < spec.count(); ++k) {
    const auto samples = basis.boundary_samples(spec.components[k]);
    const double nk = norm_p(samples, p);
    rep.component_norms.push_back(nk);
    partial += std::pow(nk, rep.q);
    rep.summability_partial_sums.push_back(partial);
    if (nk > 0.0) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(nk));
      term_logs.push_back(rep.q * std::log(nk));
    }
  }

  // Summability: the trailing half of the nonzero terms decays geometrically.
  if (ks.size() >= 3) {
    const std::size_t start = ks.size() / 2;
    const auto fit = fit_line(std::span(ks).subspan(start), std::span(term_logs).subspan(start));
    rep.summability_tail_slope = fit.slope;
    rep.summable = fit.slope < 0.0;
  }

  // Domination: fitted rate rho = exp(slope) < 1, c the smallest constant making the bound exact.
  if (ks.size() >= 2) {
    const auto fit = fit_line(ks, logs);
    rep.domination_rho = std::exp(fit.slope);
    rep.domination_max_residual = fit.max_residual;
    rep.dominated = rep.domination_rho < 1.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      rep.domination_c = std::max(rep.domination_c, std::exp(logs[i] - fit.slope * ks[i]));
    }
  } else if (ks.size() == 1) {
    rep.domination_c = std::exp(logs[0]);
  }

  if (spec.count() > 0 && rep.component_norms.back() == 0.0) {
    rep.finite_support = true;
    rep.summable = true;
    rep.dominated = true;
  }

  rep.b2_collision = b2_collision(spec.exponents);
  rep.b2 = !rep.b2_collision.has_value();
  return rep;
}

// ---------------------------------------------------------------------------

struct SeriesDiagnostics {
  double gamma = 1.0;
  std::vector<double> partial_sums;  // S_n of sum_k a_k / r_k^gamma, r_k = sum_{l>k} a_l
  std::size_t horizon = 0;           // number of usable terms
  bool truncated_underflow = false;  // stopped where r_k < 1e-300 before the list ended
  std::vector<std::pair<std::size_t, double>> checkpoints;  // (n, S_n) at H/100, H/10, H
  bool divergence_trend = false;
  std::optional<double> liminf_tail_ratio;  // min of r_{k-1}/r_k over the second half
};

inline SeriesDiagnostics series_diagnostics(std::span<const double> a, double gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw DomainError("series_diagnostics needs gamma >= 1");
  for (double v : a) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("series terms must be positive and finite");
  }
  SeriesDiagnostics out;
  out.gamma = gamma;
  std::vector<double> tails(a.size(), 0.0);
  double acc = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) {
    tails[k] = acc;
    acc += a[k];
  }
  constexpr double kUnderflow = 1e-300;
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (tails[k] < kUnderflow) {
      out.truncated_underflow = k + 1 < a.size();
      break;
    }
    s += a[k] / std::pow(tails[k], gamma);
    out.partial_sums.push_back(s);
  }
  out.horizon = out.partial_sums.size();
  const std::size_t h = out.horizon;
  if (h >= 100) {
    for (std::size_t n : {h / 100, h / 10, h}) out.checkpoints.emplace_back(n, out.partial_sums[n - 1]);
    const double early = out.checkpoints[0].second;
    const double mid = out.checkpoints[1].second;
    const double late = out.checkpoints[2].second;
    // Growth across the last decade is at least half that of the previous one.
    out.divergence_trend = early < mid && mid < late && (late - mid) >= 0.5 * (mid - early);
  }
  if (h >= 4) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = std::max<std::size_t>(1, h / 2); k < h; ++k) lo = std::min(lo, tails[k - 1] / tails[k]);
    out.liminf_tail_ratio = lo;
  }
  return out;
}

// ---------------------------------------------------------------------------

/// (sum_k ||f_k||_q^p)^{1/p} / ||f||_q over the default decomposition depth, q = p / (p - 1).
inline double phi_q_ratio(const ModelSpaceBasis& basis, const HardyFunction& f, double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("phi_q_ratio needs finite p >= 2");
  const double q = p / (p - 1.0);
  const double fq = norm_p(f, q, basis.policy());
  if (fq < 1e-12) throw DomainError("phi_q_ratio: ||f||_q below 1e-12");
  const auto dec = decompose(basis, f);
  double s = 0.0;
  for (const auto& c : dec.components) {
    const auto samples = basis.boundary_samples(c);
    s += std::pow(norm_p(samples, q), p);
  }
  return std::pow(s, 1.0 / p) / fq;
}

// ---------------------------------------------------------------------------

/// ||f||_4 against ||f||_1 and ||f||_2 on a B2 lacunary span.
///
/// `bound_stated` is 2^{3/4} c^{3/2} ||f||_1. `bound_intermediate` is sqrt(2) c ||f||_2.
/// `bound_corrected` is 2^{3/2} c^3 ||f||_1, which is what Hoelder
/// (||f||_2 <= ||f||_1^{1/3} ||f||_4^{2/3}) gives from the intermediate bound.
struct L4L1Report {
  bool hypothesis_met = true;  // exponents are B2
  double norm1 = 0.0;
  double norm2 = 0.0;
  double norm4 = 0.0;
  double c = 1.0;  // norm_equivalence_constant(basis, 4, 2), a lower-bound estimate
  double bound_stated = 0.0;
  double bound_intermediate = 0.0;
  double bound_corrected = 0.0;
  bool stated_holds = true;
  bool intermediate_holds = true;
  bool corrected_holds = true;
};

inline constexpr double kInequalitySlack = 1e-8;

inline L4L1Report l4_l1_equivalence_check(const ModelSpaceBasis& basis, const LacunarySpec& spec,
                                          std::optional<double> c_value = {}) {
  spec.validate();
  L4L1Report rep;
  rep.hypothesis_met = !b2_collision(spec.exponents).has_value();
  const auto f = build(basis, spec);
  const auto samples = boundary_values(f, basis.policy());
  rep.norm1 = norm_p(samples, 1.0);
  rep.norm2 = norm_p(samples, 2.0);
  rep.norm4 = norm_p(samples, 4.0);
  rep.c = c_value ? *c_value : norm_equivalence_constant(basis, 4.0, 2.0).value;
  rep.bound_stated = std::pow(2.0, 0.75) * std::pow(rep.c, 1.5) * rep.norm1;
  rep.bound_intermediate = std::sqrt(2.0) * rep.c * rep.norm2;
  rep.bound_corrected = std::pow(2.0, 1.5) * std::pow(rep.c, 3.0) * rep.norm1;
  const double slack = kInequalitySlack * std::max(1.0, rep.norm4);
  rep.stated_holds = rep.norm4 <= rep.bound_stated + slack;
  rep.intermediate_holds = rep.norm4 <= rep.bound_intermediate + slack;
  rep.corrected_holds = rep.norm4 <= rep.bound_corrected + slack;
  return rep;
}

// ---------------------------------------------------------------------------

struct ProductLemmaReport {
  double projection_norm = 0.0;   // ||T^2 (f g)|| = norm of the projection of fg onto b^2 H^2
  double max_inner_product = 0.0; // max_j |<b^2 z^j, f g>| over j < N - 2 deg b
  double scale = 1.0;             // ||f|| ||g||
  bool passes = true;
};

inline ProductLemmaReport product_lemma_check(const ModelSpaceBasis& basis, const HardyFunction& f,
                                              const HardyFunction& g, double tolerance = 1e-9) {
  if (!basis.contains(f) || !basis.contains(g)) throw DomainError("product_lemma_check: inputs must lie in K_b");
  const auto& policy = basis.policy();
  const ToeplitzPair op(basis.product(), policy);
  const auto fg = multiply(f, g, policy);
  const auto t2 = op.T(op.T(fg));
  ProductLemmaReport rep;
  rep.projection_norm = t2.norm2();
  const auto limit = static_cast<std::size_t>(
      std::max(0L, static_cast<long>(policy.truncation_degree) - 2L * basis.dimension()));
  for (std::size_t j = 0; j < limit; ++j) rep.max_inner_product = std::max(rep.max_inner_product, std::abs(t2[j]));
  rep.scale = f.norm2() * g.norm2();
  rep.passes = rep.projection_norm <= tolerance * std::max(rep.scale, DBL_MIN);
  return rep;
}

}  // namespace hardy
