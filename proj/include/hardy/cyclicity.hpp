// Cyclicity of lacunary decompositions: tail-span K_*, determinant witness,
// structure report, and a brute-force Krylov distance oracle.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hardy/lacunary.hpp"
#include "hardy/model_space.hpp"
#include "hardy/toeplitz.hpp"

namespace hardy {

namespace detail {

/// Nonzero columns scaled to unit length.
inline Eigen::MatrixXcd normalized_columns(const std::vector<Eigen::VectorXcd>& cols, std::size_t from,
                                           std::size_t to) {
  std::vector<Eigen::VectorXcd> keep;
  for (std::size_t k = from; k < to; ++k) {
    const double n = cols[k].norm();
    if (n > 0.0) keep.push_back(cols[k] / n);
  }
  const auto rows = cols.empty() ? 0 : cols.front().size();
  Eigen::MatrixXcd m(rows, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = keep[j];
  return m;
}

inline int numerical_rank(const Eigen::MatrixXcd& m, double rel_tol) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += (s(i) > rel_tol * s(0)) ? 1 : 0;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct KStar {
  Eigen::MatrixXcd basis;       // d x rank, orthonormal columns in K_b coordinates
  int rank = 0;
  int stabilization_index = 0;  // first n whose tail rank equals the rank at the horizon
  int horizon = 0;              // last tail start examined: count - d (at least 0)
  int window = 0;               // horizon - stabilization_index + 1
  std::vector<int> tail_ranks;  // rank of span(f_k : k >= n) for n = 0..horizon
  bool all_zero = false;
  bool finite_horizon = true;
};

/// Rank of span(f_k : k >= n) for n up to count - d, where at least d tail
/// vectors remain; the stable value and its span stand in for K_*.
inline KStar compute_kstar(const LacunarySpec& spec, double rank_tolerance) {
  spec.validate();
  if (spec.count() == 0) throw DomainError("compute_kstar needs at least one component");
  const int d = spec.product.degree();
  const int count = static_cast<int>(spec.count());
  KStar out;
  out.horizon = std::max(0, count - d);
  for (int n = 0; n <= out.horizon; ++n) {
    const auto m = detail::normalized_columns(spec.components, static_cast<std::size_t>(n), spec.count());
    out.tail_ranks.push_back(detail::numerical_rank(m, rank_tolerance));
  }
  out.rank = out.tail_ranks.back();
  out.stabilization_index = out.horizon;
  while (out.stabilization_index > 0 && out.tail_ranks[static_cast<std::size_t>(out.stabilization_index - 1)] == out.rank) {
    --out.stabilization_index;
  }
  out.window = out.horizon - out.stabilization_index + 1;
  out.all_zero = out.tail_ranks.front() == 0;

  const auto tail = detail::normalized_columns(spec.components, static_cast<std::size_t>(out.stabilization_index),
                                               spec.count());
  if (out.rank > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tail, Eigen::ComputeThinU);
    out.basis = svd.matrixU().leftCols(out.rank);
  } else {
    out.basis = Eigen::MatrixXcd(d, 0);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct DeterminantWitness {
  std::vector<int> indices;  // m_1 < ... < m_d, all >= m
  cplx determinant;          // det of the d x d matrix of derivative values
  double normalized = 0.0;   // |det| / prod of column norms
};

struct WitnessSearch {
  std::optional<DeterminantWitness> witness;
  std::string reason;  // why no witness, when absent
};

enum class WitnessMode { greedy, exhaustive };

namespace detail {

/// Columns (f_k(lambda_1), ..., f_k^{(d_1 - 1)}(lambda_1), ...) for every component.
inline std::vector<Eigen::VectorXcd> derivative_columns(const ModelSpaceBasis& basis, const LacunarySpec& spec) {
  std::vector<Eigen::VectorXcd> cols;
  cols.reserve(spec.count());
  for (const auto& c : spec.components) cols.push_back(basis.evaluations(c));
  return cols;
}

inline DeterminantWitness make_witness(const std::vector<Eigen::VectorXcd>& cols, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  const auto d = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd m(d, d);
  double prod = 1.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    m.col(j) = cols[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    prod *= m.col(j).norm();
  }
  DeterminantWitness w;
  w.indices = std::move(idx);
  w.determinant = m.determinant();
  w.normalized = prod > 0.0 ? std::abs(w.determinant) / prod : 0.0;
  return w;
}

}  // namespace detail

inline WitnessSearch determinant_witness(const ModelSpaceBasis& basis, const LacunarySpec& spec, int m,
                                         WitnessMode mode = WitnessMode::greedy) {
  spec.validate();
  if (m < 0) throw DomainError("determinant_witness needs m >= 0");
  const int d = basis.dimension();
  const double tol = basis.policy().rank_tolerance;
  WitnessSearch out;
  const auto cols = detail::derivative_columns(basis, spec);
  std::vector<int> candidates;
  for (int k = m; k < static_cast<int>(cols.size()); ++k) {
    if (cols[static_cast<std::size_t>(k)].norm() > 0.0) candidates.push_back(k);
  }
  if (static_cast<int>(candidates.size()) < d) {
    out.reason = "fewer than " + std::to_string(d) + " nonzero components with index >= " + std::to_string(m);
    return out;
  }

  if (mode == WitnessMode::exhaustive) {
    if (d > 4) throw DomainError("exhaustive witness search is limited to degree <= 4");
    constexpr std::size_t kMaxCandidates = 24;
    if (candidates.size() > kMaxCandidates) candidates.resize(kMaxCandidates);
    std::vector<bool> pick(candidates.size(), false);
    std::fill(pick.begin(), pick.begin() + d, true);
    std::optional<DeterminantWitness> best;
    do {
      std::vector<int> idx;
      for (std::size_t i = 0; i < pick.size(); ++i) {
        if (pick[i]) idx.push_back(candidates[i]);
      }
      auto w = detail::make_witness(cols, std::move(idx));
      if (!best || w.normalized > best->normalized) best = std::move(w);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    if (best && best->normalized > tol) {
      out.witness = std::move(best);
    } else {
      out.reason = "every d-subset of columns is numerically singular";
    }
    return out;
  }

  // Greedy volume growth: repeatedly take the column farthest from the span chosen so far.
  std::vector<int> chosen;
  std::vector<Eigen::VectorXcd> ortho;
  std::vector<bool> used(cols.size(), false);
  for (int step = 0; step < d; ++step) {
    double best = -1.0;
    int best_k = -1;
    Eigen::VectorXcd best_r;
    for (int k : candidates) {
      if (used[static_cast<std::size_t>(k)]) continue;
      Eigen::VectorXcd r = cols[static_cast<std::size_t>(k)].normalized();
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : ortho) r -= q * q.dot(r);
      }
      const double rn = r.norm();
      if (rn > best) {
        best = rn;
        best_k = k;
        best_r = r;
      }
    }
    if (best <= tol) {
      out.reason = "columns with index >= " + std::to_string(m) + " span only " + std::to_string(step) +
                   " dimensions";
      return out;
    }
    used[static_cast<std::size_t>(best_k)] = true;
    chosen.push_back(best_k);
    ortho.push_back(best_r / best);
  }
  auto w = detail::make_witness(cols, chosen);
  if (w.normalized > tol) {
    out.witness = std::move(w);
  } else {
    out.reason = "selected columns are numerically singular";
  }
  return out;
}

// ---------------------------------------------------------------------------

struct KrylovTable {
  std::vector<std::size_t> checkpoints;       // n values reported
  std::vector<std::vector<double>> distances; // [target][checkpoint]
  std::vector<std::vector<double>> history;   // [target][n] for n = 0..achieved
  std::size_t requested = 0;
  std::size_t achieved = 0;                   // last n whose iterate entered the span
  std::string stop_reason;                    // "iterations", "vanished", "rank collapse"
};

inline constexpr std::size_t kMaxKrylovIterations = 2048;

/// dist(target, span{T^n f : n <= checkpoint}) in H^2, with f scaled to unit norm.
inline KrylovTable krylov_oracle(const BlaschkeProduct& b, const HardyFunction& f,
                                 std::span<const HardyFunction> targets, std::size_t iterations,
                                 const NumericPolicy& policy) {
  if (iterations > kMaxKrylovIterations) throw DomainError("krylov_oracle: at most 2048 iterations");
  detail::require_truncation(f, policy);
  for (const auto& t : targets) detail::require_truncation(t, policy);
  const double nf = f.norm2();
  if (nf == 0.0) throw DomainError("krylov_oracle needs a nonzero f");
  const ToeplitzPair op(b, policy);
  const auto n = static_cast<Eigen::Index>(policy.truncation_degree);

  auto to_vec = [n](const HardyFunction& g) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = g[static_cast<std::size_t>(i)];
    return v;
  };

  KrylovTable out;
  out.requested = iterations;
  for (std::size_t c : {std::size_t{0}, std::size_t{8}, std::size_t{32}, std::size_t{128}, iterations}) {
    if (c <= iterations && (out.checkpoints.empty() || c > out.checkpoints.back())) out.checkpoints.push_back(c);
  }
  std::vector<Eigen::VectorXcd> residuals;
  for (const auto& t : targets) residuals.push_back(to_vec(t));
  out.history.assign(targets.size(), {});

  std::vector<Eigen::VectorXcd> basis;
  HardyFunction v = (1.0 / nf) * f;
  // Iterates below this are indistinguishable from the roundoff left by the grid transforms.
  constexpr double vanish = 1e-13;
  out.stop_reason = "iterations";
  for (std::size_t it = 0; it <= iterations; ++it) {
    if (it > 0) v = op.T(v);
    const double vn = v.norm2();
    if (vn <= vanish) {
      out.stop_reason = "vanished";
      break;
    }
    Eigen::VectorXcd w = to_vec(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) w -= q * q.dot(w);
    }
    const double wn = w.norm();
    if (wn < 1e-13 * vn) {
      out.stop_reason = "rank collapse";
      break;
    }
    w /= wn;
    basis.push_back(w);
    for (std::size_t t = 0; t < residuals.size(); ++t) {
      residuals[t] -= w * w.dot(residuals[t]);
      out.history[t].push_back(residuals[t].norm());
    }
    out.achieved = it;
    if (basis.size() == static_cast<std::size_t>(n)) {
      out.stop_reason = "space exhausted";
      break;
    }
  }
  // The span is invariant once iteration stops, so later checkpoints carry the final distance.
  out.distances.assign(targets.size(), {});
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const double initial = targets[t].norm2();
    for (std::size_t c : out.checkpoints) {
      const auto& h = out.history[t];
      out.distances[t].push_back(h.empty() ? initial : h[std::min(c, h.size() - 1)]);
    }
  }
  return out;
}

inline std::vector<HardyFunction> monomial_targets(std::size_t count, const NumericPolicy& policy) {
  std::vector<HardyFunction> out;
  for (std::size_t j = 0; j < count; ++j) out.push_back(HardyFunction::monomial(policy.truncation_degree, j));
  return out;
}

// ---------------------------------------------------------------------------

enum class Verdict { cyclic, non_cyclic, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::cyclic: return "cyclic";
    case Verdict::non_cyclic: return "non_cyclic";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

/// E_f = K_* (x) [H^p o b] + E_p: the part of each component outside K_*,
/// the last slot where it is nonzero, and dim span{T^n p}.
struct StructureReport {
  std::vector<Eigen::VectorXcd> finite_part;  // c_k - Pi_{K_*} c_k
  int finite_part_last_index = -1;            // last k with a nonzero finite-part component
  long finite_part_b_degree = -1;             // n_k at that index
  int ep_dimension = 0;                       // rank of span{T^n p : n >= 0}
};

struct CyclicityReport {
  double p = 2.0;
  HypothesisReport hypotheses;
  KStar kstar;
  std::optional<DeterminantWitness> determinant_witness;  // at m = 0
  std::vector<int> witness_missing;                       // m <= horizon with no witness
  Verdict verdict = Verdict::inconclusive;
  std::string reason;
  StructureReport structure;
  std::optional<KrylovTable> krylov;
};

struct DecideOptions {
  double lacunarity_threshold = 1.5;
  /// Run krylov_oracle on z^j, j < krylov_targets, when nonzero.
  std::size_t krylov_targets = 0;
  std::size_t krylov_iterations = 512;
};

namespace detail {

inline StructureReport structure_report(const ModelSpaceBasis& basis, const LacunarySpec& spec, const KStar& ks) {
  StructureReport rep;
  const int d = basis.dimension();
  const Eigen::MatrixXcd proj = ks.basis * ks.basis.adjoint();
  for (std::size_t k = 0; k < spec.count(); ++k) {
    Eigen::VectorXcd r = spec.components[k] - proj * spec.components[k];
    // Components already in K_* up to the rank threshold count as zero.
    if (r.norm() <= basis.policy().rank_tolerance * spec.components[k].norm()) {
      r.setZero();
    }
    if (!r.isZero(0.0)) rep.finite_part_last_index = static_cast<int>(k);
    rep.finite_part.push_back(std::move(r));
  }
  if (rep.finite_part_last_index < 0) return rep;
  rep.finite_part_b_degree = spec.exponents[static_cast<std::size_t>(rep.finite_part_last_index)];
  // p = sum_k g_k b^{n_k}; T^n p shifts slot j to j - n and drops slots below n.
  const auto slots = static_cast<Eigen::Index>(rep.finite_part_b_degree + 1);
  Eigen::MatrixXcd blocks = Eigen::MatrixXcd::Zero(slots * d, slots);
  for (Eigen::Index shift = 0; shift < slots; ++shift) {
    for (std::size_t k = 0; k <= static_cast<std::size_t>(rep.finite_part_last_index); ++k) {
      const Eigen::Index slot = spec.exponents[k] - shift;
      if (slot >= 0) blocks.block(slot * d, shift, d, 1) = rep.finite_part[k];
    }
  }
  rep.ep_dimension = numerical_rank(blocks, basis.policy().rank_tolerance);
  return rep;
}

}  // namespace detail

/// Verdict from the rank of the tail span, backed by determinant witnesses for
/// every m up to the horizon. Hypotheses are checked at p when p >= 2; for
/// 1 < p < 2 they are checked at p = 2 and the exponents must also be B2.
inline CyclicityReport decide(const ModelSpaceBasis& basis, const LacunarySpec& spec, double p,
                              const DecideOptions& opt = {}) {
  spec.validate();
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("decide needs finite p > 1");
  const int d = basis.dimension();
  CyclicityReport rep;
  rep.p = p;
  if (spec.count() == 0) {
    rep.reason = "empty specification";
    return rep;
  }
  rep.hypotheses = check_hypotheses(basis, spec, std::max(p, 2.0), opt.lacunarity_threshold);
  rep.kstar = compute_kstar(spec, basis.policy().rank_tolerance);
  rep.structure = detail::structure_report(basis, spec, rep.kstar);

  const auto first = determinant_witness(basis, spec, 0);
  rep.determinant_witness = first.witness;
  for (int m = 0; m <= rep.kstar.horizon; ++m) {
    if (!determinant_witness(basis, spec, m).witness) rep.witness_missing.push_back(m);
  }

  if (opt.krylov_targets > 0) {
    const auto f = build(basis, spec);
    const auto targets = monomial_targets(opt.krylov_targets, basis.policy());
    rep.krylov = krylov_oracle(basis.product(), f, targets, opt.krylov_iterations, basis.policy());
  }

  const auto& h = rep.hypotheses;
  const bool hyp_ok = h.lacunary && h.summable && h.dominated && (p >= 2.0 || h.b2);
  if (!hyp_ok) {
    std::string failed;
    if (!h.lacunary) failed += " lacunarity";
    if (!h.summable) failed += " summability";
    if (!h.dominated) failed += " domination";
    if (p < 2.0 && !h.b2) failed += " B2";
    rep.reason = "hypotheses not met:" + failed;
    return rep;
  }
  if (static_cast<int>(spec.count()) < d) {
    rep.reason = "fewer components than the dimension of K_b";
    return rep;
  }
  if (rep.kstar.window < d) {
    rep.reason = "tail rank stable over " + std::to_string(rep.kstar.window) + " indices, need " + std::to_string(d);
    return rep;
  }
  if (rep.kstar.rank == d && rep.witness_missing.empty()) {
    rep.verdict = Verdict::cyclic;
    rep.reason = "tail span is all of K_b over the horizon";
  } else if (rep.kstar.rank == d) {
    rep.reason = "full tail rank but determinant witness missing for some m";
  } else {
    rep.verdict = Verdict::non_cyclic;
    rep.reason = "tail span has rank " + std::to_string(rep.kstar.rank) + " < " + std::to_string(d);
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct OrthogonalComponentsReport {
  std::size_t nonzero_components = 0;
  double max_pairwise_inner = 0.0;
  KrylovTable krylov;
  bool plateau = false;  // some target stays above 0.1
  std::string note;
};

/// Non-cyclicity for pairwise orthogonal components. In a d-dimensional K_b at
/// most d such components are nonzero, so the series is finite and E_f is
/// finite-dimensional; the Krylov table shows the resulting plateaus.
inline OrthogonalComponentsReport orthogonal_components_demo(const ModelSpaceBasis& basis, const LacunarySpec& spec,
                                                             std::size_t iterations = 2048) {
  spec.validate();
  OrthogonalComponentsReport rep;
  std::vector<const Eigen::VectorXcd*> nz;
  for (const auto& c : spec.components) {
    if (!c.isZero(0.0)) nz.push_back(&c);
  }
  if (nz.empty()) throw DomainError("orthogonal_components_demo needs a nonzero component");
  for (std::size_t i = 0; i < nz.size(); ++i) {
    for (std::size_t j = i + 1; j < nz.size(); ++j) {
      const double ip = std::abs(nz[i]->dot(*nz[j])) / (nz[i]->norm() * nz[j]->norm());
      rep.max_pairwise_inner = std::max(rep.max_pairwise_inner, ip);
    }
  }
  if (rep.max_pairwise_inner > 1e-10) throw DomainError("components are not pairwise orthogonal");
  rep.nonzero_components = nz.size();
  const auto f = build(basis, spec);
  const auto& policy = basis.policy();
  auto targets = monomial_targets(std::min<std::size_t>(4 * static_cast<std::size_t>(basis.dimension()),
                                                        policy.truncation_degree),
                                  policy);
  // b^{n_last + 1} times the first basis function, when it fits the truncation.
  const ToeplitzPair op(basis.product(), policy);
  try {
    HardyFunction t = basis.basis_function(0);
    t = op.R_power(t, static_cast<int>(spec.exponents.back()) + 1);
    targets.push_back((1.0 / t.norm2()) * t);
  } catch (const BandwidthError&) {
  }
  rep.krylov = krylov_oracle(basis.product(), f, targets, iterations, policy);
  for (const auto& row : rep.krylov.distances) {
    if (!row.empty() && row.back() > 0.1) rep.plateau = true;
  }
  rep.note = "K_b has dimension " + std::to_string(basis.dimension()) + "; " + std::to_string(nz.size()) +
             " nonzero orthogonal components make f a finite sum, so E_f is finite-dimensional";
  return rep;
}

}  // namespace hardy
