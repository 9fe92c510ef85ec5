// The model space K_b = H^2 (-) b H^2 for a finite Blaschke product b.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hardy/blaschke.hpp"
#include "hardy/hardy_function.hpp"

namespace hardy {

/// Taylor coefficients of e_{lambda,l}(z) = l! z^l / (1 - conj(lambda) z)^{l+1},
/// the function with <f, e_{lambda,l}> = f^{(l)}(lambda).
///
/// Coefficient n is n!/(n-l)! conj(lambda)^{n-l}, generated by the exact ratio
/// recurrence rather than by differentiating numerically.
inline HardyFunction kernel(cplx lambda, int l, std::size_t n) {
  if (std::abs(lambda) >= 1.0) throw DomainError("kernel needs |lambda| < 1");
  if (l < 0) throw DomainError("kernel order must be >= 0");
  std::vector<cplx> a(n, 0.0);
  const auto ll = static_cast<std::size_t>(l);
  if (ll >= n) return HardyFunction(std::move(a));
  double fact = 1.0;
  for (int j = 2; j <= l; ++j) fact *= j;
  a[ll] = fact;
  const cplx lc = std::conj(lambda);
  for (std::size_t k = ll; k + 1 < n; ++k) {
    a[k + 1] = a[k] * lc * (static_cast<double>(k + 1) / static_cast<double>(k + 1 - ll));
  }
  return HardyFunction(std::move(a));
}

inline HardyFunction kernel(cplx lambda, int l, const NumericPolicy& policy) {
  return kernel(lambda, l, policy.truncation_degree);
}

struct KernelIndex {
  std::size_t zero = 0;  // index into BlaschkeProduct::zeros()
  int order = 0;         // l in e_{lambda,l}
  cplx lambda;
};

/// Kernel spanning set of K_b, its Gram matrix and a Cholesky-orthonormalized basis.
///
/// Coordinates everywhere in the library refer to the orthonormal basis
/// Q = E L^{-H}, where E holds the kernels as columns and G = E^H E = L L^H.
/// For b = z^d the kernels are l! z^l, so Q is the monomial basis 1, z, ..., z^{d-1}.
class ModelSpaceBasis {
public:
  static constexpr int kMaxDimension = 16;

  ModelSpaceBasis(BlaschkeProduct b, const NumericPolicy& policy)
      : product_(std::move(b)), policy_(policy) {
    policy_.validate();
    const int d = product_.degree();
    if (d > kMaxDimension) {
      throw DomainError("model spaces above dimension " + std::to_string(kMaxDimension) +
                        " are not supported");
    }
    const auto n = policy_.truncation_degree;
    if (static_cast<std::size_t>(d) >= n) throw BandwidthError("degree exceeds truncation", 0);

    const auto zeros = product_.zeros();
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      for (int l = 0; l < zeros[i].multiplicity; ++l) {
        indices_.push_back({i, l, zeros[i].point});
      }
    }
    kernels_.resize(static_cast<long>(n), d);
    for (int j = 0; j < d; ++j) {
      const auto e = kernel(indices_[static_cast<std::size_t>(j)].lambda,
                            indices_[static_cast<std::size_t>(j)].order, n);
      for (std::size_t k = 0; k < n; ++k) kernels_(static_cast<long>(k), j) = e[k];
    }
    gram_ = kernels_.adjoint() * kernels_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram_);
    min_eigenvalue_ = eig.eigenvalues().minCoeff();
    max_eigenvalue_ = eig.eigenvalues().maxCoeff();
    if (!(min_eigenvalue_ > policy_.rank_tolerance)) {
      throw DomainError("Gram matrix of K_b kernels is numerically singular (min eigenvalue " +
                        std::to_string(min_eigenvalue_) + ")");
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(gram_);
    const Eigen::MatrixXcd lower = llt.matrixL();
    // change_of_basis_ = L^{-H}
    change_of_basis_ = lower.adjoint().triangularView<Eigen::Upper>().solve(
        Eigen::MatrixXcd::Identity(d, d));
    orthonormal_ = kernels_ * change_of_basis_;
    evaluation_ = kernels_.adjoint() * orthonormal_;

    boundary_.resize(static_cast<long>(policy_.grid_size), d);
    for (int j = 0; j < d; ++j) {
      const auto vals = boundary_values(basis_function(j), policy_.grid_size);
      for (std::size_t t = 0; t < vals.size(); ++t) boundary_(static_cast<long>(t), j) = vals[t];
    }
  }

  const BlaschkeProduct& product() const noexcept { return product_; }
  const NumericPolicy& policy() const noexcept { return policy_; }
  int dimension() const noexcept { return product_.degree(); }
  std::span<const KernelIndex> kernel_indices() const noexcept { return indices_; }

  /// N x d, column j is the kernel e_{lambda_j, l_j}.
  const Eigen::MatrixXcd& kernels() const noexcept { return kernels_; }
  /// gram(i, j) = <e_j, e_i>.
  const Eigen::MatrixXcd& gram() const noexcept { return gram_; }
  /// L^{-H}: orthonormal basis = kernels * change_of_basis.
  const Eigen::MatrixXcd& change_of_basis() const noexcept { return change_of_basis_; }
  /// N x d orthonormal basis Q.
  const Eigen::MatrixXcd& orthonormal() const noexcept { return orthonormal_; }
  /// M x d boundary samples of the orthonormal basis functions.
  const Eigen::MatrixXcd& boundary() const noexcept { return boundary_; }
  /// evaluation(r, j) = derivative of order l_r of basis function j at lambda_r.
  const Eigen::MatrixXcd& evaluation_matrix() const noexcept { return evaluation_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double condition_number() const noexcept { return max_eigenvalue_ / min_eigenvalue_; }

  HardyFunction basis_function(int j) const {
    std::vector<cplx> a(static_cast<std::size_t>(orthonormal_.rows()));
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = orthonormal_(static_cast<long>(k), j);
    return HardyFunction(std::move(a));
  }

  Eigen::VectorXcd coordinates(const HardyFunction& f) const {
    detail::require_truncation(f, policy_);
    Eigen::Map<const Eigen::VectorXcd> a(f.coeffs().data(), static_cast<long>(f.size()));
    return orthonormal_.adjoint() * a;
  }

  HardyFunction function(const Eigen::VectorXcd& coords) const {
    if (coords.size() != dimension()) throw DomainError("coordinate vector has wrong dimension");
    const Eigen::VectorXcd a = orthonormal_ * coords;
    return HardyFunction(std::vector<cplx>(a.data(), a.data() + a.size()));
  }

  /// Boundary samples of the function with the given coordinates.
  std::vector<cplx> boundary_samples(const Eigen::VectorXcd& coords) const {
    const Eigen::VectorXcd s = boundary_ * coords;
    return std::vector<cplx>(s.data(), s.data() + s.size());
  }

  /// Orthogonal projection onto K_b.
  HardyFunction project(const HardyFunction& f) const { return function(coordinates(f)); }

  /// dist(f, K_b) in H^2.
  double distance_to_space(const HardyFunction& f) const { return (f - project(f)).norm2(); }

  bool contains(const HardyFunction& f) const {
    return distance_to_space(f) <= policy_.residual_tolerance * std::max(f.norm2(), 1e-300);
  }

  /// Derivative values (f^{(l)}(lambda_r))_r of the K_b element with these coordinates.
  Eigen::VectorXcd evaluations(const Eigen::VectorXcd& coords) const { return evaluation_ * coords; }

private:
  BlaschkeProduct product_;
  NumericPolicy policy_;
  std::vector<KernelIndex> indices_;
  Eigen::MatrixXcd kernels_;
  Eigen::MatrixXcd gram_;
  Eigen::MatrixXcd change_of_basis_;
  Eigen::MatrixXcd orthonormal_;
  Eigen::MatrixXcd evaluation_;
  Eigen::MatrixXcd boundary_;
  double min_eigenvalue_ = 0.0;
  double max_eigenvalue_ = 0.0;
};

/// e*_{lambda_i} = ((b/b_i)(z) / (b/b_i)(lambda_i)) (1 - |lambda_i|^2) e_{lambda_i},
/// biorthogonal to the kernels: <e*_i, e_j> = delta_ij.
inline HardyFunction dual_kernel(const ModelSpaceBasis& basis, std::size_t zero_index) {
  const auto& b = basis.product();
  const auto zeros = b.zeros();
  if (zero_index >= zeros.size()) throw DomainError("dual_kernel: zero index out of range");
  if (zeros[zero_index].multiplicity != 1) {
    throw DomainError("dual_kernel is only defined for simple zeros");
  }
  const auto& policy = basis.policy();
  const cplx lam = zeros[zero_index].point;
  const auto m = policy.grid_size;
  std::vector<cplx> quotient(m);
  for (std::size_t j = 0; j < m; ++j) {
    quotient[j] = b.evaluate_without(zero_index, BlaschkeProduct::unit_root(j, m));
  }
  const cplx scale = (1.0 - std::norm(lam)) / b.evaluate_without(zero_index, lam);
  auto out = multiply(kernel(lam, 0, policy), quotient, policy);
  return scale * out;
}

/// f -> P_+(b e^{-i theta} conj(f)), an isometric involution of K_b.
inline HardyFunction conjugation(const ModelSpaceBasis& basis, const HardyFunction& f) {
  if (!basis.contains(f)) {
    throw DomainError("conjugation: function is not in K_b (distance " +
                      std::to_string(basis.distance_to_space(f)) + ")");
  }
  const auto& policy = basis.policy();
  const auto m = policy.grid_size;
  auto fs = boundary_values(f, policy);
  const auto bs = basis.product().boundary_samples(m);
  for (std::size_t j = 0; j < m; ++j) {
    fs[j] = bs[j] * std::conj(BlaschkeProduct::unit_root(j, m)) * std::conj(fs[j]);
  }
  return riesz_project(fs, policy);
}

struct NormEquivalence {
  double value = 1.0;
  Eigen::VectorXcd maximizer;
  int restarts = 0;
  /// Random-restart ascent only certifies a lower bound on the supremum.
  bool lower_bound_estimate = true;
};

/// Estimate of sup { ||g||_p / ||g||_q : g in K_b, g != 0 } for p, q in {1, 2, 4}.
inline NormEquivalence norm_equivalence_constant(const ModelSpaceBasis& basis, double p, double q,
                                                 int restarts = 64, std::uint64_t seed = 0) {
  auto allowed = [](double x) { return x == 1.0 || x == 2.0 || x == 4.0; };
  if (!allowed(p) || !allowed(q)) throw DomainError("norm_equivalence_constant: p, q in {1,2,4}");
  const int d = basis.dimension();
  const Eigen::MatrixXcd& samples = basis.boundary();

  auto ratio = [&](const Eigen::VectorXcd& c) {
    const Eigen::VectorXcd g = samples * c;
    std::span<const cplx> s(g.data(), static_cast<std::size_t>(g.size()));
    return norm_p(s, p) / norm_p(s, q);
  };

  NormEquivalence best;
  best.restarts = restarts;
  best.maximizer = Eigen::VectorXcd::Unit(d, 0);
  best.value = ratio(best.maximizer);
  if (p == q) {
    best.value = 1.0;
    return best;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_direction = [&] {
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    return Eigen::VectorXcd(v.normalized());
  };

  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXcd c = random_direction();
    double value = ratio(c);
    double step = 0.5;
    int failures = 0;
    const int patience = 2 * d + 6;
    for (int it = 0; it < 20000 && step > 1e-9; ++it) {
      const Eigen::VectorXcd trial = (c + step * random_direction()).normalized();
      const double v = ratio(trial);
      if (v > value) {
        c = trial;
        value = v;
        failures = 0;
      } else if (++failures >= patience) {
        step *= 0.5;
        failures = 0;
      }
    }
    if (value > best.value) {
      best.value = value;
      best.maximizer = c;
    }
  }
  return best;
}

}  // namespace hardy
