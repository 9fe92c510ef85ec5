// Seeded generators for test batteries: Blaschke products, H^2 functions,
// K_b elements and B2 lacunary specifications.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "hardy/lacunary.hpp"
#include "hardy/model_space.hpp"

namespace hardy::random {

using Engine = std::mt19937_64;

/// Degrees 1 to 4, with multiple zeros and zeros at the origin; all |lambda| <= 0.7.
inline std::vector<BlaschkeProduct> standard_products() {
  return {
      BlaschkeProduct({{0.5, 1}}),
      BlaschkeProduct({{cplx(0.3, 0.4), 1}, {-0.5, 1}}),
      BlaschkeProduct({{0.4, 2}}),
      BlaschkeProduct({{0.0, 2}, {cplx(0.0, 0.6), 1}}),
      BlaschkeProduct({{-0.3, 2}, {0.5, 1}, {cplx(0.2, -0.6), 1}}),
  };
}

inline cplx gaussian(Engine& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

inline cplx in_disk(Engine& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double t = 2.0 * kPi * u(rng);
  return std::polar(r, t);
}

/// sum_{i<3} alpha_i / (1 - beta_i z) with |beta_i| <= 0.5 (poles at radius >= 2).
inline HardyFunction random_rational(Engine& rng, std::size_t n) {
  auto f = HardyFunction::zero(n);
  for (int i = 0; i < 3; ++i) {
    const cplx alpha = gaussian(rng);
    const cplx beta = in_disk(rng, 0.5);
    f += HardyFunction::geometric(n, beta, alpha);
  }
  return f;
}

/// Gaussian coefficients up to a random degree <= 16.
inline HardyFunction random_polynomial(Engine& rng, std::size_t n) {
  std::uniform_int_distribution<int> deg(0, 16);
  const int d = deg(rng);
  std::vector<cplx> low(static_cast<std::size_t>(d) + 1);
  for (auto& c : low) c = gaussian(rng);
  return HardyFunction::polynomial(n, low);
}

/// Alternates rational and polynomial draws so a battery always holds both kinds.
inline std::vector<HardyFunction> random_battery(Engine& rng, std::size_t count, std::size_t n) {
  std::vector<HardyFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(i % 2 == 0 ? random_rational(rng, n) : random_polynomial(rng, n));
  }
  return out;
}

inline Eigen::VectorXcd random_coordinates(Engine& rng, int d) {
  Eigen::VectorXcd c(d);
  for (int i = 0; i < d; ++i) c(i) = gaussian(rng);
  return c;
}

inline HardyFunction random_model_element(Engine& rng, const ModelSpaceBasis& basis) {
  return basis.function(random_coordinates(rng, basis.dimension()));
}

/// Exponents with gaps growing by a factor in [2, 3), redrawn until B2, and
/// components decaying like 2^{-k}. The number of terms is the largest that
/// keeps n_K deg(b) + deg(b) below the truncation, at most `max_terms`.
inline LacunarySpec random_b2_spec(Engine& rng, const BlaschkeProduct& b, std::size_t n,
                                   std::size_t max_terms = 6) {
  std::uniform_int_distribution<long> first(1, 3);
  std::uniform_real_distribution<double> ratio(2.0, 3.0);
  const long d = b.degree();
  const long cap = (static_cast<long>(n) - d - 1) / d;
  LacunarySpec spec{b, {}, {}};
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<long> exps{first(rng)};
    while (exps.size() < max_terms) {
      const long next = static_cast<long>(std::ceil(ratio(rng) * static_cast<double>(exps.back())));
      if (next > cap) break;
      exps.push_back(next);
    }
    if (!b2_collision(exps)) {
      spec.exponents = std::move(exps);
      break;
    }
  }
  if (spec.exponents.empty()) throw DomainError("random_b2_spec: no B2 exponent set found");
  for (std::size_t k = 0; k < spec.exponents.size(); ++k) {
    spec.components.push_back(std::ldexp(1.0, -static_cast<int>(k)) * random_coordinates(rng, static_cast<int>(d)));
  }
  return spec;
}

/// As above, then drops trailing terms whose b^{n_k} tail leaks past the
/// truncation. At least two terms are kept.
inline LacunarySpec random_b2_spec(Engine& rng, const ModelSpaceBasis& basis, std::size_t max_terms = 6) {
  auto spec = random_b2_spec(rng, basis.product(), basis.policy().truncation_degree, max_terms);
  try {
    (void)build(basis, spec);
  } catch (const BandwidthError& e) {
    if (e.feasible_terms() < 2) throw;
    spec.exponents.resize(e.feasible_terms());
    spec.components.resize(e.feasible_terms());
  }
  return spec;
}

}  // namespace hardy::random
