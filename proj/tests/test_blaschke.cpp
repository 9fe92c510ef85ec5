#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace hardy;

namespace {

BlaschkeProduct single(cplx lambda, int mult = 1) { return BlaschkeProduct({{lambda, mult}}); }

std::vector<BlaschkeProduct> random_products(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> nz(1, 3), mult(1, 3);
  std::vector<BlaschkeProduct> out;
  for (int i = 0; i < count; ++i) {
    std::vector<BlaschkeZero> zs;
    const int k = nz(rng);
    for (int j = 0; j < k; ++j) zs.push_back({hardy::random::in_disk(rng, 0.8), mult(rng)});
    out.emplace_back(zs);
  }
  return out;
}

}  // namespace

TEST(BlaschkeEvaluate, ZeroAtOriginGivesMinusW) { EXPECT_NEAR(std::abs(single(0.0).evaluate(0.5) - (-0.5)), 0.0, 1e-15); }

TEST(BlaschkeEvaluate, VanishesAtItsZero) { EXPECT_EQ(single(0.5).evaluate(0.5), cplx(0.0)); }

TEST(BlaschkeEvaluate, UnimodularOnCircle) {
  const BlaschkeProduct b({{0.5, 1}, {cplx(0.0, 0.3), 1}});
  EXPECT_NEAR(std::abs(b.evaluate(std::polar(1.0, kPi / 7.0))), 1.0, 1e-12);
}

TEST(BlaschkeEvaluate, RejectsPointsOutsideClosedDisk) {
  EXPECT_THROW(single(0.5).evaluate(1.01), DomainError);
  EXPECT_NO_THROW(single(0.5).evaluate(cplx(1.0, 0.0)));
}

TEST(BlaschkeEvaluate, MatchesNaiveProduct) {
  const BlaschkeProduct b({{0.5, 2}, {cplx(-0.2, 0.6), 1}}, std::polar(1.0, 0.3));
  for (const cplx w : {cplx(0.1, 0.2), cplx(-0.7, 0.1), cplx(0.0, 0.95)}) {
    const cplx ref = oracle::blaschke_naive({0.5, 0.5, cplx(-0.2, 0.6)}, w, std::polar(1.0, 0.3));
    EXPECT_NEAR(std::abs(b.evaluate(w) - ref), 0.0, 1e-14);
  }
}

TEST(BlaschkeConstruct, RejectsZerosNearCircle) {
  EXPECT_THROW(single(1.0 - 1e-11), DomainError);
  EXPECT_THROW(single(cplx(0.0, 1.0)), DomainError);
  EXPECT_NO_THROW(single(0.99));
}

TEST(BlaschkeConstruct, RejectsEmptyAndBadMultiplicity) {
  EXPECT_THROW(BlaschkeProduct({}), DomainError);
  EXPECT_THROW(single(0.1, 0), DomainError);
}

TEST(BlaschkeConstruct, MergesNearbyZeros) {
  const BlaschkeProduct b({{0.3, 1}, {0.3 + 1e-13, 2}, {-0.4, 1}});
  ASSERT_EQ(b.zeros().size(), 2u);
  EXPECT_EQ(b.zeros()[0].multiplicity, 3);
  EXPECT_EQ(b.degree(), 4);
}

TEST(BlaschkeConstruct, MonomialIsZPower) {
  const auto b = BlaschkeProduct::monomial(3);
  EXPECT_TRUE(b.is_monomial());
  const cplx w(0.3, -0.4);
  EXPECT_NEAR(std::abs(b.evaluate(w) - w * w * w), 0.0, 1e-15);
}

TEST(BlaschkeDerivative, SimpleZeroAtOrigin) {
  for (const cplx w : {cplx(0.0), cplx(0.4, 0.2), cplx(-0.9, 0.0)}) {
    EXPECT_NEAR(std::abs(single(0.0).derivative(w, 1) - cplx(-1.0)), 0.0, 1e-15);
  }
}

TEST(BlaschkeDerivative, DoubleZeroAtOriginSecondOrder) {
  EXPECT_NEAR(std::abs(single(0.0, 2).derivative(0.0, 2) - cplx(2.0)), 0.0, 1e-15);
}

TEST(BlaschkeDerivative, MatchesCentralDifference) {
  const auto b = single(0.5);
  const double h = 1e-5;
  const cplx fd = (b.evaluate(h) - b.evaluate(-h)) / (2.0 * h);
  EXPECT_NEAR(std::abs(b.derivative(0.0, 1) - fd), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(b.derivative(0.0, 1) - cplx(-0.75)), 0.0, 1e-14);
}

TEST(BlaschkeDerivative, HigherOrderAgainstDifferenceOfLowerOrder) {
  const BlaschkeProduct b({{cplx(0.2, 0.3), 2}, {-0.5, 1}});
  const cplx w(0.1, -0.2);
  const double h = 1e-5;
  for (int l = 1; l <= 4; ++l) {
    const cplx fd = (b.derivative(w + h, l - 1) - b.derivative(w - h, l - 1)) / (2.0 * h);
    EXPECT_NEAR(std::abs(b.derivative(w, l) - fd), 0.0, 1e-6 * std::max(1.0, std::abs(fd))) << "l=" << l;
  }
}

TEST(BlaschkeDerivative, OrderGuard) {
  EXPECT_THROW(single(0.5).derivative(0.0, 65), DomainError);
  EXPECT_NO_THROW(single(0.5).derivative(0.0, 64));
  EXPECT_THROW(single(0.5).derivative(0.0, -1), DomainError);
}

TEST(BlaschkeBoundary, ZeroAtOriginEightPoints) {
  const auto s = single(0.0).boundary_samples(8);
  ASSERT_EQ(s.size(), 8u);
  for (std::size_t j = 0; j < 8; ++j) {
    EXPECT_NEAR(std::abs(s[j] + std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / 8.0)), 0.0, 1e-15);
  }
}

TEST(BlaschkeBoundary, Unimodular) {
  double worst = 0.0;
  for (const auto& v : single(0.5).boundary_samples(256)) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
  EXPECT_LT(worst, 1e-12);
}

TEST(BlaschkeBoundary, AgreesWithPointwiseEvaluation) {
  const BlaschkeProduct b({{0.5, 1}, {-0.4, 1}});
  const auto s = b.boundary_samples(512);
  double worst = 0.0;
  for (std::size_t j = 0; j < 512; ++j) {
    const cplx z = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / 512.0);
    worst = std::max(worst, std::abs(s[j] - oracle::blaschke_naive({0.5, -0.4}, z)));
  }
  EXPECT_LT(worst, 1e-13);
}

TEST(BlaschkeProperties, UnimodularityOnRandomProducts) {
  for (const auto& b : random_products(7, 20)) {
    double worst = 0.0;
    for (const auto& v : b.boundary_samples(1024)) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
    EXPECT_LT(worst, 1e-12);
  }
}

TEST(BlaschkeProperties, ProductOfFactors) {
  std::mt19937_64 rng(11);
  for (const auto& b : random_products(8, 20)) {
    const cplx w = hardy::random::in_disk(rng, 0.95);
    cplx prod = b.phase();
    for (std::size_t i = 0; i < b.zeros().size(); ++i) {
      for (int m = 0; m < b.zeros()[i].multiplicity; ++m) prod *= b.factor(i, w);
    }
    EXPECT_NEAR(std::abs(b.evaluate(w) - prod), 0.0, 1e-13);
  }
}

TEST(BlaschkeProperties, VanishesAtZerosWithMultiplicityOrder) {
  for (const auto& b : random_products(9, 20)) {
    for (const auto& z : b.zeros()) {
      EXPECT_LT(std::abs(b.evaluate(z.point)), 1e-13);
      for (int l = 0; l < z.multiplicity; ++l) EXPECT_LT(std::abs(b.derivative(z.point, l)), 1e-12);
      EXPECT_GT(std::abs(b.derivative(z.point, z.multiplicity)), 1e-6);
    }
  }
}

TEST(BlaschkeJson, RoundTrip) {
  const BlaschkeProduct b({{cplx(0.2, -0.3), 2}, {0.5, 1}}, cplx(0.0, 1.0));
  const auto back = io::blaschke_from_json(io::to_json(b));
  ASSERT_EQ(back.degree(), 3);
  EXPECT_EQ(back.phase(), b.phase());
  const cplx w(0.1, 0.7);
  EXPECT_NEAR(std::abs(back.evaluate(w) - b.evaluate(w)), 0.0, 1e-15);
}

TEST(BlaschkeJson, RejectsUnknownKeys) {
  EXPECT_THROW(io::blaschke_from_json(nlohmann::json::parse(R"({"zeros":[{"re":0.1,"x":1}]})")), io::ConfigError);
  EXPECT_THROW(io::blaschke_from_json(nlohmann::json::parse(R"({"zero":[]})")), io::ConfigError);
}
