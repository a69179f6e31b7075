#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gen.h"
#include "mtp/dimnum.h"
#include "mtp/tori.h"

using namespace mtp;

namespace {

ExponentVector tau_inf(double tau) {
  return ExponentVector({ExtReal::Finite(tau), ExtReal::Infinity()});
}

}  // namespace

TEST_SUITE("tori") {

TEST_CASE("xi examples") {
  const TorusSystem sys({2, 3});
  const double l2 = std::log(2.0), l3 = std::log(3.0);
  // tau = log 1.5 sits on the K1 boundary, where both branches agree
  CHECK(xi(sys, tau_inf(std::log(1.5)), 0) == doctest::Approx(std::log(6.0) / std::log(3.0)));
  for (double tau : {0.5, 1.0, 4.0}) {
    auto x = xi_terms(sys, tau_inf(tau), 0);
    CHECK(x.K1.empty());
    CHECK(x.K2 == std::vector<size_t>{0});
    CHECK(x.K3 == std::vector<size_t>{1});
    CHECK(x.value == doctest::Approx((l2 + l3) / (l2 + tau)));
  }
  const double tau = 0.1;
  auto x = xi_terms(sys, tau_inf(tau), 0);
  CHECK(x.K1 == std::vector<size_t>{1});
  CHECK(x.value == doctest::Approx(1 + l2 / (l2 + tau)));
  CHECK(x.value > 1);
  const TorusSystem ee({std::exp(1.0), std::exp(1.0)});
  CHECK(xi(ee, parse_exponent_vector("(0,0)"), 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(xi(sys, tau_inf(1), 1), std::domain_error);
}

TEST_CASE("dim_torus examples") {
  const TorusSystem sys({2, 3});
  for (double tau : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(dim_torus(sys, {tau_inf(tau)}) ==
          doctest::Approx(std::min(1.0, std::log(6.0) / (std::log(2.0) + tau))));
  }
  CHECK(dim_torus(sys, {tau_inf(std::log(3.0))}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dim_torus(TorusSystem({2, 2}), {parse_exponent_vector("(0,0)")}) == doctest::Approx(2.0));
  CHECK(dim_torus(sys, {parse_exponent_vector("(inf,inf)")}) == 0.0);
  CHECK_THROWS_AS(dim_torus(sys, {}), std::invalid_argument);
  CHECK_THROWS_AS(TorusSystem({2, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(TorusSystem({-1}), std::invalid_argument);
  // negative eigenvalues enter through their modulus
  CHECK(dim_torus(TorusSystem({-2, 3}), {tau_inf(1)}) == dim_torus(sys, {tau_inf(1)}));
}

TEST_CASE("crossover continuity") {
  const TorusSystem sys({2, 3});
  double prev = dim_torus(sys, {tau_inf(0)});
  for (double tau = 0; tau <= 6; tau += 1e-3) {
    const double v = dim_torus(sys, {tau_inf(tau)});
    if (tau <= std::log(3.0)) CHECK(v == doctest::Approx(1.0));
    CHECK(std::abs(v - prev) < 1e-2);
    prev = v;
  }
}

TEST_CASE("reduces to the level values for beta = e") {
  std::mt19937_64 rng(testing::kSeed + 30);
  for (int n = 0; n < 300; ++n) {
    const size_t d = std::uniform_int_distribution<size_t>(1, 5)(rng);
    std::vector<ExtReal> t;
    LevelSpec s;
    for (size_t i = 0; i < d; ++i) {
      t.push_back(ExtReal::Finite(testing::uniform(rng, 0, 3)));
      s.delta.push_back(1);
      s.u.push_back(1);
      s.v.push_back(t.back().plus(1));
    }
    const TorusSystem sys(std::vector<double>(d, std::exp(1.0)));
    const ExponentVector tv(t);
    for (size_t i = 0; i < d; ++i) {
      CHECK(std::abs(xi(sys, tv, i) - s_level(s, i)) <= 1e-12);
    }
  }
}

TEST_CASE("permutation equivariance") {
  std::mt19937_64 rng(testing::kSeed + 31);
  for (int n = 0; n < 300; ++n) {
    const size_t d = std::uniform_int_distribution<size_t>(1, 5)(rng);
    std::vector<double> beta;
    std::vector<ExtReal> t;
    for (size_t i = 0; i < d; ++i) {
      beta.push_back(testing::uniform(rng, 1.1, 9) * (testing::uniform(rng, 0, 1) < 0.3 ? -1 : 1));
      t.push_back(testing::uniform(rng, 0, 1) < 0.25
                      ? ExtReal::Infinity()
                      : ExtReal::Finite(testing::uniform(rng, 0, 3)));
    }
    std::vector<size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pb;
    std::vector<ExtReal> pt;
    for (size_t i : perm) {
      pb.push_back(beta[i]);
      pt.push_back(t[i]);
    }
    CHECK(dim_torus(TorusSystem(beta), {ExponentVector(t)}) ==
          doctest::Approx(dim_torus(TorusSystem(pb), {ExponentVector(pt)})).epsilon(1e-12));
  }
}

}  // TEST_SUITE
