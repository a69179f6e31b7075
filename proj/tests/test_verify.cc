#include <doctest.h>

#include <cmath>

#include "mtp/verify.h"

using namespace mtp;

namespace {

BoxCountConfig boxcfg(std::vector<const char*> psi) {
  BoxCountConfig c;
  for (const char* s : psi) c.psi.push_back(parse_psi(s));
  return c;
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("full-measure config gate") {
  FullMeasureConfig c;
  c.d = 2;
  c.a = {1.5, 1.5};
  CHECK(c.M() == 64);
  CHECK(c.Mtilde() == doctest::Approx(16.0));
  CHECK_NOTHROW(c.validate());
  c.a = {1, 1};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.a = {0.5, 2.5};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.a = {1.5, 1.5};
  c.q_ell = 63;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.q_ell = 10000;
  c.samples = 1000000000;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("full-measure runs are deterministic") {
  FullMeasureConfig c;
  c.d = 2;
  c.a = {1.5, 1.5};
  c.q_ell = 2000;
  c.samples = 3000;
  c.seed = 7;
  const auto r1 = lemma_full_measure(c);
  const auto r2 = lemma_full_measure(c);
  CHECK(r1.hits == r2.hits);
  CHECK(r1.fraction == r2.fraction);
  CHECK(r1.lo <= r1.fraction);
  CHECK(r1.fraction <= r1.hi);
  CHECK(r1.fraction >= 0.5);
  CHECK(r1.q_lo == 32);
  c.seed = 8;
  CHECK(lemma_full_measure(c).samples == 3000);
}

TEST_CASE("single-q window at q_ell = M") {
  FullMeasureConfig c;
  c.d = 1;
  c.a = {2};
  c.q_ell = 16;
  c.samples = 20000;
  const auto r = lemma_full_measure(c);
  CHECK(r.q_lo == 1);
  CHECK(r.q_hi == 16);
  // radius (4/16)^2 at every q in [1, 16]: q = 16 alone covers half of [0,1)
  CHECK(r.fraction >= 0.5);
  CHECK(r.fraction <= 1.0);
}

TEST_CASE("wilson interval") {
  double lo, hi;
  wilson_interval(50, 100, 1.959963984540054, &lo, &hi);
  CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));
  wilson_interval(100, 100, 2.5758293035489, &lo, &hi);
  CHECK(hi == 1.0);
  CHECK(lo < 1.0);
}

TEST_CASE("ols slope") {
  CHECK(ols_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2));
  CHECK_THROWS(ols_slope({1}, {1}));
  CHECK_THROWS(ols_slope({1, 1}, {1, 2}));
}

TEST_CASE("box count d=1 tau=2") {
  auto c = boxcfg({"pow:tau=2"});
  c.Q = 4096;
  c.m_min = 14;
  c.m_max = 30;
  const auto r = boxcount_dimension(c);
  CHECK(std::abs(r.estimate - 2.0 / 3) <= 0.1);
}

TEST_CASE("box count divergent regime is essentially full") {
  auto c = boxcfg({"pow:tau=0.5"});
  c.Q0 = 256;
  c.Q = 4096;
  c.m_min = 8;
  c.m_max = 14;
  c.mode = BoxCountMode::kUnion;
  const auto r = boxcount_dimension(c);
  CHECK(std::abs(r.estimate - 1.0) <= 0.05);
}

TEST_CASE("box counts are deterministic and monotone in union mode") {
  auto c = boxcfg({"pow:tau=1", "pow:tau=2"});
  c.Q0 = 16;
  c.Q = 512;
  c.m_min = 6;
  c.m_max = 12;
  c.mode = BoxCountMode::kUnion;
  const auto a = boxcount_dimension(c);
  const auto b = boxcount_dimension(c);
  CHECK(a.count == b.count);
  CHECK(a.estimate == b.estimate);
  for (size_t i = 1; i < a.count.size(); ++i) CHECK(a.count[i] >= a.count[i - 1]);
}

TEST_CASE("box count guards") {
  auto c = boxcfg({"pow:tau=2"});
  c.Q0 = 1;
  CHECK_THROWS_AS(boxcount_dimension(c), std::invalid_argument);
  c = boxcfg({"pow:tau=1", "pow:tau=1", "pow:tau=1"});
  CHECK_THROWS_AS(boxcount_dimension(c), std::invalid_argument);
  c = boxcfg({"sexp:c=1,k=2"});
  c.Q0 = 64;
  c.Q = 128;
  CHECK_THROWS(boxcount_dimension(c));
}

TEST_CASE("cover exponent") {
  auto c = boxcfg({"pow:tau=2"});
  c.Q = 1 << 20;
  CHECK(std::abs(cover_exponent(c).s - 2.0 / 3) <= 0.05);
  for (double tau : {0.75, 1.0, 2.0, 4.0}) {
    auto t = std::to_string(tau);
    auto c2 = boxcfg({("pow:tau=" + t).c_str(), ("pow:tau=" + t).c_str()});
    c2.Q = 1 << 20;
    CHECK(std::abs(cover_exponent(c2).s - 3 / (1 + tau)) <= 0.05);
  }
  // a super-polynomial coordinate: min{1, 3/(1+tau)}
  for (double tau : {1.0, 2.0, 4.0}) {
    auto c3 = boxcfg({("pow:tau=" + std::to_string(tau)).c_str(), "sexp:c=1,k=1"});
    c3.Q = 1 << 20;
    CHECK(std::abs(cover_exponent(c3).s - std::min(1.0, 3 / (1 + tau))) <= 0.05);
  }
  // growth is decreasing in s
  CHECK(cover_growth(c, 0.5) > cover_growth(c, 0.8));
}

}  // TEST_SUITE
