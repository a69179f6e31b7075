#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "gen.h"
#include "mtp/psi.h"

using namespace mtp;

TEST_SUITE("psi") {

TEST_CASE("eval examples") {
  CHECK(parse_psi("pow:tau=2")->eval(10) == doctest::Approx(0.01));
  CHECK(parse_psi("sexp:c=1,k=1")->eval(3) == doctest::Approx(0.049787).epsilon(1e-5));
  CHECK(parse_psi("powlog:tau=1,sigma=2")->eval(std::exp(2.0)) ==
        doctest::Approx(0.033834).epsilon(1e-5));
  CHECK_THROWS_AS(parse_psi("pow:tau=2")->eval(1.5), std::domain_error);
}

TEST_CASE("exponent limits") {
  auto one = [](const char* s, ExponentMode m) {
    auto l = parse_psi(s)->exponent_limit(m);
    REQUIRE(l.points.size() == 1);
    CHECK_FALSE(l.is_hull);
    return l.points[0];
  };
  CHECK(one("pow:tau=2", ExponentMode::kLogN) == ExtReal::Finite(2));
  CHECK(one("powlog:tau=1,sigma=2", ExponentMode::kLogN) == ExtReal::Finite(1));
  CHECK(one("sexp:c=1,k=1", ExponentMode::kLogN).is_inf());
  CHECK(one("sexp:c=1,k=2", ExponentMode::kLinear).is_inf());
  CHECK(one("sexp:c=0.5,k=1", ExponentMode::kLinear) == ExtReal::Finite(0.5));
  CHECK(one("geom:beta=2,rate=sexp:c=0.5,k=1", ExponentMode::kLinear).value() ==
        doctest::Approx(std::log(2.0) + 0.5));
  CHECK_THROWS_AS(parse_psi("geom:beta=2,rate=pow:tau=1")->exponent_limit(ExponentMode::kLogN),
                  std::invalid_argument);
  auto alt = parse_psi("alt:[pow:tau=1|pow:tau=3]")->exponent_limit(ExponentMode::kLogN);
  CHECK(alt.is_hull);
  REQUIRE(alt.points.size() == 2);
  CHECK(alt.points[0] == ExtReal::Finite(1));
  CHECK(alt.points[1] == ExtReal::Finite(3));
}

TEST_CASE("parser errors carry a column") {
  for (const char* bad : {"pow:tau=", "pow:tau=x", "foo:tau=1", "pow:tau=1,", "alt:[pow:tau=1",
                          "pow:tau=-1", "geom:beta=0.5,rate=pow:tau=1", "sexp:c=1"}) {
    CAPTURE(bad);
    try {
      parse_psi(bad);
      FAIL("accepted malformed input");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("column") != std::string::npos);
    }
  }
}

TEST_CASE("round trip through the text form") {
  for (const char* s : {"pow:tau=2", "powlog:tau=1,sigma=2", "sexp:c=1,k=2",
                        "geom:beta=2,rate=sexp:c=0.5,k=1", "alt:[pow:tau=1|pow:tau=3]"}) {
    auto f = parse_psi(s);
    auto g = parse_psi(f->str());
    CHECK(f->str() == g->str());
    CHECK(f->neg_log(1e5) == g->neg_log(1e5));
  }
}

TEST_CASE("sampling examples") {
  auto s = sample_exponents({parse_psi("pow:tau=2")}, ExponentMode::kLogN, 1e6);
  for (const auto& x : s) CHECK(std::abs(x.values[0] - 2) <= 1e-12);

  s = sample_exponents({parse_psi("powlog:tau=1,sigma=2")}, ExponentMode::kLogN, 1e6);
  double prev = INFINITY;
  for (const auto& x : s) {
    if (x.n < 16) continue;  // loglog n / log n peaks near n = e^e
    const double gap = x.values[0] - 1;
    CHECK(gap == doctest::Approx(2 * std::log(std::log(x.n)) / std::log(x.n)));
    CHECK(gap < prev);
    prev = gap;
  }

  s = sample_exponents({parse_psi("sexp:c=1,k=1")}, ExponentMode::kLogN, 1e6);
  CHECK(s.back().saturated[0]);
  CHECK(s.back().values[0] == 1e3);
  CHECK_FALSE(s.front().saturated[0]);
  CHECK(s.front().values[0] == doctest::Approx(s.front().n / std::log(s.front().n)));
  CHECK_THROWS(sample_exponents({parse_psi("pow:tau=2")}, ExponentMode::kLogN, 5));
}

TEST_CASE("monotone on random parameters") {
  std::mt19937_64 rng(testing::kSeed + 10);
  auto u = [&](double a, double b) { return testing::uniform(rng, a, b); };
  for (int n = 0; n < 200; ++n) {
    const double tau = u(0.1, 5);
    std::vector<PsiPtr> fs = {
        Psi::Make(PowerLaw{tau}),
        Psi::Make(PowerLog{tau, u(-tau * std::log(2.0), 3)}),
        Psi::Make(StretchedExp{u(0.1, 3), u(0.1, 2)}),
        Psi::Make(GeometricExp{u(1.1, 5) * (n % 2 ? -1 : 1), Psi::Make(PowerLaw{tau})}),
        Psi::Make(BlockAlternate{Psi::Make(PowerLaw{tau}), Psi::Make(PowerLaw{u(0.1, 5)})}),
    };
    for (const auto& f : fs) {
      double prev = f->neg_log(2);
      for (double x = 2.5; x < 1e7; x *= 1.37) {
        const double cur = f->neg_log(x);
        CHECK(cur >= prev - 1e-9 * std::abs(prev));
        prev = cur;
      }
    }
  }
}

TEST_CASE("samples sit in the envelope") {
  std::mt19937_64 rng(testing::kSeed + 11);
  const double N = 1e8;
  for (int n = 0; n < 100; ++n) {
    const double tau = testing::uniform(rng, 0.1, 5);
    const double sigma = testing::uniform(rng, 0, 3);
    auto s = sample_exponents({Psi::Make(PowerLaw{tau}), Psi::Make(PowerLog{tau, sigma})},
                              ExponentMode::kLogN, N);
    const auto& last = s.back();
    CHECK(std::abs(last.values[0] - tau) <= 1e-12);
    CHECK(std::abs(last.values[1] - tau) <=
          sigma * std::log(std::log(N)) / std::log(N) + 1e-12);
  }
}

TEST_CASE("exponent vector parsing") {
  auto t = parse_exponent_vector("(1.5,inf)");
  CHECK(t.d() == 2);
  CHECK(t.split.L == std::vector<size_t>{0});
  CHECK(t.str() == "(1.5,inf)");
  CHECK_THROWS(parse_exponent_vector("(1,-2)"));
}

}  // TEST_SUITE
