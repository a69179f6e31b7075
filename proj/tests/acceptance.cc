// Acceptance run: one PASS/FAIL line per criterion, exit 3 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gen.h"
#include "mtp/dimnum.h"
#include "mtp/dioph.h"
#include "mtp/dyadic_cantor.h"
#include "mtp/psi.h"
#include "mtp/tori.h"
#include "mtp/verify.h"

using namespace mtp;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Tracks the worst error and counts failures with a short note for the first.
struct Tally {
  int checks = 0, failures = 0;
  double max_err = 0;
  std::string first;

  void close(double got, double want, double tol, const std::string& what) {
    ++checks;
    const double err = std::abs(got - want);
    max_err = std::max(max_err, err);
    if (!(err <= tol)) fail(what + ": got " + std::to_string(got) + ", want " +
                            std::to_string(want));
  }
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) fail(what);
  }
  void fail(const std::string& what) {
    if (failures++ == 0) first = what;
  }
};

int g_failed = 0;

void report(int n, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", n, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ExponentVector tau_inf(double tau) {
  return ExponentVector({ExtReal::Finite(tau), ExtReal::Infinity()});
}

void formula_regression() {
  const auto t0 = Clock::now();
  Tally t;
  const double tol = 1e-9;
  for (double tau : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    t.close(dim_W(DiophInstance{2, {tau_inf(tau)}}), std::min(1.0, 3 / (1 + tau)), tol,
            "S(tau) at " + std::to_string(tau));
  }
  const TorusSystem sys({2, 3});
  const double l2 = std::log(2.0), l3 = std::log(3.0);
  for (double tau : {0.1, std::log(1.5), 1.0, l3, 2.0, 5.0}) {
    t.close(dim_torus(sys, {tau_inf(tau)}), std::min(1.0, (l2 + l3) / (l2 + tau)), tol,
            "S*(tau) at " + std::to_string(tau));
  }
  // power-log coordinates: the accumulation set comes from the psi limits
  for (auto [t1, t2] : {std::pair{2.0, 1.0}, {3.0, 0.5}, {1.0, 1.0}}) {
    std::vector<ExtReal> pt;
    for (auto [tau, sigma] : {std::pair{t1, 1.5}, {t2, 0.5}}) {
      auto f = parse_psi("powlog:tau=" + std::to_string(tau) + ",sigma=" + std::to_string(sigma));
      pt.push_back(f->exponent_limit(ExponentMode::kLogN).points.at(0));
    }
    t.close(dim_W(DiophInstance{2, {ExponentVector(pt)}}),
            std::min((3 + t1 - t2) / (1 + t1), 3 / (1 + t2)), tol,
            "power-log bound at (" + std::to_string(t1) + "," + std::to_string(t2) + ")");
  }
  for (int d : {1, 2, 3}) {
    for (double lam : {1.0 / d + 0.01, 1.0 / d + 0.5, 1.0, 2.0, 3.0, 7.5}) {
      if (!(lam > 1.0 / d)) continue;
      const ExponentVector v(std::vector<ExtReal>(d, ExtReal::Finite(lam)));
      const double want = (d + 1) / (1 + lam);
      t.close(dim_W(DiophInstance{size_t(d), {v}}), want, tol, "Dodson via dim_W");
      t.close(dim_corollary(v), want, tol, "Dodson via corollary");
    }
  }
  const double secs = seconds_since(t0);
  t.expect(secs < 1.0, "runtime over 1 s");
  report(1, "formula regression", t.failures == 0,
         std::to_string(t.checks) + " checks, max err " + fmt("%.2e", t.max_err) + ", " +
             fmt("%.3f", secs) + " s" + (t.failures ? "; " + t.first : ""));
}

void property_suites() {
  const auto t0 = Clock::now();
  Tally t;
  const int n = 1000;
  std::mt19937_64 rng(testing::kSeed + 100);

  for (int i = 0; i < n; ++i) {
    const auto s = testing::random_spec(rng, testing::random_p(rng));
    t.close(s0(s), s0_bruteforce(s), 1e-12, "oracle");
  }

  int ties = 0;
  for (int i = 0; i < n; ++i) {
    const auto s = testing::tied_spec(rng);
    for (const auto& A : testing::cut_levels(s)) {
      const double d = s_at(s, A);
      t.close(s_at(s, A, PartitionVariant::kTilde), d, 1e-12, "tilde variant");
      t.close(s_at(s, A, PartitionVariant::kHat), d, 1e-12, "hat variant");
      for (size_t k = 0; k < s.p(); ++k) {
        ties += (ExtReal::Finite(s.u[k]) == A) + (s.v[k] == A);
      }
    }
  }
  t.expect(ties > n, "too few engineered ties");

  for (int i = 0; i < n; ++i) {
    const auto s = testing::random_spec(rng, testing::random_p(rng));
    for (double c : {0.1, 1.0, 7.3}) {
      const auto sc = s.scaled(c);
      for (size_t k = 0; k < s.p(); ++k) t.close(s_level(sc, k), s_level(s, k), 1e-12, "scaling");
    }
  }

  for (int i = 0; i < n; ++i) {
    const auto s = testing::random_spec(rng, testing::random_p(rng));
    t.close(testing::min_level(testing::approach(s, 1e6)), testing::min_level(s), 1e-3,
            "continuity");
  }

  int accepted = 0, case2 = 0;
  while (accepted < n) {
    const auto v = testing::random_weight_input(rng);
    WeightVector w;
    try {
      w = optimal_weights(v);
    } catch (const std::domain_error&) {
      continue;
    }
    ++accepted;
    const double d = double(v.d());
    double sum = 0;
    for (size_t i = 0; i < v.d(); ++i) {
      t.expect(w.a[i] >= 1.0 && ExtReal::Finite(w.a[i]) <= v.t[i].plus(1.0), "weight bounds");
      sum += w.a[i];
    }
    t.close(sum, d + 1, 1e-12, "weight sum");
    const auto s = weight_spec(v, w);
    double got = INFINITY, want = INFINITY;
    for (size_t i : v.split.L) {
      got = std::min(got, s_level(s, i));
      want = std::min(want, zeta(v, i));
    }
    t.close(got, want, 1e-10, "min over L");
    if (w.which_case == 2) {
      ++case2;
      t.expect(w.t_star > 0, "t* > 0");
      for (size_t i : v.split.L) {
        if (v.t[i].value() < w.t_K) t.close(s_level(s, i), d, 1e-10, "case 2 level");
      }
    }
  }
  t.expect(case2 > 0, "no second-case inputs");

  const double secs = seconds_since(t0);
  t.expect(secs < 30, "runtime over 30 s");
  report(2, "property suites", t.failures == 0,
         std::to_string(t.checks) + " checks over " + std::to_string(5 * n) +
             " instances, max err " + fmt("%.2e", t.max_err) + ", " + fmt("%.2f", secs) +
             " s" + (t.failures ? "; " + t.first : ""));
}

void full_measure() {
  const auto t0 = Clock::now();
  FullMeasureConfig c;
  c.d = 2;
  c.a = {1.5, 1.5};
  c.q_ell = 10000;
  c.samples = 100000;
  c.seed = testing::kSeed;
  const auto r1 = lemma_full_measure(c);
  const double secs = seconds_since(t0);
  const auto r2 = lemma_full_measure(c);
  const bool same = r1.hits == r2.hits && r1.fraction == r2.fraction;
  const bool ok = r1.fraction >= 0.5 && secs < 60 && same;
  report(3, "full-measure Monte Carlo", ok,
         "fraction " + fmt("%.5f", r1.fraction) + " in [" + fmt("%.5f", r1.lo) + ", " +
             fmt("%.5f", r1.hi) + "], q in [" + std::to_string(r1.q_lo) + ", " +
             std::to_string(r1.q_hi) + "], " + fmt("%.2f", secs) + " s, repeat " +
             (same ? "identical" : "DIFFERS"));
}

void box_counts() {
  Tally t;
  std::string detail;
  auto timed = [&](const std::string& name, double tol, double want,
                   const std::function<double()>& run) {
    const auto t0 = Clock::now();
    double got = NAN;
    try {
      got = run();
    } catch (const std::exception& e) {
      t.fail(name + ": " + e.what());
    }
    const double secs = seconds_since(t0);
    t.close(got, want, tol, name);
    t.expect(secs < 300, name + " over 5 min");
    detail += (detail.empty() ? "" : "; ") + name + " " + fmt("%.4f", got) + " vs " +
              fmt("%.4f", want) + " in " + fmt("%.1f", secs) + " s";
  };

  BoxCountConfig one;
  one.psi = {parse_psi("pow:tau=2")};
  one.Q0 = 2;
  one.Q = 4096;
  one.m_min = 14;
  one.m_max = 30;
  BoxCountConfig two;
  two.psi = {parse_psi("pow:tau=1"), parse_psi("pow:tau=2")};
  two.Q0 = 2;
  two.Q = 4096;
  two.m_min = 8;
  two.m_max = 18;

  // targets from the formula side
  const double want1 = dim_W(DiophInstance{1, {parse_exponent_vector("(2)")}});
  const double want2 = dim_W(DiophInstance{2, {parse_exponent_vector("(1,2)")}});
  t.close(want1, 2.0 / 3, 1e-12, "formula target d=1");
  t.close(want2, 4.0 / 3, 1e-12, "formula target d=2");

  timed("boxcount d=1", 0.1, want1, [&] { return boxcount_dimension(one).estimate; });
  timed("boxcount d=2", 0.2, want2, [&] { return boxcount_dimension(two).estimate; });
  one.Q = two.Q = 1 << 20;
  timed("cover d=1", 0.05, want1, [&] { return cover_exponent(one).s; });
  timed("cover d=2", 0.05, want2, [&] { return cover_exponent(two).s; });
  report(4, "box-count cross-checks", t.failures == 0,
         detail + (t.failures ? "; " + t.first : ""));
}

void cantor() {
  const auto t0 = Clock::now();
  Tally t;
  const LevelSpec spec{{1, 1}, {1.5, 1.5}, {ExtReal::Finite(3), ExtReal::Finite(4)}};
  const double eps = 0.05;
  const double s = s0(spec);
  t.close(s, 1.0, 1e-12, "s0");
  std::string detail;
  try {
    const auto c = build_dyadic(DyadicSystem{{1.5, 1.5}, {3, 4}}, 3, eps);
    const auto chk = check_dyadic(c, 2000, testing::kSeed);
    for (double m : chk.mass) t.close(m, 1.0, 1e-9, "level mass");
    t.expect(chk.mass_exact, "exact mass");
    t.expect(chk.nesting_ok, "nesting");
    t.expect(chk.separation_ok, "separation");
    t.expect(chk.truncation_ok, "truncation");
    t.expect(chk.min_count_ratio >= 1.0 / 2500 && chk.max_count_ratio <= 2500,
             "#C ratio outside [1/2500, 2500]");
    const auto a = holder_audit_dyadic(c, spec, 10000, testing::kSeed);
    const double floor = s - 2 * eps - 0.1;
    t.expect(a.fitted_slope >= floor, "fitted slope " + fmt("%.4f", a.fitted_slope) +
                                          " below " + fmt("%.2f", floor));
    std::string ks;
    for (const auto& L : c.levels) ks += (ks.empty() ? "" : ",") + std::to_string(L.k);
    detail = "k=" + ks + ", #C ratio [" + fmt("%.3f", chk.min_count_ratio) + ", " +
             fmt("%.3f", chk.max_count_ratio) + "], slope " + fmt("%.4f", a.fitted_slope) +
             " (need >= " + fmt("%.2f", floor) + "), through-origin " +
             fmt("%.4f", a.origin_slope) + ", log2 max constant " +
             fmt("%.2f", a.log2_max_constant);
  } catch (const std::exception& e) {
    t.fail(std::string("error: ") + e.what());
  }
  const double secs = seconds_since(t0);
  t.expect(secs < 180, "runtime over 3 min");
  report(5, "dyadic Cantor construction", t.failures == 0,
         detail + ", " + fmt("%.1f", secs) + " s" + (t.failures ? "; " + t.first : ""));
}

}  // namespace

int main() {
  formula_regression();
  property_suites();
  full_measure();
  box_counts();
  cantor();
  return g_failed == 0 ? 0 : 3;
}
