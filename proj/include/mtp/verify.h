// Independent numerical estimators: Monte-Carlo measure of the approximation
// sets in the full-measure lemma, grid box counting and a natural-cover
// exponent.

#ifndef MTP_VERIFY_H_
#define MTP_VERIFY_H_

#include <cstdint>
#include <vector>

#include "mtp/psi.h"

namespace mtp {

struct FullMeasureConfig {
  int d = 2;
  std::vector<double> a;
  int64_t q_ell = 10000;
  int64_t samples = 100000;
  uint64_t seed = 1;
  double budget = 1e12;  // cap on q_ell * samples

  // M = 4^(d+1) and max_i M^(1/a_i).
  int64_t M() const;
  double Mtilde() const;
  void validate() const;
};

struct FullMeasureResult {
  int64_t hits = 0;
  int64_t samples = 0;
  double fraction = 0;
  double lo = 0, hi = 0;  // 99% Wilson interval
  int64_t M = 0;
  double Mtilde = 0;
  int64_t q_lo = 0, q_hi = 0;
};

FullMeasureResult lemma_full_measure(const FullMeasureConfig& cfg);

// Wilson score interval for hits/n at normal quantile z.
void wilson_interval(int64_t hits, int64_t n, double z, double* lo, double* hi);

enum class BoxCountMode {
  // every q in [Q0, Q] at every resolution (the finite union as it stands)
  kUnion,
  // at resolution m only the q whose shortest side is in (2^-m-1, 2^-m]
  kShell,
};

struct BoxCountConfig {
  std::vector<PsiPtr> psi;
  int64_t Q0 = 2, Q = 4096;
  int m_min = 8, m_max = 14;
  int fit = 4;  // number of top resolutions in the fit
  BoxCountMode mode = BoxCountMode::kShell;
  double max_cells = 6e7;  // memory guard on occupied cells per resolution

  int d() const { return static_cast<int>(psi.size()); }
  void validate() const;
};

struct BoxCountResult {
  double estimate = 0;
  std::vector<int> m;
  std::vector<uint64_t> count;
  std::vector<int64_t> q_used;  // number of denominators per resolution
};

BoxCountResult boxcount_dimension(const BoxCountConfig& cfg);

struct CoverResult {
  double s = 0;
  int iterations = 0;
  double g_lo = 0, g_hi = 0;  // g at the bracket ends [0, d]
};

// Heuristic upper-bound indicator; see README for the cost model.
CoverResult cover_exponent(const BoxCountConfig& cfg);
// Growth rate of the dyadic block sums at exponent s (exposed for tests).
double cover_growth(const BoxCountConfig& cfg, double s);

// Ordinary least squares slope of y on x with an intercept.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mtp

#endif  // MTP_VERIFY_H_
