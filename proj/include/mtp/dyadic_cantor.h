// Cantor construction on the dyadic-rational ball system, held implicitly.
//
// At every admissible scale k (k*u_i an integer) the big rectangles have
// half-sides a_i = 2^(-k u_i) and centres at the odd multiples of a_i, so they
// tile [0,1]^p. The shrunk exponents are v_i(k) = (ceil(k v_i) + 2)/k, which
// tend to v_i from above. Inside a ball of radius 2^-e the greedy 5r selection
// is a product lattice and every parent ball sees the same offsets, so a level
// is described by a handful of integers per axis. Coordinates are exact
// integers in units of 2^-E with E = e_J + 64.

#ifndef MTP_DYADIC_CANTOR_H_
#define MTP_DYADIC_CANTOR_H_

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "mtp/cantor.h"
#include "mtp/dimnum.h"

namespace mtp {

struct DyadicSystem {
  std::vector<double> u;
  std::vector<double> v;  // limits of v_{i,n}; v_i >= u_i

  size_t p() const { return u.size(); }
  // p in [1,3], 0 < u_i <= v_i, u_i rational with denominator <= 10^4.
  void validate() const;
  // least k > 0 with k*u_i integral for every i
  int64_t K0() const;
  // ceil(k v_i) + 2, the shrunk exponent times k
  int64_t V(size_t i, int64_t k) const;
  int64_t A(size_t i, int64_t k) const;  // k u_i
};

struct DyadicAxis {
  int64_t A = 0;  // big half-side 2^-A
  int64_t q = 0;  // half of the inner ball is Q = 2^q big half-sides
  int64_t V = 0;  // shrunk half-side 2^-V
  mpz_class N;    // rectangles per parent along this axis
  mpz_class m;    // balls per rectangle along this axis
};

struct DyadicLevel {
  int j = 0;
  int64_t k = 0;
  int64_t e_parent = 0, e = 0;  // parent and ball radii 2^-e
  std::vector<DyadicAxis> axes;
  mpq_class weight;  // nu_j of each ball
  double log2_parent_density = 0;
  double w = 0;            // max_i v_i(k)
  double raw_ratio = 0;    // mu(union of kept big rectangles) / mu(parent)
  double cover_ratio = 0;  // share of 1/2 B under the 25-fold dilations
  bool truncation_ok = false;  // coarsest group holds half the selected mass

  mpz_class children_per_parent() const;
};

struct DyadicConstruction {
  DyadicSystem sys;
  double eps = 0;
  std::vector<DyadicLevel> levels;  // levels[0] is level 1

  int depth() const { return static_cast<int>(levels.size()); }
  int64_t unit_exponent() const;  // E
};

struct DyadicBuildOptions {
  double c_pack = 0.4;
  int64_t k_max = 10'000'000;
};

// Throws std::invalid_argument on eps <= 0 or depth < 1 and
// std::runtime_error when no scale up to k_max satisfies the cutoffs.
DyadicConstruction build_dyadic(const DyadicSystem& sys, int depth, double eps,
                                const DyadicBuildOptions& opt = {});

struct DyadicCheck {
  std::vector<double> mass;  // per level, level 0 included
  bool mass_exact = true;    // exact rational total 1 and parent link
  bool nesting_ok = true;
  bool separation_ok = true;
  bool truncation_ok = true;
  double min_gap_ratio = 0;  // min analytic gap between siblings / (10 rho)
  double min_count_ratio = 0, max_count_ratio = 0;
  double min_cover_ratio = 0, min_raw_ratio = 0;
  int64_t sampled = 0;
};

DyadicCheck check_dyadic(const DyadicConstruction& c, int64_t samples = 2000,
                         uint64_t seed = 1);

// log2 nu_J of the max-norm ball B(x, r); x and r are converted exactly.
double log2_nu_box(const DyadicConstruction& c, const std::vector<double>& x,
                   double r);

AuditResult holder_audit_dyadic(const DyadicConstruction& c,
                                const LevelSpec& spec, int64_t samples,
                                uint64_t seed = 1);

// Materializes levels 0..depth as explicit balls; throws when a level would
// exceed max_balls balls or a radius falls below 2^-60.
std::vector<CantorLevel> enumerate_dyadic(const DyadicConstruction& c,
                                          size_t max_balls);

}  // namespace mtp

#endif  // MTP_DYADIC_CANTOR_H_
