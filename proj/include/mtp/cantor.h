// Finite-depth Cantor construction on explicit ball systems in [0,1]^p.
//
// Every factor is X_i = [0,1] with Lebesgue measure (delta_i = 1) and the max
// norm, so balls and rectangles are axis-parallel boxes. Two boxes count as
// disjoint when their interiors are.

#ifndef MTP_CANTOR_H_
#define MTP_CANTOR_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "mtp/dimnum.h"

namespace mtp {

struct Ball {
  std::vector<double> center;
  double radius = 0;
};

enum class RectKind { kBig, kShrunk };

struct WeightedRectangle {
  std::vector<double> center;
  int k = 0;                  // dyadic scale, r = 2^-k
  std::vector<double> exps;   // half-side in factor i is 2^(-k exps_i)
  RectKind kind = RectKind::kBig;
  size_t n = 0;               // index in the ball system

  double half_side(size_t i) const;
  double volume() const;
};

// Stored prefix of the sequences x_{i,n}, r_n = 2^-k_n and v_{i,n}.
struct BallSystem {
  std::vector<double> u;
  std::vector<double> delta;
  std::vector<std::vector<double>> centers;  // per n, p coordinates
  std::vector<int> k;                        // per n
  std::vector<std::vector<double>> v;        // per n, p exponents

  size_t p() const { return u.size(); }
  size_t size() const { return k.size(); }
  // k_n >= 1 and non-decreasing, v_{i,n} > u_i, delta_i = 1, p <= 3.
  void validate() const;
  WeightedRectangle big(size_t n) const;
};

enum class DilationKind {
  kTildeRho,  // dilation of the ball in the metric max_i rho_i^(u/u_i)
  kStandard,  // every half-side times the factor
};

// Greedy largest-first selection (ties by lexicographic centre): a rectangle
// is kept iff its dilation is disjoint from the dilations of all kept ones.
// Returns indices into rects. All rects must share exps.
std::vector<size_t> rectangle_cover_select(
    const std::vector<WeightedRectangle>& rects, double dilation = 5.0,
    DilationKind kind = DilationKind::kTildeRho);

struct KgbResult {
  std::vector<WeightedRectangle> rects;
  double raw_ratio = 0;    // mu(union R~) / mu(B)
  double cover_ratio = 0;  // mu(1/2 B covered by the 25-fold dilations) / mu(1/2 B)
  size_t candidates = 0;   // members of Gamma inside 2/3 B
  size_t dropped_outside = 0;
  size_t truncated = 0;    // removed by the half-mass truncation
};

struct KgbOptions {
  double c_pack = 0.4;
};

// Throws std::runtime_error on an empty candidate set or when the cover ratio
// falls under c_pack.
KgbResult kgb_select(const Ball& B, size_t G, const BallSystem& sys,
                     const KgbOptions& opt = {});

struct ScaleRow {
  std::vector<double> v;  // v_i(G,B,k)
  double w = 0;           // max_i v_i(G,B,k)
  size_t members = 0;
};

struct ShrinkResult {
  std::vector<WeightedRectangle> shrunk;  // parallel to the input
  std::map<int, ScaleRow> table;
};

ShrinkResult shrink_group(const std::vector<WeightedRectangle>& K,
                          const BallSystem& sys);

// Lattice of balls of radius 2^(-k w), step 10 radii, centred in R.
std::vector<Ball> pack_balls(const WeightedRectangle& R, double w);
// Per-factor lattice counts used by pack_balls.
std::vector<uint64_t> pack_counts(const WeightedRectangle& R, double w);

struct LevelRect {
  WeightedRectangle big, shrunk;
  size_t parent = 0;
  double w = 0;
  size_t first_ball = 0, n_balls = 0;
};

struct LevelBall {
  Ball ball;
  double weight = 0;
  size_t parent = 0;  // ball index one level up
  size_t rect = 0;    // index into this level's rects
};

struct CantorLevel {
  int j = 0;
  std::vector<LevelBall> balls;
  std::vector<LevelRect> rects;
  size_t G = 0;  // cutoff used to build this level from the one above
  double min_cover_ratio = 0, min_raw_ratio = 0;
};

struct BuildOptions {
  KgbOptions kgb;
};

// Level 0 is [0,1]^p with weight 1. Throws when eps <= 0, depth < 1 or the
// cutoff search runs past the stored sequence.
std::vector<CantorLevel> build_levels(const BallSystem& sys, int depth,
                                      double eps, const BuildOptions& opt = {});

struct LevelCheck {
  std::vector<double> mass;  // per level
  bool mass_ok = true;
  bool nesting_ok = true;
  bool separation_ok = true;
  bool link_ok = true;  // nu_j(B_{j-1}) = nu_{j-1}(B_{j-1})
  double min_count_ratio = 0, max_count_ratio = 0;
};

LevelCheck check_levels(const std::vector<CantorLevel>& levels,
                        const BallSystem& sys);

struct AuditResult {
  double s0 = 0;
  double eps = 0;
  double fitted_slope = 0;      // OLS with intercept of log nu on log r
  double origin_slope = 0;      // least squares through the origin
  double log2_max_constant = 0; // max over samples of log2(nu / r^(s0-2eps))
  double log2_r_min = 0, log2_r_max = 0;
  int64_t samples = 0;
};

// Samples x from the deepest level and r log-uniform on [min radius, 1/2];
// nu is the exact deepest-level measure of the max-norm ball B(x, r).
AuditResult holder_audit(const std::vector<CantorLevel>& levels,
                         const LevelSpec& spec, double eps, int64_t samples,
                         uint64_t seed = 1);

// Exact Lebesgue measure of the union of boxes [lo, hi] inside the clip box.
double union_measure(const std::vector<double>& clip_lo,
                     const std::vector<double>& clip_hi,
                     const std::vector<std::vector<double>>& lo,
                     const std::vector<std::vector<double>>& hi);

}  // namespace mtp

#endif  // MTP_CANTOR_H_
