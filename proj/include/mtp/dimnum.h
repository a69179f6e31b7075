// Dimensional numbers s(u,v,A), their level values and the minimum s0.
//
// Indices are 0-based throughout the C++ API; the CLI prints 1-based ones.

#ifndef MTP_DIMNUM_H_
#define MTP_DIMNUM_H_

#include <cstddef>
#include <vector>

#include "mtp/extreal.h"

namespace mtp {

struct LevelSpec {
  std::vector<double> delta;
  std::vector<double> u;
  std::vector<ExtReal> v;

  size_t p() const { return u.size(); }
  // Throws std::invalid_argument when lengths differ, p == 0, some delta or
  // u is not positive, or u_i > v_i.
  void validate() const;
  // (delta, c*u, c*v) with c*inf = inf.
  LevelSpec scaled(double c) const;
};

struct IndexSplit {
  std::vector<size_t> L;     // v_i finite
  std::vector<size_t> Linf;  // v_i infinite
};

IndexSplit index_split(const std::vector<ExtReal>& v);

enum class PartitionVariant { kDefault, kTilde, kHat };

struct Partition {
  std::vector<size_t> K1, K2, K3;
  ExtReal level;
};

Partition partition_at(const LevelSpec& spec, const ExtReal& A,
                       PartitionVariant variant = PartitionVariant::kDefault);

double s_at(const LevelSpec& spec, const ExtReal& A,
            PartitionVariant variant = PartitionVariant::kDefault);

// s(u,v,i) = s(u,v,v_i) and sbar(u,v,i) = s(u,v,u_i).
double s_level(const LevelSpec& spec, size_t i);
double s_bar_level(const LevelSpec& spec, size_t i);

// Sum of delta over L(v).
double delta_sum_finite(const LevelSpec& spec);

double s0(const LevelSpec& spec);
// min of s_at over every A in {u_i} u {v_i}, together with the sum of delta
// over L(v). Evaluated independently of s0.
double s0_bruteforce(const LevelSpec& spec);

// theta*_i with the (1 - kappa) factor; kappa in [0, 1).
double theta_star(const LevelSpec& spec, size_t i, double kappa);
double s0_resonant(const LevelSpec& spec, double kappa);

}  // namespace mtp

#endif  // MTP_DIMNUM_H_
