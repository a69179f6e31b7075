// Hausdorff dimension of weighted simultaneous approximation sets W_d(Psi).

#ifndef MTP_DIOPH_H_
#define MTP_DIOPH_H_

#include <cstddef>
#include <string>
#include <vector>

#include "mtp/psi.h"

namespace mtp {

struct DiophInstance {
  size_t d = 0;
  std::vector<ExponentVector> U;

  // Throws std::invalid_argument on empty U or length mismatch.
  void validate() const;
};

double zeta(const ExponentVector& t, size_t i);

// min{ min_{i in L(t)} zeta_i(t), #L(t) }; 0 when L(t) is empty.
double dim_inner(const ExponentVector& t);

double dim_W(const DiophInstance& inst);

// Corollary form: L = {0 < lambda_i < inf}.
double dim_corollary(const ExponentVector& lambda);

struct WeightVector {
  std::vector<double> a;
  int which_case = 0;  // 1 or 2
  double t_K = 0;      // case 2 only
  double t_star = 0;   // case 2 only
  std::vector<double> T;  // the candidate set, case 2 only
};

// Weights from the lower bound proof. Needs L(t) nonempty and the finite
// components summing to at least 1; otherwise std::domain_error.
WeightVector optimal_weights(const ExponentVector& t);

// LevelSpec with delta = 1, u = a, v = 1 + t.
LevelSpec weight_spec(const ExponentVector& t, const WeightVector& w);

struct DiophRow {
  std::string t;
  std::vector<double> zeta;  // NaN-free; infinite i carry #L
  size_t finite_count;
  double inner;
};

std::vector<DiophRow> dioph_rows(const DiophInstance& inst);

}  // namespace mtp

#endif  // MTP_DIOPH_H_
