// Shrinking targets for diagonal expanding maps of the d-torus.

#ifndef MTP_TORI_H_
#define MTP_TORI_H_

#include <cstddef>
#include <vector>

#include "mtp/psi.h"

namespace mtp {

class TorusSystem {
 public:
  // Every |beta_i| > 1, else std::invalid_argument.
  explicit TorusSystem(std::vector<double> beta);

  size_t d() const { return beta_.size(); }
  const std::vector<double>& beta() const { return beta_; }
  const std::vector<double>& log_abs_beta() const { return log_beta_; }

 private:
  std::vector<double> beta_;
  std::vector<double> log_beta_;
};

struct XiTerms {
  std::vector<size_t> K1, K2, K3;
  std::vector<double> term;  // per coordinate contribution
  double value = 0;
};

XiTerms xi_terms(const TorusSystem& sys, const ExponentVector& t, size_t i);
double xi(const TorusSystem& sys, const ExponentVector& t, size_t i);

double dim_torus(const TorusSystem& sys, const std::vector<ExponentVector>& U);

}  // namespace mtp

#endif  // MTP_TORI_H_
