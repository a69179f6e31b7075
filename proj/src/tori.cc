#include "mtp/tori.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mtp {

TorusSystem::TorusSystem(std::vector<double> beta) : beta_(std::move(beta)) {
  if (beta_.empty()) throw std::invalid_argument("torus: no eigenvalues");
  for (double b : beta_) {
    if (!std::isfinite(b) || !(std::abs(b) > 1)) {
      throw std::invalid_argument("torus: every |beta_i| must exceed 1");
    }
    log_beta_.push_back(std::log(std::abs(b)));
  }
}

XiTerms xi_terms(const TorusSystem& sys, const ExponentVector& t, size_t i) {
  if (t.d() != sys.d()) throw std::invalid_argument("xi: dimension mismatch");
  if (i >= t.d()) throw std::out_of_range("xi: index out of range");
  if (t.t[i].is_inf()) throw std::domain_error("xi: index outside L(t)");
  const auto& lb = sys.log_abs_beta();
  const double level = lb[i] + t.t[i].value();
  XiTerms r;
  r.term.resize(t.d());
  for (size_t k = 0; k < t.d(); ++k) {
    if (lb[k] > level) {
      r.K1.push_back(k);
      r.term[k] = 1.0;
    } else if (t.t[k].is_finite() && lb[k] + t.t[k].value() <= level) {
      r.K2.push_back(k);
      r.term[k] = 1.0 - t.t[k].value() / level;
    } else {
      r.K3.push_back(k);
      r.term[k] = lb[k] / level;
    }
    r.value += r.term[k];
  }
  return r;
}

double xi(const TorusSystem& sys, const ExponentVector& t, size_t i) {
  return xi_terms(sys, t, i).value;
}

double dim_torus(const TorusSystem& sys, const std::vector<ExponentVector>& U) {
  if (U.empty()) throw std::invalid_argument("torus: empty accumulation set");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : U) {
    if (t.d() != sys.d()) {
      throw std::invalid_argument("torus: vector " + t.str() +
                                  " does not have length d");
    }
    double inner = 0;
    if (!t.split.L.empty()) {
      inner = static_cast<double>(t.split.L.size());
      for (size_t i : t.split.L) inner = std::min(inner, xi(sys, t, i));
    }
    best = std::max(best, inner);
  }
  return best;
}

}  // namespace mtp
