#include "mtp/dioph.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mtp {

void DiophInstance::validate() const {
  if (d == 0) throw std::invalid_argument("dioph: d must be >= 1");
  if (U.empty()) throw std::invalid_argument("dioph: empty accumulation set");
  for (const auto& t : U) {
    if (t.d() != d) {
      throw std::invalid_argument("dioph: vector " + t.str() +
                                  " does not have length d");
    }
  }
}

double zeta(const ExponentVector& t, size_t i) {
  if (i >= t.d()) throw std::out_of_range("zeta: index out of range");
  if (t.t[i].is_inf()) return static_cast<double>(t.split.L.size());
  const double ti = t.t[i].value();
  double num = static_cast<double>(t.d()) + 1.0;
  for (size_t k = 0; k < t.d(); ++k) {
    // strict: ties add nothing; inf never lies below a finite t_i
    if (t.t[k] < t.t[i]) num += ti - t.t[k].value();
  }
  return num / (1.0 + ti);
}

double dim_inner(const ExponentVector& t) {
  if (t.split.L.empty()) return 0.0;
  double best = static_cast<double>(t.split.L.size());
  for (size_t i : t.split.L) best = std::min(best, zeta(t, i));
  return best;
}

double dim_W(const DiophInstance& inst) {
  inst.validate();
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& t : inst.U) best = std::max(best, dim_inner(t));
  return best;
}

double dim_corollary(const ExponentVector& lambda) {
  size_t count = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < lambda.d(); ++i) {
    const ExtReal& li = lambda.t[i];
    if (li.is_inf() || li == ExtReal::Finite(0)) continue;
    ++count;
    best = std::min(best, zeta(lambda, i));
  }
  if (count == 0) return 0.0;
  return std::min(best, static_cast<double>(count));
}

WeightVector optimal_weights(const ExponentVector& t) {
  const size_t d = t.d();
  if (t.split.L.empty()) {
    throw std::domain_error("optimal_weights: all exponents infinite");
  }
  double finite_sum = 0;
  for (size_t i : t.split.L) finite_sum += t.t[i].value();
  if (finite_sum < 1) {
    throw std::domain_error(
        "optimal_weights: finite exponents sum below 1; use the #L(t) bound");
  }
  WeightVector w;
  const ExtReal threshold = ExtReal::Finite(1.0 / static_cast<double>(d));
  if (*std::min_element(t.t.begin(), t.t.end()) > threshold) {
    w.which_case = 1;
    w.a.assign(d, 1.0 + 1.0 / static_cast<double>(d));
    return w;
  }
  w.which_case = 2;
  // sum_{t_i < x} t_i and #{t_i >= x}; infinite t_i count in the latter
  auto below_sum = [&](const ExtReal& x) {
    double s = 0;
    for (const auto& ti : t.t) {
      if (ti < x) s += ti.value();
    }
    return s;
  };
  auto at_least = [&](const ExtReal& x) {
    double c = 0;
    for (const auto& ti : t.t) {
      if (ti >= x) c += 1;
    }
    return c;
  };
  double tK = std::numeric_limits<double>::infinity();
  for (size_t j : t.split.L) {
    const double tj = t.t[j].value();
    if (tj >= (1.0 - below_sum(t.t[j])) / at_least(t.t[j])) {
      w.T.push_back(tj);
      tK = std::min(tK, tj);
    }
  }
  std::sort(w.T.begin(), w.T.end());
  w.T.erase(std::unique(w.T.begin(), w.T.end()), w.T.end());
  if (w.T.empty()) {
    // cannot happen when the finite sum is >= 1 (t_max always qualifies)
    throw std::logic_error("optimal_weights: empty candidate set");
  }
  const ExtReal K = ExtReal::Finite(tK);
  w.t_K = tK;
  w.t_star = (1.0 - below_sum(K)) / at_least(K);
  w.a.resize(d);
  for (size_t i = 0; i < d; ++i) {
    w.a[i] = t.t[i] < K ? 1.0 + t.t[i].value() : 1.0 + w.t_star;
  }
  return w;
}

LevelSpec weight_spec(const ExponentVector& t, const WeightVector& w) {
  LevelSpec s;
  s.delta.assign(t.d(), 1.0);
  s.u = w.a;
  for (const auto& ti : t.t) s.v.push_back(ti.plus(1.0));
  return s;
}

std::vector<DiophRow> dioph_rows(const DiophInstance& inst) {
  inst.validate();
  std::vector<DiophRow> rows;
  for (const auto& t : inst.U) {
    DiophRow r;
    r.t = t.str();
    for (size_t i = 0; i < t.d(); ++i) r.zeta.push_back(zeta(t, i));
    r.finite_count = t.split.L.size();
    r.inner = dim_inner(t);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mtp
