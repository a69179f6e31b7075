#include "mtp/dimnum.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mtp {

void LevelSpec::validate() const {
  const size_t n = u.size();
  if (n == 0) throw std::invalid_argument("LevelSpec: p must be >= 1");
  if (delta.size() != n || v.size() != n) {
    throw std::invalid_argument("LevelSpec: delta, u, v lengths differ");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!(delta[i] > 0) || !std::isfinite(delta[i])) {
      throw std::invalid_argument("LevelSpec: delta_" + std::to_string(i + 1) +
                                  " must be positive");
    }
    if (!(u[i] > 0) || !std::isfinite(u[i])) {
      throw std::invalid_argument("LevelSpec: u_" + std::to_string(i + 1) +
                                  " must be positive and finite");
    }
    if (ExtReal::Finite(u[i]) > v[i]) {
      throw std::invalid_argument("LevelSpec: u_" + std::to_string(i + 1) +
                                  " exceeds v_" + std::to_string(i + 1));
    }
  }
}

LevelSpec LevelSpec::scaled(double c) const {
  LevelSpec out = *this;
  for (auto& x : out.u) x *= c;
  for (auto& x : out.v) x = x.scaled(c);
  return out;
}

IndexSplit index_split(const std::vector<ExtReal>& v) {
  if (v.empty()) throw std::domain_error("index_split: empty vector");
  IndexSplit s;
  for (size_t i = 0; i < v.size(); ++i) {
    (v[i].is_inf() ? s.Linf : s.L).push_back(i);
  }
  return s;
}

Partition partition_at(const LevelSpec& spec, const ExtReal& A,
                       PartitionVariant variant) {
  spec.validate();
  if (A == ExtReal::Finite(0)) {
    throw std::domain_error("partition_at: level A must be positive");
  }
  Partition part;
  part.level = A;
  for (size_t k = 0; k < spec.p(); ++k) {
    const ExtReal uk = ExtReal::Finite(spec.u[k]);
    const ExtReal& vk = spec.v[k];
    bool in1 = uk > A;
    bool in2 = vk.is_finite() && vk <= A;
    if (variant == PartitionVariant::kTilde) {
      in1 = in1 || uk == A;
      in2 = in2 && vk != A;
    } else if (variant == PartitionVariant::kHat) {
      in2 = in2 && vk != A;
    }
    // u <= v keeps K1 and K2 apart, except u_k = v_k = A under Tilde where
    // K1 wins (K2 drops v_k = A there anyway)
    if (in1) {
      part.K1.push_back(k);
    } else if (in2) {
      part.K2.push_back(k);
    } else {
      part.K3.push_back(k);
    }
  }
  return part;
}

double delta_sum_finite(const LevelSpec& spec) {
  double s = 0;
  for (size_t k = 0; k < spec.p(); ++k) {
    if (spec.v[k].is_finite()) s += spec.delta[k];
  }
  return s;
}

double s_at(const LevelSpec& spec, const ExtReal& A,
            PartitionVariant variant) {
  Partition part = partition_at(spec, A, variant);
  if (A.is_inf()) return delta_sum_finite(spec);
  const double a = A.value();
  double s = 0;
  for (size_t k : part.K1) s += spec.delta[k];
  for (size_t k : part.K2) {
    s += spec.delta[k] * (1.0 - (spec.v[k].value() - spec.u[k]) / a);
  }
  for (size_t k : part.K3) s += spec.delta[k] * spec.u[k] / a;
  return s;
}

double s_level(const LevelSpec& spec, size_t i) {
  if (i >= spec.p()) throw std::out_of_range("s_level: index out of range");
  return s_at(spec, spec.v[i]);
}

double s_bar_level(const LevelSpec& spec, size_t i) {
  if (i >= spec.p()) throw std::out_of_range("s_bar_level: index out of range");
  return s_at(spec, ExtReal::Finite(spec.u[i]));
}

double s0(const LevelSpec& spec) {
  spec.validate();
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < spec.p(); ++i) best = std::min(best, s_level(spec, i));
  return best;
}

double s0_bruteforce(const LevelSpec& spec) {
  spec.validate();
  // Direct evaluation of the piecewise formula, deliberately not sharing the
  // partition code path.
  auto eval = [&](double a) {
    double s = 0;
    for (size_t k = 0; k < spec.p(); ++k) {
      const double d = spec.delta[k];
      if (spec.u[k] > a) {
        s += d;
      } else if (spec.v[k].is_finite() && spec.v[k].value() <= a) {
        s += d * (1.0 - (spec.v[k].value() - spec.u[k]) / a);
      } else {
        s += d * spec.u[k] / a;
      }
    }
    return s;
  };
  double cap = 0;
  for (size_t k = 0; k < spec.p(); ++k) {
    if (spec.v[k].is_finite()) cap += spec.delta[k];
  }
  double best = cap;
  for (size_t i = 0; i < spec.p(); ++i) {
    best = std::min(best, eval(spec.u[i]));
    if (spec.v[i].is_finite()) best = std::min(best, eval(spec.v[i].value()));
  }
  return best;
}

double theta_star(const LevelSpec& spec, size_t i, double kappa) {
  if (!(kappa >= 0 && kappa < 1)) {
    throw std::domain_error("kappa must lie in [0, 1)");
  }
  if (i >= spec.p()) throw std::out_of_range("theta_star: index out of range");
  if (spec.v[i].is_inf()) {
    throw std::domain_error("theta_star: level index must have finite v_i");
  }
  Partition part = partition_at(spec, spec.v[i]);
  const double a = spec.v[i].value();
  const double f = 1.0 - kappa;
  double s = 0;
  for (size_t k : part.K1) s += spec.delta[k];
  for (size_t k : part.K2) {
    s += spec.delta[k] * (1.0 - f * (spec.v[k].value() - spec.u[k]) / a);
  }
  // same summation order as s_at, so kappa = 0 reproduces s0 bit for bit
  for (size_t k : part.K3) s += f * (spec.delta[k] * spec.u[k] / a);
  return s;
}

double s0_resonant(const LevelSpec& spec, double kappa) {
  if (!(kappa >= 0 && kappa < 1)) {
    throw std::domain_error("kappa must lie in [0, 1)");
  }
  spec.validate();
  double best = delta_sum_finite(spec);
  for (size_t i = 0; i < spec.p(); ++i) {
    if (spec.v[i].is_finite()) best = std::min(best, theta_star(spec, i, kappa));
  }
  return best;
}

}  // namespace mtp
