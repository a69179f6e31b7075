#include "mtp/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mtp {

int64_t FullMeasureConfig::M() const {
  int64_t m = 1;
  for (int i = 0; i <= d; ++i) m *= 4;
  return m;
}

double FullMeasureConfig::Mtilde() const {
  double best = 0;
  for (double ai : a) best = std::max(best, std::pow(double(M()), 1.0 / ai));
  return best;
}

void FullMeasureConfig::validate() const {
  if (d < 1 || d > 12) throw std::invalid_argument("fullmeasure: d out of range");
  if (static_cast<int>(a.size()) != d) {
    throw std::invalid_argument("fullmeasure: need exactly d weights");
  }
  double sum = 0;
  for (double ai : a) {
    if (!(ai >= 1) || !std::isfinite(ai)) {
      throw std::invalid_argument("fullmeasure: every a_i must be >= 1");
    }
    sum += ai;
  }
  if (std::abs(sum - (d + 1)) > 1e-12) {
    throw std::invalid_argument("fullmeasure: weights must sum to d+1");
  }
  if (q_ell < M()) throw std::invalid_argument("fullmeasure: q_ell below M");
  if (samples < 1) throw std::invalid_argument("fullmeasure: samples < 1");
  if (double(q_ell) * double(samples) > budget) {
    throw std::invalid_argument("fullmeasure: q_ell * samples exceeds budget");
  }
}

void wilson_interval(int64_t hits, int64_t n, double z, double* lo,
                     double* hi) {
  const double nn = double(n);
  const double p = double(hits) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half =
      z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  // the interval closes exactly at the ends; rounding would leave 1 - ulp
  *lo = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  *hi = hits == n ? 1.0 : std::min(1.0, centre + half);
}

namespace {

// 53 random bits into [0, 1); avoids the library-specific distributions so
// runs agree across standard libraries
double unit(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

FullMeasureResult lemma_full_measure(const FullMeasureConfig& cfg) {
  cfg.validate();
  FullMeasureResult r;
  r.M = cfg.M();
  r.Mtilde = cfg.Mtilde();
  r.q_hi = cfg.q_ell;
  r.q_lo = std::max<int64_t>(1, (cfg.q_ell + r.M - 1) / r.M);
  std::vector<double> rad(cfg.d);
  for (int i = 0; i < cfg.d; ++i) {
    rad[i] = std::pow(r.Mtilde / double(cfg.q_ell), cfg.a[i]);
  }
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> x(cfg.d);
  for (int64_t s = 0; s < cfg.samples; ++s) {
    for (auto& xi : x) xi = unit(rng);
    bool hit = false;
    // large q first: the targets q * rad_i are widest there
    for (int64_t q = r.q_hi; q >= r.q_lo && !hit; --q) {
      const double qd = double(q);
      bool all = true;
      for (int i = 0; i < cfg.d && all; ++i) {
        const double y = qd * x[i];
        all = std::abs(y - std::nearbyint(y)) <= qd * rad[i];
      }
      hit = all;
    }
    r.hits += hit;
  }
  r.samples = cfg.samples;
  r.fraction = double(r.hits) / double(r.samples);
  wilson_interval(r.hits, r.samples, 2.5758293035489, &r.lo, &r.hi);
  return r;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("ols_slope: need two or more points");
  }
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("ols_slope: degenerate abscissae");
  return sxy / sxx;
}

void BoxCountConfig::validate() const {
  if (psi.empty() || psi.size() > 2) {
    throw std::invalid_argument("boxcount: d must be 1 or 2");
  }
  if (!(2 <= Q0 && Q0 <= Q)) throw std::invalid_argument("boxcount: need 2 <= Q0 <= Q");
  if (!(m_min < m_max)) throw std::invalid_argument("boxcount: need m_min < m_max");
  if (m_min < 1 || m_max > 31) {
    throw std::invalid_argument("boxcount: resolutions must lie in [1, 31]");
  }
  if (fit < 2) throw std::invalid_argument("boxcount: fit window below 2");
}

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// log2 of the radius psi_i(q)/q for each axis
std::vector<double> log2_radii(const BoxCountConfig& cfg, int64_t q) {
  std::vector<double> r;
  for (const auto& f : cfg.psi) {
    r.push_back(-f->neg_log(double(q)) / kLn2 - std::log2(double(q)));
  }
  return r;
}

class CellSet {
 public:
  CellSet(int m, int d, double max_cells)
      : side_(uint64_t(1) << m), d_(d), max_cells_(max_cells) {
    // a dense bit grid while it fits in 32 MiB
    if (m * d <= 28) bits_.assign(size_t(1) << (m * d), false);
  }

  void add_box(uint64_t x0, uint64_t x1, uint64_t y0, uint64_t y1) {
    for (uint64_t x = x0; x <= x1; ++x) {
      for (uint64_t y = y0; y <= y1; ++y) add(x * side_ + y);
    }
  }

  uint64_t count() {
    if (!bits_.empty()) return std::count(bits_.begin(), bits_.end(), true);
    compact();
    return cells_.size();
  }

 private:
  void add(uint64_t id) {
    if (!bits_.empty()) {
      bits_[id] = true;
      return;
    }
    cells_.push_back(id);
    if (double(cells_.size()) > 2 * max_cells_) {
      compact();
      if (double(cells_.size()) > max_cells_) {
        throw std::runtime_error("boxcount: occupied cells exceed budget");
      }
    }
  }

  void compact() {
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  }

  uint64_t side_;
  int d_;
  double max_cells_;
  std::vector<bool> bits_;
  std::vector<uint64_t> cells_;
};

void cell_range(double c, double r, int m, uint64_t* lo, uint64_t* hi) {
  const double scale = std::ldexp(1.0, m);
  const double a = std::max(0.0, c - r) * scale;
  const double b = std::min(1.0, c + r) * scale;
  const double top = scale - 1;
  *lo = uint64_t(std::min(top, std::floor(a)));
  *hi = uint64_t(std::min(top, std::floor(b)));
}

}  // namespace

BoxCountResult boxcount_dimension(const BoxCountConfig& cfg) {
  cfg.validate();
  const int d = cfg.d();
  std::vector<std::vector<double>> lr;  // per q, log2 radii
  for (int64_t q = cfg.Q0; q <= cfg.Q; ++q) lr.push_back(log2_radii(cfg, q));

  BoxCountResult res;
  for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
    std::vector<int64_t> qs;
    for (int64_t q = cfg.Q0; q <= cfg.Q; ++q) {
      const auto& r = lr[q - cfg.Q0];
      if (cfg.mode == BoxCountMode::kShell) {
        const double lo = *std::min_element(r.begin(), r.end());
        if (!(lo > -m - 1 && lo <= -m)) continue;
      }
      qs.push_back(q);
    }
    double work = 0;
    for (int64_t q : qs) work += std::pow(double(q + 1), d);
    if (work > 5e8) throw std::runtime_error("boxcount: grid work over budget");
    CellSet cells(m, d, cfg.max_cells);
    for (int64_t q : qs) {
      const auto& r = lr[q - cfg.Q0];
      const double r0 = std::exp2(r[0]);
      const double r1 = d == 2 ? std::exp2(r[1]) : 0.0;
      for (int64_t p0 = 0; p0 <= q; ++p0) {
        uint64_t x0, x1;
        cell_range(double(p0) / double(q), r0, m, &x0, &x1);
        if (d == 1) {
          cells.add_box(0, 0, x0, x1);
          continue;
        }
        for (int64_t p1 = 0; p1 <= q; ++p1) {
          uint64_t y0, y1;
          cell_range(double(p1) / double(q), r1, m, &y0, &y1);
          cells.add_box(x0, x1, y0, y1);
        }
      }
    }
    res.m.push_back(m);
    res.count.push_back(cells.count());
    res.q_used.push_back(int64_t(qs.size()));
  }
  std::vector<double> xs, ys;
  for (size_t j = res.m.size(); j-- > 0 && int(xs.size()) < cfg.fit;) {
    if (res.count[j] == 0) continue;
    xs.push_back(res.m[j]);
    ys.push_back(std::log2(double(res.count[j])));
  }
  if (xs.size() < 2) {
    throw std::runtime_error(
        "boxcount: empty set at the fitted resolutions; widen [Q0, Q] or m");
  }
  res.estimate = ols_slope(xs, ys);
  return res;
}

namespace {

struct CoverTable {
  std::vector<int> block;                 // dyadic block indices b
  std::vector<std::vector<double>> logq;  // per block, log q
  std::vector<std::vector<std::vector<double>>> logl;  // per block, per q
};

CoverTable cover_table(const BoxCountConfig& cfg) {
  cfg.validate();
  CoverTable t;
  for (int b = 0; b < 62; ++b) {
    const int64_t lo = int64_t(1) << b;
    const int64_t hi = (int64_t(1) << (b + 1)) - 1;
    if (lo < cfg.Q0) continue;
    if (hi > cfg.Q) break;
    t.block.push_back(b);
    t.logq.emplace_back();
    t.logl.emplace_back();
    for (int64_t q = lo; q <= hi; ++q) {
      t.logq.back().push_back(std::log(double(q)));
      std::vector<double> l;
      for (const auto& f : cfg.psi) {
        l.push_back(-f->neg_log(double(q)) - std::log(double(q)));
      }
      t.logl.back().push_back(std::move(l));
    }
  }
  if (t.block.size() < 2) {
    throw std::invalid_argument("cover: [Q0, Q] holds fewer than two dyadic blocks");
  }
  return t;
}

double growth(const CoverTable& t, int d, double s) {
  std::vector<double> xs, ys;
  for (size_t b = 0; b < t.block.size(); ++b) {
    // log-sum-exp of d log q + log cost(q, s)
    std::vector<double> terms;
    terms.reserve(t.logq[b].size());
    for (size_t j = 0; j < t.logq[b].size(); ++j) {
      const auto& l = t.logl[b][j];
      double cost = std::numeric_limits<double>::infinity();
      // cubes of side l_c, one of the rectangle sides
      for (size_t c = 0; c < l.size(); ++c) {
        double v = s * l[c];
        for (size_t i = 0; i < l.size(); ++i) v += std::max(0.0, l[i] - l[c]);
        cost = std::min(cost, v);
      }
      terms.push_back(d * t.logq[b][j] + cost);
    }
    const double mx = *std::max_element(terms.begin(), terms.end());
    double acc = 0;
    for (double v : terms) acc += std::exp(v - mx);
    xs.push_back(t.block[b]);
    ys.push_back((mx + std::log(acc)) / kLn2);
  }
  return ols_slope(xs, ys);
}

}  // namespace

double cover_growth(const BoxCountConfig& cfg, double s) {
  return growth(cover_table(cfg), cfg.d(), s);
}

CoverResult cover_exponent(const BoxCountConfig& cfg) {
  const CoverTable t = cover_table(cfg);
  const int d = cfg.d();
  CoverResult r;
  double lo = 0, hi = d;
  r.g_lo = growth(t, d, lo);
  r.g_hi = growth(t, d, hi);
  if (!(r.g_lo > 0 && r.g_hi < 0)) {
    throw std::runtime_error("cover: g(s) does not change sign on [0, d] (g(0)=" +
                             std::to_string(r.g_lo) + ", g(d)=" +
                             std::to_string(r.g_hi) + ")");
  }
  while (hi - lo > 1e-10 && r.iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    (growth(t, d, mid) > 0 ? lo : hi) = mid;
    ++r.iterations;
  }
  r.s = 0.5 * (lo + hi);
  return r;
}

}  // namespace mtp
