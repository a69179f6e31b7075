#include "mtp/cantor.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "mtp/verify.h"

namespace mtp {

namespace {

// 2^-x, snapping x to an integer when the exponent is a ratio V/k
double dyadic(double x) {
  if (std::abs(x - std::round(x)) < 1e-9) x = std::round(x);
  return std::exp2(-x);
}

}  // namespace

double WeightedRectangle::half_side(size_t i) const {
  return dyadic(double(k) * exps[i]);
}

double WeightedRectangle::volume() const {
  double v = 1;
  for (size_t i = 0; i < exps.size(); ++i) v *= 2 * half_side(i);
  return v;
}

void BallSystem::validate() const {
  const size_t pp = p();
  if (pp == 0 || pp > 3) throw std::invalid_argument("ball system: need 1 <= p <= 3");
  if (delta.size() != pp) throw std::invalid_argument("ball system: delta length");
  for (double d : delta) {
    if (d != 1.0) {
      throw std::invalid_argument("ball system: the simulator needs delta_i = 1");
    }
  }
  for (double x : u) {
    if (!(x > 0)) throw std::invalid_argument("ball system: u_i must be positive");
  }
  if (centers.size() != k.size() || v.size() != k.size()) {
    throw std::invalid_argument("ball system: sequence lengths differ");
  }
  for (size_t n = 0; n < k.size(); ++n) {
    if (k[n] < 1) throw std::invalid_argument("ball system: scale k_n must be >= 1");
    if (n > 0 && k[n] < k[n - 1]) {
      throw std::invalid_argument("ball system: k_n must be non-decreasing");
    }
    if (centers[n].size() != pp || v[n].size() != pp) {
      throw std::invalid_argument("ball system: entry with wrong dimension");
    }
    for (size_t i = 0; i < pp; ++i) {
      if (!(v[n][i] > u[i])) {
        throw std::invalid_argument("ball system: need v_{i,n} > u_i");
      }
    }
  }
}

WeightedRectangle BallSystem::big(size_t n) const {
  WeightedRectangle r;
  r.center = centers.at(n);
  r.k = k.at(n);
  r.exps = u;
  r.kind = RectKind::kBig;
  r.n = n;
  return r;
}

namespace {

// interiors disjoint iff some axis separates
bool boxes_disjoint(const std::vector<double>& c1, const std::vector<double>& h1,
                    const std::vector<double>& c2, const std::vector<double>& h2) {
  for (size_t i = 0; i < c1.size(); ++i) {
    if (std::abs(c1[i] - c2[i]) >= h1[i] + h2[i]) return true;
  }
  return false;
}

std::vector<double> dilated_half_sides(const WeightedRectangle& r, double lambda,
                                       DilationKind kind) {
  std::vector<double> h(r.exps.size());
  const double umin = *std::min_element(r.exps.begin(), r.exps.end());
  for (size_t i = 0; i < h.size(); ++i) {
    const double f = kind == DilationKind::kStandard
                         ? lambda
                         : std::pow(lambda, r.exps[i] / umin);
    h[i] = f * r.half_side(i);
  }
  return h;
}

double ball_volume(const Ball& b) {
  return std::pow(2 * b.radius, double(b.center.size()));
}

bool box_inside(const std::vector<double>& c, const std::vector<double>& h,
                const std::vector<double>& C, const std::vector<double>& H) {
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] - h[i] < C[i] - H[i] || c[i] + h[i] > C[i] + H[i]) return false;
  }
  return true;
}

std::vector<double> rect_half_sides(const WeightedRectangle& r) {
  std::vector<double> h(r.exps.size());
  for (size_t i = 0; i < h.size(); ++i) h[i] = r.half_side(i);
  return h;
}

}  // namespace

std::vector<size_t> rectangle_cover_select(
    const std::vector<WeightedRectangle>& rects, double dilation,
    DilationKind kind) {
  if (!(dilation >= 1)) throw std::invalid_argument("cover select: dilation < 1");
  for (const auto& r : rects) {
    if (r.exps != rects.front().exps) {
      throw std::invalid_argument("cover select: rectangles with mixed exponents");
    }
  }
  std::vector<size_t> order(rects.size());
  std::iota(order.begin(), order.end(), 0);
  // shared exps: larger tilde-radius is smaller k
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (rects[a].k != rects[b].k) return rects[a].k < rects[b].k;
    return rects[a].center < rects[b].center;
  });
  std::vector<size_t> kept;
  std::vector<std::vector<double>> kept_h;
  for (size_t idx : order) {
    auto h = dilated_half_sides(rects[idx], dilation, kind);
    bool ok = true;
    for (size_t j = 0; j < kept.size() && ok; ++j) {
      ok = boxes_disjoint(rects[idx].center, h, rects[kept[j]].center, kept_h[j]);
    }
    if (ok) {
      kept.push_back(idx);
      kept_h.push_back(std::move(h));
    }
  }
  return kept;
}

double union_measure(const std::vector<double>& clip_lo,
                     const std::vector<double>& clip_hi,
                     const std::vector<std::vector<double>>& lo,
                     const std::vector<std::vector<double>>& hi) {
  const size_t p = clip_lo.size();
  if (p == 0 || p > 3) throw std::invalid_argument("union_measure: 1 <= p <= 3");
  std::vector<std::vector<double>> cuts(p);
  std::vector<std::vector<double>> blo, bhi;
  for (size_t b = 0; b < lo.size(); ++b) {
    std::vector<double> l(p), h(p);
    bool empty = false;
    for (size_t i = 0; i < p; ++i) {
      l[i] = std::max(lo[b][i], clip_lo[i]);
      h[i] = std::min(hi[b][i], clip_hi[i]);
      empty = empty || !(l[i] < h[i]);
    }
    if (empty) continue;
    blo.push_back(l);
    bhi.push_back(h);
  }
  if (blo.empty()) return 0;
  for (size_t i = 0; i < p; ++i) {
    for (size_t b = 0; b < blo.size(); ++b) {
      cuts[i].push_back(blo[b][i]);
      cuts[i].push_back(bhi[b][i]);
    }
    std::sort(cuts[i].begin(), cuts[i].end());
    cuts[i].erase(std::unique(cuts[i].begin(), cuts[i].end()), cuts[i].end());
  }
  std::vector<size_t> dims(3, 1);
  for (size_t i = 0; i < p; ++i) dims[i] = cuts[i].size() - 1;
  const size_t cells = dims[0] * dims[1] * dims[2];
  if (cells > 200'000'000) throw std::runtime_error("union_measure: too many cells");
  std::vector<char> mark(cells, 0);
  auto index_of = [&](size_t i, double x) {
    return size_t(std::lower_bound(cuts[i].begin(), cuts[i].end(), x) -
                  cuts[i].begin());
  };
  for (size_t b = 0; b < blo.size(); ++b) {
    size_t a0[3] = {0, 0, 0}, a1[3] = {1, 1, 1};
    for (size_t i = 0; i < p; ++i) {
      a0[i] = index_of(i, blo[b][i]);
      a1[i] = index_of(i, bhi[b][i]);
    }
    for (size_t x = a0[0]; x < a1[0]; ++x)
      for (size_t y = a0[1]; y < a1[1]; ++y)
        for (size_t z = a0[2]; z < a1[2]; ++z)
          mark[(x * dims[1] + y) * dims[2] + z] = 1;
  }
  double total = 0;
  for (size_t x = 0; x < dims[0]; ++x)
    for (size_t y = 0; y < dims[1]; ++y)
      for (size_t z = 0; z < dims[2]; ++z) {
        if (!mark[(x * dims[1] + y) * dims[2] + z]) continue;
        double v = cuts[0][x + 1] - cuts[0][x];
        if (p > 1) v *= cuts[1][y + 1] - cuts[1][y];
        if (p > 2) v *= cuts[2][z + 1] - cuts[2][z];
        total += v;
      }
  return total;
}

KgbResult kgb_select(const Ball& B, size_t G, const BallSystem& sys,
                     const KgbOptions& opt) {
  const size_t p = sys.p();
  if (B.center.size() != p) throw std::invalid_argument("kgb: ball dimension");
  KgbResult res;
  std::vector<WeightedRectangle> cands;
  const std::vector<double> half(p, B.radius / 2);
  const std::vector<double> two3(p, 2 * B.radius / 3);
  for (size_t n = G; n < sys.size(); ++n) {
    WeightedRectangle r = sys.big(n);
    auto h = rect_half_sides(r);
    if (boxes_disjoint(r.center, h, B.center, half)) continue;
    if (!box_inside(r.center, h, B.center, two3)) {
      ++res.dropped_outside;
      continue;
    }
    cands.push_back(std::move(r));
  }
  res.candidates = cands.size();
  if (cands.empty()) throw std::runtime_error("kgb: empty candidate set");

  // 5R~ pairwise disjoint
  std::vector<size_t> sel =
      rectangle_cover_select(cands, 5.0, DilationKind::kStandard);

  // whole scale groups, coarsest first, until half of the selected mass
  std::map<int, double> mass_by_k;
  double total = 0;
  for (size_t idx : sel) {
    mass_by_k[cands[idx].k] += cands[idx].volume();
    total += cands[idx].volume();
  }
  double kept_mass = 0;
  int k_last = mass_by_k.begin()->first;
  for (const auto& [k, m] : mass_by_k) {
    if (kept_mass >= 0.5 * total) break;
    kept_mass += m;
    k_last = k;
  }
  for (size_t idx : sel) {
    if (cands[idx].k <= k_last) {
      res.rects.push_back(cands[idx]);
    } else {
      ++res.truncated;
    }
  }
  res.raw_ratio = kept_mass / ball_volume(B);

  const double umax = *std::max_element(sys.u.begin(), sys.u.end());
  const double umin = *std::min_element(sys.u.begin(), sys.u.end());
  const double lambda = 5.0 * std::pow(5.0, umax / umin);
  std::vector<std::vector<double>> lo, hi;
  for (const auto& r : res.rects) {
    std::vector<double> l(p), h(p);
    for (size_t i = 0; i < p; ++i) {
      l[i] = r.center[i] - lambda * r.half_side(i);
      h[i] = r.center[i] + lambda * r.half_side(i);
    }
    lo.push_back(l);
    hi.push_back(h);
  }
  std::vector<double> clo(p), chi(p);
  for (size_t i = 0; i < p; ++i) {
    clo[i] = B.center[i] - B.radius / 2;
    chi[i] = B.center[i] + B.radius / 2;
  }
  res.cover_ratio = union_measure(clo, chi, lo, hi) / std::pow(B.radius, double(p));
  if (res.cover_ratio < opt.c_pack) {
    throw std::runtime_error("kgb: cover ratio " + std::to_string(res.cover_ratio) +
                             " below c_pack; the ball system does not look full"
                             " measure at this scale");
  }
  return res;
}

ShrinkResult shrink_group(const std::vector<WeightedRectangle>& K,
                          const BallSystem& sys) {
  if (K.empty()) throw std::invalid_argument("shrink_group: empty family");
  ShrinkResult out;
  for (const auto& r : K) {
    ScaleRow& row = out.table[r.k];
    if (row.v.empty()) row.v.assign(sys.p(), 0.0);
    for (size_t i = 0; i < sys.p(); ++i) {
      row.v[i] = std::max(row.v[i], sys.v.at(r.n)[i]);
    }
    ++row.members;
  }
  for (auto& [k, row] : out.table) {
    row.w = *std::max_element(row.v.begin(), row.v.end());
  }
  for (const auto& r : K) {
    WeightedRectangle s = r;
    s.exps = out.table[r.k].v;
    s.kind = RectKind::kShrunk;
    out.shrunk.push_back(std::move(s));
  }
  return out;
}

std::vector<uint64_t> pack_counts(const WeightedRectangle& R, double w) {
  if (R.k < 1) throw std::invalid_argument("pack_balls: scale k must be >= 1");
  std::vector<uint64_t> m;
  for (double e : R.exps) {
    if (w < e) {
      throw std::invalid_argument(
          "pack_balls: w below a rectangle exponent (balls would not fit)");
    }
    const double bits = double(R.k) * (w - e);
    if (bits > 52) throw std::runtime_error("pack_balls: packing too large to list");
    // b / rho' = 2^bits; the outer balls stay inside R
    if (std::abs(bits - std::round(bits)) < 1e-9) {
      const uint64_t ratio = uint64_t(1) << std::llround(bits);
      m.push_back((ratio - 1) / 5 + 1);
    } else {
      m.push_back(uint64_t(std::floor((std::exp2(bits) - 1) / 5)) + 1);
    }
  }
  return m;
}

std::vector<Ball> pack_balls(const WeightedRectangle& R, double w) {
  const auto m = pack_counts(R, w);
  const double rho = dyadic(double(R.k) * w);
  std::vector<Ball> out;
  std::vector<uint64_t> idx(m.size(), 0);
  while (true) {
    Ball b;
    b.radius = rho;
    for (size_t i = 0; i < m.size(); ++i) {
      b.center.push_back(R.center[i] +
                         (2.0 * double(idx[i]) - double(m[i] - 1)) * 5.0 * rho);
    }
    out.push_back(std::move(b));
    size_t i = m.size();
    while (i-- > 0) {
      if (++idx[i] < m[i]) break;
      idx[i] = 0;
    }
    if (i == size_t(-1)) break;
  }
  return out;
}

namespace {

struct ParentBuild {
  KgbResult kgb;
  ShrinkResult shrink;
};

}  // namespace

std::vector<CantorLevel> build_levels(const BallSystem& sys, int depth,
                                      double eps, const BuildOptions& opt) {
  sys.validate();
  if (depth < 1) throw std::invalid_argument("build_levels: depth must be >= 1");
  if (!(eps > 0)) throw std::invalid_argument("build_levels: eps must be > 0");
  const size_t p = sys.p();
  std::vector<CantorLevel> levels(1);
  LevelBall root;
  root.ball.center.assign(p, 0.5);
  root.ball.radius = 0.5;
  root.weight = 1.0;
  levels[0].balls.push_back(root);

  for (int j = 1; j <= depth; ++j) {
    const CantorLevel& prev = levels.back();
    double worst_density = 0;
    for (const auto& b : prev.balls) {
      worst_density = std::max(worst_density, b.weight / ball_volume(b.ball));
    }
    const double w_floor = std::max(j - 1, 1);
    std::vector<ParentBuild> built;
    size_t G = 0;
    bool found = false;
    for (; G < sys.size() && !found; ++G) {
      // r_n^-eps >= density for every n >= G; k_n is non-decreasing
      if (std::exp2(eps * sys.k[G]) < worst_density) continue;
      built.clear();
      bool ok = true;
      for (const auto& b : prev.balls) {
        ParentBuild pb;
        try {
          pb.kgb = kgb_select(b.ball, G, sys, opt.kgb);
        } catch (const std::runtime_error&) {
          ok = false;
          break;
        }
        pb.shrink = shrink_group(pb.kgb.rects, sys);
        for (const auto& [k, row] : pb.shrink.table) ok = ok && row.w > w_floor;
        if (!ok) break;
        built.push_back(std::move(pb));
      }
      if (ok) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw std::runtime_error("build_levels: cutoff search for level " +
                               std::to_string(j) +
                               " ran past the stored sequence");
    }
    CantorLevel level;
    level.j = j;
    level.G = G;
    level.min_cover_ratio = std::numeric_limits<double>::infinity();
    level.min_raw_ratio = std::numeric_limits<double>::infinity();
    for (size_t pi = 0; pi < prev.balls.size(); ++pi) {
      const ParentBuild& pb = built[pi];
      level.min_cover_ratio = std::min(level.min_cover_ratio, pb.kgb.cover_ratio);
      level.min_raw_ratio = std::min(level.min_raw_ratio, pb.kgb.raw_ratio);
      double sum_mu = 0;
      for (const auto& r : pb.kgb.rects) sum_mu += r.volume();
      for (size_t ri = 0; ri < pb.kgb.rects.size(); ++ri) {
        LevelRect lr;
        lr.big = pb.kgb.rects[ri];
        lr.shrunk = pb.shrink.shrunk[ri];
        lr.parent = pi;
        lr.w = pb.shrink.table.at(lr.big.k).w;
        auto balls = pack_balls(lr.shrunk, lr.w);
        lr.first_ball = level.balls.size();
        lr.n_balls = balls.size();
        const double weight = (1.0 / double(balls.size())) *
                              (lr.big.volume() / sum_mu) * prev.balls[pi].weight;
        for (auto& b : balls) {
          LevelBall lb;
          lb.ball = std::move(b);
          lb.weight = weight;
          lb.parent = pi;
          lb.rect = level.rects.size();
          level.balls.push_back(std::move(lb));
        }
        level.rects.push_back(std::move(lr));
      }
    }
    levels.push_back(std::move(level));
  }
  return levels;
}

LevelCheck check_levels(const std::vector<CantorLevel>& levels,
                        const BallSystem& sys) {
  LevelCheck c;
  c.min_count_ratio = std::numeric_limits<double>::infinity();
  c.max_count_ratio = 0;
  for (size_t j = 0; j < levels.size(); ++j) {
    const auto& L = levels[j];
    double mass = 0;
    for (const auto& b : L.balls) mass += b.weight;
    c.mass.push_back(mass);
    c.mass_ok = c.mass_ok && std::abs(mass - 1.0) <= 1e-9;
    if (j == 0) continue;
    const auto& P = levels[j - 1];
    std::vector<double> child_mass(P.balls.size(), 0.0);
    for (const auto& b : L.balls) child_mass[b.parent] += b.weight;
    for (size_t pi = 0; pi < P.balls.size(); ++pi) {
      c.link_ok = c.link_ok &&
                  std::abs(child_mass[pi] - P.balls[pi].weight) <=
                      1e-12 * std::max(1.0, P.balls[pi].weight);
    }
    for (const auto& r : L.rects) {
      const Ball& parent = P.balls[r.parent].ball;
      const std::vector<double> pr(sys.p(), parent.radius);
      const auto hb = rect_half_sides(r.big);
      const auto hs = rect_half_sides(r.shrunk);
      c.nesting_ok = c.nesting_ok && box_inside(r.shrunk.center, hs, r.big.center, hb) &&
                     box_inside(r.big.center, hb, parent.center, pr);
      double formula = 1;
      for (size_t i = 0; i < sys.p(); ++i) {
        formula *= std::exp2(-double(r.big.k) * (r.shrunk.exps[i] - r.w) *
                             sys.delta[i]);
      }
      const double ratio = double(r.n_balls) / formula;
      c.min_count_ratio = std::min(c.min_count_ratio, ratio);
      c.max_count_ratio = std::max(c.max_count_ratio, ratio);
      for (size_t bi = r.first_ball; bi < r.first_ball + r.n_balls; ++bi) {
        const Ball& b = L.balls[bi].ball;
        const std::vector<double> br(sys.p(), b.radius);
        c.nesting_ok = c.nesting_ok && box_inside(b.center, br, r.shrunk.center, hs);
      }
    }
    // 5r-separation among children of a common parent
    std::vector<std::vector<size_t>> by_parent(P.balls.size());
    for (size_t bi = 0; bi < L.balls.size(); ++bi) {
      by_parent[L.balls[bi].parent].push_back(bi);
    }
    for (auto& group : by_parent) {
      // sweep along the first axis; only pairs closer than the widest dilation
      std::sort(group.begin(), group.end(), [&](size_t a, size_t b) {
        return L.balls[a].ball.center[0] < L.balls[b].ball.center[0];
      });
      double rmax = 0;
      for (size_t bi : group) rmax = std::max(rmax, L.balls[bi].ball.radius);
      for (size_t a = 0; a < group.size(); ++a) {
        const Ball& x = L.balls[group[a]].ball;
        const std::vector<double> hx(sys.p(), 5 * x.radius);
        for (size_t b = a + 1; b < group.size(); ++b) {
          const Ball& y = L.balls[group[b]].ball;
          if (y.center[0] - x.center[0] >= 5 * (x.radius + rmax)) break;
          const std::vector<double> hy(sys.p(), 5 * y.radius);
          c.separation_ok = c.separation_ok && boxes_disjoint(x.center, hx, y.center, hy);
        }
      }
    }
  }
  if (levels.size() < 2) c.min_count_ratio = c.max_count_ratio = 1;
  return c;
}

AuditResult holder_audit(const std::vector<CantorLevel>& levels,
                         const LevelSpec& spec, double eps, int64_t samples,
                         uint64_t seed) {
  if (levels.size() < 3) {
    throw std::invalid_argument("holder_audit: need levels built to depth >= 2");
  }
  if (samples < 10) throw std::invalid_argument("holder_audit: fewer than 10 samples");
  AuditResult res;
  res.s0 = s0(spec);
  res.eps = eps;
  const auto& deep = levels.back().balls;
  const size_t p = deep.front().ball.center.size();
  double rmin = std::numeric_limits<double>::infinity();
  std::vector<double> cdf;
  double acc = 0;
  for (const auto& b : deep) {
    rmin = std::min(rmin, b.ball.radius);
    acc += b.weight;
    cdf.push_back(acc);
  }
  const double rmax = levels.front().balls.front().ball.radius;
  res.log2_r_min = std::log2(rmin);
  res.log2_r_max = std::log2(rmax);
  std::mt19937_64 rng(seed);
  auto unit = [&] { return double(rng() >> 11) * 0x1.0p-53; };
  std::vector<double> xs, ys;
  res.log2_max_constant = -std::numeric_limits<double>::infinity();
  const double expo = res.s0 - 2 * eps;
  for (int64_t s = 0; s < samples; ++s) {
    const double pick = unit() * acc;
    size_t bi = std::upper_bound(cdf.begin(), cdf.end(), pick) - cdf.begin();
    bi = std::min(bi, deep.size() - 1);
    std::vector<double> x(p);
    for (size_t i = 0; i < p; ++i) {
      x[i] = deep[bi].ball.center[i] + (2 * unit() - 1) * deep[bi].ball.radius;
    }
    const double lr = res.log2_r_min + unit() * (res.log2_r_max - res.log2_r_min);
    const double r = std::exp2(lr);
    double nu = 0;
    for (const auto& b : deep) {
      double frac = 1;
      for (size_t i = 0; i < p && frac > 0; ++i) {
        const double lo = std::max(x[i] - r, b.ball.center[i] - b.ball.radius);
        const double hi = std::min(x[i] + r, b.ball.center[i] + b.ball.radius);
        frac *= std::max(0.0, hi - lo) / (2 * b.ball.radius);
      }
      nu += frac * b.weight;
    }
    if (!(nu > 0)) continue;
    const double ln = std::log2(nu);
    xs.push_back(lr);
    ys.push_back(ln);
    res.log2_max_constant = std::max(res.log2_max_constant, ln - expo * lr);
  }
  res.samples = int64_t(xs.size());
  if (res.samples < 10) throw std::runtime_error("holder_audit: fewer than 10 usable samples");
  res.fitted_slope = ols_slope(xs, ys);
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double xr = xs[i] - res.log2_r_max;
    sxy += xr * ys[i];
    sxx += xr * xr;
  }
  res.origin_slope = sxy / sxx;
  return res;
}

}  // namespace mtp
