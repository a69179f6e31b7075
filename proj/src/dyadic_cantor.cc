#include "mtp/dyadic_cantor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "mtp/verify.h"

namespace mtp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log2z(const mpz_class& z) {
  if (sgn(z) <= 0) return kNegInf;
  long ex = 0;
  const double d = mpz_get_d_2exp(&ex, z.get_mpz_t());
  return std::log2(d) + double(ex);
}

double log2q(const mpq_class& q) {
  return log2z(q.get_num()) - log2z(q.get_den());
}

mpz_class pow2(int64_t n) {
  if (n < 0) throw std::logic_error("pow2: negative exponent");
  mpz_class r;
  mpz_setbit(r.get_mpz_t(), mp_bitcnt_t(n));
  return r;
}

double log2_sum(const std::vector<double>& terms) {
  double mx = kNegInf;
  for (double t : terms) mx = std::max(mx, t);
  if (mx == kNegInf) return kNegInf;
  double s = 0;
  for (double t : terms) s += std::exp2(t - mx);
  return mx + std::log2(s);
}

// One axis of one level in units of 2^-E.
struct Geo {
  mpz_class a, rho, prho, s, N, m, M;
  mpz_class step_t, step_j;
  mpz_class rect_first;  // offset of rectangle t = 0 from the parent centre
  mpz_class ball_first;  // offset of ball j = 0 from its rectangle centre
  mpz_class first;       // rect_first + ball_first
  mp_bitcnt_t a_sh = 0, rho_sh = 0;  // a = 2^a_sh, rho = 2^rho_sh
};

// 10 x 2^sh without a full multiplication
mpz_class ten_shift(const mpz_class& x, mp_bitcnt_t sh) {
  mpz_class r = 10 * x;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), sh);
  return r;
}

// floor(y / (10 2^sh)) for y >= 0
mpz_class div_ten_shift(const mpz_class& y, mp_bitcnt_t sh) {
  mpz_class r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), y.get_mpz_t(), sh);
  return r / 10;
}

// geo[axis][l] describes how level l+1 sits in a level-l ball
std::vector<std::vector<Geo>> geometry(const DyadicConstruction& c) {
  const int64_t E = c.unit_exponent();
  std::vector<std::vector<Geo>> out(c.sys.p());
  for (size_t i = 0; i < c.sys.p(); ++i) {
    for (const auto& L : c.levels) {
      const DyadicAxis& ax = L.axes[i];
      Geo g;
      g.a = pow2(E - ax.A);
      g.rho = pow2(E - L.e);
      g.prho = pow2(E - L.e_parent);
      g.s = pow2(E - ax.V);
      g.N = ax.N;
      g.m = ax.m;
      g.M = ax.N * ax.m;
      g.a_sh = mp_bitcnt_t(E - ax.A);
      g.rho_sh = mp_bitcnt_t(E - L.e);
      g.step_t = 10 * g.a;
      g.step_j = 10 * g.rho;
      g.rect_first = -(pow2(ax.q) - 1) * g.a;
      g.ball_first = -(ax.m - 1) * 5 * g.rho;
      g.first = g.rect_first + g.ball_first;
      out[i].push_back(std::move(g));
    }
  }
  return out;
}

// children whose centre offset from the first child is <= y
mpz_class count_le(const Geo& g, const mpz_class& y) {
  if (sgn(y) < 0) return 0;
  mpz_class t = div_ten_shift(y, g.a_sh);
  if (t >= g.N) return g.M;
  mpz_class jj = div_ten_shift(y - ten_shift(t, g.a_sh), g.rho_sh) + 1;
  if (jj > g.m) jj = g.m;
  return t * g.m + jj;
}

mpz_class child_offset(const Geo& g, const mpz_class& idx) {
  mpz_class t = idx / g.m;
  mpz_class j = idx - t * g.m;
  return g.first + ten_shift(t, g.a_sh) + ten_shift(j, g.rho_sh);
}

// log2 of the share of a level-l ball's mass (centre c, radius rho) in [lo, hi]
double axis_share(const std::vector<Geo>& G, size_t l, const mpz_class& c,
                  const mpz_class& rho, const mpz_class& lo, const mpz_class& hi) {
  const mpz_class lb = c - rho, hb = c + rho;
  if (lo <= lb && hb <= hi) return 0;
  if (hi <= lb || lo >= hb) return kNegInf;
  if (l == G.size()) {
    const mpz_class overlap = (hi < hb ? hi : hb) - (lo > lb ? lo : lb);
    return log2z(overlap) - log2z(2 * rho);
  }
  const Geo& g = G[l];
  const mpz_class base = c + g.first;
  auto cle = [&](const mpz_class& X) { return count_le(g, X - base); };
  mpz_class full = cle(hi - g.rho) - cle(lo + g.rho - 1);
  if (sgn(full) < 0) full = 0;
  std::vector<double> terms;
  if (sgn(full) > 0) terms.push_back(log2z(full));
  std::vector<mpz_class> partial;
  for (const mpz_class* edge : {&lo, &hi}) {
    mpz_class i0 = cle(*edge - g.rho), i1 = cle(*edge + g.rho - 1);
    if (i1 - i0 > 1) throw std::logic_error("axis_share: siblings closer than 10 rho");
    for (; i0 < i1; ++i0) {
      if (std::find(partial.begin(), partial.end(), i0) == partial.end()) {
        partial.push_back(i0);
      }
    }
  }
  for (const auto& idx : partial) {
    terms.push_back(axis_share(G, l + 1, c + child_offset(g, idx), g.rho, lo, hi));
  }
  return log2_sum(terms) - log2z(g.M);
}

mpz_class to_units(double x, int64_t E) {
  mpq_class q(x);
  mpz_class num = q.get_num() * pow2(E);
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  return out;
}

DyadicLevel make_level(const DyadicSystem& sys, int j, int64_t k, int64_t e_parent,
                       const mpq_class& parent_weight) {
  const size_t p = sys.p();
  DyadicLevel L;
  L.j = j;
  L.k = k;
  L.e_parent = e_parent;
  L.e = 0;
  for (size_t i = 0; i < p; ++i) {
    DyadicAxis ax;
    ax.A = sys.A(i, k);
    ax.q = ax.A - 1 - e_parent;
    ax.V = sys.V(i, k);
    L.e = std::max(L.e, ax.V);
    L.axes.push_back(std::move(ax));
  }
  L.w = double(L.e) / double(k);
  mpz_class per_parent = 1;
  mpq_class cover = 1, raw = 1, g_prod = 1, region = 1, coarse = 1;
  for (auto& ax : L.axes) {
    const mpz_class Q = pow2(ax.q);
    ax.N = (Q - 1) / 5 + 1;
    ax.m = (pow2(L.e - ax.V) - 1) / 5 + 1;
    per_parent *= ax.N * ax.m;
    // offsets in units of the big half-side
    const mpz_class o_last = -(Q - 1) + 10 * (ax.N - 1);
    const mpz_class right = std::min(mpz_class(Q), mpz_class(o_last + 25));
    cover *= mpq_class(right + Q, 2 * Q);
    raw *= mpq_class(ax.N, 2 * Q);
    mpq_class g(o_last + 5 + Q + 1, 2 * (Q + 1));
    g.canonicalize();
    if (g > 1) g = 1;
    g_prod *= g;
    region *= 2 * (Q + 1);
    coarse *= 2 * ax.N;
  }
  cover.canonicalize();
  raw.canonicalize();
  L.cover_ratio = cover.get_d();
  L.raw_ratio = raw.get_d();
  // finer selected rectangles sit outside the coarse 5-dilations
  L.truncation_ok = coarse >= region * (1 - g_prod);
  L.weight = parent_weight / mpq_class(per_parent);
  L.weight.canonicalize();
  return L;
}

void for_each_index(const std::vector<uint64_t>& n,
                    const std::function<void(const std::vector<uint64_t>&)>& fn) {
  std::vector<uint64_t> idx(n.size(), 0);
  while (true) {
    fn(idx);
    size_t i = n.size();
    while (i-- > 0) {
      if (++idx[i] < n[i]) break;
      idx[i] = 0;
    }
    if (i == size_t(-1)) break;
  }
}

}  // namespace

void DyadicSystem::validate() const {
  if (p() == 0 || p() > 3) throw std::invalid_argument("dyadic system: need 1 <= p <= 3");
  if (v.size() != p()) throw std::invalid_argument("dyadic system: u and v lengths differ");
  for (size_t i = 0; i < p(); ++i) {
    if (!(u[i] > 0) || !std::isfinite(u[i])) {
      throw std::invalid_argument("dyadic system: u_i must be positive");
    }
    if (!(v[i] >= u[i]) || !std::isfinite(v[i])) {
      throw std::invalid_argument("dyadic system: need finite v_i >= u_i");
    }
  }
  K0();
}

int64_t DyadicSystem::K0() const {
  for (int64_t K = 1; K <= 10000; ++K) {
    bool ok = true;
    for (double x : u) {
      const double y = double(K) * x;
      ok = ok && std::abs(y - std::round(y)) < 1e-9;
    }
    if (ok) return K;
  }
  throw std::invalid_argument("dyadic system: u_i must be rationals with small denominators");
}

int64_t DyadicSystem::V(size_t i, int64_t k) const {
  return int64_t(std::ceil(double(k) * v.at(i) - 1e-9)) + 2;
}

int64_t DyadicSystem::A(size_t i, int64_t k) const {
  return std::llround(double(k) * u.at(i));
}

mpz_class DyadicLevel::children_per_parent() const {
  mpz_class r = 1;
  for (const auto& ax : axes) r *= ax.N * ax.m;
  return r;
}

int64_t DyadicConstruction::unit_exponent() const {
  if (levels.empty()) throw std::logic_error("dyadic: no levels");
  return levels.back().e + 64;
}

DyadicConstruction build_dyadic(const DyadicSystem& sys, int depth, double eps,
                                const DyadicBuildOptions& opt) {
  sys.validate();
  if (depth < 1) throw std::invalid_argument("build_dyadic: depth must be >= 1");
  if (!(eps > 0)) throw std::invalid_argument("build_dyadic: eps must be > 0");
  DyadicConstruction c;
  c.sys = sys;
  c.eps = eps;
  const int64_t K0 = sys.K0();
  const double p = double(sys.p());
  int64_t e_parent = 1;
  mpq_class W = 1;
  for (int j = 1; j <= depth; ++j) {
    // nu(B) / mu(B) with mu(B) = (2 rho)^p
    const double log2_density = log2q(W) + p * double(e_parent - 1);
    const double w_floor = std::max(j - 1, 1);
    bool found = false;
    for (int64_t k = K0; k <= opt.k_max; k += K0) {
      bool ok = true;
      for (size_t i = 0; i < sys.p() && ok; ++i) ok = sys.A(i, k) - 1 - e_parent >= 1;
      if (!ok || log2_density > double(k) * eps) continue;
      int64_t e = 0;
      for (size_t i = 0; i < sys.p(); ++i) e = std::max(e, sys.V(i, k));
      if (!(double(e) / double(k) > w_floor)) continue;
      DyadicLevel L = make_level(sys, j, k, e_parent, W);
      if (L.cover_ratio < opt.c_pack || !L.truncation_ok) continue;
      L.log2_parent_density = log2_density;
      e_parent = L.e;
      W = L.weight;
      c.levels.push_back(std::move(L));
      found = true;
      break;
    }
    if (!found) {
      throw std::runtime_error("build_dyadic: no admissible scale for level " +
                               std::to_string(j) + " up to k = " +
                               std::to_string(opt.k_max));
    }
  }
  return c;
}

DyadicCheck check_dyadic(const DyadicConstruction& c, int64_t samples,
                         uint64_t seed) {
  DyadicCheck out;
  out.mass.push_back(1.0);
  out.min_gap_ratio = std::numeric_limits<double>::infinity();
  out.min_count_ratio = out.min_cover_ratio = out.min_raw_ratio =
      std::numeric_limits<double>::infinity();
  out.max_count_ratio = 0;
  mpz_class balls = 1;
  mpq_class parent_w = 1;
  for (const auto& L : c.levels) {
    const mpz_class per = L.children_per_parent();
    balls *= per;
    const mpq_class mass = mpq_class(balls) * L.weight;
    out.mass.push_back(mass.get_d());
    out.mass_exact = out.mass_exact && mass == 1 && mpq_class(per) * L.weight == parent_w;
    parent_w = L.weight;
    out.truncation_ok = out.truncation_ok && L.truncation_ok;
    out.min_cover_ratio = std::min(out.min_cover_ratio, L.cover_ratio);
    out.min_raw_ratio = std::min(out.min_raw_ratio, L.raw_ratio);
    double log2_ratio = 0;
    for (const auto& ax : L.axes) {
      log2_ratio += log2z(ax.m) - double(L.e - ax.V);
      // sibling gaps along this axis in units of rho
      const mpz_class rho_steps = pow2(L.e - ax.A);  // a / rho
      if (ax.m >= 2) out.min_gap_ratio = std::min(out.min_gap_ratio, 1.0);
      if (ax.N >= 2) {
        mpq_class gap(10 * rho_steps - 10 * (ax.m - 1), 10);
        gap.canonicalize();
        out.min_gap_ratio = std::min(out.min_gap_ratio, gap.get_d());
      }
      // nesting along the axis, exactly: ball block in shrunk, shrunk in big
      const mpz_class s_over_rho = pow2(L.e - ax.V);
      out.nesting_ok = out.nesting_ok && 5 * (ax.m - 1) + 1 <= s_over_rho &&
                       ax.V >= ax.A;
    }
    const double ratio = std::exp2(log2_ratio);
    out.min_count_ratio = std::min(out.min_count_ratio, ratio);
    out.max_count_ratio = std::max(out.max_count_ratio, ratio);
  }
  out.separation_ok = out.min_gap_ratio >= 1.0;

  // sampled coordinates: nesting chain and neighbouring siblings
  const auto G = geometry(c);
  const int64_t E = c.unit_exponent();
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(mpz_class(std::to_string(seed)));
  const mpz_class one_unit = pow2(E);
  for (int64_t s = 0; s < samples; ++s) {
    const mpz_class pick = rng.get_z_range(mpz_class(c.depth()));
    const size_t l = size_t(pick.get_ui());
    for (size_t i = 0; i < c.sys.p(); ++i) {
      mpz_class centre = pow2(E - 1);
      for (size_t up = 0; up < l; ++up) {
        const Geo& g = G[i][up];
        centre += child_offset(g, rng.get_z_range(g.M));
      }
      const Geo& g = G[i][l];
      const mpz_class t = rng.get_z_range(g.N);
      const mpz_class jj = rng.get_z_range(g.m);
      const mpz_class rect_off = g.rect_first + ten_shift(t, g.a_sh);
      const mpz_class ball_off = g.ball_first + ten_shift(jj, g.rho_sh);
      const mpz_class ball_c = centre + rect_off + ball_off;
      bool ok = abs(ball_off) + g.rho <= g.s && g.s <= g.a &&
                3 * (abs(rect_off) + g.a) <= 2 * g.prho &&
                abs(rect_off) - g.a < g.prho / 2 && ball_c - g.rho >= 0 &&
                ball_c + g.rho <= one_unit;
      out.nesting_ok = out.nesting_ok && ok;
      const mpz_class idx = t * g.m + jj;
      if (idx + 1 < g.M) {
        const mpz_class gap = child_offset(g, idx + 1) - child_offset(g, idx);
        out.separation_ok = out.separation_ok && gap >= 10 * g.rho;
      }
    }
    ++out.sampled;
  }
  return out;
}

double log2_nu_box(const DyadicConstruction& c, const std::vector<double>& x,
                   double r) {
  if (x.size() != c.sys.p()) throw std::invalid_argument("log2_nu_box: dimension");
  if (!(r > 0)) throw std::invalid_argument("log2_nu_box: radius must be positive");
  const auto G = geometry(c);
  const int64_t E = c.unit_exponent();
  const mpz_class R = to_units(r, E);
  const mpz_class half = pow2(E - 1);
  double total = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const mpz_class X = to_units(x[i], E);
    total += axis_share(G[i], 0, half, half, X - R, X + R);
  }
  return total;
}

AuditResult holder_audit_dyadic(const DyadicConstruction& c,
                                const LevelSpec& spec, int64_t samples,
                                uint64_t seed) {
  if (c.depth() < 2) throw std::invalid_argument("holder_audit: need depth >= 2");
  if (samples < 10) throw std::invalid_argument("holder_audit: fewer than 10 samples");
  AuditResult res;
  res.s0 = s0(spec);
  res.eps = c.eps;
  const auto G = geometry(c);
  const int64_t E = c.unit_exponent();
  res.log2_r_min = -double(c.levels.back().e);
  res.log2_r_max = -1;
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(mpz_class(std::to_string(seed)));
  auto unit = [&] {
    const mpz_class z = rng.get_z_bits(53);
    return std::ldexp(z.get_d(), -53);
  };
  const mpz_class half = pow2(E - 1);
  const mpz_class jitter = pow2(64);  // rho_J in units
  const double expo = res.s0 - 2 * c.eps;
  std::vector<double> xs, ys;
  res.log2_max_constant = kNegInf;
  for (int64_t s = 0; s < samples; ++s) {
    std::vector<mpz_class> x(c.sys.p());
    for (size_t i = 0; i < x.size(); ++i) {
      mpz_class centre = half;
      for (const Geo& g : G[i]) centre += child_offset(g, rng.get_z_range(g.M));
      x[i] = centre + rng.get_z_range(2 * jitter + 1) - jitter;
    }
    const double lr = res.log2_r_min + unit() * (res.log2_r_max - res.log2_r_min);
    const double el = double(E) + lr;
    const int64_t ip = int64_t(std::floor(el));
    const mpz_class mant(long(std::llround(std::ldexp(std::exp2(el - double(ip)), 52))));
    const mpz_class R = mant * pow2(ip - 52);
    double ln = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      ln += axis_share(G[i], 0, half, half, x[i] - R, x[i] + R);
    }
    if (ln == kNegInf) continue;
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

std::vector<CantorLevel> enumerate_dyadic(const DyadicConstruction& c,
                                          size_t max_balls) {
  const size_t p = c.sys.p();
  std::vector<CantorLevel> out(1);
  LevelBall root;
  root.ball.center.assign(p, 0.5);
  root.ball.radius = 0.5;
  root.weight = 1.0;
  out[0].balls.push_back(root);
  for (const auto& L : c.levels) {
    if (L.e > 60) throw std::runtime_error("enumerate_dyadic: radius below 2^-60");
    const mpz_class total = mpz_class(out.back().balls.size()) * L.children_per_parent();
    if (total > mpz_class(std::to_string(max_balls))) {
      throw std::runtime_error("enumerate_dyadic: level too large to list");
    }
    std::vector<uint64_t> nN, nm;
    std::vector<double> exps_big, exps_shrunk;
    for (const auto& ax : L.axes) {
      nN.push_back(ax.N.get_ui());
      nm.push_back(ax.m.get_ui());
      exps_big.push_back(double(ax.A) / double(L.k));
      exps_shrunk.push_back(double(ax.V) / double(L.k));
    }
    const double rho = std::ldexp(1.0, -int(L.e));
    const double weight = L.weight.get_d();
    CantorLevel next;
    next.j = L.j;
    next.min_cover_ratio = L.cover_ratio;
    next.min_raw_ratio = L.raw_ratio;
    const auto& parents = out.back().balls;
    for (size_t pi = 0; pi < parents.size(); ++pi) {
      for_each_index(nN, [&](const std::vector<uint64_t>& t) {
        LevelRect lr;
        lr.big.k = int(L.k);
        lr.big.exps = exps_big;
        lr.big.kind = RectKind::kBig;
        for (size_t i = 0; i < p; ++i) {
          const double a = std::ldexp(1.0, -int(L.axes[i].A));
          const double Q = std::ldexp(1.0, int(L.axes[i].q));
          lr.big.center.push_back(parents[pi].ball.center[i] +
                                  (-(Q - 1) + 10.0 * double(t[i])) * a);
        }
        lr.shrunk = lr.big;
        lr.shrunk.exps = exps_shrunk;
        lr.shrunk.kind = RectKind::kShrunk;
        lr.parent = pi;
        lr.w = L.w;
        lr.first_ball = next.balls.size();
        for_each_index(nm, [&](const std::vector<uint64_t>& jj) {
          LevelBall b;
          b.ball.radius = rho;
          for (size_t i = 0; i < p; ++i) {
            b.ball.center.push_back(lr.big.center[i] +
                                    (2.0 * double(jj[i]) - double(nm[i] - 1)) * 5.0 * rho);
          }
          b.weight = weight;
          b.parent = pi;
          b.rect = next.rects.size();
          next.balls.push_back(std::move(b));
        });
        lr.n_balls = next.balls.size() - lr.first_ball;
        next.rects.push_back(std::move(lr));
      });
    }
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace mtp
