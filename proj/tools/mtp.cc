// mtp: command-line front end for the dimension formulas and the verifiers.
//
// Exit codes: 0 pass, 1 usage, 2 computation error, 3 check failed.

#include <gmp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtp/dimnum.h"
#include "mtp/dioph.h"
#include "mtp/dyadic_cantor.h"
#include "mtp/psi.h"
#include "mtp/tori.h"
#include "mtp/verify.h"

using json = nlohmann::json;
using namespace mtp;

namespace {

constexpr const char* kVersion = "0.3.0";

struct Common {
  bool json = false;
  std::string out;
  uint64_t seed = 1;
};

// A finished run: the fields in order, data files to drop in --out, and
// whether the built-in check passed.
struct Report {
  json fields = json::object();
  std::vector<std::string> text;  // human-readable lines
  std::map<std::string, std::string> files;
  bool pass = true;
  bool has_check = false;
};

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

json jnum(double x) {
  if (std::isfinite(x)) return x;
  return num(x);  // json has no infinities
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto a = tok.find_first_not_of(" \t");
    const auto b = tok.find_last_not_of(" \t");
    out.push_back(a == std::string::npos ? "" : tok.substr(a, b - a + 1));
  }
  return out;
}

ExtReal parse_ext(const std::string& tok, const std::string& what) {
  if (tok == "inf" || tok == "+inf") return ExtReal::Infinity();
  size_t used = 0;
  double x = 0;
  try {
    x = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (tok.empty() || used != tok.size() || !std::isfinite(x)) {
    throw std::invalid_argument(what + ": cannot read '" + tok + "' as a number");
  }
  return ExtReal::Finite(x);
}

std::vector<double> parse_reals(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& tok : split(s)) {
    const auto x = parse_ext(tok, what);
    if (x.is_inf()) throw std::invalid_argument(what + ": inf not allowed here");
    out.push_back(x.value());
  }
  return out;
}

std::vector<ExtReal> parse_ext_list(const std::string& s, const std::string& what) {
  std::vector<ExtReal> out;
  for (const auto& tok : split(s)) out.push_back(parse_ext(tok, what));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

// Accumulation set from one psi per coordinate. Hull limits contribute their
// endpoints only.
std::vector<ExponentVector> limits_to_U(const std::vector<PsiPtr>& fs, ExponentMode mode,
                                        bool* hull) {
  std::vector<std::vector<ExtReal>> pts;
  *hull = false;
  for (const auto& f : fs) {
    auto l = f->exponent_limit(mode);
    *hull = *hull || l.is_hull;
    pts.push_back(l.points);
  }
  std::vector<ExponentVector> U;
  std::vector<size_t> idx(fs.size(), 0);
  while (true) {
    std::vector<ExtReal> t;
    for (size_t i = 0; i < fs.size(); ++i) t.push_back(pts[i][idx[i]]);
    U.emplace_back(t);
    size_t i = fs.size();
    while (i-- > 0) {
      if (++idx[i] < pts[i].size()) break;
      idx[i] = 0;
    }
    if (i == size_t(-1)) break;
  }
  return U;
}

std::vector<PsiPtr> parse_psis(const std::vector<std::string>& specs) {
  std::vector<PsiPtr> out;
  for (const auto& s : specs) out.push_back(parse_psi(s));
  return out;
}

ExponentMode parse_mode(const std::string& s) {
  if (s == "logn") return ExponentMode::kLogN;
  if (s == "linear") return ExponentMode::kLinear;
  throw std::invalid_argument("mode must be logn or linear");
}

// ---- subcommands --------------------------------------------------------

struct DimnumArgs {
  std::string delta, u, v;
  double kappa = -1;
};

Report run_dimnum(const DimnumArgs& a) {
  LevelSpec s;
  s.u = parse_reals(a.u, "--u");
  s.v = parse_ext_list(a.v, "--v");
  s.delta = a.delta.empty() ? std::vector<double>(s.u.size(), 1.0) : parse_reals(a.delta, "--delta");
  s.validate();
  Report r;
  std::set<ExtReal> cuts;
  for (double x : s.u) cuts.insert(ExtReal::Finite(x));
  for (const auto& x : s.v) cuts.insert(x);
  json levels = json::array();
  for (const auto& A : cuts) {
    const double val = s_at(s, A);
    levels.push_back({{"A", A.str()}, {"s", jnum(val)}});
    r.text.push_back("s(A=" + A.str() + ") = " + num(val));
  }
  json per_i = json::array();
  for (size_t i = 0; i < s.p(); ++i) {
    per_i.push_back({{"i", i + 1}, {"s_level", jnum(s_level(s, i))},
                     {"s_bar", jnum(s_bar_level(s, i))}});
    r.text.push_back("s_level(" + std::to_string(i + 1) + ") = " + num(s_level(s, i)) +
                     ", s_bar = " + num(s_bar_level(s, i)));
  }
  const double v0 = s0(s), vb = s0_bruteforce(s);
  r.fields["levels"] = levels;
  r.fields["per_index"] = per_i;
  r.fields["s0"] = jnum(v0);
  r.fields["s0_oracle"] = jnum(vb);
  r.text.push_back("s0 = " + num(v0));
  r.text.push_back("s0 oracle = " + num(vb));
  if (a.kappa >= 0) {
    const double vr = s0_resonant(s, a.kappa);
    r.fields["kappa"] = a.kappa;
    r.fields["s0_resonant"] = jnum(vr);
    r.text.push_back("s0 resonant (kappa=" + num(a.kappa) + ") = " + num(vr));
  }
  return r;
}

struct UArgs {
  std::vector<std::string> U, psi;
  std::string mode = "logn";
};

std::vector<ExponentVector> resolve_U(const UArgs& a, ExponentMode default_mode, Report* r) {
  if (!a.U.empty() && !a.psi.empty()) {
    throw std::invalid_argument("give either --U or --psi, not both");
  }
  if (a.U.empty() && a.psi.empty()) throw std::invalid_argument("need --U or --psi");
  std::vector<ExponentVector> U;
  if (!a.U.empty()) {
    for (const auto& s : a.U) U.push_back(parse_exponent_vector(s));
    r->text.push_back("note: U taken as given; it is not derived from any psi family");
    r->fields["note"] = "U taken as given";
    return U;
  }
  const auto mode = a.mode.empty() ? default_mode : parse_mode(a.mode);
  bool hull = false;
  U = limits_to_U(parse_psis(a.psi), mode, &hull);
  if (hull) {
    r->text.push_back("note: some limit sets are hulls; only their endpoints enter U");
    r->fields["note"] = "hull endpoints only";
  }
  return U;
}

Report run_dioph(size_t d, const UArgs& a) {
  Report r;
  const auto U = resolve_U(a, ExponentMode::kLogN, &r);
  const DiophInstance inst{d, U};
  inst.validate();
  json rows = json::array();
  for (const auto& row : dioph_rows(inst)) {
    std::string z;
    json zj = json::array();
    for (double x : row.zeta) {
      z += (z.empty() ? "" : ",") + num(x);
      zj.push_back(jnum(x));
    }
    rows.push_back({{"t", row.t}, {"zeta", zj}, {"L", row.finite_count}, {"inner", jnum(row.inner)}});
    r.text.push_back("t = " + row.t + ": zeta = (" + z + "), #L = " +
                     std::to_string(row.finite_count) + ", inner = " + num(row.inner));
  }
  json weights = json::array();
  for (const auto& t : U) {
    try {
      const auto w = optimal_weights(t);
      weights.push_back({{"t", t.str()}, {"a", w.a}, {"case", w.which_case}});
      r.text.push_back("weights for " + t.str() + ": (" + join(w.a) + "), case " +
                       std::to_string(w.which_case));
    } catch (const std::domain_error&) {
      // weights need a finite part summing to at least 1
    }
  }
  const double dim = dim_W(inst);
  r.fields["U"] = rows;
  r.fields["weights"] = weights;
  r.fields["dim"] = jnum(dim);
  r.text.push_back("dim = " + num(dim));
  return r;
}

Report run_tori(const std::string& beta, const UArgs& a) {
  Report r;
  const TorusSystem sys(parse_reals(beta, "--beta"));
  const auto U = resolve_U(a, ExponentMode::kLinear, &r);
  json rows = json::array();
  for (const auto& t : U) {
    if (t.d() != sys.d()) {
      throw std::invalid_argument("vector " + t.str() + " does not match the " +
                                  std::to_string(sys.d()) + " eigenvalues");
    }
    json xs = json::array();
    std::string line;
    for (size_t i : t.split.L) {
      const double x = xi(sys, t, i);
      xs.push_back({{"i", i + 1}, {"xi", jnum(x)}});
      line += (line.empty() ? "" : ", ") + std::string("xi_") + std::to_string(i + 1) + " = " + num(x);
    }
    rows.push_back({{"t", t.str()}, {"xi", xs}});
    r.text.push_back("t = " + t.str() + ": " + (line.empty() ? "L empty" : line));
  }
  const double dim = dim_torus(sys, U);
  r.fields["U"] = rows;
  r.fields["dim"] = jnum(dim);
  r.text.push_back("dim = " + num(dim));
  return r;
}

struct BoxArgs {
  std::vector<std::string> psi;
  int64_t Q0 = 2, Q = 4096, cover_Q = 1 << 20;
  int m_min = 14, m_max = 30, fit = 4;
  std::string mode = "shell";
  double tol = 0.2;
  bool no_cover = false;
};

Report run_boxcount(const BoxArgs& a) {
  Report r;
  BoxCountConfig c;
  c.psi = parse_psis(a.psi);
  c.Q0 = a.Q0;
  c.Q = a.Q;
  c.m_min = a.m_min;
  c.m_max = a.m_max;
  c.fit = a.fit;
  if (a.mode == "shell") c.mode = BoxCountMode::kShell;
  else if (a.mode == "union") c.mode = BoxCountMode::kUnion;
  else throw std::invalid_argument("--mode must be shell or union");
  c.validate();

  // target from the formula when every limit is a single point
  double target = NAN;
  bool hull = false;
  try {
    const auto U = limits_to_U(c.psi, ExponentMode::kLogN, &hull);
    if (!hull) target = dim_W(DiophInstance{c.psi.size(), U});
  } catch (const std::invalid_argument&) {
    // geometric families have no polynomial-scale limit
  }
  const auto b = boxcount_dimension(c);
  std::string csv = "m,count,q_used\n", dat;
  json counts = json::array();
  for (size_t i = 0; i < b.m.size(); ++i) {
    csv += std::to_string(b.m[i]) + "," + std::to_string(b.count[i]) + "," +
           std::to_string(b.q_used[i]) + "\n";
    dat += std::to_string(b.m[i]) + " " + num(std::log2(double(std::max<uint64_t>(b.count[i], 1)))) + "\n";
    counts.push_back({{"m", b.m[i]}, {"count", b.count[i]}, {"q_used", b.q_used[i]}});
  }
  r.files["counts.csv"] = csv;
  r.files["counts.dat"] = dat;
  r.fields["counts"] = counts;
  r.fields["estimate"] = b.estimate;
  r.text.push_back("estimate = " + num(b.estimate) + " (slope of log2 N(m) over the top " +
                   std::to_string(c.fit) + " resolutions)");
  if (!a.no_cover) {
    BoxCountConfig cc = c;
    cc.Q = a.cover_Q;
    const auto ce = cover_exponent(cc);
    r.fields["cover_exponent"] = ce.s;
    r.fields["cover_note"] = "heuristic upper-bound indicator";
    r.text.push_back("cover exponent = " + num(ce.s) + " (heuristic upper-bound indicator, Q = " +
                     std::to_string(cc.Q) + ")");
  }
  r.fields["tolerance"] = a.tol;
  if (std::isfinite(target)) {
    r.has_check = true;
    r.pass = std::abs(b.estimate - target) <= a.tol;
    r.fields["target"] = target;
    r.text.push_back("target = " + num(target) + ", tolerance = " + num(a.tol));
  } else {
    r.fields["target"] = nullptr;
    r.text.push_back("target = none (no single-point limit set)");
  }
  return r;
}

struct FullArgs {
  int d = 2;
  std::string a;
  int64_t q = 10000, samples = 100000;
};

Report run_fullmeasure(const FullArgs& a, uint64_t seed) {
  Report r;
  FullMeasureConfig c;
  c.d = a.d;
  c.a = parse_reals(a.a, "--a");
  c.q_ell = a.q;
  c.samples = a.samples;
  c.seed = seed;
  const auto res = lemma_full_measure(c);
  r.has_check = true;
  r.pass = res.fraction >= 0.5;
  r.fields["fraction"] = res.fraction;
  r.fields["hits"] = res.hits;
  r.fields["samples"] = res.samples;
  r.fields["wilson99"] = {res.lo, res.hi};
  r.fields["M"] = res.M;
  r.fields["q_window"] = {res.q_lo, res.q_hi};
  r.text.push_back("fraction = " + num(res.fraction) + " (" + std::to_string(res.hits) + "/" +
                   std::to_string(res.samples) + "), 99% interval [" + num(res.lo) + ", " +
                   num(res.hi) + "]");
  r.text.push_back("q window = [" + std::to_string(res.q_lo) + ", " + std::to_string(res.q_hi) +
                   "], M = " + std::to_string(res.M));
  r.text.push_back("threshold = 0.5");
  return r;
}

struct CantorArgs {
  std::string u, v;
  double eps = 0.05;
  int depth = 3;
  int64_t samples = 10000, check_samples = 2000;
};

Report run_cantor(const CantorArgs& a, uint64_t seed) {
  Report r;
  DyadicSystem sys{parse_reals(a.u, "--u"), parse_reals(a.v, "--v")};
  sys.validate();
  LevelSpec spec;
  spec.delta.assign(sys.p(), 1.0);
  spec.u = sys.u;
  for (double x : sys.v) spec.v.push_back(ExtReal::Finite(x));
  const double s = s0(spec);
  const auto c = build_dyadic(sys, a.depth, a.eps);
  const auto chk = check_dyadic(c, a.check_samples, seed);

  std::string csv = "j,k,e,children_per_parent,log2_weight,raw_ratio,cover_ratio\n";
  json levels = json::array();
  for (const auto& L : c.levels) {
    const mpz_class kids = L.children_per_parent();
    const double lw = std::log2(mpf_class(L.weight, 256).get_d());
    const std::string kid_s = kids.get_str();
    csv += std::to_string(L.j) + "," + std::to_string(L.k) + "," + std::to_string(L.e) + "," +
           kid_s + "," + num(lw) + "," + num(L.raw_ratio) + "," + num(L.cover_ratio) + "\n";
    levels.push_back({{"j", L.j}, {"k", L.k}, {"e", L.e}, {"children_per_parent", kid_s},
                      {"raw_ratio", L.raw_ratio}, {"cover_ratio", L.cover_ratio}});
    r.text.push_back("level " + std::to_string(L.j) + ": k = " + std::to_string(L.k) +
                     ", radius 2^-" + std::to_string(L.e) + ", children per parent " +
                     (kid_s.size() > 24 ? "~2^" + std::to_string(mpz_sizeinbase(kids.get_mpz_t(), 2) - 1) : kid_s));
  }
  r.files["levels.csv"] = csv;
  r.fields["levels"] = levels;
  bool mass_ok = chk.mass_exact;
  for (double m : chk.mass) mass_ok = mass_ok && std::abs(m - 1) <= 1e-9;
  const bool inv = mass_ok && chk.nesting_ok && chk.separation_ok && chk.truncation_ok &&
                   chk.min_count_ratio >= 1.0 / 2500 && chk.max_count_ratio <= 2500;
  r.fields["checks"] = {{"mass_ok", mass_ok},
                        {"nesting_ok", chk.nesting_ok},
                        {"separation_ok", chk.separation_ok},
                        {"truncation_ok", chk.truncation_ok},
                        {"count_ratio", {chk.min_count_ratio, chk.max_count_ratio}},
                        {"min_gap_ratio", chk.min_gap_ratio},
                        {"sampled", chk.sampled}};
  r.text.push_back(std::string("invariants: mass ") + (mass_ok ? "ok" : "FAIL") + ", nesting " +
                   (chk.nesting_ok ? "ok" : "FAIL") + ", separation " +
                   (chk.separation_ok ? "ok" : "FAIL") + ", truncation " +
                   (chk.truncation_ok ? "ok" : "FAIL") + ", #C ratio [" +
                   num(chk.min_count_ratio) + ", " + num(chk.max_count_ratio) + "]");
  r.has_check = true;
  r.pass = inv;
  r.fields["s0"] = s;
  if (c.depth() >= 2) {
    const auto au = holder_audit_dyadic(c, spec, a.samples, seed);
    const double floor = s - 2 * a.eps - 0.1;
    r.pass = r.pass && au.fitted_slope >= floor;
    r.fields["audit"] = {{"fitted_slope", au.fitted_slope},
                         {"slope_floor", floor},
                         {"origin_slope", au.origin_slope},
                         {"log2_max_constant", au.log2_max_constant},
                         {"log2_r_range", {au.log2_r_min, au.log2_r_max}},
                         {"samples", au.samples}};
    r.text.push_back("s0 = " + num(s) + ", fitted slope = " + num(au.fitted_slope) +
                     " (floor " + num(floor) + "), through-origin slope = " +
                     num(au.origin_slope) + ", log2 max constant = " +
                     num(au.log2_max_constant));
  } else {
    r.text.push_back("s0 = " + num(s) + " (audit needs depth >= 2)");
  }
  return r;
}

// ---- config file and output ----------------------------------------------

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto a = line.find_first_not_of(" \t");
    if (a == std::string::npos || line[a] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(n) + ": expected key=value");
    }
    std::string k = line.substr(a, eq - a), v = line.substr(eq + 1);
    while (!k.empty() && (k.back() == ' ' || k.back() == '\t')) k.pop_back();
    const auto b = v.find_first_not_of(" \t");
    v = b == std::string::npos ? "" : v.substr(b);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) v.pop_back();
    kv.emplace_back(k, v);
  }
  return kv;
}

// Splices config entries in after the subcommand as --key=value; keys that
// also appear on the command line are left to the command line.
std::vector<std::string> inject_config(std::vector<std::string> args) {
  std::string path;
  size_t sub = 0;
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      --i;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      --i;
    } else if (sub == 0 && !args[i].empty() && args[i][0] != '-') {
      sub = i;
    }
  }
  if (path.empty()) return args;
  if (sub == 0) throw std::invalid_argument("--config needs a subcommand");
  std::set<std::string> given;
  for (size_t i = sub + 1; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) == 0) given.insert(args[i].substr(2, args[i].find('=') - 2));
  }
  std::vector<std::string> extra;
  for (const auto& [k, v] : read_config(path)) {
    if (!given.count(k)) extra.push_back("--" + k + "=" + v);
  }
  args.insert(args.begin() + long(sub) + 1, extra.begin(), extra.end());
  return args;
}

// key=value lines that reproduce the run through --config.
std::vector<std::pair<std::string, std::string>> echo(const CLI::App* sub) {
  std::vector<std::pair<std::string, std::string>> kv;
  for (const CLI::Option* o : sub->get_options()) {
    const std::string name = o->get_single_name();
    if (name == "help" || name == "out" || name == "json") continue;
    if (o->count() > 0) {
      if (o->get_expected_max() == 0) {
        kv.emplace_back(name, "true");
        continue;
      }
      for (const auto& v : o->results()) kv.emplace_back(name, v);
    } else if (!o->get_default_str().empty()) {
      kv.emplace_back(name, o->get_default_str());
    }
  }
  return kv;
}

void emit(const std::string& command, const Report& r, const Common& c, const CLI::App* sub) {
  const auto kv = echo(sub);
  json cfg = json::object();
  std::string cfg_text;
  for (const auto& [k, v] : kv) {
    if (cfg.contains(k)) {
      if (!cfg[k].is_array()) cfg[k] = json::array({cfg[k]});
      cfg[k].push_back(v);
    } else {
      cfg[k] = v;
    }
    cfg_text += k + "=" + v + "\n";
  }
  json doc = {{"command", command},
              {"version", std::string("mtp ") + kVersion},
              {"gmp", gmp_version},
              {"seed", c.seed},
              {"config", cfg}};
  doc.update(r.fields);
  if (r.has_check) doc["pass"] = r.pass;

  if (c.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "# mtp " << kVersion << " " << command << ", seed " << c.seed << "\n";
    for (const auto& [k, v] : kv) std::cout << "# " << k << "=" << v << "\n";
    for (const auto& line : r.text) std::cout << line << "\n";
    if (r.has_check) std::cout << "pass = " << (r.pass ? "true" : "false") << "\n";
  }
  if (!c.out.empty()) {
    std::filesystem::create_directories(c.out);
    auto write = [&](const std::string& name, const std::string& body) {
      std::ofstream f(std::filesystem::path(c.out) / name);
      if (!f) throw std::runtime_error("cannot write " + name + " in " + c.out);
      f << body;
    };
    write("report.json", doc.dump(2) + "\n");
    write("config.txt", "# mtp " + std::string(kVersion) + " " + command + "\n" + cfg_text);
    for (const auto& [name, body] : r.files) write(name, body);
  }
}

void add_common(CLI::App* sub, Common* c) {
  sub->add_flag("--json", c->json, "print the report as JSON");
  sub->add_option("--out", c->out, "directory for report.json, config.txt and data files");
  sub->add_option("--seed", c->seed, "random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension formulas and finite-scale checks for limsup sets"};
  app.set_version_flag("--version", std::string("mtp ") + kVersion);
  app.require_subcommand(1);
  // repeated scalar options keep the last value; list options below take all
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "flat key=value file; keys mirror the flags")
      ->check(CLI::ExistingFile);

  Common common;
  std::function<Report()> run;

  auto* dn = app.add_subcommand("dimnum", "s-levels, s0 and its oracle for (delta, u, v)");
  DimnumArgs dna;
  dn->add_option("--delta", dna.delta, "comma list, default all ones");
  dn->add_option("--u", dna.u, "comma list")->required();
  dn->add_option("--v", dna.v, "comma list, inf allowed")->required();
  dn->add_option("--kappa", dna.kappa, "also report the resonant value at kappa in [0,1)");
  add_common(dn, &common);
  dn->callback([&] { run = [&] { return run_dimnum(dna); }; });

  auto* dp = app.add_subcommand("dioph", "dim_H of W_d(Psi) from the accumulation set");
  size_t dd = 0;
  UArgs dpa;
  dp->add_option("--d", dd, "dimension")->required();
  dp->add_option("--U", dpa.U, "point of U such as (2,inf); repeat to add points")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  dp->add_option("--psi", dpa.psi, "one psi per coordinate, e.g. pow:tau=2")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  dp->add_option("--mode", dpa.mode, "exponent normalization: logn or linear")
      ->capture_default_str();
  add_common(dp, &common);
  dp->callback([&] { run = [&] { return run_dioph(dd, dpa); }; });

  auto* tr = app.add_subcommand("tori", "shrinking targets for diagonal toral maps");
  std::string beta;
  UArgs tra;
  tra.mode = "linear";
  tr->add_option("--beta", beta, "eigenvalues, |beta_i| > 1")->required();
  tr->add_option("--U", tra.U, "point of U; repeat to add points")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  tr->add_option("--psi", tra.psi, "one psi per coordinate")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  tr->add_option("--mode", tra.mode, "exponent normalization: logn or linear")
      ->capture_default_str();
  add_common(tr, &common);
  tr->callback([&] { run = [&] { return run_tori(beta, tra); }; });

  auto* bc = app.add_subcommand("boxcount", "box-counting slope of the finite union");
  BoxArgs bca;
  bc->add_option("--psi", bca.psi, "one psi per coordinate (d <= 2)")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  bc->add_option("--Q0", bca.Q0, "smallest denominator")->capture_default_str();
  bc->add_option("--Q", bca.Q, "largest denominator")->capture_default_str();
  bc->add_option("--m-min", bca.m_min, "coarsest resolution 2^-m")->capture_default_str();
  bc->add_option("--m-max", bca.m_max, "finest resolution")->capture_default_str();
  bc->add_option("--fit", bca.fit, "top resolutions in the fit")->capture_default_str();
  bc->add_option("--mode", bca.mode, "shell or union")->capture_default_str();
  bc->add_option("--tol", bca.tol, "tolerance against the formula value")->capture_default_str();
  bc->add_option("--cover-Q", bca.cover_Q, "largest q in the cover sum")->capture_default_str();
  bc->add_flag("--no-cover", bca.no_cover, "skip the cover exponent");
  add_common(bc, &common);
  bc->callback([&] { run = [&] { return run_boxcount(bca); }; });

  auto* fm = app.add_subcommand("fullmeasure", "Monte Carlo hit fraction of the local lemma");
  FullArgs fma;
  fm->add_option("--d", fma.d, "dimension")->capture_default_str();
  fm->add_option("--a", fma.a, "weights, comma list, sum d+1")->required();
  fm->add_option("--q", fma.q, "q_ell")->capture_default_str();
  fm->add_option("--samples", fma.samples, "sample points")->capture_default_str();
  add_common(fm, &common);
  fm->callback([&] { run = [&] { return run_fullmeasure(fma, common.seed); }; });

  auto* ca = app.add_subcommand("cantor", "dyadic Cantor construction, invariants and audit");
  CantorArgs caa;
  ca->add_option("--u", caa.u, "comma list of rationals")->required();
  ca->add_option("--v", caa.v, "limits of v, comma list")->required();
  ca->add_option("--eps", caa.eps, "epsilon")->capture_default_str();
  ca->add_option("--depth", caa.depth, "levels to build")->capture_default_str();
  ca->add_option("--samples", caa.samples, "balls in the Holder audit")->capture_default_str();
  ca->add_option("--check-samples", caa.check_samples, "balls in the nesting checks")
      ->capture_default_str();
  add_common(ca, &common);
  ca->callback([&] { run = [&] { return run_cantor(caa, common.seed); }; });

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = inject_config(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Report r = run();
    const CLI::App* sub = app.get_subcommands().front();
    emit(sub->get_name(), r, common, sub);
    return r.has_check && !r.pass ? 3 : 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
