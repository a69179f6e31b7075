#include "mtp/psi.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mtp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check(const Psi::Family& f) {
  std::visit(
      Overloaded{
          [](const PowerLaw& p) {
            require(p.tau > 0 && std::isfinite(p.tau), "pow: tau must be > 0");
          },
          [](const PowerLog& p) {
            require(p.tau > 0 && std::isfinite(p.tau),
                    "powlog: tau must be > 0");
            require(std::isfinite(p.sigma) &&
                        p.sigma >= -p.tau * std::log(2.0),
                    "powlog: sigma must be >= -tau*log 2 (monotone from x=2)");
          },
          [](const StretchedExp& p) {
            require(p.c > 0 && std::isfinite(p.c), "sexp: c must be > 0");
            require(p.k > 0 && std::isfinite(p.k), "sexp: k must be > 0");
          },
          [](const GeometricExp& p) {
            require(std::isfinite(p.beta) && std::abs(p.beta) > 1,
                    "geom: |beta| must exceed 1");
            require(p.rate != nullptr, "geom: missing rate");
          },
          [](const BlockAlternate& p) {
            require(p.f != nullptr && p.g != nullptr, "alt: missing branch");
          },
      },
      f);
}

// 2^(2^e); e <= 9 keeps it inside double range.
double block_edge(int e) { return std::ldexp(1.0, 1 << e); }

}  // namespace

Psi::Psi(Family f) : family_(std::move(f)) { check(family_); }

double Psi::neg_log(double x) const {
  if (!(x >= 2)) throw std::domain_error("psi evaluated below x = 2");
  return std::visit(
      Overloaded{
          [x](const PowerLaw& p) { return p.tau * std::log(x); },
          [x](const PowerLog& p) {
            return p.tau * std::log(x) + p.sigma * std::log(std::log(x));
          },
          [x](const StretchedExp& p) { return p.c * std::pow(x, p.k); },
          [x](const GeometricExp& p) {
            return x * std::log(std::abs(p.beta)) + p.rate->neg_log(x);
          },
          [x](const BlockAlternate& p) {
            const int j = static_cast<int>(std::floor(std::log2(std::log2(x))));
            const Psi& cur = (j % 2 == 0) ? *p.f : *p.g;
            double best = cur.neg_log(x);
            // earlier blocks end lower; psi is continuous there so the
            // infimum over a block is its value at the right edge
            for (int b = 0; b < j; ++b) {
              const Psi& comp = (b % 2 == 0) ? *p.f : *p.g;
              best = std::max(best, comp.neg_log(block_edge(b + 1)));
            }
            return best;
          },
      },
      family_);
}

double Psi::eval(double x) const { return std::exp(-neg_log(x)); }

ExponentLimit Psi::exponent_limit(ExponentMode mode) const {
  const bool logn = mode == ExponentMode::kLogN;
  return std::visit(
      Overloaded{
          [&](const PowerLaw& p) -> ExponentLimit {
            return {{ExtReal::Finite(logn ? p.tau : 0.0)}, false};
          },
          [&](const PowerLog& p) -> ExponentLimit {
            return {{ExtReal::Finite(logn ? p.tau : 0.0)}, false};
          },
          [&](const StretchedExp& p) -> ExponentLimit {
            if (logn || p.k > 1) return {{ExtReal::Infinity()}, false};
            if (p.k == 1) return {{ExtReal::Finite(p.c)}, false};
            return {{ExtReal::Finite(0.0)}, false};
          },
          [&](const GeometricExp& p) -> ExponentLimit {
            if (logn) {
              throw std::invalid_argument(
                  "geom is only defined for the linear exponent mode");
            }
            ExponentLimit r = p.rate->exponent_limit(mode);
            for (auto& t : r.points) t = t.plus(std::log(std::abs(p.beta)));
            return r;
          },
          [&](const BlockAlternate& p) -> ExponentLimit {
            ExponentLimit a = p.f->exponent_limit(mode);
            ExponentLimit b = p.g->exponent_limit(mode);
            std::vector<ExtReal> all = a.points;
            all.insert(all.end(), b.points.begin(), b.points.end());
            auto [lo, hi] = std::minmax_element(all.begin(), all.end());
            if (*lo == *hi) return {{*lo}, a.is_hull || b.is_hull};
            return {{*lo, *hi}, true};
          },
      },
      family_);
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string Psi::str() const {
  return std::visit(
      Overloaded{
          [](const PowerLaw& p) { return "pow:tau=" + num(p.tau); },
          [](const PowerLog& p) {
            return "powlog:tau=" + num(p.tau) + ",sigma=" + num(p.sigma);
          },
          [](const StretchedExp& p) {
            return "sexp:c=" + num(p.c) + ",k=" + num(p.k);
          },
          [](const GeometricExp& p) {
            return "geom:beta=" + num(p.beta) + ",rate=" + p.rate->str();
          },
          [](const BlockAlternate& p) {
            return "alt:[" + p.f->str() + "|" + p.g->str() + "]";
          },
      },
      family_);
}

namespace {

class PsiParser {
 public:
  explicit PsiParser(std::string_view s) : s_(s) {}

  PsiPtr parse_all() {
    PsiPtr p = family();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("psi spec: " + what + " at column " +
                                std::to_string(pos_ + 1) + " in '" +
                                std::string(s_) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool at(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '|' &&
           s_[pos_] != ']' && !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    std::string_view tok = s_.substr(start, pos_ - start);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double x = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      pos_ = start;
      fail("expected a number");
    }
    return x;
  }

  PsiPtr make(Psi::Family f, size_t where) {
    try {
      return Psi::Make(std::move(f));
    } catch (const std::invalid_argument& e) {
      pos_ = where;
      fail(e.what());
    }
  }

  PsiPtr family() {
    skip_ws();
    const size_t start = pos_;
    const std::string name = ident();
    expect(':');
    if (name == "alt") {
      expect('[');
      PsiPtr f = family();
      expect('|');
      PsiPtr g = family();
      expect(']');
      return make(BlockAlternate{f, g}, start);
    }
    double tau = NAN, sigma = NAN, c = NAN, k = NAN, beta = NAN;
    PsiPtr rate;
    while (true) {
      const size_t key_pos = pos_;
      const std::string key = ident();
      expect('=');
      double* slot = nullptr;
      if (key == "rate" && name == "geom") {
        if (rate) fail("duplicate key 'rate'");
        rate = family();
        // rate swallows the rest of this family
        break;
      }
      if (key == "tau" && (name == "pow" || name == "powlog")) slot = &tau;
      if (key == "sigma" && name == "powlog") slot = &sigma;
      if (key == "c" && name == "sexp") slot = &c;
      if (key == "k" && name == "sexp") slot = &k;
      if (key == "beta" && name == "geom") slot = &beta;
      if (slot == nullptr) {
        pos_ = key_pos;
        fail("unknown key '" + key + "' for family '" + name + "'");
      }
      if (!std::isnan(*slot)) {
        pos_ = key_pos;
        fail("duplicate key '" + key + "'");
      }
      *slot = number();
      if (!at(',')) break;
      ++pos_;
    }
    auto need = [&](double v, const char* key) {
      if (std::isnan(v)) {
        pos_ = start;
        fail(std::string("missing key '") + key + "' for family '" + name +
             "'");
      }
    };
    if (name == "pow") {
      need(tau, "tau");
      return make(PowerLaw{tau}, start);
    }
    if (name == "powlog") {
      need(tau, "tau");
      need(sigma, "sigma");
      return make(PowerLog{tau, sigma}, start);
    }
    if (name == "sexp") {
      need(c, "c");
      need(k, "k");
      return make(StretchedExp{c, k}, start);
    }
    if (name == "geom") {
      need(beta, "beta");
      if (!rate) {
        pos_ = start;
        fail("missing key 'rate' for family 'geom'");
      }
      return make(GeometricExp{beta, rate}, start);
    }
    pos_ = start;
    fail("unknown family '" + name + "'");
  }

  std::string_view s_;
  size_t pos_ = 0;
};

}  // namespace

PsiPtr parse_psi(std::string_view text) { return PsiParser(text).parse_all(); }

std::vector<ExponentSample> sample_exponents(const std::vector<PsiPtr>& fs,
                                             ExponentMode mode, double N,
                                             int points, double cap) {
  if (!(N >= 10)) throw std::invalid_argument("sample_exponents: N must be >= 10");
  if (points < 2) throw std::invalid_argument("sample_exponents: points < 2");
  if (fs.empty()) throw std::invalid_argument("sample_exponents: no functions");
  std::vector<ExponentSample> out;
  double last = 0;
  for (int j = 0; j < points; ++j) {
    double n = std::round(2.0 * std::pow(N / 2.0, double(j) / (points - 1)));
    n = std::min(n, std::floor(N));
    if (n <= last) continue;
    last = n;
    ExponentSample s;
    s.n = n;
    const double denom = mode == ExponentMode::kLogN ? std::log(n) : n;
    for (const auto& f : fs) {
      double v = f->neg_log(n) / denom;
      bool sat = !(v <= cap);
      s.values.push_back(sat ? cap : v);
      s.saturated.push_back(sat);
    }
    out.push_back(std::move(s));
  }
  return out;
}

ExponentVector::ExponentVector(std::vector<ExtReal> tt)
    : t(std::move(tt)), split(index_split(t)) {}

std::string ExponentVector::str() const {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i].str();
  }
  return s + ")";
}

ExponentVector parse_exponent_vector(std::string_view s) {
  return ExponentVector(parse_ext_list(s));
}

}  // namespace mtp
