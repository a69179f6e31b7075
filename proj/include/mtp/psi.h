// Approximation functions psi and their exponent sequences.

#ifndef MTP_PSI_H_
#define MTP_PSI_H_

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtp/dimnum.h"
#include "mtp/extreal.h"

namespace mtp {

class Psi;
using PsiPtr = std::shared_ptr<const Psi>;

struct PowerLaw {
  double tau;
};
// x^-tau (log x)^-sigma. Monotone on [2, inf) needs sigma >= -tau log 2.
struct PowerLog {
  double tau, sigma;
};
struct StretchedExp {
  double c, k;
};
// |beta|^-n * rate(n).
struct GeometricExp {
  double beta;
  PsiPtr rate;
};
// f on the blocks [2^(2^j), 2^(2^(j+1))) with j even, g with j odd, then a
// running minimum so the result stays non-increasing.
struct BlockAlternate {
  PsiPtr f, g;
};

enum class ExponentMode { kLogN, kLinear };

// Accumulation points of -log psi(n)/log n (LogN) or -log psi(n)/n (Linear).
// When is_hull is set the true set is only known to sit inside
// [points.front(), points.back()].
struct ExponentLimit {
  std::vector<ExtReal> points;
  bool is_hull = false;
};

class Psi {
 public:
  using Family =
      std::variant<PowerLaw, PowerLog, StretchedExp, GeometricExp,
                   BlockAlternate>;

  // Checks parameters; throws std::invalid_argument.
  explicit Psi(Family f);

  static PsiPtr Make(Family f) { return std::make_shared<const Psi>(f); }

  const Family& family() const { return family_; }

  // -log psi(x) for x >= 2. Finite for every x the double range can hold.
  double neg_log(double x) const;
  double eval(double x) const;

  ExponentLimit exponent_limit(ExponentMode mode) const;

  std::string str() const;

 private:
  Family family_;
};

// Text form, e.g. "pow:tau=2", "powlog:tau=1,sigma=2", "sexp:c=1,k=2",
// "geom:beta=2,rate=sexp:c=0.5,k=1", "alt:[pow:tau=1|pow:tau=3]".
// Errors are std::invalid_argument carrying the column of the fault.
PsiPtr parse_psi(std::string_view text);

struct ExponentSample {
  double n;
  std::vector<double> values;
  std::vector<bool> saturated;
};

// Geometrically spaced n in [2, N]; values above cap are clamped and flagged.
std::vector<ExponentSample> sample_exponents(const std::vector<PsiPtr>& fs,
                                             ExponentMode mode, double N,
                                             int points = 32,
                                             double cap = 1e3);

// Exponent vector t with its cached finite-index split.
struct ExponentVector {
  std::vector<ExtReal> t;
  IndexSplit split;

  ExponentVector() = default;
  explicit ExponentVector(std::vector<ExtReal> t);
  size_t d() const { return t.size(); }
  std::string str() const;
};

ExponentVector parse_exponent_vector(std::string_view s);

}  // namespace mtp

#endif  // MTP_PSI_H_
