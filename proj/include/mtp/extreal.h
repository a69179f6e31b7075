// Nonnegative reals extended by +infinity, with exact comparisons.

#ifndef MTP_EXTREAL_H_
#define MTP_EXTREAL_H_

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mtp {

// Two-state value: Finite(x) with x >= 0, or Infinity. Kept apart from IEEE
// infinity so that sums like u/A with A = inf follow the usual conventions and
// never produce NaN.
class ExtReal {
 public:
  constexpr ExtReal() = default;

  static ExtReal Finite(double x);
  static constexpr ExtReal Infinity() { return ExtReal(0.0, true); }

  // Accepts +inf as Infinity; anything negative or NaN throws.
  static ExtReal FromDouble(double x);
  // "inf", "+inf", "infinity", "∞" or a decimal number.
  static ExtReal Parse(std::string_view s);

  constexpr bool is_inf() const { return inf_; }
  constexpr bool is_finite() const { return !inf_; }
  // Throws std::domain_error on Infinity.
  double value() const;
  // IEEE view, +inf for Infinity. Handy for printing and plotting only.
  constexpr double to_double() const {
    return inf_ ? __builtin_inf() : x_;
  }

  friend constexpr bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
    return a.x_ == b.x_;
  }
  friend constexpr std::strong_ordering operator<=>(const ExtReal& a,
                                                    const ExtReal& b) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    if (b.inf_) return std::strong_ordering::less;
    if (a.x_ < b.x_) return std::strong_ordering::less;
    if (a.x_ > b.x_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // c * inf = inf for c > 0; c must be positive.
  ExtReal scaled(double c) const;
  // a + b with inf absorbing.
  ExtReal plus(double b) const;

  std::string str() const;

 private:
  constexpr ExtReal(double x, bool inf) : x_(x), inf_(inf) {}
  double x_ = 0.0;
  bool inf_ = false;
};

// Finite(a) / b, where b > 0 may be Infinity (giving 0).
double divide(double a, const ExtReal& b);

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

// Comma separated list, e.g. "2,inf,1.5". Surrounding parentheses allowed.
std::vector<ExtReal> parse_ext_list(std::string_view s);
std::vector<double> parse_real_list(std::string_view s);

}  // namespace mtp

#endif  // MTP_EXTREAL_H_
