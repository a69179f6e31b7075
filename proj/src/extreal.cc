#include "mtp/extreal.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mtp {

ExtReal ExtReal::Finite(double x) {
  if (!std::isfinite(x) || x < 0) {
    throw std::domain_error("ExtReal::Finite needs a finite value >= 0");
  }
  // -0.0 and 0.0 are the same point
  return ExtReal(x == 0 ? 0.0 : x, false);
}

ExtReal ExtReal::FromDouble(double x) {
  if (std::isinf(x) && x > 0) return Infinity();
  return Finite(x);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return x;
}

std::string_view strip_parens(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    s = trim(s.substr(1, s.size() - 2));
  }
  return s;
}

template <typename F>
void for_each_item(std::string_view s, F f) {
  s = strip_parens(s);
  if (s.empty()) throw std::invalid_argument("empty list");
  size_t start = 0;
  while (true) {
    size_t comma = s.find(',', start);
    f(trim(s.substr(start, comma == std::string_view::npos
                               ? std::string_view::npos
                               : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
}

}  // namespace

ExtReal ExtReal::Parse(std::string_view s) {
  s = trim(s);
  std::string low;
  for (char c : s) low += static_cast<char>(std::tolower(c));
  if (low == "inf" || low == "+inf" || low == "infinity" || low == "∞") {
    return Infinity();
  }
  double x = parse_double(s);
  if (x < 0 || !std::isfinite(x)) {
    throw std::invalid_argument("expected a value >= 0: '" + std::string(s) +
                                "'");
  }
  return Finite(x);
}

double ExtReal::value() const {
  if (inf_) throw std::domain_error("value() on Infinity");
  return x_;
}

ExtReal ExtReal::scaled(double c) const {
  if (!(c > 0) || !std::isfinite(c)) {
    throw std::domain_error("scale factor must be positive");
  }
  if (inf_) return Infinity();
  return Finite(c * x_);
}

ExtReal ExtReal::plus(double b) const {
  if (inf_) return Infinity();
  return Finite(x_ + b);
}

std::string ExtReal::str() const {
  if (inf_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << x_;
  return os.str();
}

double divide(double a, const ExtReal& b) {
  if (b.is_inf()) return 0.0;
  if (!(b.value() > 0)) throw std::domain_error("division by zero level");
  return a / b.value();
}

std::ostream& operator<<(std::ostream& os, const ExtReal& x) {
  if (x.is_inf()) return os << "inf";
  return os << x.value();
}

std::vector<ExtReal> parse_ext_list(std::string_view s) {
  std::vector<ExtReal> out;
  for_each_item(s, [&](std::string_view item) {
    out.push_back(ExtReal::Parse(item));
  });
  return out;
}

std::vector<double> parse_real_list(std::string_view s) {
  std::vector<double> out;
  for_each_item(s, [&](std::string_view item) {
    out.push_back(parse_double(item));
  });
  return out;
}

}  // namespace mtp
