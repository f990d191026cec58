#include "eqc/extended_real.hpp"

#include <charconv>
#include <stdexcept>

namespace eqc {

ExtendedReal ExtendedReal::finite(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("ExtendedReal::finite: value is not finite");
  return ExtendedReal(Kind::finite, v);
}

ExtendedReal ExtendedReal::from_double(double v) {
  if (std::isnan(v)) throw std::invalid_argument("ExtendedReal::from_double: NaN");
  if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
  return finite(v);
}

double ExtendedReal::value() const {
  if (kind_ != Kind::finite) throw std::logic_error("ExtendedReal::value: not finite");
  return value_;
}

double ExtendedReal::to_double() const {
  switch (kind_) {
    case Kind::pos_inf:
      return std::numeric_limits<double>::infinity();
    case Kind::neg_inf:
      return -std::numeric_limits<double>::infinity();
    default:
      return value_;
  }
}

std::string ExtendedReal::to_string() const {
  switch (kind_) {
    case Kind::pos_inf:
      return "inf";
    case Kind::neg_inf:
      return "-inf";
    default:
      return format_double(value_);
  }
}

ExtendedReal ExtendedReal::parse(const std::string& s) {
  if (s == "inf" || s == "+inf") return pos_inf();
  if (s == "-inf") return neg_inf();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: " + s);
  return from_double(v);
}

bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.kind_ == b.kind_) return a.kind_ == ExtendedReal::Kind::finite && a.value_ < b.value_;
  if (a.is_neg_inf() || b.is_pos_inf()) return true;
  return false;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

}  // namespace eqc
