#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace eqc {

// A real number or one of the two infinities, with the infinities carried as
// explicit markers rather than IEEE sentinels.
class ExtendedReal {
 public:
  enum class Kind { finite, pos_inf, neg_inf };

  constexpr ExtendedReal() = default;
  // Non-finite doubles are rejected; use the named constructors.
  static ExtendedReal finite(double v);
  static constexpr ExtendedReal pos_inf() { return ExtendedReal(Kind::pos_inf, 0.0); }
  static constexpr ExtendedReal neg_inf() { return ExtendedReal(Kind::neg_inf, 0.0); }
  // Maps +-inf doubles onto the markers.
  static ExtendedReal from_double(double v);

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::finite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

  // Throws std::logic_error when not finite.
  double value() const;
  double to_double() const;

  // "-inf", "inf" or the shortest round-tripping decimal.
  std::string to_string() const;
  static ExtendedReal parse(const std::string& s);

  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b);
  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) = default;

 private:
  constexpr ExtendedReal(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_ = Kind::finite;
  double value_ = 0.0;
};

bool operator<(const ExtendedReal& a, const ExtendedReal& b);
inline bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
inline bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return !(b < a); }
inline bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return !(a < b); }

// Formats a double so that it parses back to the same value.
std::string format_double(double v);

}  // namespace eqc
