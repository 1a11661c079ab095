#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairrank {

// Element of the ring Z_{2^64}. Addition and negation wrap around; the
// unsigned overflow is the intended semantics, never saturation.
struct RingElement {
  std::uint64_t v = 0;

  friend constexpr RingElement operator+(RingElement a, RingElement b) {
    return RingElement{a.v + b.v};
  }
  friend constexpr RingElement operator-(RingElement a, RingElement b) {
    return RingElement{a.v - b.v};
  }
  constexpr RingElement operator-() const { return RingElement{} - *this; }

  RingElement& operator+=(RingElement o) {
    v += o.v;
    return *this;
  }
  RingElement& operator-=(RingElement o) {
    v -= o.v;
    return *this;
  }

  friend constexpr bool operator==(RingElement, RingElement) = default;
};

// Maps reals onto ring elements with `fractional_bits` bits after the binary
// point. The upper half of the ring holds negative values (centered lift), so
// reconstructed differences decode with their sign intact. Rounding is
// half-away-from-zero, which keeps encode(-x) == -encode(x).
class FixedPointCodec {
 public:
  explicit FixedPointCodec(int fractional_bits = 20) : frac_(fractional_bits) {
    if (fractional_bits < 1 || fractional_bits > 62)
      throw std::invalid_argument("fixed-point: fractional_bits must be in [1, 62]");
  }

  int fractional_bits() const { return frac_; }
  double resolution() const { return std::ldexp(1.0, -frac_); }
  // Representable reals lie in [-range_limit, range_limit).
  double range_limit() const { return std::ldexp(1.0, 63 - frac_); }

  RingElement encode(double x) const {
    const double limit = range_limit();
    if (!std::isfinite(x) || x < -limit || x >= limit)
      throw std::out_of_range("fixed-point encode: " + std::to_string(x) +
                              " outside [-2^" + std::to_string(63 - frac_) +
                              ", 2^" + std::to_string(63 - frac_) + ")");
    const double scaled = std::round(std::ldexp(x, frac_));
    // Rounding may push a value just below the limit onto 2^63 itself.
    if (scaled >= 9223372036854775808.0)
      throw std::out_of_range("fixed-point encode: rounded value overflows the ring");
    return RingElement{static_cast<std::uint64_t>(static_cast<std::int64_t>(scaled))};
  }

  double decode(RingElement e) const {
    return std::ldexp(static_cast<double>(static_cast<std::int64_t>(e.v)), -frac_);
  }

 private:
  int frac_;
};

inline std::vector<RingElement> encode_vector(std::span<const double> xs,
                                              const FixedPointCodec& codec) {
  std::vector<RingElement> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(codec.encode(x));
  return out;
}

inline std::vector<double> decode_vector(std::span<const RingElement> es,
                                         const FixedPointCodec& codec) {
  std::vector<double> out;
  out.reserve(es.size());
  for (RingElement e : es) out.push_back(codec.decode(e));
  return out;
}

}  // namespace fairrank
