// Gaussian integers and the four unit directions.

#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gaussist {

/// Exact Gaussian integer x + yi. Ordering is lexicographic on (x, y).
struct GaussInt {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend constexpr bool operator==(const GaussInt&, const GaussInt&) = default;
  friend constexpr auto operator<=>(const GaussInt&, const GaussInt&) = default;
};

constexpr GaussInt operator+(GaussInt a, GaussInt b) { return {a.x + b.x, a.y + b.y}; }
constexpr GaussInt operator-(GaussInt a, GaussInt b) { return {a.x - b.x, a.y - b.y}; }
constexpr GaussInt operator-(GaussInt a) { return {-a.x, -a.y}; }
constexpr GaussInt operator*(GaussInt a, GaussInt b) {
  return {a.x * b.x - a.y * b.y, a.x * b.y + a.y * b.x};
}

constexpr GaussInt conj(GaussInt a) { return {a.x, -a.y}; }

/// x^2 + y^2.
constexpr std::int64_t norm(GaussInt a) { return a.x * a.x + a.y * a.y; }

/// L1 length |x| + |y|; the hop distance in the infinite grid.
constexpr std::int64_t l1(GaussInt a) {
  return (a.x < 0 ? -a.x : a.x) + (a.y < 0 ? -a.y : a.y);
}

/// Counter-clockwise quarter turn applied t times (t taken mod 4, negative allowed).
constexpr GaussInt rho(GaussInt z, int t = 1) {
  t = ((t % 4) + 4) % 4;
  for (int n = 0; n < t; ++n) z = {-z.y, z.x};
  return z;
}

/// True when `divisor` divides `value` in Z[i].
constexpr bool divides(GaussInt divisor, GaussInt value) {
  const std::int64_t n = norm(divisor);
  if (n == 0) return value == GaussInt{};
  const GaussInt p = value * conj(divisor);
  return p.x % n == 0 && p.y % n == 0;
}

/// The generator alpha_k = k + (k+1)i of the dense network of diameter k.
constexpr GaussInt generator(std::int64_t k) { return {k, k + 1}; }

/// Renders "x+yi" in the compact form used for node names: 0, 3, -i, 2i, 3-i, -2+2i.
inline std::string to_string(GaussInt z) {
  auto imag = [](std::int64_t y, bool leading) {
    std::string s;
    if (y < 0) s += '-';
    else if (!leading) s += '+';
    const std::int64_t a = y < 0 ? -y : y;
    if (a != 1) s += std::to_string(a);
    s += 'i';
    return s;
  };
  if (z.y == 0) return std::to_string(z.x);
  if (z.x == 0) return imag(z.y, true);
  return std::to_string(z.x) + imag(z.y, false);
}

inline std::ostream& operator<<(std::ostream& os, GaussInt z) { return os << to_string(z); }

/// Parses the literal grammar [sign] int [(+|-) [int] i], plus the pure
/// imaginary forms "[sign][int]i". Throws std::invalid_argument.
inline GaussInt parse_gauss(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> GaussInt {
    throw std::invalid_argument("malformed Gaussian integer literal: '" + original + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return fail();

  // Reads one signed term; sets `imaginary` when it ends with 'i'.
  auto term = [&](std::string_view& s, bool require_sign, std::int64_t& value, bool& imaginary) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
      negative = s.front() == '-';
      s.remove_prefix(1);
    } else if (require_sign) {
      return false;
    }
    std::size_t digits = 0;
    while (digits < s.size() && std::isdigit(static_cast<unsigned char>(s[digits]))) ++digits;
    std::int64_t magnitude = 1;
    if (digits > 0) {
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + digits, magnitude);
      if (ec != std::errc{} || ptr != s.data() + digits) return false;
    }
    s.remove_prefix(digits);
    imaginary = !s.empty() && s.front() == 'i';
    if (imaginary) s.remove_prefix(1);
    else if (digits == 0) return false;
    value = negative ? -magnitude : magnitude;
    return true;
  };

  std::int64_t first = 0;
  bool first_imaginary = false;
  if (!term(text, false, first, first_imaginary)) return fail();
  if (text.empty()) return first_imaginary ? GaussInt{0, first} : GaussInt{first, 0};
  if (first_imaginary) return fail();
  std::int64_t second = 0;
  bool second_imaginary = false;
  if (!term(text, true, second, second_imaginary) || !second_imaginary || !text.empty()) return fail();
  return {first, second};
}

struct GaussIntHash {
  std::size_t operator()(GaussInt z) const noexcept {
    return std::hash<std::int64_t>{}(z.x * 1000003 + z.y);
  }
};

/// One of the four unit steps. The underlying value is the power of i.
enum class Direction : std::uint8_t { kPlusOne = 0, kPlusI = 1, kMinusOne = 2, kMinusI = 3 };

inline constexpr std::array<Direction, 4> kAllDirections = {
    Direction::kPlusOne, Direction::kPlusI, Direction::kMinusOne, Direction::kMinusI};

constexpr GaussInt unit(Direction d) {
  switch (d) {
    case Direction::kPlusOne: return {1, 0};
    case Direction::kPlusI: return {0, 1};
    case Direction::kMinusOne: return {-1, 0};
    case Direction::kMinusI: return {0, -1};
  }
  return {};
}

/// rho applied to a direction t times.
constexpr Direction rotate(Direction d, int t) {
  const int v = (static_cast<int>(d) + (t % 4) + 4) % 4;
  return static_cast<Direction>(v);
}

constexpr Direction opposite(Direction d) { return rotate(d, 2); }

constexpr std::optional<Direction> direction_of(GaussInt u) {
  for (Direction d : kAllDirections)
    if (unit(d) == u) return d;
  return std::nullopt;
}

constexpr std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kPlusOne: return "+1";
    case Direction::kPlusI: return "+i";
    case Direction::kMinusOne: return "-1";
    case Direction::kMinusI: return "-i";
  }
  return "?";
}

inline std::ostream& operator<<(std::ostream& os, Direction d) { return os << to_string(d); }

inline Direction parse_direction(std::string_view s) {
  for (Direction d : kAllDirections)
    if (to_string(d) == s) return d;
  if (s == "1") return Direction::kPlusOne;
  if (s == "i") return Direction::kPlusI;
  throw std::invalid_argument("malformed direction: '" + std::string(s) + "'");
}

}  // namespace gaussist
