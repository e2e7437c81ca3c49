// The 21-class partition of V_k used by the router and by the construction table.

#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "gaussist/gauss_int.hpp"

namespace gaussist {

enum class RegionClass : std::uint8_t { kB, kR, kQ, kP, kS, kOrigin };

struct Region {
  RegionClass cls = RegionClass::kOrigin;
  int quadrant = 0;  // 1..4, 0 for the origin

  friend constexpr bool operator==(const Region&, const Region&) = default;
};

/// Quadrant j regions are rho^(kRegionRotationSense * (j-1)) of the quadrant-1 regions.
/// Fixed by the router/tree-path oracle; a regression test pins it.
inline constexpr int kRegionRotationSense = +1;

/// Row order of the construction table: B1 R1 Q1 P1 S1 B2 ... S4.
inline constexpr std::array<RegionClass, 5> kRegionRowOrder = {RegionClass::kB, RegionClass::kR, RegionClass::kQ,
                                                               RegionClass::kP, RegionClass::kS};

constexpr int region_row(Region r) {
  for (int i = 0; i < 5; ++i)
    if (kRegionRowOrder[i] == r.cls) return (r.quadrant - 1) * 5 + i;
  return -1;
}

constexpr Region region_from_row(int row) {
  row = ((row % 20) + 20) % 20;
  return {kRegionRowOrder[row % 5], row / 5 + 1};
}

inline std::string to_string(Region r) {
  static constexpr std::array<const char*, 6> names = {"B", "R", "Q", "P", "S", "Origin"};
  if (r.cls == RegionClass::kOrigin) return "Origin";
  return std::string(names[static_cast<int>(r.cls)]) + std::to_string(r.quadrant);
}

inline std::ostream& operator<<(std::ostream& os, Region r) { return os << to_string(r); }

namespace detail {

// Quadrant-1 membership, or kOrigin when v is outside quadrant 1.
constexpr RegionClass quadrant_one_class(GaussInt v, std::int64_t k) {
  if (v.y == 0) {
    if (v.x == 1) return RegionClass::kS;
    if (v.x > 1 && v.x < k) return RegionClass::kB;
    if (v.x == k) return RegionClass::kP;
  }
  if (v.y == 1 && v.x > 0 && v.x < k) return RegionClass::kR;
  if (v.x > 0 && v.y > 1 && v.x + v.y <= k) return RegionClass::kQ;
  return RegionClass::kOrigin;
}

}  // namespace detail

/// Region of a canonical node. Requires k >= 2 (for k = 1 the S and P classes coincide).
inline Region classify(GaussInt v, std::int64_t k) {
  if (k < 2) throw std::invalid_argument("region partition requires k >= 2");
  if (l1(v) > k) throw std::invalid_argument("classify: node " + to_string(v) + " is not canonical");
  if (v == GaussInt{}) return {RegionClass::kOrigin, 0};
  for (int j = 1; j <= 4; ++j) {
    const RegionClass c = detail::quadrant_one_class(rho(v, -kRegionRotationSense * (j - 1)), k);
    if (c != RegionClass::kOrigin) return {c, j};
  }
  throw std::logic_error("classify: node " + to_string(v) + " fell outside every region");
}

/// True when every non-origin node of V_k lies in exactly one of the 20 quadrant regions.
inline bool partition_is_exact(std::int64_t k) {
  if (k < 2) throw std::invalid_argument("region partition requires k >= 2");
  for (std::int64_t x = -k; x <= k; ++x) {
    for (std::int64_t y = -k; y <= k; ++y) {
      const GaussInt v{x, y};
      if (l1(v) > k || v == GaussInt{}) continue;
      int hits = 0;
      for (int j = 1; j <= 4; ++j)
        if (detail::quadrant_one_class(rho(v, -kRegionRotationSense * (j - 1)), k) != RegionClass::kOrigin) ++hits;
      if (hits != 1) return false;
    }
  }
  return true;
}

}  // namespace gaussist
