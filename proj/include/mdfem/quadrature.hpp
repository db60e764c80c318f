#pragma once
/// Fixed quadrature rules: a degree-5 rule on the reference triangle
/// (vertices (0,0),(1,0),(0,1), weights summing to 1/2) and 3-point
/// Gauss-Legendre on [0,1] (weights summing to 1).

#include <array>
#include <cmath>

namespace mdfem {

struct TriQuadPoint {
  double x, y, w;
};

inline const std::array<TriQuadPoint, 7>& triangle_rule() {
  static const std::array<TriQuadPoint, 7> rule = [] {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
    const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
    std::array<TriQuadPoint, 7> r{};
    r[0] = {1.0 / 3.0, 1.0 / 3.0, 0.5 * 9.0 / 40.0};
    r[1] = {a1, a1, 0.5 * w1};
    r[2] = {1.0 - 2.0 * a1, a1, 0.5 * w1};
    r[3] = {a1, 1.0 - 2.0 * a1, 0.5 * w1};
    r[4] = {a2, a2, 0.5 * w2};
    r[5] = {1.0 - 2.0 * a2, a2, 0.5 * w2};
    r[6] = {a2, 1.0 - 2.0 * a2, 0.5 * w2};
    return r;
  }();
  return rule;
}

struct SegQuadPoint {
  double x, w;
};

inline const std::array<SegQuadPoint, 3>& segment_rule() {
  static const std::array<SegQuadPoint, 3> rule = [] {
    const double d = 0.5 * std::sqrt(3.0 / 5.0);
    std::array<SegQuadPoint, 3> r{};
    r[0] = {0.5 - d, 5.0 / 18.0};
    r[1] = {0.5, 8.0 / 18.0};
    r[2] = {0.5 + d, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

}  // namespace mdfem
