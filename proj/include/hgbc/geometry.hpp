#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>

namespace hgbc {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline Point midpoint(Point a, Point b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

// Twice the signed area of (a, b, c); positive for counter-clockwise order.
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

using Bary = std::array<double, 3>;

// Barycentric coordinates of p with respect to triangle (a, b, c).
inline Bary barycentric(Point p, Point a, Point b, Point c) {
  const double det = orient(a, b, c);
  const double b0 = orient(p, b, c) / det;
  const double b1 = orient(a, p, c) / det;
  return {b0, b1, 1.0 - b0 - b1};
}

inline double signed_area(std::span<const Point> loop) {
  double twice = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    twice += cross(loop[i], loop[(i + 1) % loop.size()]);
  }
  return 0.5 * twice;
}

// Closed-segment intersection test, including collinear overlap.
bool segments_intersect(Point p1, Point p2, Point q1, Point q2);

}  // namespace hgbc
