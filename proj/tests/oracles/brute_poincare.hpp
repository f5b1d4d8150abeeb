#pragma once

// Poincare descriptors recomputed by a different route: two-pass moments,
// Jacobi rotation for the 2x2 eigenproblem, projection onto the identity
// direction for the perpendicular distance, squared-radius comparison for CTM.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

inline std::array<double, 13> poincare(const std::vector<std::pair<double, double>>& pts, double factor = 0.2) {
  const double n = static_cast<double>(pts.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += p.first;
    my += p.second;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    sxx += (p.first - mx) * (p.first - mx);
    syy += (p.second - my) * (p.second - my);
    sxy += (p.first - mx) * (p.second - my);
  }
  sxx /= n;
  syy /= n;
  sxy /= n;

  // Jacobi rotation diagonalising [[sxx, sxy], [sxy, syy]].
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  const double c = std::cos(theta), s = std::sin(theta);
  double l1 = c * c * sxx + 2.0 * s * c * sxy + s * s * syy;
  double l2 = s * s * sxx - 2.0 * s * c * sxy + c * c * syy;
  if (l2 > l1) std::swap(l1, l2);
  l2 = std::max(0.0, l2);

  const double ux = 1.0 / std::numbers::sqrt2, uy = 1.0 / std::numbers::sqrt2;
  double dev = 0.0, dist = 0.0;
  std::vector<double> radii;
  for (const auto& p : pts) {
    const double along = p.first * ux + p.second * uy;
    const double px = p.first - along * ux, py = p.second - along * uy;
    dev += std::sqrt(px * px + py * py);
    radii.push_back(std::sqrt(p.first * p.first + p.second * p.second));
    dist += radii.back();
  }
  const double mean_r = dist / n;
  double vr = 0.0;
  for (double r : radii) vr += (r - mean_r) * (r - mean_r);
  const double radius = factor * std::sqrt(l1 + l2);
  double inside = 0.0;
  for (const auto& p : pts) {
    const double dx = p.first - mx, dy = p.second - my;
    if (dx * dx + dy * dy < radius * radius) inside += 1.0;
  }
  const double ecc = l1 > 0.0 ? std::sqrt(std::max(0.0, 1.0 - l2 / l1)) : 0.0;
  return {std::numbers::pi * std::sqrt(l1 * l2),
          ecc,
          l1,
          l2,
          dev / n,
          mean_r,
          std::sqrt(vr / n),
          sxy,
          mx,
          my,
          std::sqrt(sxx),
          std::sqrt(syy),
          inside / n};
}

}  // namespace oracle
