#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "gwlab/analysis/clusters.hpp"
#include "gwlab/geometry.hpp"
#include "gwlab/processes.hpp"

namespace gwlab {

/// Tail bound on P(B_n) for intersecting lines at angle alpha.
inline double intersect_B_bound(double alpha, int n) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi)) throw ValidationError("alpha must lie in (0, pi)");
  if (n < 1) throw ValidationError("index n must be >= 1");
  const double sa = std::sin(alpha);
  return 4.0 * std::exp(-n * sa + 1.0) / (1.0 - std::exp(-sa));
}

/// First term of the A_m bound for duplicated lines at separation r.
inline double parallel_Am_first_term(double r, int m) {
  if (!(r > 0.0)) throw ValidationError("r must be > 0");
  if (m < 1) throw ValidationError("index m must be >= 1");
  return 0.5 * std::exp(-2.0 * r * m) * (1.0 - std::exp(-2.0 * r));
}

/// Fraction of `gaps` strictly greater than t.
inline double empirical_survival(std::span<const double> gaps, double t) {
  if (gaps.empty()) return 0.0;
  const auto above = std::count_if(gaps.begin(), gaps.end(), [t](double g) { return g > t; });
  return static_cast<double>(above) / static_cast<double>(gaps.size());
}

/// Gaps X_{tau_{i+1}} - X_{tau_i} between consecutive positive-side cluster
/// leads, excluding the origin cluster.
inline std::vector<double> positive_lead_gaps(const Realization& real) {
  std::vector<double> out;
  if (real.base_points.empty()) return out;
  const ClusterDecomposition dec = decompose_clusters(real.base_points, real.space().r());
  const std::size_t origin = *dec.origin_cluster;
  for (std::size_t c = origin + 1; c + 1 < dec.size(); ++c) out.push_back(dec.lead(c + 1) - dec.lead(c));
  return out;
}

struct AmBound {
  double first_term = 0.0;
  double second_term = 0.0;
  [[nodiscard]] double total() const { return first_term + second_term; }
};

/// A_m bound with the survival term estimated from pooled lead gaps.
inline AmBound parallel_Am_bound(double r, int m, std::span<const double> pooled_gaps) {
  return {parallel_Am_first_term(r, m), empirical_survival(pooled_gaps, r * m)};
}

}  // namespace gwlab
