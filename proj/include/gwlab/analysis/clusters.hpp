#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gwlab/geometry.hpp"
#include "gwlab/processes.hpp"

namespace gwlab {

/// Half-open index range [begin, end) into a sorted point array.
struct ClusterRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  [[nodiscard]] std::size_t size() const { return end - begin; }
  friend bool operator==(const ClusterRange&, const ClusterRange&) = default;
};

/// Maximal runs of consecutive points whose successive gaps are below
/// `threshold`.
///
/// `tau[c]` indexes the point of cluster c closest to 0 and `origin_cluster`
/// is the cluster holding the point closest to 0 overall, so the signed
/// cluster label is `c - origin_cluster`. The leading/indented fields are only
/// filled by mark_leading_and_indented.
struct ClusterDecomposition {
  double threshold = 0.0;
  std::vector<double> points;
  std::vector<ClusterRange> clusters;
  std::vector<std::size_t> tau;
  std::optional<std::size_t> origin_cluster;

  std::optional<double> shift;
  /// Per cluster, the leading site on line 0 and on line 1.
  std::vector<std::array<Site, 2>> leading_sites;
  std::vector<std::array<bool, 2>> indented_flags;
  /// Cluster has points (on either line) on both sides of the origin.
  std::vector<bool> straddles_origin;

  [[nodiscard]] std::size_t size() const { return clusters.size(); }

  [[nodiscard]] std::size_t cluster_of(std::size_t point_index) const {
    auto it = std::upper_bound(clusters.begin(), clusters.end(), point_index,
                               [](std::size_t i, const ClusterRange& c) { return i < c.begin; });
    return static_cast<std::size_t>(it - clusters.begin()) - 1;
  }

  [[nodiscard]] std::ptrdiff_t label(std::size_t c) const {
    return static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(origin_cluster.value_or(0));
  }

  [[nodiscard]] double lead(std::size_t c) const { return points[tau[c]]; }
};

inline ClusterDecomposition decompose_clusters(std::span<const double> points, double threshold) {
  if (!(threshold > 0.0)) throw ValidationError("cluster threshold must be > 0");
  ClusterDecomposition dec;
  dec.threshold = threshold;
  dec.points.assign(points.begin(), points.end());
  if (points.empty()) return dec;

  std::size_t begin = 0;
  for (std::size_t i = 1; i <= points.size(); ++i) {
    // Equal-to-threshold gaps split.
    if (i == points.size() || !(points[i] - points[i - 1] < threshold)) {
      dec.clusters.push_back({begin, i});
      begin = i;
    }
  }

  std::size_t nearest = 0;
  for (std::size_t c = 0; c < dec.clusters.size(); ++c) {
    const ClusterRange& range = dec.clusters[c];
    std::size_t best = range.begin;
    for (std::size_t i = range.begin; i < range.end; ++i) {
      if (std::abs(points[i]) < std::abs(points[best])) best = i;
    }
    dec.tau.push_back(best);
    if (std::abs(points[best]) < std::abs(points[dec.tau[nearest]])) nearest = c;
  }
  dec.origin_cluster = nearest;
  return dec;
}

/// Leading point per line and indentation for the shifted construction,
/// where line 1 carries the copies x + s of the line-0 points in `dec`.
inline ClusterDecomposition mark_leading_and_indented(ClusterDecomposition dec, double s) {
  dec.shift = s;
  dec.leading_sites.clear();
  dec.indented_flags.clear();
  dec.straddles_origin.clear();
  for (const ClusterRange& range : dec.clusters) {
    std::size_t lead0 = range.begin;
    std::size_t lead1 = range.begin;
    bool neg = false;
    bool pos = false;
    for (std::size_t i = range.begin; i < range.end; ++i) {
      const double x = dec.points[i];
      if (std::abs(x) < std::abs(dec.points[lead0])) lead0 = i;
      if (std::abs(x + s) < std::abs(dec.points[lead1] + s)) lead1 = i;
      for (double v : {x, x + s}) {
        neg = neg || v < 0.0;
        pos = pos || v > 0.0;
      }
    }
    const double x0 = dec.points[lead0];
    const double x1 = dec.points[lead1];
    dec.leading_sites.push_back({Site{x0, 0}, Site{x1 + s, 1}});
    dec.indented_flags.push_back({std::abs(x0) > std::abs(x0 + s), std::abs(x1 + s) > std::abs(x1)});
    dec.straddles_origin.push_back(neg && pos);
  }
  return dec;
}

/// Single-line realization holding one point per cluster (its point closest
/// to 0), clustering the base points at the line separation r.
inline Realization reduce_to_cluster_leads(const Realization& real) {
  if (real.spec.construction != Construction::ParallelDuplicated) {
    throw ValidationError("reduce_to_cluster_leads needs a parallel-duplicated realization");
  }
  const ClusterDecomposition dec = decompose_clusters(real.base_points, real.space().r());
  Realization out;
  out.spec = ProcessSpec::single_line(real.space().window_L(), real.spec.rate_lambda);
  out.seed = real.seed;
  out.coverage = real.coverage;
  for (std::size_t c = 0; c < dec.size(); ++c) out.lines[0].push_back(dec.lead(c));
  out.base_points = out.lines[0];
  return out;
}

}  // namespace gwlab
