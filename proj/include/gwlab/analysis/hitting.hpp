#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "gwlab/geometry.hpp"
#include "gwlab/processes.hpp"
#include "gwlab/walk.hpp"

namespace gwlab {

/// First-entry times T_A = inf{n >= 1 : shadow(S_n) in A} for rays and
/// singletons, answered from prefix extrema of the trajectory's shadows.
///
/// nullopt means the set is not entered within the available prefix. For a
/// truncated trajectory that is "unknown", not "never".
class HittingTimes {
 public:
  explicit HittingTimes(const Trajectory& traj) : traj_(&traj) {
    const std::size_t n = traj.size();
    max_.reserve(n);
    min_.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
      const double u = traj.shadow(k);
      max_.push_back(max_.empty() ? u : std::max(max_.back(), u));
      min_.push_back(min_.empty() ? u : std::min(min_.back(), u));
    }
  }

  /// T_[x, inf)
  [[nodiscard]] std::optional<std::size_t> at_or_above(double x) const {
    auto it = std::lower_bound(max_.begin(), max_.end(), x);
    return from(it, max_);
  }

  /// T_(x, inf)
  [[nodiscard]] std::optional<std::size_t> above(double x) const {
    auto it = std::upper_bound(max_.begin(), max_.end(), x);
    return from(it, max_);
  }

  /// T_(-inf, x)
  [[nodiscard]] std::optional<std::size_t> below(double x) const {
    auto it = std::lower_bound(min_.begin(), min_.end(), x, [](double m, double v) { return m >= v; });
    return from(it, min_);
  }

  /// T_(-inf, x]
  [[nodiscard]] std::optional<std::size_t> at_or_below(double x) const {
    auto it = std::lower_bound(min_.begin(), min_.end(), x, [](double m, double v) { return m > v; });
    return from(it, min_);
  }

  /// T_{x}: first step whose shadow equals x.
  [[nodiscard]] std::optional<std::size_t> at(double x) const {
    for (std::size_t k = 1; k <= traj_->size(); ++k) {
      if (traj_->shadow(k) == x) return k;
    }
    return std::nullopt;
  }

  /// Time at which the negative half-line is first entered.
  [[nodiscard]] std::optional<std::size_t> negative() const { return below(0.0); }

  [[nodiscard]] std::size_t horizon() const { return traj_->size(); }

 private:
  static std::optional<std::size_t> from(std::vector<double>::const_iterator it,
                                         const std::vector<double>& v) {
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin()) + 1;
  }

  const Trajectory* traj_;
  std::vector<double> max_;
  std::vector<double> min_;
};

/// Compares two hitting times where nullopt stands for "after the prefix".
/// Returns nullopt when both are beyond the prefix.
inline std::optional<bool> hits_before(std::optional<std::size_t> a, std::optional<std::size_t> b) {
  if (!a && !b) return std::nullopt;
  if (!a) return false;
  if (!b) return true;
  return *a < *b;
}

/// T^R_x: the step at which every realization point with abscissa x has been
/// visited. nullopt while some copy is still unvisited. Throws if no point
/// sits at x.
inline std::optional<std::size_t> both_copies_time(const Realization& real, const Trajectory& traj,
                                                   double x) {
  bool any = false;
  std::int64_t last = 0;
  for (int l = 0; l < 2; ++l) {
    const auto& pts = real.line(l);
    auto it = std::lower_bound(pts.begin(), pts.end(), x);
    if (it == pts.end() || *it != x) continue;
    any = true;
    const std::int64_t v = traj.visited_at(l, static_cast<std::size_t>(it - pts.begin()));
    if (v == kUnvisited) return std::nullopt;
    last = std::max(last, v);
  }
  if (!any) throw ValidationError("both_copies_time: no point at the requested abscissa");
  return static_cast<std::size_t>(last);
}

/// Which form of the remaining-interval statistic to compute.
enum class DxContext {
  /// Strictly positive unless degenerate. Used for thinned/duplicated lines.
  Thinned,
  /// Shadows of both lines pooled. May be 0 without being degenerate.
  Shifted,
};

struct DxRecord {
  double x = 0.0;
  DxContext context = DxContext::Thinned;
  /// Ascending: 0, the remaining shadows in (0, x), then x.
  std::vector<double> remaining_z;
  double value = 0.0;
  /// True when the walk entered the negative half-line before reaching x;
  /// value is then 0 by convention.
  bool degenerate = false;
  std::optional<std::size_t> hit_time;
};

/// max over consecutive remaining points of 2 z_i - z_{i+1} - x, with `zs`
/// ascending from 0 to x.
inline double dx_formula(std::span<const double> zs, double x) {
  if (zs.size() < 2) throw ValidationError("dx_formula needs at least the endpoints 0 and x");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < zs.size(); ++j) best = std::max(best, 2.0 * zs[j] - zs[j - 1] - x);
  return best;
}

/// D_x for a walk from the origin. Returns nullopt when the prefix does not
/// determine it, i.e. neither [x, inf) nor (-inf, 0) is entered yet.
inline std::optional<DxRecord> compute_Dx(const Realization& real, const Trajectory& traj, double x,
                                          const HittingTimes& hits,
                                          DxContext context = DxContext::Thinned) {
  if (!(x > 0.0)) throw ValidationError("compute_Dx needs x > 0");
  const auto t_x = hits.at_or_above(x);
  const auto t_neg = hits.negative();
  const auto neg_first = hits_before(t_neg, t_x);
  if (!neg_first) return std::nullopt;

  DxRecord rec;
  rec.x = x;
  rec.context = context;
  rec.hit_time = t_x;
  if (*neg_first) {
    rec.degenerate = true;
    rec.value = 0.0;
    return rec;
  }
  const auto T = static_cast<std::int64_t>(*t_x);
  rec.remaining_z.push_back(0.0);
  for (int l = 0; l < 2; ++l) {
    const auto& pts = real.line(l);
    auto lo = std::upper_bound(pts.begin(), pts.end(), 0.0);
    auto hi = std::lower_bound(pts.begin(), pts.end(), x);
    for (auto it = lo; it != hi; ++it) {
      const std::int64_t v = traj.visited_at(l, static_cast<std::size_t>(it - pts.begin()));
      if (v == kUnvisited || v >= T) rec.remaining_z.push_back(*it);
    }
  }
  std::sort(rec.remaining_z.begin() + 1, rec.remaining_z.end());
  rec.remaining_z.erase(std::unique(rec.remaining_z.begin(), rec.remaining_z.end()), rec.remaining_z.end());
  rec.remaining_z.push_back(x);
  rec.value = dx_formula(rec.remaining_z, x);
  return rec;
}

}  // namespace gwlab
