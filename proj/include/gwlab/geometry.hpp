#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gwlab {

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SpaceKind { SingleLine, IntersectingLines, ParallelLines };

inline std::string_view to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::SingleLine: return "single-line";
    case SpaceKind::IntersectingLines: return "intersecting-lines";
    case SpaceKind::ParallelLines: return "parallel-lines";
  }
  return "?";
}

/// Closed interval of abscissas. Used for per-line sampling coverage.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double u) const { return lo <= u && u <= hi; }
  [[nodiscard]] double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// The metric space the walk lives on, plus the simulation half-width.
///
/// Lines are parametrised by signed arc length `u`. For two intersecting
/// lines both pass through the origin at angle `alpha`; for two parallel
/// lines, line 1 sits at height `separation_r` above line 0.
class Space {
 public:
  static Space single_line(double window_L) {
    Space s;
    s.kind_ = SpaceKind::SingleLine;
    s.window_L_ = window_L;
    s.validate();
    return s;
  }

  static Space intersecting(double alpha, double window_L) {
    Space s;
    s.kind_ = SpaceKind::IntersectingLines;
    s.alpha_ = alpha;
    s.window_L_ = window_L;
    s.validate();
    s.cos_alpha_ = std::cos(alpha);
    s.sin_alpha_ = std::sin(alpha);
    return s;
  }

  static Space parallel(double separation_r, double window_L) {
    Space s;
    s.kind_ = SpaceKind::ParallelLines;
    s.separation_r_ = separation_r;
    s.window_L_ = window_L;
    s.validate();
    return s;
  }

  [[nodiscard]] SpaceKind kind() const { return kind_; }
  [[nodiscard]] std::optional<double> alpha() const { return alpha_; }
  [[nodiscard]] std::optional<double> separation_r() const { return separation_r_; }
  [[nodiscard]] double window_L() const { return window_L_; }
  [[nodiscard]] int line_count() const { return kind_ == SpaceKind::SingleLine ? 1 : 2; }

  [[nodiscard]] double r() const { return separation_r_.value_or(0.0); }
  [[nodiscard]] double cos_alpha() const { return cos_alpha_; }
  [[nodiscard]] double sin_alpha() const { return sin_alpha_; }

  [[nodiscard]] Space with_window(double window_L) const {
    Space s = *this;
    s.window_L_ = window_L;
    s.validate();
    return s;
  }

  friend bool operator==(const Space& a, const Space& b) {
    return a.kind_ == b.kind_ && a.alpha_ == b.alpha_ && a.separation_r_ == b.separation_r_ &&
           a.window_L_ == b.window_L_;
  }

 private:
  void validate() const {
    if (!(window_L_ > 0.0) || !std::isfinite(window_L_)) {
      throw ValidationError("window_L must be a finite length > 0");
    }
    if (kind_ == SpaceKind::IntersectingLines) {
      if (!alpha_ || !(*alpha_ > 0.0 && *alpha_ < std::numbers::pi)) {
        throw ValidationError("alpha must lie in (0, pi)");
      }
    }
    if (kind_ == SpaceKind::ParallelLines) {
      if (!separation_r_ || !(*separation_r_ > 0.0) || !std::isfinite(*separation_r_)) {
        throw ValidationError("separation_r must be a finite length > 0");
      }
    }
  }

  SpaceKind kind_ = SpaceKind::SingleLine;
  std::optional<double> alpha_;
  std::optional<double> separation_r_;
  double window_L_ = 1.0;
  double cos_alpha_ = 1.0;
  double sin_alpha_ = 0.0;
};

/// Angle in (0, pi) between the lines y = m1 x and y = m2 x.
inline double angle_from_slopes(double m1, double m2) {
  if (m1 == m2) throw ValidationError("slopes must differ");
  double a = std::atan(m2) - std::atan(m1);
  if (a < 0.0) a += std::numbers::pi;
  return a;
}

/// A location on one of the lines: signed arc length plus line label.
struct Site {
  double u = 0.0;
  int line = 0;

  friend bool operator==(const Site&, const Site&) = default;
};

/// Distance between two sites on different lines whose abscissas are `u`
/// (on the first line) and `v` (on the other).
///
/// For intersecting lines this is written as hypot(v - u cos a, u sin a) so
/// that it is monotone in |v - u cos a| even after rounding.
inline double cross_line_distance(const Space& space, double u, double v) {
  switch (space.kind()) {
    case SpaceKind::ParallelLines: {
      const double du = v - u;
      const double r = space.r();
      return std::sqrt(du * du + r * r);
    }
    case SpaceKind::IntersectingLines: {
      const double along = v - u * space.cos_alpha();
      const double perp = u * space.sin_alpha();
      return std::sqrt(along * along + perp * perp);
    }
    case SpaceKind::SingleLine: break;
  }
  return std::abs(v - u);
}

/// Point on the other line around which cross-line distance from `u` is
/// minimised.
inline double cross_line_center(const Space& space, double u) {
  return space.kind() == SpaceKind::IntersectingLines ? u * space.cos_alpha() : u;
}

inline double distance(const Space& space, const Site& a, const Site& b) {
  if (a.line == b.line) return std::abs(a.u - b.u);
  return cross_line_distance(space, a.u, b.u);
}

/// Distance to the origin. On parallel lines the analysis only uses the
/// shadow, so this is |u| there as well.
inline double norm(const Space& /*space*/, const Site& a) { return std::abs(a.u); }

/// Minimum distance from `a` to any location on any line that is outside the
/// per-line coverage intervals.
inline double margin_to_outside(const Space& space, const Site& a,
                                const std::array<Interval, 2>& coverage) {
  double best = std::numeric_limits<double>::infinity();
  for (int line = 0; line < space.line_count(); ++line) {
    const Interval& cov = coverage[static_cast<std::size_t>(line)];
    if (line == a.line) {
      if (!cov.contains(a.u)) return 0.0;
      best = std::min({best, a.u - cov.lo, cov.hi - a.u});
      continue;
    }
    const double c = cross_line_center(space, a.u);
    if (!(cov.lo < c && c < cov.hi)) {
      best = std::min(best, cross_line_distance(space, a.u, c));
    } else {
      best = std::min({best, cross_line_distance(space, a.u, cov.lo),
                       cross_line_distance(space, a.u, cov.hi)});
    }
  }
  return best;
}

inline std::array<Interval, 2> symmetric_coverage(double L) {
  return {Interval{-L, L}, Interval{-L, L}};
}

/// Minimum distance from `a` to anything outside [-L, L] on any line.
inline double boundary_margin(const Space& space, const Site& a) {
  return margin_to_outside(space, a, symmetric_coverage(space.window_L()));
}

}  // namespace gwlab
