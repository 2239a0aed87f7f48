#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwlab/geometry.hpp"
#include "gwlab/rng.hpp"

namespace gwlab {

enum class Construction {
  SingleLinePoisson,
  IntersectingIndependent,
  ParallelDuplicated,
  ParallelThinned,
  ParallelShifted,
};

inline constexpr std::array<Construction, 5> kAllConstructions = {
    Construction::SingleLinePoisson, Construction::IntersectingIndependent,
    Construction::ParallelDuplicated, Construction::ParallelThinned,
    Construction::ParallelShifted};

inline std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::SingleLinePoisson: return "single-line";
    case Construction::IntersectingIndependent: return "intersecting";
    case Construction::ParallelDuplicated: return "parallel-duplicated";
    case Construction::ParallelThinned: return "parallel-thinned";
    case Construction::ParallelShifted: return "parallel-shifted";
  }
  return "?";
}

inline Construction construction_from_string(std::string_view name) {
  for (Construction c : kAllConstructions) {
    if (to_string(c) == name) return c;
  }
  throw ValidationError("unknown construction '" + std::string(name) + "'");
}

inline bool is_parallel(Construction c) {
  return c == Construction::ParallelDuplicated || c == Construction::ParallelThinned ||
         c == Construction::ParallelShifted;
}

/// Which of the five point-process constructions to sample, and its
/// parameters. `validate()` enforces the cross-field rules; generators call
/// it before drawing anything.
struct ProcessSpec {
  Construction construction = Construction::SingleLinePoisson;
  double rate_lambda = 1.0;
  /// Optional rate of line 1 for intersecting lines. Untested stretch path.
  std::optional<double> rate_lambda_line1;
  std::optional<double> thinning_p;
  std::optional<double> shift_s;
  Space space = Space::single_line(50.0);
  /// Lifts the shift bound from r/sqrt(3) to r. Results are exploratory.
  bool allow_unproven_s = false;

  static ProcessSpec single_line(double L, double lambda = 1.0) {
    return {Construction::SingleLinePoisson, lambda, {}, {}, {}, Space::single_line(L)};
  }
  static ProcessSpec intersecting(double alpha, double L, double lambda = 1.0) {
    return {Construction::IntersectingIndependent, lambda, {}, {}, {}, Space::intersecting(alpha, L)};
  }
  static ProcessSpec duplicated(double r, double L, double lambda = 1.0) {
    return {Construction::ParallelDuplicated, lambda, {}, {}, {}, Space::parallel(r, L)};
  }
  static ProcessSpec thinned(double p, double r, double L, double lambda = 1.0) {
    return {Construction::ParallelThinned, lambda, {}, p, {}, Space::parallel(r, L)};
  }
  static ProcessSpec shifted(double s, double r, double L, double lambda = 1.0) {
    return {Construction::ParallelShifted, lambda, {}, {}, s, Space::parallel(r, L)};
  }

  /// Largest admissible |s| for the current separation.
  [[nodiscard]] double shift_limit() const {
    const double r = space.r();
    return allow_unproven_s ? r : r / std::sqrt(3.0);
  }

  [[nodiscard]] bool exploratory() const {
    return construction == Construction::ParallelShifted && shift_s &&
           std::abs(*shift_s) >= space.r() / std::sqrt(3.0);
  }

  void validate() const {
    if (!(rate_lambda > 0.0) || !std::isfinite(rate_lambda)) {
      throw ValidationError("rate_lambda must be a finite intensity > 0");
    }
    if (rate_lambda_line1 && (construction != Construction::IntersectingIndependent ||
                              !(*rate_lambda_line1 > 0.0))) {
      throw ValidationError("rate_lambda_line1 is only valid (> 0) for intersecting lines");
    }
    const SpaceKind want = construction == Construction::SingleLinePoisson ? SpaceKind::SingleLine
                           : construction == Construction::IntersectingIndependent
                               ? SpaceKind::IntersectingLines
                               : SpaceKind::ParallelLines;
    if (space.kind() != want) {
      throw ValidationError(std::string("construction ") + std::string(to_string(construction)) +
                            " requires a " + std::string(to_string(want)) + " space");
    }
    if (thinning_p.has_value() != (construction == Construction::ParallelThinned)) {
      throw ValidationError("thinning_p is required for, and only for, parallel-thinned");
    }
    if (thinning_p && !(*thinning_p >= 0.0 && *thinning_p <= 1.0)) {
      throw ValidationError("thinning_p must lie in [0, 1]");
    }
    if (shift_s.has_value() != (construction == Construction::ParallelShifted)) {
      throw ValidationError("shift_s is required for, and only for, parallel-shifted");
    }
    if (shift_s) {
      const double s = std::abs(*shift_s);
      if (!(s > 0.0) || !(s < shift_limit())) {
        throw ValidationError(allow_unproven_s ? "shift_s must satisfy 0 < |s| < r"
                                               : "shift_s must satisfy 0 < |s| < r/sqrt(3)");
      }
    }
  }
};

/// Provenance of each base point in a thinned realization.
enum class DupFlag : std::uint8_t { Both, Line0, LineR };

inline std::string_view to_string(DupFlag f) {
  switch (f) {
    case DupFlag::Both: return "both";
    case DupFlag::Line0: return "line0";
    case DupFlag::LineR: return "lineR";
  }
  return "?";
}

/// A sampled instance of a ProcessSpec restricted to a finite window.
///
/// `coverage[line]` is the abscissa interval inside which the realization
/// holds every point of the underlying infinite process on that line. The
/// walk's truncation rule treats everything outside it as unknown.
struct Realization {
  ProcessSpec spec;
  std::array<std::vector<double>, 2> lines;
  std::vector<double> base_points;
  std::uint64_t seed = 0;
  std::vector<DupFlag> duplicate_flags;
  std::array<Interval, 2> coverage{};

  [[nodiscard]] const std::vector<double>& line(int l) const {
    return lines[static_cast<std::size_t>(l)];
  }
  [[nodiscard]] std::size_t point_count() const { return lines[0].size() + lines[1].size(); }
  [[nodiscard]] const Space& space() const { return spec.space; }
};

/// Homogeneous Poisson sample on `window`, returned sorted.
///
/// Points are laid down by exponential spacings from the left edge, which
/// gives a Poisson(rate * |window|) count with i.i.d. uniform positions.
inline std::vector<double> sample_poisson(double rate, Interval window, Xoshiro256& stream) {
  std::vector<double> out;
  if (!(rate > 0.0) || !(window.hi > window.lo)) return out;
  out.reserve(static_cast<std::size_t>(rate * window.length() * 1.1) + 16);
  double x = window.lo;
  for (;;) {
    x += stream.exponential() / rate;
    if (x > window.hi) break;
    // Spacings below one ulp would collapse two points; the process is simple.
    if (!out.empty() && x <= out.back()) continue;
    out.push_back(x);
  }
  return out;
}

namespace detail {

inline Xoshiro256 substream(std::uint64_t seed, std::uint64_t purpose) {
  return Xoshiro256(derive_seed(seed, purpose));
}

inline bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) ==
         v.end();
}

}  // namespace detail

inline Realization generate(const ProcessSpec& spec, std::uint64_t seed) {
  spec.validate();
  const double L = spec.space.window_L();
  const Interval window{-L, L};

  Realization real;
  real.spec = spec;
  real.seed = seed;
  real.coverage = symmetric_coverage(L);

  auto base_stream = detail::substream(seed, 0);

  switch (spec.construction) {
    case Construction::SingleLinePoisson: {
      real.base_points = sample_poisson(spec.rate_lambda, window, base_stream);
      real.lines[0] = real.base_points;
      break;
    }
    case Construction::IntersectingIndependent: {
      auto second = detail::substream(seed, 1);
      real.lines[0] = sample_poisson(spec.rate_lambda, window, base_stream);
      real.lines[1] = sample_poisson(spec.rate_lambda_line1.value_or(spec.rate_lambda), window, second);
      real.base_points.reserve(real.point_count());
      std::merge(real.lines[0].begin(), real.lines[0].end(), real.lines[1].begin(),
                 real.lines[1].end(), std::back_inserter(real.base_points));
      break;
    }
    case Construction::ParallelDuplicated: {
      real.base_points = sample_poisson(spec.rate_lambda, window, base_stream);
      real.lines[0] = real.base_points;
      real.lines[1] = real.base_points;
      break;
    }
    case Construction::ParallelThinned: {
      real.base_points = sample_poisson(spec.rate_lambda, window, base_stream);
      auto decisions = detail::substream(seed, 1);
      const double p = *spec.thinning_p;
      real.duplicate_flags.reserve(real.base_points.size());
      for (double x : real.base_points) {
        DupFlag flag = DupFlag::Both;
        if (decisions.uniform01() < p) {
          flag = decisions.uniform01() < 0.5 ? DupFlag::Line0 : DupFlag::LineR;
        }
        real.duplicate_flags.push_back(flag);
        if (flag != DupFlag::LineR) real.lines[0].push_back(x);
        if (flag != DupFlag::Line0) real.lines[1].push_back(x);
      }
      break;
    }
    case Construction::ParallelShifted: {
      const double s = *spec.shift_s;
      auto base = sample_poisson(spec.rate_lambda, window, base_stream);
      // Keep the shift identity exact: drop the rare base point whose shifted
      // copy rounds onto its neighbour's.
      for (double x : base) {
        const double y = x + s;
        if (!real.lines[1].empty() && !(y > real.lines[1].back())) continue;
        real.lines[0].push_back(x);
        real.lines[1].push_back(y);
      }
      real.base_points = real.lines[0];
      real.coverage[1] = Interval{-L + s, L + s};
      break;
    }
  }
  return real;
}

/// Throws ValidationError describing the first broken realization invariant.
inline void check_invariants(const Realization& real) {
  for (int l = 0; l < 2; ++l) {
    const auto& pts = real.line(l);
    if (!detail::strictly_increasing(pts)) throw ValidationError("line array not strictly increasing");
    const Interval cov = real.coverage[static_cast<std::size_t>(l)];
    for (double x : pts) {
      if (!cov.contains(x)) throw ValidationError("point outside its line coverage");
    }
  }
  switch (real.spec.construction) {
    case Construction::SingleLinePoisson:
      if (!real.lines[1].empty()) throw ValidationError("single-line realization has line-1 points");
      break;
    case Construction::ParallelDuplicated:
      if (real.lines[0] != real.lines[1] || real.lines[0] != real.base_points) {
        throw ValidationError("duplicated lines differ from base");
      }
      break;
    case Construction::ParallelThinned: {
      if (real.duplicate_flags.size() != real.base_points.size()) {
        throw ValidationError("flag count differs from base count");
      }
      std::vector<double> uni;
      std::set_union(real.lines[0].begin(), real.lines[0].end(), real.lines[1].begin(),
                     real.lines[1].end(), std::back_inserter(uni));
      if (uni != real.base_points) throw ValidationError("union of lines differs from base");
      std::size_t i0 = 0;
      std::size_t i1 = 0;
      for (std::size_t k = 0; k < real.base_points.size(); ++k) {
        const double x = real.base_points[k];
        const bool on0 = i0 < real.lines[0].size() && real.lines[0][i0] == x;
        const bool on1 = i1 < real.lines[1].size() && real.lines[1][i1] == x;
        i0 += on0;
        i1 += on1;
        const DupFlag want = on0 && on1 ? DupFlag::Both : on0 ? DupFlag::Line0 : DupFlag::LineR;
        if (real.duplicate_flags[k] != want) throw ValidationError("duplicate flag mismatch");
      }
      break;
    }
    case Construction::ParallelShifted: {
      const double s = *real.spec.shift_s;
      if (real.lines[0].size() != real.lines[1].size()) throw ValidationError("shift copies differ in size");
      for (std::size_t k = 0; k < real.lines[0].size(); ++k) {
        if (real.lines[1][k] != real.lines[0][k] + s) throw ValidationError("line r is not line 0 + s");
      }
      break;
    }
    case Construction::IntersectingIndependent: break;
  }
}

/// Moves the origin to `at`. If `at` is on line 1 the two lines swap roles,
/// so `at` itself lands on (0, line 0).
inline Realization shift_realization(const Realization& real, const Site& at) {
  if (real.space().kind() == SpaceKind::IntersectingLines) {
    throw ValidationError("shift operator is defined for parallel lines only");
  }
  if (real.space().kind() == SpaceKind::SingleLine && at.line != 0) {
    throw ValidationError("single-line shift must be anchored on line 0");
  }
  Realization out = real;
  const double x = at.u;
  auto minus = [x](std::vector<double>& v) {
    for (double& p : v) p -= x;
  };
  for (auto& l : out.lines) minus(l);
  minus(out.base_points);
  for (auto& c : out.coverage) c = Interval{c.lo - x, c.hi - x};
  if (at.line == 1) {
    std::swap(out.lines[0], out.lines[1]);
    std::swap(out.coverage[0], out.coverage[1]);
    for (DupFlag& f : out.duplicate_flags) {
      if (f == DupFlag::Line0) f = DupFlag::LineR;
      else if (f == DupFlag::LineR) f = DupFlag::Line0;
    }
    if (out.spec.construction == Construction::ParallelShifted) {
      // New line 0 is old line r, so the new line r sits at -s from it.
      out.base_points = out.lines[0];
      out.spec.shift_s = -*out.spec.shift_s;
    }
  }
  return out;
}

/// Reflects every abscissa through the origin on both lines.
inline Realization mirror_realization(const Realization& real) {
  Realization out = real;
  auto flip = [](std::vector<double>& v) {
    std::reverse(v.begin(), v.end());
    for (double& p : v) p = -p;
  };
  for (auto& l : out.lines) flip(l);
  flip(out.base_points);
  std::reverse(out.duplicate_flags.begin(), out.duplicate_flags.end());
  for (auto& c : out.coverage) c = Interval{-c.hi, -c.lo};
  if (out.spec.shift_s) out.spec.shift_s = -*out.spec.shift_s;
  return out;
}

}  // namespace gwlab
