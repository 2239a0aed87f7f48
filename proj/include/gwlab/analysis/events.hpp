#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gwlab/analysis/clusters.hpp"
#include "gwlab/analysis/hitting.hpp"
#include "gwlab/geometry.hpp"
#include "gwlab/processes.hpp"
#include "gwlab/walk.hpp"

namespace gwlab {

inline int sign_of(double u) { return (u > 0.0) - (u < 0.0); }

/// Indices n >= first with sign(shadow[n - first]) != sign(shadow[n + 1 - first]),
/// both nonzero.
inline std::vector<std::size_t> crossings_in(std::span<const double> shadow, std::size_t first = 1) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < shadow.size(); ++i) {
    const int a = sign_of(shadow[i]);
    const int b = sign_of(shadow[i + 1]);
    if (a != 0 && b != 0 && a != b) out.push_back(first + i);
  }
  return out;
}

/// Crossing steps n of the trajectory: the move S_n -> S_{n+1} changes the
/// sign of the shadow. S_0 = 0 has no sign, so n >= 1.
inline std::vector<std::size_t> detect_crossings(const Trajectory& traj) {
  std::vector<double> shadow;
  shadow.reserve(traj.size());
  for (const Site& s : traj.steps) shadow.push_back(s.u);
  return crossings_in(shadow, 1);
}

/// One of the four half-lines (line, sign) or none for the origin.
struct HalfLine {
  int line = 0;
  int sign = 0;
  friend bool operator==(const HalfLine&, const HalfLine&) = default;
};

inline HalfLine half_line_of(const Site& s) { return {s.line, sign_of(s.u)}; }

inline bool same_half_line(const Site& a, const Site& b) {
  const HalfLine ha = half_line_of(a);
  return ha.sign != 0 && ha == half_line_of(b);
}

struct HalflineChange {
  std::size_t step = 0;
  Site from;
  Site to;
};

inline void require_intersecting(const Space& space, std::string_view what) {
  if (space.kind() != SpaceKind::IntersectingLines) {
    throw ValidationError(std::string(what) + " needs an intersecting-lines trajectory");
  }
}

/// Moves S_n -> S_{n+1}, n >= 1, between different half-lines.
inline std::vector<HalflineChange> extract_halfline_changes(const Trajectory& traj, const Space& space) {
  require_intersecting(space, "extract_halfline_changes");
  std::vector<HalflineChange> out;
  for (std::size_t n = 1; n < traj.size(); ++n) {
    if (!same_half_line(traj.at(n), traj.at(n + 1))) out.push_back({n, traj.at(n), traj.at(n + 1)});
  }
  return out;
}

struct UVEntry {
  std::size_t n = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  Site U;
  Site V;
  /// B_n; false means C_n.
  bool b_event = false;
};

/// Literal evaluation of the j_n/k_n recursion on the available prefix. The
/// norm ||S_k|| is compared against the integer n itself. Stops at the first
/// n whose j_n is not reached within the prefix.
inline std::vector<UVEntry> extract_UV_sequences(const Trajectory& traj, const Space& space) {
  require_intersecting(space, "extract_UV_sequences");
  std::vector<UVEntry> out;
  std::size_t j_prev = 0;
  for (std::size_t n = 1;; ++n) {
    const double floor_norm = std::max(static_cast<double>(n), norm(space, traj.at(j_prev)));
    std::optional<std::size_t> j;
    for (std::size_t k = j_prev + 1; k < traj.size(); ++k) {
      if (!same_half_line(traj.at(k), traj.at(k + 1)) && norm(space, traj.at(k)) > floor_norm) {
        j = k;
        break;
      }
    }
    if (!j) break;
    std::size_t k = *j;
    while (k > 0 && same_half_line(traj.at(k - 1), traj.at(*j))) --k;
    UVEntry e;
    e.n = n;
    e.j = *j;
    e.k = k;
    e.U = traj.at(k);
    e.V = traj.at(*j);
    e.b_event = norm(space, e.U) <= norm(space, e.V);
    out.push_back(e);
    j_prev = *j;
  }
  return out;
}

enum class EventFamily { AkThinned, AkShifted, AmParallel, BnIntersect, CnIntersect };

inline std::string_view to_string(EventFamily f) {
  switch (f) {
    case EventFamily::AkThinned: return "A_k_thinned";
    case EventFamily::AkShifted: return "A_k_shifted";
    case EventFamily::AmParallel: return "A_m_parallel";
    case EventFamily::BnIntersect: return "B_n_intersect";
    case EventFamily::CnIntersect: return "C_n_intersect";
  }
  return "?";
}

enum class Verdict { False, True, Unknown };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::False: return "false";
    case Verdict::True: return "true";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

inline constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();

/// Quantities behind a verdict. Fields that do not apply stay NaN / empty.
struct EventWitness {
  double x = kNoValue;
  double next = kNoValue;
  double gap = kNoValue;
  double dx = kNoValue;
  double x_minus1 = kNoValue;
  double threshold = kNoValue;
  double norm_u = kNoValue;
  double norm_v = kNoValue;
  std::optional<std::size_t> t_x;
  std::optional<std::size_t> t_neg;
  std::optional<std::size_t> t_next;
  std::optional<std::size_t> step;
};

struct EventRecord {
  EventFamily family = EventFamily::AkThinned;
  int index = 0;
  Verdict verdict = Verdict::Unknown;
  EventWitness witness;

  [[nodiscard]] bool occurred() const { return verdict == Verdict::True; }
};

namespace detail {

inline std::optional<double> last_nonpositive(const std::vector<double>& pts) {
  auto it = std::upper_bound(pts.begin(), pts.end(), 0.0);
  if (it == pts.begin()) return std::nullopt;
  return *(it - 1);
}

// A_k on a sorted point list `xs`: gap > D_{x_k + s} - X_{-1} + r + s.
inline std::vector<EventRecord> gap_events(const Realization& real, const Trajectory& traj,
                                           const std::vector<double>& xs, double s, EventFamily family,
                                           DxContext context) {
  std::vector<EventRecord> out;
  const HittingTimes hits(traj);
  const double r = real.space().r();
  const auto x_minus1 = last_nonpositive(xs);
  const auto first_pos = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), 0.0) - xs.begin());
  const auto t_neg = hits.negative();
  for (std::size_t i = first_pos; i + 1 < xs.size(); ++i) {
    EventRecord rec;
    rec.family = family;
    rec.index = static_cast<int>(i - first_pos + 1);
    EventWitness& w = rec.witness;
    w.x = xs[i];
    w.next = xs[i + 1];
    w.gap = w.next - w.x;
    w.t_x = hits.at_or_above(w.x);
    w.t_neg = t_neg;
    w.t_next = hits.at_or_above(w.next);
    if (x_minus1) w.x_minus1 = *x_minus1;
    if (!(w.gap > r + s)) {
      // D >= 0 and -X_{-1} >= 0, so the event cannot occur.
      rec.verdict = Verdict::False;
    } else if (!x_minus1) {
      rec.verdict = Verdict::Unknown;
    } else if (auto dx = compute_Dx(real, traj, w.x + s, hits, context)) {
      w.dx = dx->value;
      w.threshold = dx->value - *x_minus1 + r + s;
      rec.verdict = w.gap > w.threshold ? Verdict::True : Verdict::False;
    } else {
      rec.verdict = Verdict::Unknown;
    }
    out.push_back(rec);
  }
  return out;
}

}  // namespace detail

/// A_k over the union shadow of a thinned (or duplicated) realization.
inline std::vector<EventRecord> detect_Ak_thinned(const Realization& real, const Trajectory& traj) {
  return detail::gap_events(real, traj, real.base_points, 0.0, EventFamily::AkThinned, DxContext::Thinned);
}

/// A_k over the line-0 points of a shifted realization, D taken at X_k + s.
/// Only defined for s > 0; empty otherwise.
inline std::vector<EventRecord> detect_Ak_shifted(const Realization& real, const Trajectory& traj) {
  const double s = real.spec.shift_s.value_or(0.0);
  if (!(s > 0.0)) return {};
  return detail::gap_events(real, traj, real.lines[0], s, EventFamily::AkShifted, DxContext::Shifted);
}

/// A_m on a walk over a single line of lead abscissas: some visit in
/// [rm, r(m+1)) is followed directly by a negative point. Determined once the
/// walk has reached r(m+1) or the walk is exhausted.
inline std::vector<EventRecord> detect_Am_on_reduced(const Trajectory& reduced, double r, double L) {
  std::vector<EventRecord> out;
  double reach = -std::numeric_limits<double>::infinity();
  for (const Site& s : reduced.steps) reach = std::max(reach, s.u);
  const bool exhausted = reduced.stop_reason == StopReason::Exhausted;
  for (int m = 1; r * (m + 1) <= L; ++m) {
    const double lo = r * m;
    const double hi = r * (m + 1);
    EventRecord rec;
    rec.family = EventFamily::AmParallel;
    rec.index = m;
    rec.witness.x = lo;
    rec.witness.next = hi;
    bool hit = false;
    for (std::size_t n = 1; n < reduced.size(); ++n) {
      const double u = reduced.shadow(n);
      if (lo <= u && u < hi && reduced.shadow(n + 1) < 0.0) {
        hit = true;
        rec.witness.step = n;
        break;
      }
    }
    if (hit) rec.verdict = Verdict::True;
    else if (exhausted || reach >= hi) rec.verdict = Verdict::False;
    else rec.verdict = Verdict::Unknown;
    out.push_back(rec);
  }
  return out;
}

inline Trajectory reduced_walk(const Realization& real) {
  return run_walk(reduce_to_cluster_leads(real), default_start());
}

/// B_n / C_n records for every j_n reached in the prefix.
inline std::vector<EventRecord> detect_BC_events(const Trajectory& traj, const Space& space) {
  std::vector<EventRecord> out;
  for (const UVEntry& e : extract_UV_sequences(traj, space)) {
    EventRecord rec;
    rec.family = e.b_event ? EventFamily::BnIntersect : EventFamily::CnIntersect;
    rec.index = static_cast<int>(e.n);
    rec.verdict = Verdict::True;
    rec.witness.norm_u = norm(space, e.U);
    rec.witness.norm_v = norm(space, e.V);
    rec.witness.step = e.j;
    out.push_back(rec);
  }
  return out;
}

/// Every event family that applies to the realization's construction.
inline std::vector<EventRecord> detect_A_events(const Realization& real, const Trajectory& traj) {
  switch (real.spec.construction) {
    case Construction::ParallelThinned:
      return detect_Ak_thinned(real, traj);
    case Construction::ParallelShifted:
      return detect_Ak_shifted(real, traj);
    case Construction::ParallelDuplicated:
      return detect_Am_on_reduced(reduced_walk(real), real.space().r(), real.space().window_L());
    case Construction::IntersectingIndependent:
      return detect_BC_events(traj, real.space());
    case Construction::SingleLinePoisson:
      break;
  }
  return {};
}

}  // namespace gwlab
