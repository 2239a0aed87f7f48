#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "gwlab/geometry.hpp"
#include "gwlab/ordered_index.hpp"
#include "gwlab/processes.hpp"

namespace gwlab {

enum class StopReason { Exhausted, Truncated };

inline std::string_view to_string(StopReason r) {
  return r == StopReason::Exhausted ? "exhausted" : "truncated";
}

enum class StopMode { RunToExhaustion, TruncationSafe };

/// When a finite-window walk halts.
///
/// TruncationSafe stops before the first step that some point outside the
/// realization's coverage could have beaten, so the emitted steps are exactly
/// the first steps of the walk on the untruncated process. `window_L`
/// optionally narrows the coverage to [-L, L].
struct StopRule {
  StopMode mode = StopMode::TruncationSafe;
  std::optional<double> window_L;

  static StopRule run_to_exhaustion() { return {StopMode::RunToExhaustion, {}}; }
  static StopRule truncation_safe() { return {StopMode::TruncationSafe, {}}; }
};

struct PointRef {
  int line = 0;
  std::uint32_t index = 0;
  friend bool operator==(const PointRef&, const PointRef&) = default;
};

inline constexpr std::int64_t kUnvisited = -1;

/// The visited sequence S_1..S_n of a walk started at S_0 = `start`.
struct Trajectory {
  Site start;
  std::vector<Site> steps;
  /// step_distances[k] = d(S_k, S_{k+1}) for k = 0..n-1.
  std::vector<double> step_distances;
  std::vector<PointRef> refs;
  StopReason stop_reason = StopReason::Exhausted;
  /// visit_step[line][i] is the step n at which point i of that line was
  /// visited, or kUnvisited.
  std::array<std::vector<std::int64_t>, 2> visit_step;

  [[nodiscard]] std::size_t size() const { return steps.size(); }
  /// S_n, with S_0 the start.
  [[nodiscard]] const Site& at(std::size_t n) const { return n == 0 ? start : steps[n - 1]; }
  [[nodiscard]] double shadow(std::size_t n) const { return at(n).u; }

  [[nodiscard]] std::int64_t visited_at(int line, std::size_t i) const {
    return visit_step[static_cast<std::size_t>(line)][i];
  }
};

inline bool same_steps(const Trajectory& a, const Trajectory& b) {
  return a.steps == b.steps && a.stop_reason == b.stop_reason;
}

/// Step-for-step prefix test (distances included).
inline bool is_prefix_of(const Trajectory& shorter, const Trajectory& longer) {
  if (shorter.size() > longer.size() || !(shorter.start == longer.start)) return false;
  for (std::size_t k = 0; k < shorter.size(); ++k) {
    if (!(shorter.steps[k] == longer.steps[k])) return false;
    if (shorter.step_distances[k] != longer.step_distances[k]) return false;
  }
  return true;
}

struct Candidate {
  Site site;
  PointRef ref;
  double dist = std::numeric_limits<double>::infinity();
};

/// Strict order on candidates: distance, then lower line, then smaller u.
inline bool better_candidate(const Candidate& a, const Candidate& b) {
  if (a.dist != b.dist) return a.dist < b.dist;
  if (a.site.line != b.site.line) return a.site.line < b.site.line;
  return a.site.u < b.site.u;
}

struct CandidateSet {
  std::array<Candidate, 4> items{};
  std::size_t count = 0;

  void push(const Candidate& c) { items[count++] = c; }
  [[nodiscard]] auto begin() const { return items.begin(); }
  [[nodiscard]] auto end() const { return items.begin() + static_cast<std::ptrdiff_t>(count); }
  [[nodiscard]] std::size_t size() const { return count; }
};

namespace detail {

inline std::array<Interval, 2> effective_coverage(const Realization& real, const StopRule& rule) {
  auto cov = real.coverage;
  if (rule.window_L) {
    for (auto& c : cov) c = Interval{std::max(c.lo, -*rule.window_L), std::min(c.hi, *rule.window_L)};
  }
  return cov;
}

// Marks a realization point sitting exactly at the start as already visited.
template <class MarkFn>
void exclude_start(const Realization& real, const Site& start, MarkFn&& mark) {
  if (start.line < 0 || start.line > 1) return;
  const auto& pts = real.line(start.line);
  auto it = std::lower_bound(pts.begin(), pts.end(), start.u);
  if (it != pts.end() && *it == start.u) mark(start.line, static_cast<std::size_t>(it - pts.begin()));
}

}  // namespace detail

/// Mutable state of one greedy walk: position plus per-line unvisited index.
class GreedyWalker {
 public:
  GreedyWalker(const Realization& real, Site start) : real_(&real), position_(start) {
    for (int l = 0; l < 2; ++l) index_[static_cast<std::size_t>(l)] = UnvisitedIndex(real.line(l));
    detail::exclude_start(real, start, [this](int line, std::size_t i) {
      index_[static_cast<std::size_t>(line)].erase(i);
    });
  }

  [[nodiscard]] const Site& position() const { return position_; }
  [[nodiscard]] bool done() const { return index_[0].empty() && index_[1].empty(); }
  [[nodiscard]] const UnvisitedIndex& unvisited(int line) const {
    return index_[static_cast<std::size_t>(line)];
  }

  /// At most two candidates per line: the nearest unvisited point on each
  /// side of the point of that line closest to the current position. Both
  /// same-line and cross-line distance are monotone in the offset from that
  /// centre, so the global argmin is always among them.
  [[nodiscard]] CandidateSet candidates() const {
    CandidateSet set;
    const Space& space = real_->space();
    for (int l = 0; l < 2; ++l) {
      const UnvisitedIndex& idx = index_[static_cast<std::size_t>(l)];
      if (idx.empty()) continue;
      const double c = l == position_.line ? position_.u : cross_line_center(space, position_.u);
      if (auto right = idx.successor(c)) set.push(make(l, *right));
      if (auto left = idx.predecessor(c)) {
        Candidate best = make(l, *left);
        // Rounding can make a farther left point tie; the tie-break then
        // prefers the smaller abscissa.
        while (auto further = idx.last_alive_before(best.ref.index)) {
          Candidate next = make(l, *further);
          if (next.dist != best.dist) break;
          best = next;
        }
        set.push(best);
      }
    }
    return set;
  }

  [[nodiscard]] std::optional<Candidate> best() const {
    const CandidateSet set = candidates();
    if (set.size() == 0) return std::nullopt;
    Candidate out = *set.begin();
    for (const Candidate& c : set) {
      if (better_candidate(c, out)) out = c;
    }
    return out;
  }

  void visit(const Candidate& c) {
    index_[static_cast<std::size_t>(c.ref.line)].erase(c.ref.index);
    position_ = c.site;
  }

 private:
  [[nodiscard]] Candidate make(int line, std::size_t i) const {
    const Site s{index_[static_cast<std::size_t>(line)].key(i), line};
    return {s, PointRef{line, static_cast<std::uint32_t>(i)}, distance(real_->space(), position_, s)};
  }

  const Realization* real_;
  Site position_;
  std::array<UnvisitedIndex, 2> index_;
};

namespace detail {

inline Trajectory begin_trajectory(const Realization& real, const Site& start) {
  Trajectory t;
  t.start = start;
  t.stop_reason = StopReason::Exhausted;
  for (int l = 0; l < 2; ++l) {
    t.visit_step[static_cast<std::size_t>(l)].assign(real.line(l).size(), kUnvisited);
  }
  detail::exclude_start(real, start, [&t](int line, std::size_t i) {
    t.visit_step[static_cast<std::size_t>(line)][i] = 0;
  });
  return t;
}

inline void record_step(Trajectory& t, const Candidate& c) {
  t.steps.push_back(c.site);
  t.step_distances.push_back(c.dist);
  t.refs.push_back(c.ref);
  t.visit_step[static_cast<std::size_t>(c.ref.line)][c.ref.index] =
      static_cast<std::int64_t>(t.steps.size());
}

inline bool must_stop(const Realization& real, const StopRule& rule,
                      const std::array<Interval, 2>& coverage, const Site& from, double step) {
  if (rule.mode != StopMode::TruncationSafe) return false;
  return !(step < margin_to_outside(real.space(), from, coverage));
}

}  // namespace detail

/// Greedy walk from `start`: always move to the closest unvisited point.
inline Trajectory run_walk(const Realization& real, const Site& start,
                           const StopRule& rule = StopRule::truncation_safe()) {
  Trajectory t = detail::begin_trajectory(real, start);
  const auto coverage = detail::effective_coverage(real, rule);
  t.steps.reserve(real.point_count());
  t.step_distances.reserve(real.point_count());
  t.refs.reserve(real.point_count());

  GreedyWalker walker(real, start);
  while (auto next = walker.best()) {
    if (detail::must_stop(real, rule, coverage, walker.position(), next->dist)) {
      t.stop_reason = StopReason::Truncated;
      return t;
    }
    walker.visit(*next);
    detail::record_step(t, *next);
  }
  return t;
}

/// Reference engine: full linear scan over every unvisited point per step.
inline Trajectory run_walk_naive(const Realization& real, const Site& start,
                                 const StopRule& rule = StopRule::truncation_safe()) {
  Trajectory t = detail::begin_trajectory(real, start);
  const auto coverage = detail::effective_coverage(real, rule);
  const Space& space = real.space();
  std::array<std::vector<char>, 2> seen;
  std::size_t left = 0;
  for (int l = 0; l < 2; ++l) {
    seen[static_cast<std::size_t>(l)].assign(real.line(l).size(), 0);
    for (std::size_t i = 0; i < real.line(l).size(); ++i) {
      if (t.visit_step[static_cast<std::size_t>(l)][i] != kUnvisited) {
        seen[static_cast<std::size_t>(l)][i] = 1;
      } else {
        ++left;
      }
    }
  }
  Site here = start;
  while (left > 0) {
    Candidate best;
    bool found = false;
    for (int l = 0; l < 2; ++l) {
      const auto& pts = real.line(l);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (seen[static_cast<std::size_t>(l)][i]) continue;
        const Site s{pts[i], l};
        const Candidate c{s, PointRef{l, static_cast<std::uint32_t>(i)}, distance(space, here, s)};
        if (!found || better_candidate(c, best)) {
          best = c;
          found = true;
        }
      }
    }
    if (detail::must_stop(real, rule, coverage, here, best.dist)) {
      t.stop_reason = StopReason::Truncated;
      return t;
    }
    seen[static_cast<std::size_t>(best.ref.line)][best.ref.index] = 1;
    --left;
    here = best.site;
    detail::record_step(t, best);
  }
  return t;
}

/// Conventional start: the origin on line 0.
inline Site default_start() { return Site{0.0, 0}; }

/// Restricts `real` to a window of half-width `smaller_L` around the centre
/// of each line's current coverage, keeping exactly the points inside.
inline Realization couple_restrict(const Realization& real, double smaller_L) {
  const double current = real.coverage[0].length() / 2.0;
  if (!(smaller_L > 0.0)) throw ValidationError("couple_restrict: smaller_L must be > 0");
  if (smaller_L > current) throw ValidationError("couple_restrict: smaller_L exceeds the current window");

  Realization out;
  out.spec = real.spec;
  out.spec.space = real.spec.space.with_window(smaller_L);
  out.seed = real.seed;
  for (int l = 0; l < 2; ++l) {
    const Interval old = real.coverage[static_cast<std::size_t>(l)];
    const double mid = (old.lo + old.hi) / 2.0;
    const Interval cov{mid - smaller_L, mid + smaller_L};
    out.coverage[static_cast<std::size_t>(l)] = cov;
    for (double x : real.line(l)) {
      if (cov.contains(x)) out.lines[static_cast<std::size_t>(l)].push_back(x);
    }
  }
  switch (real.spec.construction) {
    case Construction::IntersectingIndependent:
      std::merge(out.lines[0].begin(), out.lines[0].end(), out.lines[1].begin(), out.lines[1].end(),
                 std::back_inserter(out.base_points));
      break;
    case Construction::ParallelThinned:
      for (std::size_t k = 0; k < real.base_points.size(); ++k) {
        if (!out.coverage[0].contains(real.base_points[k])) continue;
        out.base_points.push_back(real.base_points[k]);
        out.duplicate_flags.push_back(real.duplicate_flags[k]);
      }
      break;
    default:
      out.base_points = out.lines[0];
      break;
  }
  return out;
}

}  // namespace gwlab
