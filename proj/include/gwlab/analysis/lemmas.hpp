#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gwlab/analysis/clusters.hpp"
#include "gwlab/analysis/events.hpp"
#include "gwlab/analysis/hitting.hpp"
#include "gwlab/geometry.hpp"
#include "gwlab/processes.hpp"
#include "gwlab/walk.hpp"

namespace gwlab {

/// Tally of one checker over one or more trajectories.
struct LemmaVerdict {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t unknown = 0;
  std::vector<std::string> notes;

  [[nodiscard]] bool ok() const { return violations == 0; }

  void fail(const std::string& what) {
    ++violations;
    if (notes.size() < 8) notes.push_back(what);
  }

  LemmaVerdict& operator+=(const LemmaVerdict& o) {
    checked += o.checked;
    violations += o.violations;
    unknown += o.unknown;
    for (const auto& n : o.notes) {
      if (notes.size() < 8) notes.push_back(n);
    }
    return *this;
  }
};

namespace detail {

inline bool visited_by(const Trajectory& traj, int line, std::size_t i, std::size_t n) {
  const std::int64_t v = traj.visited_at(line, i);
  return v != kUnvisited && v <= static_cast<std::int64_t>(n);
}

inline std::string at_step(std::size_t n, const std::string& what) {
  std::ostringstream os;
  os << "step " << n << ": " << what;
  return os.str();
}

// Unvisited points inside the explored range [a_n, b_n], per line, kept as
// the walk advances. Points leave only by being visited.
class HoleTracker {
 public:
  HoleTracker(const Realization& real, const Trajectory& traj) : real_(&real), traj_(&traj) {
    lo_ = hi_ = traj.start.u;
    for (int l = 0; l < 2; ++l) {
      const auto& pts = real.line(l);
      const auto li = static_cast<std::size_t>(l);
      left_[li] = static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), lo_) - pts.begin());
      right_[li] = static_cast<std::size_t>(std::upper_bound(pts.begin(), pts.end(), hi_) - pts.begin());
      for (std::size_t i = left_[li]; i < right_[li]; ++i) add(l, i, 0);
    }
  }

  // Advances to time n (S_n just visited) and returns the newly added holes.
  std::vector<Site> advance(std::size_t n) {
    std::vector<Site> added;
    const Site& here = traj_->at(n);
    holes_[static_cast<std::size_t>(here.line)].erase(here.u);
    lo_ = std::min(lo_, here.u);
    hi_ = std::max(hi_, here.u);
    for (int l = 0; l < 2; ++l) {
      const auto& pts = real_->line(l);
      const auto li = static_cast<std::size_t>(l);
      while (left_[li] > 0 && pts[left_[li] - 1] >= lo_) {
        --left_[li];
        if (add(l, left_[li], n)) added.push_back({pts[left_[li]], l});
      }
      while (right_[li] < pts.size() && pts[right_[li]] <= hi_) {
        if (add(l, right_[li], n)) added.push_back({pts[right_[li]], l});
        ++right_[li];
      }
    }
    return added;
  }

  [[nodiscard]] const std::set<double>& holes(int line) const {
    return holes_[static_cast<std::size_t>(line)];
  }
  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }

 private:
  bool add(int line, std::size_t i, std::size_t n) {
    if (visited_by(*traj_, line, i, n)) return false;
    holes_[static_cast<std::size_t>(line)].insert(real_->line(line)[i]);
    return true;
  }

  const Realization* real_;
  const Trajectory* traj_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::array<std::size_t, 2> left_{};
  std::array<std::size_t, 2> right_{};
  std::array<std::set<double>, 2> holes_;
};

inline std::optional<double> below(const std::set<double>& s, double x) {
  auto it = s.lower_bound(x);
  if (it == s.begin()) return std::nullopt;
  return *std::prev(it);
}

inline std::optional<double> above(const std::set<double>& s, double x) {
  auto it = s.upper_bound(x);
  if (it == s.end()) return std::nullopt;
  return *it;
}

inline std::optional<double> at_or_below(const std::set<double>& s, double x) {
  auto it = s.upper_bound(x);
  if (it == s.begin()) return std::nullopt;
  return *std::prev(it);
}

inline std::optional<double> at_or_above(const std::set<double>& s, double x) {
  auto it = s.lower_bound(x);
  if (it == s.end()) return std::nullopt;
  return *it;
}

}  // namespace detail

/// Part (a): at every time n, two unvisited points on different lines inside
/// the explored range [a_n, b_n] are more than r apart.
inline LemmaVerdict check_lemma_distance_a(const Realization& real, const Trajectory& traj) {
  LemmaVerdict v;
  if (real.space().kind() != SpaceKind::ParallelLines) return v;
  const double r = real.space().r();
  detail::HoleTracker holes(real, traj);
  for (std::size_t n = 1; n <= traj.size(); ++n) {
    for (const Site& y : holes.advance(n)) {
      const auto& other = holes.holes(1 - y.line);
      for (auto x : {detail::below(other, y.u), detail::above(other, y.u)}) {
        if (!x) continue;
        ++v.checked;
        if (!(std::abs(y.u - *x) > r)) {
          v.fail(detail::at_step(n, "unvisited cross-line pair within r"));
        }
      }
    }
  }
  return v;
}

/// Part (b): seen from z = S_n, remaining points inside the explored range
/// get strictly farther as they get farther from z in abscissa, for every
/// pair x < y <= z (and mirrored, z <= y < x).
inline LemmaVerdict check_lemma_distance_b(const Realization& real, const Trajectory& traj) {
  LemmaVerdict v;
  if (real.space().kind() != SpaceKind::ParallelLines) return v;
  const Space& space = real.space();
  detail::HoleTracker holes(real, traj);
  std::vector<Site> side;
  for (std::size_t n = 1; n <= traj.size(); ++n) {
    holes.advance(n);
    const Site z = traj.at(n);
    for (int dir : {-1, 1}) {
      side.clear();
      for (int l = 0; l < 2; ++l) {
        const auto& h = holes.holes(l);
        if (dir < 0) {
          for (auto it = h.begin(); it != h.end() && *it <= z.u; ++it) side.push_back({*it, l});
        } else {
          for (auto it = h.lower_bound(z.u); it != h.end(); ++it) side.push_back({*it, l});
        }
      }
      // Nearest abscissa to z first.
      std::sort(side.begin(), side.end(), [dir](const Site& a, const Site& b) {
        return dir < 0 ? a.u > b.u : a.u < b.u;
      });
      double nearer_max = -1.0;
      for (std::size_t i = 0; i < side.size();) {
        std::size_t j = i;
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (; j < side.size() && side[j].u == side[i].u; ++j) {
          const double d = distance(space, z, side[j]);
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
        if (nearer_max >= 0.0) {
          ++v.checked;
          if (!(lo > nearer_max)) v.fail(detail::at_step(n, "remaining point not farther than a nearer one"));
        }
        nearer_max = std::max(nearer_max, hi);
        i = j;
      }
    }
  }
  return v;
}

namespace detail {

// Range maximum over visit steps, unvisited counted as +infinity.
class VisitRangeMax {
 public:
  explicit VisitRangeMax(const std::vector<std::int64_t>& steps) {
    const std::size_t n = steps.size();
    std::vector<std::int64_t> base(n);
    for (std::size_t i = 0; i < n; ++i) {
      base[i] = steps[i] == kUnvisited ? std::numeric_limits<std::int64_t>::max() : steps[i];
    }
    table_.push_back(std::move(base));
    for (std::size_t w = 1; (std::size_t{1} << w) <= n; ++w) {
      const auto& prev = table_.back();
      std::vector<std::int64_t> next(n - (std::size_t{1} << w) + 1);
      for (std::size_t i = 0; i < next.size(); ++i) {
        next[i] = std::max(prev[i], prev[i + (std::size_t{1} << (w - 1))]);
      }
      table_.push_back(std::move(next));
    }
  }

  // Max over [i, j); requires i < j.
  [[nodiscard]] std::int64_t query(std::size_t i, std::size_t j) const {
    std::size_t w = 0;
    while ((std::size_t{1} << (w + 1)) <= j - i) ++w;
    return std::max(table_[w][i], table_[w][j - (std::size_t{1} << w)]);
  }

 private:
  std::vector<std::vector<std::int64_t>> table_;
};

}  // namespace detail

/// Which steps to c count as satisfying the hypothesis a <= c <= b.
/// Literal also admits c equal to the running minimum, where the walk is at
/// the frontier; the property fails there (see tests), so checks default to
/// Interior, which requires a < c.
enum class EmptyIntervalMode { Interior, Literal };

/// Empty-interval property: when the walk steps leftwards to c inside the
/// explored range, every point in (c, M] is visited before both copies at c
/// are, where M is the largest shadow reached by then.
inline LemmaVerdict check_empty_interval(const Realization& real, const Trajectory& traj,
                                         EmptyIntervalMode mode = EmptyIntervalMode::Interior) {
  LemmaVerdict v;
  if (real.space().kind() == SpaceKind::IntersectingLines) return v;
  const std::array<detail::VisitRangeMax, 2> rmq{detail::VisitRangeMax(traj.visit_step[0]),
                                                 detail::VisitRangeMax(traj.visit_step[1])};
  std::vector<double> running_max(traj.size() + 1);
  double lo = traj.start.u;
  running_max[0] = traj.start.u;
  for (std::size_t n = 1; n <= traj.size(); ++n) running_max[n] = std::max(running_max[n - 1], traj.shadow(n));
  for (std::size_t step = 1; step <= traj.size(); ++step) {
    const double prev = traj.shadow(step - 1);
    const double c = traj.shadow(step);
    const bool applies = prev >= c && (mode == EmptyIntervalMode::Literal ? lo <= c : lo < c);
    lo = std::min(lo, c);
    if (!applies) continue;
    const auto tr = both_copies_time(real, traj, c);
    if (!tr) {
      ++v.unknown;
      continue;
    }
    const double M = running_max[*tr];
    ++v.checked;
    for (int l = 0; l < 2; ++l) {
      const auto& pts = real.line(l);
      const auto i = static_cast<std::size_t>(std::upper_bound(pts.begin(), pts.end(), c) - pts.begin());
      const auto j = static_cast<std::size_t>(std::upper_bound(pts.begin(), pts.end(), M) - pts.begin());
      if (i >= j) continue;
      if (rmq[static_cast<std::size_t>(l)].query(i, j) >= static_cast<std::int64_t>(*tr)) {
        v.fail(detail::at_step(step, "point in (c, M] still unvisited when both copies at c are"));
        break;
      }
    }
  }
  return v;
}

/// The trajectory of the mirrored realization, step for step.
inline Trajectory mirror_trajectory(const Realization& real, const Trajectory& traj) {
  Trajectory out = traj;
  out.start.u = -traj.start.u;
  for (Site& s : out.steps) s.u = -s.u;
  for (std::size_t k = 0; k < out.refs.size(); ++k) {
    const auto size = real.line(out.refs[k].line).size();
    out.refs[k].index = static_cast<std::uint32_t>(size - 1 - out.refs[k].index);
  }
  for (auto& vs : out.visit_step) std::reverse(vs.begin(), vs.end());
  return out;
}

/// Empty-interval check on the walk and on its mirror image.
inline LemmaVerdict check_empty_interval_both(const Realization& real, const Trajectory& traj,
                                              EmptyIntervalMode mode = EmptyIntervalMode::Interior) {
  LemmaVerdict v = check_empty_interval(real, traj, mode);
  v += check_empty_interval(mirror_realization(real), mirror_trajectory(real, traj), mode);
  return v;
}

inline bool dx_within_bounds(const DxRecord& rec) {
  if (rec.degenerate) return rec.value == 0.0;
  if (rec.context == DxContext::Thinned) return rec.value > 0.0 && rec.value <= rec.x;
  return rec.value >= 0.0 && rec.value <= rec.x;
}

/// D_x bounds at every positive abscissa x (x + s for shifted lines), plus a
/// monotonicity probe: inserting one more remaining point never raises D_x.
inline LemmaVerdict check_dx_bounds(const Realization& real, const Trajectory& traj) {
  LemmaVerdict v;
  if (real.space().kind() == SpaceKind::IntersectingLines) return v;
  const HittingTimes hits(traj);
  const bool shifted = real.spec.construction == Construction::ParallelShifted;
  const double s = shifted ? *real.spec.shift_s : 0.0;
  const auto& xs = shifted ? real.lines[0] : real.base_points;
  const DxContext ctx = shifted ? DxContext::Shifted : DxContext::Thinned;
  for (double x : xs) {
    const double at = x + s;
    if (!(at > 0.0)) continue;
    const auto rec = compute_Dx(real, traj, at, hits, ctx);
    if (!rec) {
      ++v.unknown;
      continue;
    }
    ++v.checked;
    if (!dx_within_bounds(*rec)) {
      v.fail("D_x out of bounds at x=" + std::to_string(at));
      continue;
    }
    if (rec->degenerate) continue;
    const auto& z = rec->remaining_z;
    std::size_t widest = 1;
    for (std::size_t j = 1; j < z.size(); ++j) {
      if (z[j] - z[j - 1] > z[widest] - z[widest - 1]) widest = j;
    }
    std::vector<double> more = z;
    more.insert(more.begin() + static_cast<std::ptrdiff_t>(widest), (z[widest] + z[widest - 1]) / 2.0);
    if (dx_formula(more, at) > rec->value) v.fail("inserting a remaining point raised D_x");
  }
  return v;
}

/// Whenever A_k occurs, the walk enters (-inf, 0) before [X_{k+1}, inf).
inline LemmaVerdict check_povratak(const std::vector<EventRecord>& events) {
  LemmaVerdict v;
  for (const EventRecord& e : events) {
    if (e.family != EventFamily::AkThinned && e.family != EventFamily::AkShifted) continue;
    if (!e.occurred()) continue;
    const auto neg_first = hits_before(e.witness.t_neg, e.witness.t_next);
    if (!neg_first) {
      ++v.unknown;
      continue;
    }
    ++v.checked;
    if (!*neg_first) v.fail("A_" + std::to_string(e.index) + " occurred but [X_{k+1}, inf) was reached first");
  }
  return v;
}

inline LemmaVerdict check_povratak(const Realization& real, const Trajectory& traj) {
  return check_povratak(detect_A_events(real, traj));
}

/// No C_n at any j_n reached by the walk.
inline LemmaVerdict check_no_C_at_finite_j(const Trajectory& traj, const Space& space) {
  LemmaVerdict v;
  if (space.kind() != SpaceKind::IntersectingLines) return v;
  for (const UVEntry& e : extract_UV_sequences(traj, space)) {
    ++v.checked;
    if (!e.b_event) v.fail("C_" + std::to_string(e.n) + " at j=" + std::to_string(e.j));
  }
  return v;
}

/// Per-cluster traversal verdict.
struct ClusterVerdict {
  std::size_t cluster = 0;
  std::ptrdiff_t label = 0;
  Verdict consecutive = Verdict::Unknown;
  std::int64_t first_step = 0;
  std::int64_t last_step = 0;
  /// Entered at an indented leading point (shifted lines only).
  bool indented_entry = false;
  /// Entered at the unindented lead and left before finishing it.
  bool early_exit = false;
};

namespace detail {

// Steps at which the 2|C| points of a cluster were visited, for layouts where
// index i on line 0 and line 1 belong to the same base point.
inline Verdict consecutive_visits(const Trajectory& traj, const ClusterRange& range, std::int64_t& first,
                                  std::int64_t& last) {
  first = std::numeric_limits<std::int64_t>::max();
  last = 0;
  std::size_t seen = 0;
  for (int l = 0; l < 2; ++l) {
    for (std::size_t i = range.begin; i < range.end; ++i) {
      const std::int64_t s = traj.visited_at(l, i);
      if (s == kUnvisited) continue;
      ++seen;
      first = std::min(first, s);
      last = std::max(last, s);
    }
  }
  const auto total = static_cast<std::int64_t>(2 * range.size());
  if (seen == 0) return Verdict::Unknown;
  if (seen == static_cast<std::size_t>(total)) return last - first == total - 1 ? Verdict::True : Verdict::False;
  // Some copies still unvisited: decided only once the walk moved on.
  if (last - first >= total || static_cast<std::int64_t>(traj.size()) >= first + total - 1) {
    return Verdict::False;
  }
  return Verdict::Unknown;
}

}  // namespace detail

/// Cluster-by-cluster traversal for duplicated lines: each entered cluster
/// other than the origin's is visited in 2|C| consecutive steps, starting and
/// ending at its lead abscissa on opposite lines.
inline std::vector<ClusterVerdict> check_cluster_consecutive(const Realization& real, const Trajectory& traj) {
  std::vector<ClusterVerdict> out;
  if (real.spec.construction != Construction::ParallelDuplicated) return out;
  const ClusterDecomposition dec = decompose_clusters(real.base_points, real.space().r());
  for (std::size_t c = 0; c < dec.size(); ++c) {
    if (c == dec.origin_cluster) continue;
    ClusterVerdict cv;
    cv.cluster = c;
    cv.label = dec.label(c);
    const ClusterRange& range = dec.clusters[c];
    bool entered = false;
    for (int l = 0; l < 2 && !entered; ++l) {
      for (std::size_t i = range.begin; i < range.end; ++i) entered = entered || traj.visited_at(l, i) != kUnvisited;
    }
    if (!entered) continue;
    cv.consecutive = detail::consecutive_visits(traj, range, cv.first_step, cv.last_step);
    if (cv.consecutive == Verdict::True) {
      const Site& a = traj.at(static_cast<std::size_t>(cv.first_step));
      const Site& b = traj.at(static_cast<std::size_t>(cv.last_step));
      const double lead = dec.lead(c);
      if (!(a.u == lead && b.u == lead && a.line != b.line)) cv.consecutive = Verdict::False;
    }
    out.push_back(cv);
  }
  return out;
}

/// Shifted lines: clusters entered at their indented leading point are
/// traversed in 2|C| consecutive steps. Clusters with points on both sides
/// of the origin are skipped.
inline std::vector<ClusterVerdict> check_indented_entry(const Realization& real, const Trajectory& traj) {
  std::vector<ClusterVerdict> out;
  if (real.spec.construction != Construction::ParallelShifted) return out;
  const double s = *real.spec.shift_s;
  const double r = real.space().r();
  const ClusterDecomposition dec =
      mark_leading_and_indented(decompose_clusters(real.lines[0], std::sqrt(r * r + s * s)), s);
  for (std::size_t c = 0; c < dec.size(); ++c) {
    if (dec.straddles_origin[c]) continue;
    const ClusterRange& range = dec.clusters[c];
    std::optional<Site> entry;
    std::int64_t entry_step = std::numeric_limits<std::int64_t>::max();
    for (int l = 0; l < 2; ++l) {
      for (std::size_t i = range.begin; i < range.end; ++i) {
        const std::int64_t st = traj.visited_at(l, i);
        if (st != kUnvisited && st < entry_step) {
          entry_step = st;
          entry = Site{real.line(l)[i], l};
        }
      }
    }
    if (!entry) continue;
    ClusterVerdict cv;
    cv.cluster = c;
    cv.label = dec.label(c);
    const Verdict consecutive = detail::consecutive_visits(traj, range, cv.first_step, cv.last_step);
    const int lead_line = dec.indented_flags[c][0] ? 0 : 1;
    const Site indented = dec.leading_sites[c][static_cast<std::size_t>(lead_line)];
    const Site unindented = dec.leading_sites[c][static_cast<std::size_t>(1 - lead_line)];
    cv.indented_entry = *entry == indented;
    cv.consecutive = consecutive;
    cv.early_exit = *entry == unindented && consecutive == Verdict::False;
    out.push_back(cv);
  }
  return out;
}

inline LemmaVerdict tally(const std::vector<ClusterVerdict>& verdicts, bool indented_only) {
  LemmaVerdict v;
  for (const ClusterVerdict& cv : verdicts) {
    if (indented_only && !cv.indented_entry) continue;
    if (cv.consecutive == Verdict::Unknown) {
      ++v.unknown;
      continue;
    }
    ++v.checked;
    if (cv.consecutive == Verdict::False) {
      v.fail("cluster " + std::to_string(cv.label) + " not traversed consecutively");
    }
  }
  return v;
}

struct AlignmentReport {
  bool aligned = true;
  /// Clusters compared in entry order.
  std::size_t compared = 0;
  std::size_t full_crossings = 0;
  std::size_t reduced_crossings = 0;
  std::size_t origin_cluster_crossings = 0;
  std::string detail;
};

/// Duplicated lines: after leaving the origin cluster, the order in which the
/// walk enters clusters matches the greedy walk on the remaining cluster
/// leads, and the crossings of the two walks agree over the compared span.
inline AlignmentReport check_reduced_alignment(const Realization& real, const Trajectory& traj) {
  AlignmentReport rep;
  if (real.spec.construction != Construction::ParallelDuplicated || traj.size() == 0) return rep;
  const ClusterDecomposition dec = decompose_clusters(real.base_points, real.space().r());
  const std::size_t origin = *dec.origin_cluster;
  auto cluster_at = [&](std::size_t n) { return dec.cluster_of(traj.refs[n - 1].index); };

  std::size_t f = 1;
  while (f <= traj.size() && cluster_at(f) == origin) ++f;
  if (f > traj.size()) return rep;
  for (std::size_t n = f; n <= traj.size(); ++n) {
    if (cluster_at(n) == origin) {
      rep.aligned = false;
      rep.detail = "origin cluster revisited at step " + std::to_string(n);
      return rep;
    }
  }

  // Full walk: cluster entry order and entry steps after the exit.
  std::vector<std::size_t> order;
  std::vector<std::size_t> entry_steps;
  std::vector<char> seen(dec.size(), 0);
  for (std::size_t n = f; n <= traj.size(); ++n) {
    const std::size_t c = cluster_at(n);
    if (!seen[c]) {
      seen[c] = 1;
      order.push_back(c);
      entry_steps.push_back(n);
    }
  }

  Realization leads;
  leads.spec = ProcessSpec::single_line(real.space().window_L(), real.spec.rate_lambda);
  leads.seed = real.seed;
  leads.coverage = real.coverage;
  std::vector<std::size_t> lead_cluster;
  for (std::size_t c = 0; c < dec.size(); ++c) {
    if (c == origin) continue;
    leads.lines[0].push_back(dec.lead(c));
    lead_cluster.push_back(c);
  }
  leads.base_points = leads.lines[0];
  const Site exit{traj.shadow(f - 1), 0};
  const Trajectory reduced = run_walk(leads, exit);

  rep.compared = std::min(order.size(), reduced.size());
  for (std::size_t i = 0; i < rep.compared; ++i) {
    if (lead_cluster[reduced.refs[i].index] != order[i]) {
      rep.aligned = false;
      rep.detail = "entry " + std::to_string(i) + " differs from the reduced walk";
      return rep;
    }
  }
  if (rep.compared == 0) return rep;

  std::vector<double> full;
  for (std::size_t n = f - 1; n <= entry_steps[rep.compared - 1]; ++n) full.push_back(traj.shadow(n));
  std::vector<double> red{exit.u};
  for (std::size_t i = 1; i <= rep.compared; ++i) red.push_back(reduced.shadow(i));
  std::vector<double> head;
  for (std::size_t n = 1; n < f; ++n) head.push_back(traj.shadow(n));
  rep.full_crossings = crossings_in(full).size();
  rep.reduced_crossings = crossings_in(red).size();
  rep.origin_cluster_crossings = crossings_in(head).size();
  if (rep.full_crossings != rep.reduced_crossings) {
    rep.aligned = false;
    rep.detail = "crossing counts differ between full and reduced walk";
  }
  return rep;
}

/// Every lemma checker that applies to the realization's construction,
/// keyed by suite name.
struct LemmaSuiteCounts {
  LemmaVerdict distance_a;
  LemmaVerdict distance_b;
  LemmaVerdict empty_interval;
  LemmaVerdict dx_bounds;
  LemmaVerdict povratak;
  LemmaVerdict cluster_consecutive;
  LemmaVerdict indented_entry;
  LemmaVerdict reduced_alignment;
  LemmaVerdict no_c;

  [[nodiscard]] std::size_t failures() const {
    return distance_a.violations + distance_b.violations + empty_interval.violations + dx_bounds.violations +
           povratak.violations + cluster_consecutive.violations + indented_entry.violations +
           reduced_alignment.violations + no_c.violations;
  }
  [[nodiscard]] std::size_t checks() const {
    return distance_a.checked + distance_b.checked + empty_interval.checked + dx_bounds.checked +
           povratak.checked + cluster_consecutive.checked + indented_entry.checked + reduced_alignment.checked +
           no_c.checked;
  }

  LemmaSuiteCounts& operator+=(const LemmaSuiteCounts& o) {
    distance_a += o.distance_a;
    distance_b += o.distance_b;
    empty_interval += o.empty_interval;
    dx_bounds += o.dx_bounds;
    povratak += o.povratak;
    cluster_consecutive += o.cluster_consecutive;
    indented_entry += o.indented_entry;
    reduced_alignment += o.reduced_alignment;
    no_c += o.no_c;
    return *this;
  }
};

inline LemmaSuiteCounts run_lemma_checks(const Realization& real, const Trajectory& traj,
                                         const std::vector<EventRecord>& events) {
  LemmaSuiteCounts out;
  out.distance_a = check_lemma_distance_a(real, traj);
  out.distance_b = check_lemma_distance_b(real, traj);
  out.empty_interval = check_empty_interval_both(real, traj);
  out.dx_bounds = check_dx_bounds(real, traj);
  out.povratak = check_povratak(events);
  out.cluster_consecutive = tally(check_cluster_consecutive(real, traj), false);
  out.indented_entry = tally(check_indented_entry(real, traj), true);
  if (real.spec.construction == Construction::ParallelDuplicated) {
    const AlignmentReport rep = check_reduced_alignment(real, traj);
    ++out.reduced_alignment.checked;
    if (!rep.aligned) out.reduced_alignment.fail(rep.detail);
  }
  out.no_c = check_no_C_at_finite_j(traj, real.space());
  return out;
}

}  // namespace gwlab
