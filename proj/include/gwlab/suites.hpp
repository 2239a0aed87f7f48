#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gwlab/analysis.hpp"
#include "gwlab/processes.hpp"
#include "gwlab/walk.hpp"

namespace gwlab {

/// Property suites driven by `verify`. Each suite runs its checker over a
/// fixed set of specs (or a single caller-supplied spec) for `runs` seeds
/// per spec.
struct SuiteOptions {
  std::optional<std::size_t> runs;
  std::uint64_t seed = 0;
  std::optional<ProcessSpec> spec;
};

struct SuiteReport {
  std::string name;
  std::size_t realizations = 0;
  LemmaVerdict verdict;
  /// Extra per-suite counters, printed as "key: value".
  std::vector<std::pair<std::string, std::size_t>> counters;

  [[nodiscard]] bool ok() const { return verdict.ok(); }
};

struct SuiteInfo {
  std::string_view name;
  std::string_view checks;
  std::size_t default_runs;
};

inline const std::vector<SuiteInfo>& suite_catalog() {
  static const std::vector<SuiteInfo> catalog = {
      {"oracle-equivalence", "run_walk vs run_walk_naive, all constructions", 1000},
      {"prefix-stability", "coupled L/2 vs L walks, truncated walk is a strict prefix", 1000},
      {"lemma-distance", "check_lemma_distance_a, check_lemma_distance_b", 1000},
      {"empty-interval", "check_empty_interval on the walk and its mirror", 1000},
      {"cluster-consecutive", "check_cluster_consecutive, check_reduced_alignment, r in {0.5, 1, 2}", 1000},
      {"indented-entry", "check_indented_entry, early-exit count", 1000},
      {"povratak", "check_povratak on A_k events", 2000},
      {"dx-bounds", "check_dx_bounds", 1000},
      {"uv-no-C", "check_no_C_at_finite_j", 1000},
  };
  return catalog;
}

inline const SuiteInfo* find_suite(std::string_view name) {
  for (const SuiteInfo& s : suite_catalog()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace detail {

inline std::vector<ProcessSpec> default_suite_specs(std::string_view name) {
  constexpr double L = 50.0;
  const double half_pi = std::numbers::pi / 2;
  if (name == "oracle-equivalence" || name == "prefix-stability") {
    return {ProcessSpec::single_line(L), ProcessSpec::intersecting(half_pi, L), ProcessSpec::duplicated(1.0, L),
            ProcessSpec::thinned(0.5, 1.0, L), ProcessSpec::shifted(0.3, 1.0, L)};
  }
  if (name == "lemma-distance") {
    return {ProcessSpec::duplicated(1.0, L), ProcessSpec::thinned(0.5, 1.0, L), ProcessSpec::shifted(0.3, 1.0, L)};
  }
  if (name == "empty-interval") {
    return {ProcessSpec::single_line(L), ProcessSpec::duplicated(1.0, L), ProcessSpec::thinned(0.5, 1.0, L),
            ProcessSpec::shifted(0.3, 1.0, L)};
  }
  if (name == "cluster-consecutive") {
    return {ProcessSpec::duplicated(0.5, L), ProcessSpec::duplicated(1.0, L), ProcessSpec::duplicated(2.0, L)};
  }
  if (name == "indented-entry") return {ProcessSpec::shifted(0.3, 1.0, L)};
  if (name == "povratak") return {ProcessSpec::thinned(0.5, 1.0, L), ProcessSpec::shifted(0.3, 1.0, L)};
  if (name == "dx-bounds") return {ProcessSpec::thinned(0.5, 1.0, L), ProcessSpec::shifted(0.3, 1.0, L)};
  if (name == "uv-no-C") return {ProcessSpec::intersecting(half_pi, L), ProcessSpec::intersecting(0.6, L)};
  return {};
}

inline void add_counter(SuiteReport& rep, const std::string& key, std::size_t n) {
  for (auto& [k, v] : rep.counters) {
    if (k == key) {
      v += n;
      return;
    }
  }
  rep.counters.emplace_back(key, n);
}

inline void check_one(std::string_view name, const Realization& real, SuiteReport& rep) {
  const Trajectory t = run_walk(real, default_start());
  if (name == "oracle-equivalence") {
    const Trajectory naive = run_walk_naive(real, default_start());
    ++rep.verdict.checked;
    if (!same_steps(t, naive) || t.stop_reason != naive.stop_reason) {
      rep.verdict.fail("seed " + std::to_string(real.seed) + ": engines disagree");
    }
  } else if (name == "prefix-stability") {
    const Realization small = couple_restrict(real, real.space().window_L() / 2.0);
    const Trajectory ts = run_walk(small, default_start());
    ++rep.verdict.checked;
    const bool strict = ts.stop_reason != StopReason::Truncated || t.size() > ts.size();
    if (!is_prefix_of(ts, t) || !strict) {
      rep.verdict.fail("seed " + std::to_string(real.seed) + ": smaller window is not a strict prefix");
    }
  } else if (name == "lemma-distance") {
    rep.verdict += check_lemma_distance_a(real, t);
    rep.verdict += check_lemma_distance_b(real, t);
  } else if (name == "empty-interval") {
    rep.verdict += check_empty_interval_both(real, t);
  } else if (name == "cluster-consecutive") {
    rep.verdict += tally(check_cluster_consecutive(real, t), false);
    if (real.spec.construction == Construction::ParallelDuplicated) {
      const AlignmentReport a = check_reduced_alignment(real, t);
      ++rep.verdict.checked;
      if (!a.aligned) rep.verdict.fail("seed " + std::to_string(real.seed) + ": " + a.detail);
    }
  } else if (name == "indented-entry") {
    const auto verdicts = check_indented_entry(real, t);
    rep.verdict += tally(verdicts, true);
    std::size_t early = 0;
    for (const ClusterVerdict& cv : verdicts) early += cv.early_exit ? 1 : 0;
    add_counter(rep, "early-exit clusters", early);
    add_counter(rep, "realizations with early exit", early > 0 ? 1 : 0);
  } else if (name == "povratak") {
    const auto events = detect_A_events(real, t);
    std::size_t occurred = 0;
    for (const EventRecord& e : events) {
      if ((e.family == EventFamily::AkThinned || e.family == EventFamily::AkShifted) && e.occurred()) ++occurred;
    }
    add_counter(rep, "A_k occurrences", occurred);
    rep.verdict += check_povratak(events);
  } else if (name == "dx-bounds") {
    rep.verdict += check_dx_bounds(real, t);
  } else if (name == "uv-no-C") {
    rep.verdict += check_no_C_at_finite_j(t, real.space());
  }
}

}  // namespace detail

/// Runs a named suite. Throws ValidationError for an unknown name.
inline SuiteReport run_suite(std::string_view name, const SuiteOptions& opts) {
  const SuiteInfo* info = find_suite(name);
  if (!info) throw ValidationError("unknown suite '" + std::string(name) + "'");
  SuiteReport rep;
  rep.name = std::string(name);
  const std::size_t runs = opts.runs.value_or(info->default_runs);
  const std::vector<ProcessSpec> specs = opts.spec ? std::vector<ProcessSpec>{*opts.spec}
                                                   : detail::default_suite_specs(name);
  for (const ProcessSpec& spec : specs) {
    spec.validate();
    for (std::size_t i = 0; i < runs; ++i) {
      const Realization real = generate(spec, derive_seed(opts.seed, i));
      detail::check_one(name, real, rep);
      ++rep.realizations;
    }
  }
  return rep;
}

}  // namespace gwlab
