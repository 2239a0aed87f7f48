#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwlab/analysis.hpp"
#include "gwlab/config.hpp"
#include "gwlab/processes.hpp"
#include "gwlab/rng.hpp"
#include "gwlab/walk.hpp"

namespace gwlab {

/// Highest B_n index tabulated for intersecting lines.
inline constexpr int kMaxBnIndex = 15;

struct FamilyOutcome {
  std::vector<int> occurred;
  std::vector<int> unknown;
  std::size_t evaluated = 0;
};

/// One replication. The first block mirrors the CSV columns; the rest is
/// kept in memory for aggregation only.
struct RunSummary {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  Construction construction = Construction::SingleLinePoisson;
  double lambda = 1.0;
  std::optional<double> r;
  std::optional<double> s;
  std::optional<double> p;
  std::optional<double> alpha;
  double L = 0.0;
  std::size_t n_points = 0;
  std::size_t n_steps = 0;
  StopReason stop_reason = StopReason::Exhausted;
  std::size_t crossings = 0;
  std::optional<std::size_t> halfline_changes;
  std::optional<std::size_t> a_events;
  std::optional<std::size_t> lemma_failures;

  double max_shadow = 0.0;
  double min_shadow = 0.0;
  std::map<EventFamily, FamilyOutcome> events;
  std::optional<LemmaSuiteCounts> lemmas;
  /// Positive-side cluster lead gaps (duplicated lines), pooled for the A_m bound.
  std::vector<double> lead_gaps;
  /// Per statistic: "exact", "prefix" (a lower bound from a truncated walk)
  /// or "partial" (some verdicts unknown).
  std::map<std::string, std::string> exactness;
};

namespace detail {

inline FamilyOutcome& outcome(RunSummary& s, EventFamily f) { return s.events[f]; }

inline void record_events(RunSummary& out, const Realization& real, const Trajectory& traj) {
  if (real.spec.construction == Construction::IntersectingIndependent) {
    const auto uv = extract_UV_sequences(traj, real.space());
    FamilyOutcome& b = outcome(out, EventFamily::BnIntersect);
    FamilyOutcome& c = outcome(out, EventFamily::CnIntersect);
    for (const UVEntry& e : uv) (e.b_event ? b : c).occurred.push_back(static_cast<int>(e.n));
    b.evaluated = c.evaluated = static_cast<std::size_t>(kMaxBnIndex);
    // Beyond the last j_n found, a truncated walk leaves B_n undetermined.
    if (traj.stop_reason == StopReason::Truncated) {
      for (int n = static_cast<int>(uv.size()) + 1; n <= kMaxBnIndex; ++n) {
        b.unknown.push_back(n);
        c.unknown.push_back(n);
      }
    }
    std::erase_if(b.occurred, [](int n) { return n > kMaxBnIndex; });
    std::erase_if(c.occurred, [](int n) { return n > kMaxBnIndex; });
    return;
  }
  for (const EventRecord& e : detect_A_events(real, traj)) {
    FamilyOutcome& fo = outcome(out, e.family);
    ++fo.evaluated;
    if (e.verdict == Verdict::True) fo.occurred.push_back(e.index);
    if (e.verdict == Verdict::Unknown) fo.unknown.push_back(e.index);
  }
}

}  // namespace detail

/// Runs the truncation-safe walk on `real` and computes the requested
/// statistic families.
inline RunSummary summarize_realization(const Realization& real, std::size_t run_index,
                                        const std::set<Statistic>& stats) {
  const Trajectory traj = run_walk(real, default_start());
  RunSummary out;
  out.run_index = run_index;
  out.seed = real.seed;
  out.construction = real.spec.construction;
  out.lambda = real.spec.rate_lambda;
  out.r = real.space().separation_r();
  out.s = real.spec.shift_s;
  out.p = real.spec.thinning_p;
  out.alpha = real.space().alpha();
  out.L = real.space().window_L();
  out.n_points = real.point_count();
  out.n_steps = traj.size();
  out.stop_reason = traj.stop_reason;
  const bool truncated = traj.stop_reason == StopReason::Truncated;
  out.max_shadow = out.min_shadow = traj.start.u;
  for (const Site& s : traj.steps) {
    out.max_shadow = std::max(out.max_shadow, s.u);
    out.min_shadow = std::min(out.min_shadow, s.u);
  }
  out.exactness["shadow_extent"] = truncated ? "prefix" : "exact";

  // Crossings are always computed; the CSV column is not optional.
  out.crossings = detect_crossings(traj).size();
  out.exactness["crossings"] = truncated ? "prefix" : "exact";
  if (stats.contains(Statistic::HalflineChanges) && real.space().kind() == SpaceKind::IntersectingLines) {
    out.halfline_changes = extract_halfline_changes(traj, real.space()).size();
    out.exactness["halfline_changes"] = truncated ? "prefix" : "exact";
  }
  if (stats.contains(Statistic::Events)) {
    detail::record_events(out, real, traj);
    std::size_t occurred = 0;
    bool unknown = false;
    for (const auto& [family, fo] : out.events) {
      if (family != EventFamily::CnIntersect) occurred += fo.occurred.size();
      unknown = unknown || !fo.unknown.empty();
    }
    if (!out.events.empty()) out.a_events = occurred;
    out.exactness["events"] = unknown ? "partial" : "exact";
    if (real.spec.construction == Construction::ParallelDuplicated) out.lead_gaps = positive_lead_gaps(real);
  }
  if (stats.contains(Statistic::Lemmas)) {
    out.lemmas = run_lemma_checks(real, traj, detect_A_events(real, traj));
    out.lemma_failures = out.lemmas->failures();
    std::size_t unknown = 0;
    for (const LemmaVerdict* v : {&out.lemmas->empty_interval, &out.lemmas->dx_bounds, &out.lemmas->povratak,
                                  &out.lemmas->cluster_consecutive, &out.lemmas->indented_entry}) {
      unknown += v->unknown;
    }
    out.exactness["lemmas"] = unknown > 0 ? "partial" : "exact";
  }
  return out;
}

/// Summaries of replication `index`: one per window, smallest first.
inline std::vector<RunSummary> run_replication(const ExperimentConfig& cfg, std::size_t index) {
  const std::uint64_t seed = derive_seed(cfg.base_seed, index);
  const Realization full = generate(cfg.generation_spec(), seed);
  std::vector<RunSummary> out;
  if (!cfg.coupled()) {
    out.push_back(summarize_realization(full, index, cfg.statistics));
    return out;
  }
  for (std::size_t w = 0; w + 1 < cfg.windows.size(); ++w) {
    out.push_back(summarize_realization(couple_restrict(full, cfg.windows[w]), index, cfg.statistics));
  }
  out.push_back(summarize_realization(full, index, cfg.statistics));
  return out;
}

inline unsigned resolve_workers(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("GWLAB_WORKERS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ValidationError("GWLAB_WORKERS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  if (cfg.workers) return *cfg.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs every replication (in parallel) and returns the summaries ordered by
/// (run_index, L). Any failed replication aborts with its index and seed.
inline std::vector<RunSummary> run_all(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<RunSummary>> slots(cfg.runs);
  std::vector<std::exception_ptr> errors(cfg.runs);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.runs; i = next++) {
      try {
        slots[i] = run_replication(cfg, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(cfg), cfg.runs));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  for (std::size_t i = 0; i < cfg.runs; ++i) {
    if (!errors[i]) continue;
    std::string what = "unknown error";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw std::runtime_error("run " + std::to_string(i) + " (seed " + std::to_string(derive_seed(cfg.base_seed, i)) +
                             ") failed: " + what);
  }
  std::vector<RunSummary> out;
  out.reserve(cfg.runs * std::max<std::size_t>(1, cfg.windows.size()));
  for (auto& s : slots) {
    for (auto& r : s) out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- aggregation

struct StatRow {
  std::string name;
  double L = 0.0;
  std::size_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

/// Empirical event frequency against its theoretical bound. `frequency`
/// counts known occurrences only; `frequency_upper` also counts unknown
/// verdicts as occurrences. `within` tests frequency against bound + 3
/// binomial standard errors of frequency.
struct BoundRow {
  std::string family;
  int index = 0;
  double L = 0.0;
  std::size_t runs = 0;
  std::size_t occurred = 0;
  std::size_t unknown = 0;
  double frequency = 0.0;
  double frequency_upper = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  double limit = 0.0;
  bool within = true;
};

struct GrowthRow {
  double L = 0.0;
  std::size_t runs = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double median = 0.0;
};

/// Paired one-sided sign test of crossings(largest L) > crossings(smallest L).
struct SignTest {
  double L_small = 0.0;
  double L_large = 0.0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t ties = 0;
  double p_value = 1.0;
};

struct LemmaTotals {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t unknown = 0;
};

struct EventTotals {
  std::size_t evaluated = 0;
  std::size_t occurred = 0;
  std::size_t unknown = 0;
};

struct AggregateReport {
  std::size_t rows = 0;
  std::size_t truncated = 0;
  std::vector<StatRow> stats;
  std::vector<BoundRow> bounds;
  std::vector<GrowthRow> growth;
  std::optional<SignTest> sign_test;
  std::map<std::string, LemmaTotals> lemmas;
  std::map<std::string, EventTotals> events;
};

/// Linear-interpolation quantile of sorted data (type 7).
inline double quantile_sorted(const std::vector<double>& v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline StatRow describe(std::string name, double L, std::vector<double> values) {
  StatRow row;
  row.name = std::move(name);
  row.L = L;
  row.count = values.size();
  if (values.empty()) return row;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  row.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - row.mean) * (v - row.mean);
  row.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  row.min = values.front();
  row.q25 = quantile_sorted(values, 0.25);
  row.median = quantile_sorted(values, 0.5);
  row.q75 = quantile_sorted(values, 0.75);
  row.max = values.back();
  return row;
}

/// P(X >= k) for X ~ Binomial(n, 1/2).
inline double binomial_upper_tail_half(std::size_t k, std::size_t n) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  double total = 0.0;
  const double log_half_n = static_cast<double>(n) * std::log(0.5);
  const double ln = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::size_t i = k; i <= n; ++i) {
    const double di = static_cast<double>(i);
    total += std::exp(ln - std::lgamma(di + 1.0) - std::lgamma(static_cast<double>(n) - di + 1.0) + log_half_n);
  }
  return std::min(1.0, total);
}

inline SignTest sign_test(const std::vector<double>& small, const std::vector<double>& large) {
  SignTest t;
  for (std::size_t i = 0; i < std::min(small.size(), large.size()); ++i) {
    if (large[i] > small[i]) ++t.positive;
    else if (large[i] < small[i]) ++t.negative;
    else ++t.ties;
  }
  t.p_value = binomial_upper_tail_half(t.positive, t.positive + t.negative);
  return t;
}

namespace detail {

inline std::vector<BoundRow> bound_rows(const std::vector<const RunSummary*>& rows, double L) {
  std::vector<BoundRow> out;
  if (rows.empty()) return out;
  const RunSummary& first = *rows.front();
  auto tabulate = [&](EventFamily family, int index, double bound) {
    BoundRow b;
    b.family = std::string(to_string(family));
    b.index = index;
    b.L = L;
    b.runs = rows.size();
    b.bound = bound;
    for (const RunSummary* s : rows) {
      auto it = s->events.find(family);
      if (it == s->events.end()) continue;
      const auto& fo = it->second;
      if (std::find(fo.occurred.begin(), fo.occurred.end(), index) != fo.occurred.end()) ++b.occurred;
      if (std::find(fo.unknown.begin(), fo.unknown.end(), index) != fo.unknown.end()) ++b.unknown;
    }
    const double n = static_cast<double>(b.runs);
    b.frequency = static_cast<double>(b.occurred) / n;
    b.frequency_upper = static_cast<double>(b.occurred + b.unknown) / n;
    b.std_error = std::sqrt(b.frequency * (1.0 - b.frequency) / n);
    b.limit = b.bound + 3.0 * b.std_error;
    b.within = std::isnan(b.bound) || b.frequency <= b.limit;
    out.push_back(b);
  };
  if (first.construction == Construction::IntersectingIndependent && first.alpha) {
    for (int n = 1; n <= kMaxBnIndex; ++n) tabulate(EventFamily::BnIntersect, n, intersect_B_bound(*first.alpha, n));
  } else if (first.construction == Construction::ParallelDuplicated && first.r) {
    std::vector<double> pooled;
    for (const RunSummary* s : rows) pooled.insert(pooled.end(), s->lead_gaps.begin(), s->lead_gaps.end());
    const double r = *first.r;
    for (int m = 1; r * (m + 1) <= L; ++m) tabulate(EventFamily::AmParallel, m, parallel_Am_bound(r, m, pooled).total());
  }
  return out;
}

}  // namespace detail

/// Deterministic fold over the summaries, independent of their order.
inline AggregateReport aggregate(std::vector<RunSummary> summaries) {
  std::sort(summaries.begin(), summaries.end(), [](const RunSummary& a, const RunSummary& b) {
    return a.run_index != b.run_index ? a.run_index < b.run_index : a.L < b.L;
  });
  AggregateReport rep;
  rep.rows = summaries.size();
  std::map<double, std::vector<const RunSummary*>> by_L;
  for (const RunSummary& s : summaries) {
    by_L[s.L].push_back(&s);
    if (s.stop_reason == StopReason::Truncated) ++rep.truncated;
    for (const auto& [family, fo] : s.events) {
      EventTotals& t = rep.events[std::string(to_string(family))];
      t.evaluated += fo.evaluated;
      t.occurred += fo.occurred.size();
      t.unknown += fo.unknown.size();
    }
    if (s.lemmas) {
      const LemmaSuiteCounts& c = *s.lemmas;
      const std::pair<const char*, const LemmaVerdict*> suites[] = {
          {"lemma-distance-a", &c.distance_a},       {"lemma-distance-b", &c.distance_b},
          {"empty-interval", &c.empty_interval},     {"dx-bounds", &c.dx_bounds},
          {"povratak", &c.povratak},                 {"cluster-consecutive", &c.cluster_consecutive},
          {"indented-entry", &c.indented_entry},     {"reduced-alignment", &c.reduced_alignment},
          {"uv-no-C", &c.no_c}};
      for (const auto& [name, v] : suites) {
        LemmaTotals& t = rep.lemmas[name];
        t.checked += v->checked;
        t.violations += v->violations;
        t.unknown += v->unknown;
      }
    }
  }
  for (const auto& [L, rows] : by_L) {
    auto column = [&](auto get) {
      std::vector<double> v;
      for (const RunSummary* s : rows) {
        if (auto x = get(*s)) v.push_back(*x);
      }
      return v;
    };
    auto opt = [](auto x) -> std::optional<double> { return x ? std::optional<double>(static_cast<double>(*x)) : std::nullopt; };
    rep.stats.push_back(describe("crossings", L, column([](const RunSummary& s) { return std::optional<double>(static_cast<double>(s.crossings)); })));
    rep.stats.push_back(describe("n_steps", L, column([](const RunSummary& s) { return std::optional<double>(static_cast<double>(s.n_steps)); })));
    rep.stats.push_back(describe("n_points", L, column([](const RunSummary& s) { return std::optional<double>(static_cast<double>(s.n_points)); })));
    rep.stats.push_back(describe("max_shadow", L, column([](const RunSummary& s) { return std::optional<double>(s.max_shadow); })));
    rep.stats.push_back(describe("min_shadow", L, column([](const RunSummary& s) { return std::optional<double>(s.min_shadow); })));
    auto hl = column([&](const RunSummary& s) { return opt(s.halfline_changes); });
    if (!hl.empty()) rep.stats.push_back(describe("halfline_changes", L, std::move(hl)));
    auto ae = column([&](const RunSummary& s) { return opt(s.a_events); });
    if (!ae.empty()) rep.stats.push_back(describe("a_events", L, std::move(ae)));
    auto lf = column([&](const RunSummary& s) { return opt(s.lemma_failures); });
    if (!lf.empty()) rep.stats.push_back(describe("lemma_failures", L, std::move(lf)));

    auto rows_b = detail::bound_rows(rows, L);
    rep.bounds.insert(rep.bounds.end(), rows_b.begin(), rows_b.end());

    const StatRow c = describe("crossings", L, column([](const RunSummary& s) { return std::optional<double>(static_cast<double>(s.crossings)); }));
    rep.growth.push_back({L, c.count, c.mean, c.std_error, c.median});
  }
  if (by_L.size() >= 2) {
    const auto& small = by_L.begin()->second;
    const auto& large = by_L.rbegin()->second;
    std::map<std::size_t, double> small_by_run;
    for (const RunSummary* s : small) small_by_run[s->run_index] = static_cast<double>(s->crossings);
    std::vector<double> a;
    std::vector<double> b;
    for (const RunSummary* s : large) {
      auto it = small_by_run.find(s->run_index);
      if (it == small_by_run.end()) continue;
      a.push_back(it->second);
      b.push_back(static_cast<double>(s->crossings));
    }
    SignTest t = sign_test(a, b);
    t.L_small = by_L.begin()->first;
    t.L_large = by_L.rbegin()->first;
    rep.sign_test = t;
  }
  return rep;
}

struct ExperimentResult {
  std::vector<RunSummary> summaries;
  AggregateReport report;
};

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult out;
  out.summaries = run_all(cfg);
  out.report = aggregate(out.summaries);
  return out;
}

/// Coupled-window study: each replication's realization is drawn on the
/// largest window and restricted to the smaller ones. Returns the growth
/// table (one row per window) alongside the full result.
inline ExperimentResult coupled_window_study(const ExperimentConfig& cfg) {
  if (cfg.windows.empty()) throw ValidationError("coupled_window_study needs at least one window");
  return run_experiment(cfg);
}

// ---------------------------------------------------------------------- output

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "run_index", "seed",      "construction", "lambda",      "r",           "s",
      "p",         "alpha",     "L",            "n_points",    "n_steps",     "stop_reason",
      "crossings", "halfline_changes", "a_events", "lemma_failures"};
  return cols;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }
inline std::string cell(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : std::string(); }

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// One CSV row per summary; `prefix_cells` are prepended (sweep columns).
inline void write_summary_row(std::ostream& os, const RunSummary& s, const std::vector<std::string>& prefix_cells = {}) {
  for (const auto& c : prefix_cells) os << c << ',';
  os << s.run_index << ',' << s.seed << ',' << to_string(s.construction) << ',' << format_double(s.lambda) << ','
     << detail::cell(s.r) << ',' << detail::cell(s.s) << ',' << detail::cell(s.p) << ',' << detail::cell(s.alpha)
     << ',' << format_double(s.L) << ',' << s.n_points << ',' << s.n_steps << ',' << to_string(s.stop_reason) << ','
     << s.crossings << ',' << detail::cell(s.halfline_changes) << ',' << detail::cell(s.a_events) << ','
     << detail::cell(s.lemma_failures) << '\n';
}

inline void write_summaries_csv(std::ostream& os, const std::vector<RunSummary>& summaries) {
  for (std::size_t i = 0; i < csv_columns().size(); ++i) os << (i ? "," : "") << csv_columns()[i];
  os << '\n';
  for (const RunSummary& s : summaries) write_summary_row(os, s);
}

/// Parses the CSV columns back; in-memory-only fields stay default.
inline std::vector<RunSummary> read_summaries_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("summary CSV is empty");
  const auto header = detail::split_csv_line(line);
  if (header != csv_columns()) throw std::runtime_error("summary CSV header does not match the schema");
  std::vector<RunSummary> out;
  auto d = [](const std::string& c) { return std::strtod(c.c_str(), nullptr); };
  auto od = [&](const std::string& c) { return c.empty() ? std::nullopt : std::optional<double>(d(c)); };
  auto u = [](const std::string& c) { return static_cast<std::size_t>(std::stoull(c)); };
  auto ou = [&](const std::string& c) { return c.empty() ? std::nullopt : std::optional<std::size_t>(u(c)); };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != csv_columns().size()) throw std::runtime_error("summary CSV row has the wrong column count");
    RunSummary s;
    s.run_index = u(f[0]);
    s.seed = std::stoull(f[1]);
    s.construction = construction_from_string(f[2]);
    s.lambda = d(f[3]);
    s.r = od(f[4]);
    s.s = od(f[5]);
    s.p = od(f[6]);
    s.alpha = od(f[7]);
    s.L = d(f[8]);
    s.n_points = u(f[9]);
    s.n_steps = u(f[10]);
    s.stop_reason = f[11] == "exhausted" ? StopReason::Exhausted : StopReason::Truncated;
    s.crossings = u(f[12]);
    s.halfline_changes = ou(f[13]);
    s.a_events = ou(f[14]);
    s.lemma_failures = ou(f[15]);
    out.push_back(s);
  }
  return out;
}

inline json report_to_json(const AggregateReport& rep) {
  json j;
  j["rows"] = rep.rows;
  j["truncated"] = rep.truncated;
  j["statistics"] = json::array();
  for (const StatRow& s : rep.stats) {
    j["statistics"].push_back({{"name", s.name}, {"L", s.L}, {"count", s.count}, {"mean", s.mean},
                               {"std_error", s.std_error}, {"min", s.min}, {"q25", s.q25}, {"median", s.median},
                               {"q75", s.q75}, {"max", s.max}});
  }
  j["bounds"] = json::array();
  for (const BoundRow& b : rep.bounds) {
    j["bounds"].push_back({{"family", b.family}, {"index", b.index}, {"L", b.L}, {"runs", b.runs},
                           {"occurred", b.occurred}, {"unknown", b.unknown}, {"frequency", b.frequency},
                           {"frequency_upper", b.frequency_upper}, {"std_error", b.std_error}, {"bound", b.bound},
                           {"limit", b.limit}, {"within", b.within}});
  }
  j["growth"] = json::array();
  for (const GrowthRow& g : rep.growth) {
    j["growth"].push_back({{"L", g.L}, {"runs", g.runs}, {"mean_crossings", g.mean}, {"std_error", g.std_error},
                           {"median_crossings", g.median}});
  }
  if (rep.sign_test) {
    const SignTest& t = *rep.sign_test;
    j["sign_test"] = {{"L_small", t.L_small}, {"L_large", t.L_large}, {"positive", t.positive},
                      {"negative", t.negative}, {"ties", t.ties}, {"p_value", t.p_value}};
  }
  j["lemmas"] = json::object();
  for (const auto& [name, t] : rep.lemmas) {
    j["lemmas"][name] = {{"checked", t.checked}, {"violations", t.violations}, {"unknown", t.unknown}};
  }
  j["events"] = json::object();
  for (const auto& [name, t] : rep.events) {
    j["events"][name] = {{"evaluated", t.evaluated}, {"occurred", t.occurred}, {"unknown", t.unknown}};
  }
  return j;
}

/// ISO-8601 UTC time from SOURCE_DATE_EPOCH, or the epoch itself so that
/// repeated invocations stay byte-identical.
inline std::string manifest_timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) t = static_cast<std::time_t>(std::atoll(env));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json manifest_json(const ExperimentConfig& cfg) {
  json j;
  j["config"] = config_to_json(cfg);
  j["seed"] = cfg.base_seed;
  j["rng_algorithm"] = std::string(kRngAlgorithmId);
  j["artifact_version"] = std::string(kArtifactVersion);
  j["timestamp"] = manifest_timestamp();
  return j;
}

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path report;
  std::filesystem::path manifest;
};

inline OutputPaths output_paths(const std::filesystem::path& path) {
  std::filesystem::path base = path;
  if (base.extension() == ".csv") base.replace_extension();
  const std::string stem = base.string();
  return {stem + ".csv", stem + ".report.json", stem + ".manifest.json"};
}

inline std::ofstream open_for_write(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  return os;
}

inline void finish_write(std::ofstream& os, const std::filesystem::path& p) {
  os.flush();
  if (!os) throw std::runtime_error("write to '" + p.string() + "' failed");
}

/// Writes <base>.csv, <base>.report.json and <base>.manifest.json.
inline OutputPaths write_outputs(const std::vector<RunSummary>& summaries, const AggregateReport& report,
                                 const ExperimentConfig& cfg, const std::filesystem::path& path) {
  const OutputPaths paths = output_paths(path);
  {
    auto os = open_for_write(paths.csv);
    write_summaries_csv(os, summaries);
    finish_write(os, paths.csv);
  }
  {
    auto os = open_for_write(paths.report);
    os << report_to_json(report).dump(2) << '\n';
    finish_write(os, paths.report);
  }
  {
    auto os = open_for_write(paths.manifest);
    os << manifest_json(cfg).dump(2) << '\n';
    finish_write(os, paths.manifest);
  }
  return paths;
}

}  // namespace gwlab
