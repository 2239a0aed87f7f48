#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwlab/analysis.hpp"
#include "gwlab/config.hpp"
#include "gwlab/processes.hpp"
#include "gwlab/walk.hpp"

namespace gwlab {

// ------------------------------------------------------------- realizations

inline json realization_to_json(const Realization& real) {
  json j;
  j["spec"] = spec_to_json(real.spec);
  j["seed"] = real.seed;
  j["base_points"] = real.base_points;
  j["line0"] = real.lines[0];
  j["line1"] = real.lines[1];
  std::vector<std::string> flags;
  for (DupFlag f : real.duplicate_flags) flags.emplace_back(to_string(f));
  j["flags"] = flags;
  return j;
}

inline DupFlag dup_flag_from_string(std::string_view s) {
  for (DupFlag f : {DupFlag::Both, DupFlag::Line0, DupFlag::LineR}) {
    if (to_string(f) == s) return f;
  }
  throw ValidationError("unknown duplicate flag '" + std::string(s) + "'");
}

/// Inverse of realization_to_json; coverage is rebuilt from the ProcessSpec window.
inline Realization realization_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"spec", "seed", "base_points", "line0", "line1", "flags"}, "realization");
  Realization real;
  real.spec = spec_from_json(j.at("spec"));
  real.seed = detail::get_opt<std::uint64_t>(j, "seed", "realization").value_or(0);
  real.base_points = detail::get_as<std::vector<double>>(j, "base_points", "realization");
  real.lines[0] = detail::get_as<std::vector<double>>(j, "line0", "realization");
  real.lines[1] = detail::get_as<std::vector<double>>(j, "line1", "realization");
  for (const auto& f : detail::get_opt<std::vector<std::string>>(j, "flags", "realization").value_or(
           std::vector<std::string>{})) {
    real.duplicate_flags.push_back(dup_flag_from_string(f));
  }
  const double L = real.spec.space.window_L();
  real.coverage = symmetric_coverage(L);
  if (real.spec.construction == Construction::ParallelShifted) {
    const double s = *real.spec.shift_s;
    real.coverage[1] = Interval{-L + s, L + s};
  }
  check_invariants(real);
  return real;
}

// ------------------------------------------------------------- trajectories

/// JSON array of {step, line, u, dist}, with dist = d(S_{step-1}, S_step).
inline json trajectory_to_json(const Trajectory& t) {
  json arr = json::array();
  for (std::size_t k = 0; k < t.size(); ++k) {
    arr.push_back({{"step", k + 1}, {"line", t.steps[k].line}, {"u", t.steps[k].u}, {"dist", t.step_distances[k]}});
  }
  return arr;
}

struct TrajectoryRow {
  std::size_t step = 0;
  int line = 0;
  double u = 0.0;
  double dist = 0.0;
};

inline std::vector<TrajectoryRow> trajectory_rows_from_json(const json& arr) {
  if (!arr.is_array()) throw ValidationError("trajectory must be a JSON array");
  std::vector<TrajectoryRow> out;
  for (const json& e : arr) {
    detail::reject_unknown_keys(e, {"step", "line", "u", "dist"}, "trajectory entry");
    out.push_back({detail::get_as<std::size_t>(e, "step", "trajectory"), detail::get_as<int>(e, "line", "trajectory"),
                   detail::get_as<double>(e, "u", "trajectory"), detail::get_as<double>(e, "dist", "trajectory")});
  }
  return out;
}

/// A realization together with its walk, as written by `simulate --export`.
inline json run_export_json(const Realization& real, const Trajectory& t) {
  return {{"realization", realization_to_json(real)},
          {"stop_reason", std::string(to_string(t.stop_reason))},
          {"trajectory", trajectory_to_json(t)}};
}

inline json read_json_file(const std::filesystem::path& p) {
  std::ifstream is(p);
  if (!is) throw std::runtime_error("cannot open '" + p.string() + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw std::runtime_error("'" + p.string() + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& p, const json& j) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  os << j.dump(2) << '\n';
  if (!os.flush()) throw std::runtime_error("write to '" + p.string() + "' failed");
}

// ------------------------------------------------------ binary columnar dump
//
// Layout, all little-endian:
//   8 bytes  magic "GWLABTR1"
//   8 bytes  uint64 row count n
//   n * 8    float64 u
//   n * 8    float64 line (0.0 or 1.0)
//   n * 8    float64 dist

inline constexpr char kBinaryMagic[8] = {'G', 'W', 'L', 'A', 'B', 'T', 'R', '1'};

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  os.write(b, 8);
}

inline std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("binary trajectory is truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void write_trajectory_binary(std::ostream& os, const Trajectory& t) {
  os.write(kBinaryMagic, 8);
  detail::put_u64(os, t.size());
  for (const Site& s : t.steps) detail::put_u64(os, std::bit_cast<std::uint64_t>(s.u));
  for (const Site& s : t.steps) detail::put_u64(os, std::bit_cast<std::uint64_t>(static_cast<double>(s.line)));
  for (double d : t.step_distances) detail::put_u64(os, std::bit_cast<std::uint64_t>(d));
}

inline std::vector<TrajectoryRow> read_trajectory_binary(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::memcmp(magic, kBinaryMagic, 8) != 0) throw std::runtime_error("not a binary trajectory dump");
  const std::uint64_t n = detail::get_u64(is);
  std::vector<TrajectoryRow> rows(n);
  for (std::uint64_t i = 0; i < n; ++i) rows[i].u = std::bit_cast<double>(detail::get_u64(is));
  for (std::uint64_t i = 0; i < n; ++i) rows[i].line = static_cast<int>(std::bit_cast<double>(detail::get_u64(is)));
  for (std::uint64_t i = 0; i < n; ++i) rows[i].dist = std::bit_cast<double>(detail::get_u64(is));
  for (std::uint64_t i = 0; i < n; ++i) rows[i].step = i + 1;
  return rows;
}

// ---------------------------------------------------------- analysis records

inline json lemma_verdict_json(const LemmaVerdict& v) {
  return {{"checked", v.checked}, {"violations", v.violations}, {"unknown", v.unknown}, {"notes", v.notes}};
}

inline json witness_json(const EventWitness& w) {
  json j = json::object();
  auto put = [&](const char* k, double v) {
    if (!std::isnan(v)) j[k] = v;
  };
  put("x", w.x);
  put("next", w.next);
  put("gap", w.gap);
  put("dx", w.dx);
  put("x_minus1", w.x_minus1);
  put("threshold", w.threshold);
  put("norm_u", w.norm_u);
  put("norm_v", w.norm_v);
  auto put_t = [&](const char* k, const std::optional<std::size_t>& v) {
    if (v) j[k] = *v;
  };
  put_t("t_x", w.t_x);
  put_t("t_neg", w.t_neg);
  put_t("t_next", w.t_next);
  put_t("step", w.step);
  return j;
}

/// Analysis of one walk as records keyed by (seed, construction, family).
inline json analysis_records_json(const Realization& real, const Trajectory& t) {
  json out = json::array();
  const std::string construction(to_string(real.spec.construction));
  auto record = [&](const std::string& family, json data) {
    out.push_back({{"seed", real.seed}, {"construction", construction}, {"family", family}, {"data", std::move(data)}});
  };
  record("crossings", detect_crossings(t));
  if (real.space().kind() == SpaceKind::IntersectingLines) {
    json changes = json::array();
    for (const auto& c : extract_halfline_changes(t, real.space())) changes.push_back(c.step);
    record("halfline_changes", changes);
  }
  const auto events = detect_A_events(real, t);
  std::map<std::string, json> by_family;
  for (const EventRecord& e : events) {
    by_family[std::string(to_string(e.family))].push_back(
        {{"index", e.index}, {"verdict", std::string(to_string(e.verdict))}, {"witness", witness_json(e.witness)}});
  }
  for (auto& [family, arr] : by_family) record(family, std::move(arr));
  const LemmaSuiteCounts lemmas = run_lemma_checks(real, t, events);
  record("lemmas", {{"lemma-distance-a", lemma_verdict_json(lemmas.distance_a)},
                    {"lemma-distance-b", lemma_verdict_json(lemmas.distance_b)},
                    {"empty-interval", lemma_verdict_json(lemmas.empty_interval)},
                    {"dx-bounds", lemma_verdict_json(lemmas.dx_bounds)},
                    {"povratak", lemma_verdict_json(lemmas.povratak)},
                    {"cluster-consecutive", lemma_verdict_json(lemmas.cluster_consecutive)},
                    {"indented-entry", lemma_verdict_json(lemmas.indented_entry)},
                    {"reduced-alignment", lemma_verdict_json(lemmas.reduced_alignment)},
                    {"uv-no-C", lemma_verdict_json(lemmas.no_c)}});
  return out;
}

// ------------------------------------------------------------------ plot data

struct ClusterAnnotation {
  std::size_t cluster = 0;
  std::ptrdiff_t label = 0;
  double lo = 0.0;
  double hi = 0.0;
  double lead = 0.0;
  std::size_t size = 0;
};

/// Clusters used for plotting: base points at threshold r (duplicated and
/// thinned lines) or line-0 points at sqrt(r^2 + s^2) (shifted lines).
inline std::vector<ClusterAnnotation> cluster_annotations(const Realization& real) {
  std::vector<ClusterAnnotation> out;
  if (real.space().kind() != SpaceKind::ParallelLines) return out;
  const double r = real.space().r();
  const bool shifted = real.spec.construction == Construction::ParallelShifted;
  const double s = shifted ? *real.spec.shift_s : 0.0;
  const ClusterDecomposition dec =
      decompose_clusters(shifted ? real.lines[0] : real.base_points, shifted ? std::hypot(r, s) : r);
  for (std::size_t c = 0; c < dec.size(); ++c) {
    const ClusterRange& range = dec.clusters[c];
    out.push_back({c, dec.label(c), dec.points[range.begin], dec.points[range.end - 1], dec.lead(c), range.size()});
  }
  return out;
}

inline void write_plot_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
  os << "step,line,u\n";
  char buf[40];
  for (const TrajectoryRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.u);
    os << r.step << ',' << r.line << ',' << buf << '\n';
  }
}

inline void write_plot_clusters_csv(std::ostream& os, const std::vector<ClusterAnnotation>& clusters) {
  os << "cluster,label,lo,hi,lead,size\n";
  char lo[40];
  char hi[40];
  char lead[40];
  for (const ClusterAnnotation& c : clusters) {
    std::snprintf(lo, sizeof lo, "%.17g", c.lo);
    std::snprintf(hi, sizeof hi, "%.17g", c.hi);
    std::snprintf(lead, sizeof lead, "%.17g", c.lead);
    os << c.cluster << ',' << c.label << ',' << lo << ',' << hi << ',' << lead << ',' << c.size << '\n';
  }
}

}  // namespace gwlab
