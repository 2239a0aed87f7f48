#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gwlab/geometry.hpp"
#include "gwlab/processes.hpp"

namespace gwlab {

using nlohmann::json;

inline constexpr std::string_view kArtifactVersion = "0.1.0";

namespace detail {

inline void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (std::string_view k : allowed) known = known || item.key() == k;
    if (!known) throw ValidationError("unknown key '" + item.key() + "' in " + std::string(where));
  }
}

template <class T>
T get_as(const json& j, const char* key, std::string_view where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string(where) + "." + key + " is missing or has the wrong type");
  }
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_as<T>(j, key, where);
}

}  // namespace detail

/// Builds a validated ProcessSpec from its JSON form. Parameters that do not
/// belong to the construction are rejected.
inline ProcessSpec spec_from_json(const json& j) {
  detail::reject_unknown_keys(j,
                              {"construction", "rate_lambda", "thinning_p", "shift_s", "separation_r", "alpha",
                               "window_L", "allow_unproven_s", "rate_lambda_line1"},
                              "spec");
  const Construction c = construction_from_string(detail::get_as<std::string>(j, "construction", "spec"));
  const double L = detail::get_opt<double>(j, "window_L", "spec").value_or(50.0);
  const auto r = detail::get_opt<double>(j, "separation_r", "spec");
  const auto alpha = detail::get_opt<double>(j, "alpha", "spec");
  if (r && !is_parallel(c)) throw ValidationError("spec.separation_r only applies to parallel constructions");
  if (alpha && c != Construction::IntersectingIndependent) {
    throw ValidationError("spec.alpha only applies to intersecting lines");
  }

  ProcessSpec spec;
  spec.construction = c;
  spec.rate_lambda = detail::get_opt<double>(j, "rate_lambda", "spec").value_or(1.0);
  spec.rate_lambda_line1 = detail::get_opt<double>(j, "rate_lambda_line1", "spec");
  spec.thinning_p = detail::get_opt<double>(j, "thinning_p", "spec");
  spec.shift_s = detail::get_opt<double>(j, "shift_s", "spec");
  spec.allow_unproven_s = detail::get_opt<bool>(j, "allow_unproven_s", "spec").value_or(false);
  if (c == Construction::SingleLinePoisson) {
    spec.space = Space::single_line(L);
  } else if (c == Construction::IntersectingIndependent) {
    if (!alpha) throw ValidationError("spec.alpha is required for intersecting lines");
    spec.space = Space::intersecting(*alpha, L);
  } else {
    spec.space = Space::parallel(r.value_or(1.0), L);
  }
  spec.validate();
  return spec;
}

inline json spec_to_json(const ProcessSpec& spec) {
  json j;
  j["construction"] = std::string(to_string(spec.construction));
  j["rate_lambda"] = spec.rate_lambda;
  j["window_L"] = spec.space.window_L();
  if (spec.rate_lambda_line1) j["rate_lambda_line1"] = *spec.rate_lambda_line1;
  if (spec.thinning_p) j["thinning_p"] = *spec.thinning_p;
  if (spec.shift_s) j["shift_s"] = *spec.shift_s;
  if (auto r = spec.space.separation_r()) j["separation_r"] = *r;
  if (auto a = spec.space.alpha()) j["alpha"] = *a;
  if (spec.allow_unproven_s) j["allow_unproven_s"] = true;
  return j;
}

/// Statistic families a run can compute.
enum class Statistic { Crossings, HalflineChanges, Events, Lemmas };

inline constexpr std::initializer_list<Statistic> kAllStatistics = {Statistic::Crossings, Statistic::HalflineChanges,
                                                                    Statistic::Events, Statistic::Lemmas};

inline std::string_view to_string(Statistic s) {
  switch (s) {
    case Statistic::Crossings: return "crossings";
    case Statistic::HalflineChanges: return "halfline_changes";
    case Statistic::Events: return "events";
    case Statistic::Lemmas: return "lemmas";
  }
  return "?";
}

inline Statistic statistic_from_string(std::string_view name) {
  for (Statistic s : kAllStatistics) {
    if (to_string(s) == name) return s;
  }
  throw ValidationError("unknown statistic family '" + std::string(name) + "'");
}

struct ExperimentConfig {
  ProcessSpec spec;
  std::size_t runs = 1;
  std::uint64_t base_seed = 0;
  /// Window half-widths. One entry overrides spec.window_L; two or more
  /// switch to a coupled-window study.
  std::vector<double> windows;
  std::set<Statistic> statistics{kAllStatistics};
  std::string output_path;
  /// Worker threads; GWLAB_WORKERS overrides, default is the core count.
  std::optional<unsigned> workers;

  [[nodiscard]] bool coupled() const { return windows.size() >= 2; }
  [[nodiscard]] bool wants(Statistic s) const { return statistics.contains(s); }

  /// The largest window used, i.e. the window realizations are drawn on.
  [[nodiscard]] double generation_window() const {
    return windows.empty() ? spec.space.window_L() : windows.back();
  }

  [[nodiscard]] ProcessSpec generation_spec() const {
    ProcessSpec s = spec;
    s.space = spec.space.with_window(generation_window());
    return s;
  }

  void validate() const {
    if (runs < 1) throw ValidationError("runs must be >= 1");
    spec.validate();
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (!(windows[i] > 0.0) || !std::isfinite(windows[i])) throw ValidationError("windows must be finite and > 0");
      if (i > 0 && !(windows[i] > windows[i - 1])) throw ValidationError("windows must be strictly increasing");
    }
    if (workers && *workers == 0) throw ValidationError("workers must be >= 1");
  }
};

inline ExperimentConfig config_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"spec", "runs", "base_seed", "windows", "statistics", "output_path", "workers"},
                              "config");
  ExperimentConfig cfg;
  cfg.spec = spec_from_json(j.at("spec"));
  const auto runs = detail::get_as<std::int64_t>(j, "runs", "config");
  if (runs < 1) throw ValidationError("runs must be >= 1");
  cfg.runs = static_cast<std::size_t>(runs);
  cfg.base_seed = detail::get_opt<std::uint64_t>(j, "base_seed", "config").value_or(0);
  cfg.windows = detail::get_opt<std::vector<double>>(j, "windows", "config").value_or(std::vector<double>{});
  if (auto names = detail::get_opt<std::vector<std::string>>(j, "statistics", "config")) {
    cfg.statistics.clear();
    for (const auto& n : *names) cfg.statistics.insert(statistic_from_string(n));
  }
  cfg.output_path = detail::get_opt<std::string>(j, "output_path", "config").value_or("");
  if (auto w = detail::get_opt<std::int64_t>(j, "workers", "config")) {
    if (*w < 1) throw ValidationError("workers must be >= 1");
    cfg.workers = static_cast<unsigned>(*w);
  }
  cfg.validate();
  return cfg;
}

inline json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["spec"] = spec_to_json(cfg.spec);
  j["runs"] = cfg.runs;
  j["base_seed"] = cfg.base_seed;
  j["windows"] = cfg.windows;
  std::vector<std::string> stats;
  for (Statistic s : cfg.statistics) stats.emplace_back(to_string(s));
  j["statistics"] = stats;
  j["output_path"] = cfg.output_path;
  if (cfg.workers) j["workers"] = *cfg.workers;
  return j;
}

}  // namespace gwlab
