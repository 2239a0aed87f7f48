#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gwlab/gwlab.hpp"

namespace {

using namespace gwlab;

/// Flag-level error; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpecFlags {
  std::string construction;
  std::optional<double> lambda;
  std::optional<double> p;
  std::optional<double> s;
  std::optional<double> r;
  std::optional<double> alpha;
  std::vector<double> windows;
  bool allow_unproven_s = false;

  void add_to(CLI::App& cmd, bool construction_required) {
    auto* c = cmd.add_option("--construction", construction,
                             "single-line | intersecting | parallel-duplicated | parallel-thinned | parallel-shifted");
    if (construction_required) c->required();
    cmd.add_option("--lambda", lambda, "Intensity of the base process");
    cmd.add_option("--p", p, "Thinning probability (parallel-thinned)");
    cmd.add_option("--s", s, "Shift (parallel-shifted)");
    cmd.add_option("--r", r, "Line separation (parallel constructions)");
    cmd.add_option("--alpha", alpha, "Angle between the lines in radians (intersecting)");
    cmd.add_option("--window", windows, "Window half-width L; a comma list runs a coupled-window study")
        ->delimiter(',');
    cmd.add_flag("--allow-unproven-s", allow_unproven_s, "Accept r/sqrt(3) <= |s| < r");
  }
};

std::string flag_for(const std::string& msg) {
  const std::pair<const char*, const char*> keys[] = {
      {"thinning_p", "--p"},   {"shift_s", "--s"},         {"separation_r", "--r"}, {"alpha", "--alpha"},
      {"window_L", "--window"}, {"rate_lambda", "--lambda"}, {"construction", "--construction"}};
  for (const auto& [key, flag] : keys) {
    if (msg.find(key) != std::string::npos) return flag;
  }
  return "";
}

[[noreturn]] void rethrow_as_usage(const ValidationError& e) {
  const std::string flag = flag_for(e.what());
  throw UsageError(flag.empty() ? std::string(e.what()) : flag + ": " + e.what());
}

ProcessSpec build_spec(const SpecFlags& f) {
  Construction c{};
  try {
    c = construction_from_string(f.construction);
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--construction: ") + e.what());
  }
  auto forbid = [&](bool present, const char* flag) {
    if (present) {
      throw UsageError(std::string(flag) + " does not apply to " + f.construction);
    }
  };
  auto need = [&](bool present, const char* flag) {
    if (!present) throw UsageError("missing " + std::string(flag) + " for " + f.construction);
  };
  forbid(f.p.has_value() && c != Construction::ParallelThinned, "--p");
  forbid(f.s.has_value() && c != Construction::ParallelShifted, "--s");
  forbid(f.r.has_value() && !is_parallel(c), "--r");
  forbid(f.alpha.has_value() && c != Construction::IntersectingIndependent, "--alpha");
  if (c == Construction::ParallelThinned) need(f.p.has_value(), "--p");
  if (c == Construction::ParallelShifted) need(f.s.has_value(), "--s");
  if (c == Construction::IntersectingIndependent) need(f.alpha.has_value(), "--alpha");
  for (double w : f.windows) {
    if (!(w > 0.0) || !std::isfinite(w)) throw UsageError("--window: values must be finite and > 0");
  }
  json j;
  j["construction"] = f.construction;
  if (f.lambda) j["rate_lambda"] = *f.lambda;
  if (f.p) j["thinning_p"] = *f.p;
  if (f.s) j["shift_s"] = *f.s;
  if (f.r) j["separation_r"] = *f.r;
  if (f.alpha) j["alpha"] = *f.alpha;
  if (!f.windows.empty()) j["window_L"] = f.windows.front();
  if (f.allow_unproven_s) j["allow_unproven_s"] = true;
  try {
    return spec_from_json(j);
  } catch (const ValidationError& e) {
    rethrow_as_usage(e);
  }
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void print_report(std::ostream& os, const AggregateReport& rep) {
  os << "rows=" << rep.rows << " truncated=" << rep.truncated << '\n';
  for (const StatRow& s : rep.stats) {
    if (s.name != "crossings" && s.name != "halfline_changes" && s.name != "a_events" &&
        s.name != "lemma_failures") {
      continue;
    }
    os << "mean_" << s.name << '=' << fmt("%.4f", s.mean) << "±" << fmt("%.4f", 3.0 * s.std_error)
       << " (3 SE; L=" << fmt("%g", s.L) << ", n=" << s.count << ", median=" << fmt("%g", s.median) << ")\n";
  }
  for (const auto& [name, t] : rep.events) {
    os << "events[" << name << "]: evaluated=" << t.evaluated << " occurred=" << t.occurred
       << " unknown=" << t.unknown << '\n';
  }
  if (!rep.lemmas.empty()) {
    LemmaTotals total;
    for (const auto& [name, t] : rep.lemmas) {
      total.checked += t.checked;
      total.violations += t.violations;
      total.unknown += t.unknown;
    }
    os << "lemmas: checked=" << total.checked << " violations=" << total.violations << " unknown=" << total.unknown
       << '\n';
    for (const auto& [name, t] : rep.lemmas) {
      if (t.violations > 0) os << "  lemma " << name << ": violations=" << t.violations << '\n';
    }
  }
  if (!rep.bounds.empty()) {
    std::size_t within = 0;
    for (const BoundRow& b : rep.bounds) within += b.within ? 1 : 0;
    os << "bounds: " << within << '/' << rep.bounds.size() << " rows within bound + 3 SE\n";
    for (const BoundRow& b : rep.bounds) {
      if (!b.within) {
        os << "  " << b.family << " index=" << b.index << " frequency=" << fmt("%.5f", b.frequency)
           << " limit=" << fmt("%.5f", b.limit) << '\n';
      }
    }
  }
  if (rep.sign_test) {
    const SignTest& t = *rep.sign_test;
    os << "sign_test: L=" << fmt("%g", t.L_small) << " vs L=" << fmt("%g", t.L_large) << " positive=" << t.positive
       << " negative=" << t.negative << " ties=" << t.ties << " p=" << fmt("%.3g", t.p_value) << '\n';
  }
}

std::set<Statistic> parse_statistics(const std::vector<std::string>& names) {
  std::set<Statistic> out;
  for (const auto& n : names) {
    try {
      out.insert(statistic_from_string(n));
    } catch (const ValidationError& e) {
      throw UsageError(std::string("--statistics: ") + e.what());
    }
  }
  return out;
}

// ------------------------------------------------------------------ simulate

struct SimulateOpts {
  SpecFlags spec;
  std::string config;
  std::uint64_t seed = 0;
  std::int64_t runs = 1;
  std::string out;
  std::optional<unsigned> workers;
  std::vector<std::string> statistics;
  std::string export_json;
  std::string export_binary;
};

int cmd_simulate(const SimulateOpts& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    try {
      cfg = config_from_json(read_json_file(o.config));
    } catch (const ValidationError& e) {
      throw UsageError("--config: " + std::string(e.what()));
    }
  } else {
    if (o.spec.construction.empty()) throw UsageError("--construction is required without --config");
    if (o.runs < 1) throw UsageError("--runs: must be >= 1");
    cfg.spec = build_spec(o.spec);
    cfg.runs = static_cast<std::size_t>(o.runs);
    cfg.base_seed = o.seed;
    if (o.spec.windows.size() > 1) cfg.windows = o.spec.windows;
    if (!o.statistics.empty()) cfg.statistics = parse_statistics(o.statistics);
    cfg.output_path = o.out;
    cfg.workers = o.workers;
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    rethrow_as_usage(e);
  }

  const ExperimentResult res = run_experiment(cfg);
  if (!cfg.output_path.empty()) {
    const OutputPaths paths = write_outputs(res.summaries, res.report, cfg, cfg.output_path);
    std::cout << "wrote " << paths.csv.string() << ", " << paths.report.string() << ", " << paths.manifest.string()
              << '\n';
  }
  if (!o.export_json.empty() || !o.export_binary.empty()) {
    const Realization real = generate(cfg.generation_spec(), derive_seed(cfg.base_seed, 0));
    const Trajectory t = run_walk(real, default_start());
    if (!o.export_json.empty()) {
      json j = run_export_json(real, t);
      j["analysis"] = analysis_records_json(real, t);
      write_json_file(o.export_json, j);
    }
    if (!o.export_binary.empty()) {
      std::ofstream os(o.export_binary, std::ios::binary | std::ios::trunc);
      if (!os) throw std::runtime_error("cannot open '" + o.export_binary + "' for writing");
      write_trajectory_binary(os, t);
      if (!os.flush()) throw std::runtime_error("write to '" + o.export_binary + "' failed");
    }
  }
  print_report(std::cout, res.report);
  return 0;
}

// -------------------------------------------------------------------- verify

struct VerifyOpts {
  SpecFlags spec;
  std::string suite;
  std::optional<std::int64_t> runs;
  std::uint64_t seed = 0;
  bool list = false;
};

int cmd_verify(const VerifyOpts& o) {
  if (o.list) {
    for (const SuiteInfo& s : suite_catalog()) {
      std::cout << s.name << "  (" << s.default_runs << " runs per spec)  " << s.checks << '\n';
    }
    return 0;
  }
  if (o.suite.empty()) throw UsageError("--suite is required");
  if (!find_suite(o.suite)) throw UsageError("--suite: unknown suite '" + o.suite + "' (see --list-suites)");
  SuiteOptions opts;
  opts.seed = o.seed;
  if (o.runs) {
    if (*o.runs < 1) throw UsageError("--runs: must be >= 1");
    opts.runs = static_cast<std::size_t>(*o.runs);
  }
  if (!o.spec.construction.empty()) {
    opts.spec = build_spec(o.spec);
  } else if (!o.spec.windows.empty() || o.spec.p || o.spec.s || o.spec.r || o.spec.alpha || o.spec.lambda) {
    throw UsageError("process flags need --construction");
  }
  const SuiteReport rep = run_suite(o.suite, opts);
  std::cout << "suite=" << rep.name << " realizations=" << rep.realizations << " checked=" << rep.verdict.checked
            << " violations=" << rep.verdict.violations << " unknown=" << rep.verdict.unknown << '\n';
  if (rep.name == "povratak") {
    std::size_t occ = 0;
    for (const auto& [k, v] : rep.counters) {
      if (k == "A_k occurrences") occ = v;
    }
    std::cout << "A_k occurrences: " << occ << ", implications violated: " << rep.verdict.violations << '\n';
  } else {
    for (const auto& [k, v] : rep.counters) std::cout << k << ": " << v << '\n';
  }
  for (const auto& n : rep.verdict.notes) std::cout << "  " << n << '\n';
  return rep.ok() ? 0 : 1;
}

// --------------------------------------------------------------------- sweep

struct SweepOpts {
  SpecFlags spec;
  std::string param;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::int64_t runs = 1;
  std::string out;
  std::optional<unsigned> workers;
};

int cmd_sweep(const SweepOpts& o) {
  if (o.runs < 1) throw UsageError("--runs: must be >= 1");
  if (o.values.empty()) throw UsageError("--values: at least one value is required");
  std::vector<ExperimentConfig> configs;
  for (double v : o.values) {
    SpecFlags f = o.spec;
    if (o.param == "p") f.p = v;
    else if (o.param == "s") f.s = v;
    else if (o.param == "r") f.r = v;
    else f.alpha = v;
    ExperimentConfig cfg;
    try {
      cfg.spec = build_spec(f);
    } catch (const UsageError& e) {
      throw UsageError("--values: " + o.param + "=" + format_double(v) + " rejected (" + e.what() + ")");
    }
    cfg.runs = static_cast<std::size_t>(o.runs);
    cfg.base_seed = o.seed;
    if (o.spec.windows.size() > 1) cfg.windows = o.spec.windows;
    cfg.output_path = o.out;
    cfg.workers = o.workers;
    configs.push_back(cfg);
  }

  std::ofstream csv;
  const OutputPaths paths = output_paths(o.out);
  if (!o.out.empty()) {
    csv = open_for_write(paths.csv);
    csv << "sweep_param,sweep_value";
    for (const auto& c : csv_columns()) csv << ',' << c;
    csv << '\n';
  }
  json reports = json::array();
  json manifests = json::array();
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ExperimentResult res = run_experiment(configs[i]);
    const std::vector<std::string> prefix = {o.param, format_double(o.values[i])};
    if (!o.out.empty()) {
      for (const RunSummary& s : res.summaries) write_summary_row(csv, s, prefix);
    }
    reports.push_back({{"param", o.param}, {"value", o.values[i]}, {"report", report_to_json(res.report)}});
    manifests.push_back(manifest_json(configs[i]));
    for (const StatRow& s : res.report.stats) {
      if (s.name != "crossings") continue;
      std::cout << o.param << '=' << fmt("%g", o.values[i]) << " L=" << fmt("%g", s.L)
                << " mean_crossings=" << fmt("%.4f", s.mean) << "±" << fmt("%.4f", 3.0 * s.std_error)
                << " median=" << fmt("%g", s.median) << '\n';
    }
  }
  if (!o.out.empty()) {
    finish_write(csv, paths.csv);
    write_json_file(paths.report, reports);
    write_json_file(paths.manifest, {{"sweep_param", o.param}, {"values", o.values}, {"experiments", manifests}});
    std::cout << "wrote " << paths.csv.string() << ", " << paths.report.string() << ", " << paths.manifest.string()
              << '\n';
  }
  return 0;
}

// -------------------------------------------------------------------- bounds

struct BoundsOpts {
  std::string family;
  std::optional<double> alpha;
  std::optional<double> r;
  std::vector<int> indices;
  std::int64_t runs = 0;
  std::uint64_t seed = 0;
  double window = 50.0;
};

int cmd_bounds(const BoundsOpts& o) {
  std::vector<int> idx = o.indices;
  for (int n : idx) {
    if (n < 1) throw UsageError("--n: indices must be >= 1");
  }
  if (o.family == "B_n") {
    if (!o.alpha) throw UsageError("missing --alpha for B_n");
    if (!(*o.alpha > 0.0 && *o.alpha < std::numbers::pi)) throw UsageError("--alpha: must lie in (0, pi)");
    if (idx.empty()) {
      for (int n = 1; n <= kMaxBnIndex; ++n) idx.push_back(n);
    }
    std::cout << "family,alpha,n,bound\n";
    for (int n : idx) {
      std::cout << "B_n," << format_double(*o.alpha) << ',' << n << ',' << format_double(intersect_B_bound(*o.alpha, n))
                << '\n';
    }
    return 0;
  }
  const double r = o.r.value_or(1.0);
  if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("--r: must be finite and > 0");
  if (o.runs < 0) throw UsageError("--runs: must be >= 0");
  if (idx.empty()) {
    for (int m = 1; m <= 10; ++m) idx.push_back(m);
  }
  std::vector<double> gaps;
  if (o.runs > 0) {
    ExperimentConfig cfg;
    try {
      cfg.spec = ProcessSpec::duplicated(r, o.window);
      cfg.spec.validate();
    } catch (const ValidationError& e) {
      rethrow_as_usage(e);
    }
    for (std::int64_t i = 0; i < o.runs; ++i) {
      const Realization real = generate(cfg.spec, derive_seed(o.seed, static_cast<std::uint64_t>(i)));
      const auto g = positive_lead_gaps(real);
      gaps.insert(gaps.end(), g.begin(), g.end());
    }
  }
  std::cout << "family,r,m,first_term,second_term,total\n";
  for (int m : idx) {
    const double first = parallel_Am_first_term(r, m);
    std::cout << "A_m," << format_double(r) << ',' << m << ',' << format_double(first) << ',';
    if (o.runs > 0) {
      const AmBound b = parallel_Am_bound(r, m, gaps);
      std::cout << format_double(b.second_term) << ',' << format_double(b.total()) << '\n';
    } else {
      std::cout << ",\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------- export-plot-data

struct ExportOpts {
  std::string input;
  std::string out;
};

int cmd_export_plot_data(const ExportOpts& o) {
  const json j = read_json_file(o.input);
  if (!j.is_object() || !j.contains("realization") || !j.contains("trajectory")) {
    throw std::runtime_error("'" + o.input + "' is not a trajectory export");
  }
  Realization real;
  std::vector<TrajectoryRow> rows;
  try {
    real = realization_from_json(j.at("realization"));
    rows = trajectory_rows_from_json(j.at("trajectory"));
  } catch (const ValidationError& e) {
    throw std::runtime_error("'" + o.input + "': " + e.what());
  }
  std::filesystem::path base = o.out;
  if (base.extension() == ".csv") base.replace_extension();
  const std::filesystem::path traj_path = base.string() + ".trajectory.csv";
  const std::filesystem::path cluster_path = base.string() + ".clusters.csv";
  {
    auto os = open_for_write(traj_path);
    write_plot_trajectory_csv(os, rows);
    finish_write(os, traj_path);
  }
  const auto clusters = cluster_annotations(real);
  {
    auto os = open_for_write(cluster_path);
    write_plot_clusters_csv(os, clusters);
    finish_write(os, cluster_path);
  }
  std::cout << "wrote " << traj_path.string() << " (" << rows.size() << " rows), " << cluster_path.string() << " ("
            << clusters.size() << " clusters)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy walks on point processes over one or two lines"};
  app.require_subcommand(1);

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
  sim.spec.add_to(*simulate, false);
  simulate->add_option("--config", sim.config, "JSON experiment config (replaces the process flags)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", sim.seed, "Base seed");
  simulate->add_option("--runs", sim.runs, "Number of replications");
  simulate->add_option("--out", sim.out, "Output base path (<base>.csv, .report.json, .manifest.json)");
  simulate->add_option("--workers", sim.workers, "Worker threads (GWLAB_WORKERS overrides)");
  simulate->add_option("--statistics", sim.statistics, "crossings,halfline_changes,events,lemmas")->delimiter(',');
  simulate->add_option("--export", sim.export_json, "Write run 0 (realization, trajectory, analysis) as JSON");
  simulate->add_option("--export-binary", sim.export_binary, "Write run 0's trajectory as a binary column dump");

  VerifyOpts ver;
  auto* verify = app.add_subcommand("verify", "Run a property suite; exit 0 iff zero violations");
  ver.spec.add_to(*verify, false);
  verify->add_option("--suite", ver.suite, "Suite name");
  verify->add_option("--runs", ver.runs, "Runs per spec (default: the suite's scale)");
  verify->add_option("--seed", ver.seed, "Base seed");
  verify->add_flag("--list-suites", ver.list, "List suites and the checkers they run");

  SweepOpts sw;
  auto* sweep = app.add_subcommand("sweep", "Run one experiment per parameter value");
  sw.spec.add_to(*sweep, true);
  sweep->add_option("--param", sw.param, "p | s | r | alpha")->required()->check(CLI::IsMember({"p", "s", "r", "alpha"}));
  sweep->add_option("--values", sw.values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("--seed", sw.seed, "Base seed");
  sweep->add_option("--runs", sw.runs, "Replications per value");
  sweep->add_option("--out", sw.out, "Output base path");
  sweep->add_option("--workers", sw.workers, "Worker threads (GWLAB_WORKERS overrides)");

  BoundsOpts bo;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the tail bounds");
  bounds->add_option("--family", bo.family, "B_n | A_m")->required()->check(CLI::IsMember({"B_n", "A_m"}));
  bounds->add_option("--alpha", bo.alpha, "Angle (B_n)");
  bounds->add_option("--r", bo.r, "Separation (A_m)");
  bounds->add_option("--n,--m", bo.indices, "Indices (comma list)")->delimiter(',');
  bounds->add_option("--runs", bo.runs, "A_m: duplicated realizations used for the empirical gap term");
  bounds->add_option("--seed", bo.seed, "Base seed for --runs");
  bounds->add_option("--window", bo.window, "Window half-width for --runs");

  ExportOpts ex;
  auto* exportp = app.add_subcommand("export-plot-data", "Emit (step, line, u) rows and cluster annotations");
  exportp->add_option("--input", ex.input, "Trajectory export from simulate --export")
      ->required()
      ->check(CLI::ExistingFile);
  exportp->add_option("--out", ex.out, "Output base path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (verify->parsed()) return cmd_verify(ver);
    if (sweep->parsed()) return cmd_sweep(sw);
    if (bounds->parsed()) return cmd_bounds(bo);
    if (exportp->parsed()) return cmd_export_plot_data(ex);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
