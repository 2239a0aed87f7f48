#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "gwlab/io.hpp"

using namespace gwlab;

namespace {

// Duplicated lines r = 1 with base points {1, 1.5, 4}: a six-step walk over
// two clusters.
json fixture_realization() {
  return {{"spec", {{"construction", "parallel-duplicated"}, {"separation_r", 1.0}, {"window_L", 10.0}}},
          {"seed", 0},
          {"base_points", {1.0, 1.5, 4.0}},
          {"line0", {1.0, 1.5, 4.0}},
          {"line1", {1.0, 1.5, 4.0}}};
}

}  // namespace

TEST(RealizationJson, RoundTripsEveryConstruction) {
  for (const ProcessSpec& spec : {ProcessSpec::single_line(15), ProcessSpec::intersecting(1.1, 15),
                                  ProcessSpec::duplicated(0.5, 15), ProcessSpec::thinned(0.4, 1.0, 15),
                                  ProcessSpec::shifted(0.3, 1.0, 15), ProcessSpec::shifted(-0.4, 1.0, 15)}) {
    const Realization real = generate(spec, 77);
    const Realization back = realization_from_json(json::parse(realization_to_json(real).dump()));
    EXPECT_EQ(back.lines, real.lines);
    EXPECT_EQ(back.base_points, real.base_points);
    EXPECT_EQ(back.duplicate_flags, real.duplicate_flags);
    EXPECT_EQ(back.seed, real.seed);
    EXPECT_EQ(back.coverage[0].lo, real.coverage[0].lo);
    EXPECT_EQ(back.coverage[1].hi, real.coverage[1].hi);
    EXPECT_TRUE(same_steps(run_walk(back, default_start()), run_walk(real, default_start())));
  }
}

TEST(RealizationJson, RejectsInconsistentInput) {
  json j = fixture_realization();
  j["line1"] = {1.0, 4.0};
  EXPECT_THROW(realization_from_json(j), ValidationError);
  json k = fixture_realization();
  k["extra"] = 1;
  EXPECT_THROW(realization_from_json(k), ValidationError);
}

TEST(TrajectoryJson, RowsMatchTheWalk) {
  const Realization real = realization_from_json(fixture_realization());
  const Trajectory t = run_walk(real, default_start(), StopRule::run_to_exhaustion());
  const auto rows = trajectory_rows_from_json(trajectory_to_json(t));
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].step, k + 1);
    EXPECT_EQ(rows[k].u, t.steps[k].u);
    EXPECT_EQ(rows[k].line, t.steps[k].line);
    EXPECT_EQ(rows[k].dist, t.step_distances[k]);
  }
}

TEST(BinaryDump, RoundTrips) {
  const Realization real = generate(ProcessSpec::thinned(0.5, 1.0, 30), 5);
  const Trajectory t = run_walk(real, default_start());
  std::stringstream ss;
  write_trajectory_binary(ss, t);
  EXPECT_EQ(ss.str().size(), 16 + 24 * t.size());
  EXPECT_EQ(ss.str().substr(0, 8), "GWLABTR1");
  const auto rows = read_trajectory_binary(ss);
  ASSERT_EQ(rows.size(), t.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].u, t.steps[k].u);
    EXPECT_EQ(rows[k].line, t.steps[k].line);
    EXPECT_EQ(rows[k].dist, t.step_distances[k]);
  }
}

TEST(BinaryDump, LittleEndianLayout) {
  Trajectory t;
  t.steps = {{1.0, 1}};
  t.step_distances = {2.0};
  std::stringstream ss;
  write_trajectory_binary(ss, t);
  const std::string b = ss.str();
  ASSERT_EQ(b.size(), 40u);
  EXPECT_EQ(static_cast<unsigned char>(b[8]), 1u);
  // 1.0 = 0x3FF0000000000000, most significant byte last.
  EXPECT_EQ(static_cast<unsigned char>(b[16 + 7]), 0x3Fu);
  EXPECT_EQ(static_cast<unsigned char>(b[16 + 6]), 0xF0u);
  EXPECT_EQ(static_cast<unsigned char>(b[16 + 0]), 0x00u);
}

TEST(BinaryDump, RejectsBadInput) {
  std::stringstream bad("NOTMAGIC");
  EXPECT_THROW(read_trajectory_binary(bad), std::runtime_error);
  const Realization real = generate(ProcessSpec::single_line(10), 1);
  std::stringstream ss;
  write_trajectory_binary(ss, run_walk(real, default_start()));
  std::string s = ss.str();
  s.resize(s.size() - 3);
  std::stringstream cut(s);
  EXPECT_THROW(read_trajectory_binary(cut), std::runtime_error);
}

TEST(AnalysisRecords, KeyedBySeedConstructionFamily) {
  const Realization real = generate(ProcessSpec::intersecting(std::numbers::pi / 2, 20), 31);
  const json rec = analysis_records_json(real, run_walk(real, default_start()));
  bool crossings = false;
  bool lemmas = false;
  bool halfline = false;
  for (const json& r : rec) {
    EXPECT_EQ(r.at("seed").get<std::uint64_t>(), 31u);
    EXPECT_EQ(r.at("construction"), "intersecting");
    crossings = crossings || r.at("family") == "crossings";
    lemmas = lemmas || r.at("family") == "lemmas";
    halfline = halfline || r.at("family") == "halfline_changes";
  }
  EXPECT_TRUE(crossings && lemmas && halfline);
}

TEST(PlotData, SixStepFixture) {
  const json j = fixture_realization();
  const Realization real = realization_from_json(j);
  const Trajectory t = run_walk(real, default_start(), StopRule::run_to_exhaustion());
  std::ostringstream traj;
  write_plot_trajectory_csv(traj, trajectory_rows_from_json(trajectory_to_json(t)));
  const std::string text = traj.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
  EXPECT_EQ(text.substr(0, 12), "step,line,u\n");

  const auto clusters = cluster_annotations(real);
  ASSERT_EQ(clusters.size(), 2u);
  const ClusterDecomposition dec = decompose_clusters(real.base_points, 1.0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    EXPECT_EQ(clusters[c].label, dec.label(c));
    EXPECT_EQ(clusters[c].size, dec.clusters[c].size());
    EXPECT_EQ(clusters[c].lead, dec.lead(c));
  }
  EXPECT_EQ(clusters[0].lo, 1.0);
  EXPECT_EQ(clusters[0].hi, 1.5);
  EXPECT_EQ(clusters[1].lo, 4.0);
  std::ostringstream cl;
  write_plot_clusters_csv(cl, clusters);
  EXPECT_EQ(cl.str().substr(0, cl.str().find('\n')), "cluster,label,lo,hi,lead,size");
}

TEST(PlotData, EmptyTrajectoryGivesHeaderOnly) {
  std::ostringstream os;
  write_plot_trajectory_csv(os, {});
  EXPECT_EQ(os.str(), "step,line,u\n");
  std::ostringstream cl;
  write_plot_clusters_csv(cl, {});
  EXPECT_EQ(cl.str(), "cluster,label,lo,hi,lead,size\n");
}

TEST(PlotData, ShiftedClustersUseLineZero) {
  const Realization real = generate(ProcessSpec::shifted(0.3, 1.0, 20), 8);
  const auto clusters = cluster_annotations(real);
  const ClusterDecomposition dec = decompose_clusters(real.lines[0], std::hypot(1.0, 0.3));
  ASSERT_EQ(clusters.size(), dec.size());
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.size;
  EXPECT_EQ(total, real.lines[0].size());
  EXPECT_TRUE(cluster_annotations(generate(ProcessSpec::single_line(10), 1)).empty());
}

TEST(JsonFiles, MissingFileNamesThePath) {
  try {
    read_json_file("/nonexistent/gwlab.json");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/gwlab.json"), std::string::npos);
  }
}
