#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gwlab/analysis.hpp"
#include "gwlab/processes.hpp"
#include "gwlab/walk.hpp"

using namespace gwlab;

namespace {

Realization hand(ProcessSpec spec, std::vector<double> line0, std::vector<double> line1) {
  Realization real;
  const double L = spec.space.window_L();
  real.spec = std::move(spec);
  real.lines = {std::move(line0), std::move(line1)};
  std::set_union(real.lines[0].begin(), real.lines[0].end(), real.lines[1].begin(), real.lines[1].end(),
                 std::back_inserter(real.base_points));
  real.coverage = symmetric_coverage(L);
  if (real.spec.construction == Construction::ParallelShifted) {
    real.base_points = real.lines[0];
    real.coverage[1] = Interval{-L + *real.spec.shift_s, L + *real.spec.shift_s};
  }
  return real;
}

// A trajectory given step by step; need not be greedy.
Trajectory scripted(const Realization& real, const std::vector<Site>& steps,
                    StopReason reason = StopReason::Truncated) {
  Trajectory t;
  t.start = default_start();
  t.stop_reason = reason;
  for (int l = 0; l < 2; ++l) t.visit_step[static_cast<std::size_t>(l)].assign(real.line(l).size(), kUnvisited);
  for (const Site& s : steps) {
    const auto& pts = real.line(s.line);
    const auto i = static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), s.u) - pts.begin());
    t.steps.push_back(s);
    t.step_distances.push_back(distance(real.space(), t.at(t.size() - 1), s));
    t.refs.push_back({s.line, static_cast<std::uint32_t>(i)});
    t.visit_step[static_cast<std::size_t>(s.line)][i] = static_cast<std::int64_t>(t.size());
  }
  return t;
}

}  // namespace

TEST(Clusters, Examples) {
  const std::vector<double> pts{0.5, 1.0, 3.0};
  const auto dec = decompose_clusters(pts, 1.0);
  ASSERT_EQ(dec.size(), 2u);
  EXPECT_EQ(dec.clusters[0], (ClusterRange{0, 2}));
  EXPECT_EQ(dec.clusters[1], (ClusterRange{2, 3}));
  EXPECT_EQ(dec.lead(0), 0.5);
  EXPECT_EQ(*dec.origin_cluster, 0u);

  EXPECT_EQ(decompose_clusters(std::vector<double>{4.0}, 1.0).size(), 1u);
  EXPECT_EQ(decompose_clusters(std::vector<double>{}, 1.0).size(), 0u);
  EXPECT_THROW(decompose_clusters(pts, 0.0), ValidationError);
  // A gap equal to the threshold splits.
  EXPECT_EQ(decompose_clusters(std::vector<double>{0.0, 1.0}, 1.0).size(), 2u);
}

TEST(Clusters, OriginClusterAndLabels) {
  const std::vector<double> pts{-7, -6.5, -2, -0.4, 0.3, 5, 5.2};
  const auto dec = decompose_clusters(pts, 1.0);
  ASSERT_EQ(dec.size(), 4u);
  EXPECT_EQ(*dec.origin_cluster, 2u);
  EXPECT_EQ(dec.lead(2), 0.3);
  EXPECT_EQ(dec.lead(0), -6.5);
  EXPECT_EQ(dec.lead(3), 5.0);
  EXPECT_EQ(dec.label(0), -2);
  EXPECT_EQ(dec.cluster_of(4), 2u);
  EXPECT_EQ(dec.cluster_of(6), 3u);
}

TEST(Clusters, GapRuleAgainstBruteForce) {
  std::mt19937_64 gen(4);
  std::exponential_distribution<double> gap(1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> pts{-10};
    for (int i = 0; i < 40; ++i) pts.push_back(pts.back() + gap(gen));
    const double thr = 0.8;
    const auto dec = decompose_clusters(pts, thr);
    std::size_t covered = 0;
    for (std::size_t c = 0; c < dec.size(); ++c) {
      const auto& range = dec.clusters[c];
      covered += range.size();
      for (std::size_t i = range.begin + 1; i < range.end; ++i) EXPECT_LT(pts[i] - pts[i - 1], thr);
      if (c > 0) {
        EXPECT_GE(pts[range.begin] - pts[range.begin - 1], thr);
      }
      for (std::size_t i = range.begin; i < range.end; ++i) EXPECT_LE(std::abs(dec.lead(c)), std::abs(pts[i]));
    }
    EXPECT_EQ(covered, pts.size());
  }
}

TEST(Clusters, LeadingAndIndentedExamples) {
  const auto pos = mark_leading_and_indented(decompose_clusters(std::vector<double>{5.0}, 1.0), 0.3);
  EXPECT_EQ(pos.leading_sites[0][0], (Site{5.0, 0}));
  EXPECT_EQ(pos.leading_sites[0][1], (Site{5.3, 1}));
  EXPECT_FALSE(pos.indented_flags[0][0]);
  EXPECT_TRUE(pos.indented_flags[0][1]);

  const auto neg = mark_leading_and_indented(decompose_clusters(std::vector<double>{-5.0}, 1.0), 0.3);
  EXPECT_TRUE(neg.indented_flags[0][0]);
  EXPECT_FALSE(neg.indented_flags[0][1]);

  const auto flip = mark_leading_and_indented(decompose_clusters(std::vector<double>{5.0}, 1.0), -0.3);
  EXPECT_TRUE(flip.indented_flags[0][0]);
  EXPECT_FALSE(flip.indented_flags[0][1]);

  const auto mid = mark_leading_and_indented(decompose_clusters(std::vector<double>{-0.1, 0.4}, 1.0), 0.3);
  EXPECT_TRUE(mid.straddles_origin[0]);
}

TEST(Clusters, IndentedSidesForRandomShiftedRealizations) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Realization real = generate(ProcessSpec::shifted(0.3, 1.0, 30), seed);
    const auto dec = mark_leading_and_indented(decompose_clusters(real.lines[0], std::hypot(1.0, 0.3)), 0.3);
    for (std::size_t c = 0; c < dec.size(); ++c) {
      if (dec.straddles_origin[c]) continue;
      EXPECT_NE(dec.indented_flags[c][0], dec.indented_flags[c][1]);
      const Site in = dec.leading_sites[c][dec.indented_flags[c][0] ? 0 : 1];
      // s > 0: indented leads sit on line 0 left of 0, on line r right of 0.
      if (in.line == 0) {
        EXPECT_LT(in.u, 0.0);
      } else {
        EXPECT_GT(in.u, 0.0);
      }
    }
  }
}

TEST(Clusters, ReduceToLeads) {
  const auto real = hand(ProcessSpec::duplicated(1.0, 10), {1, 1.5, 4}, {1, 1.5, 4});
  EXPECT_EQ(reduce_to_cluster_leads(real).lines[0], (std::vector<double>{1, 4}));
  const auto apart = hand(ProcessSpec::duplicated(1.0, 10), {-3, 1, 4}, {-3, 1, 4});
  EXPECT_EQ(reduce_to_cluster_leads(apart).lines[0], apart.lines[0]);
  const auto tight = hand(ProcessSpec::duplicated(1.0, 10), {-0.5, 0.2, 0.9}, {-0.5, 0.2, 0.9});
  EXPECT_EQ(reduce_to_cluster_leads(tight).lines[0], (std::vector<double>{0.2}));
  EXPECT_THROW(reduce_to_cluster_leads(generate(ProcessSpec::single_line(5), 1)), ValidationError);
}

TEST(Hitting, AgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Realization real = generate(ProcessSpec::thinned(0.5, 1.0, 30), seed);
    const Trajectory t = run_walk(real, default_start());
    const HittingTimes h(t);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> q(-35, 35);
    for (int i = 0; i < 50; ++i) {
      const double x = q(gen);
      std::optional<std::size_t> ge, gt, lt, le;
      for (std::size_t n = t.size(); n >= 1; --n) {
        const double u = t.shadow(n);
        if (u >= x) ge = n;
        if (u > x) gt = n;
        if (u < x) lt = n;
        if (u <= x) le = n;
      }
      EXPECT_EQ(h.at_or_above(x), ge);
      EXPECT_EQ(h.above(x), gt);
      EXPECT_EQ(h.below(x), lt);
      EXPECT_EQ(h.at_or_below(x), le);
    }
    if (t.size() > 2) {
      std::size_t first = 1;
      while (t.shadow(first) != t.shadow(2)) ++first;
      EXPECT_EQ(h.at(t.shadow(2)), std::optional<std::size_t>(first));
    }
  }
}

TEST(Hitting, BothCopiesTime) {
  const auto real = hand(ProcessSpec::duplicated(1.0, 10), {1, 1.5, 4}, {1, 1.5, 4});
  const Trajectory t = run_walk(real, default_start(), StopRule::run_to_exhaustion());
  EXPECT_EQ(both_copies_time(real, t, 1.0), std::optional<std::size_t>(4));
  EXPECT_EQ(both_copies_time(real, t, 4.0), std::optional<std::size_t>(6));
  EXPECT_THROW(both_copies_time(real, t, 2.0), ValidationError);
  const Trajectory part = scripted(real, {{1, 0}});
  EXPECT_FALSE(both_copies_time(real, part, 1.0).has_value());
}

TEST(Dx, Examples) {
  EXPECT_EQ(dx_formula(std::vector<double>{0, 3, 10}, 10), 7);
  EXPECT_EQ(dx_formula(std::vector<double>{0, 10}, 10), 10);

  const auto real = hand(ProcessSpec::single_line(20), {3, 5, 10}, {});
  const Trajectory t = scripted(real, {{5, 0}, {10, 0}});
  const HittingTimes h(t);
  const auto rec = compute_Dx(real, t, 10, h);
  ASSERT_TRUE(rec);
  EXPECT_FALSE(rec->degenerate);
  EXPECT_EQ(rec->remaining_z, (std::vector<double>{0, 3, 10}));
  EXPECT_EQ(rec->value, 7);

  const auto lone = hand(ProcessSpec::single_line(20), {10}, {});
  const Trajectory tl = scripted(lone, {{10, 0}});
  EXPECT_EQ(compute_Dx(lone, tl, 10, HittingTimes(tl))->value, 10);

  const auto crossed = hand(ProcessSpec::single_line(20), {-1, 3, 10}, {});
  const Trajectory tc = scripted(crossed, {{-1, 0}, {10, 0}});
  const auto deg = compute_Dx(crossed, tc, 10, HittingTimes(tc));
  ASSERT_TRUE(deg);
  EXPECT_TRUE(deg->degenerate);
  EXPECT_EQ(deg->value, 0.0);

  const Trajectory early = scripted(real, {{5, 0}});
  EXPECT_FALSE(compute_Dx(real, early, 10, HittingTimes(early)).has_value());
  EXPECT_THROW(compute_Dx(real, t, 0.0, h), ValidationError);
}

TEST(Dx, InsertingARemainingPointNeverRaisesIt) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const double x = 1 + 20 * unit(gen);
    std::vector<double> zs{0, x};
    const int k = static_cast<int>(unit(gen) * 8);
    for (int i = 0; i < k; ++i) zs.push_back(x * unit(gen));
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    const double before = dx_formula(zs, x);
    EXPECT_GT(before, 0.0);
    EXPECT_LE(before, x);
    std::vector<double> more = zs;
    more.push_back(x * unit(gen));
    std::sort(more.begin(), more.end());
    more.erase(std::unique(more.begin(), more.end()), more.end());
    EXPECT_LE(dx_formula(more, x), before);
  }
}

TEST(Crossings, ExamplesAndBruteForce) {
  EXPECT_EQ(crossings_in(std::vector<double>{1, 2, -0.5, 3}), (std::vector<std::size_t>{2, 3}));
  EXPECT_TRUE(crossings_in(std::vector<double>{1, 2, 3, 4}).empty());
  EXPECT_TRUE(crossings_in(std::vector<double>{1, 0, -1}).empty());
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Realization real = generate(ProcessSpec::single_line(30), seed);
    const Trajectory t = run_walk(real, default_start());
    std::size_t brute = 0;
    for (std::size_t n = 1; n < t.size(); ++n) brute += (t.shadow(n) > 0) != (t.shadow(n + 1) > 0);
    EXPECT_EQ(detect_crossings(t).size(), brute);
  }
}

TEST(HalfLines, Examples) {
  const auto real = hand(ProcessSpec::intersecting(1.0, 10), {1, 2}, {1.5});
  const Trajectory t = scripted(real, {{1, 0}, {2, 0}, {1.5, 1}});
  const auto ch = extract_halfline_changes(t, real.space());
  ASSERT_EQ(ch.size(), 1u);
  EXPECT_EQ(ch[0].step, 2u);
  const Trajectory flat = scripted(real, {{1, 0}, {2, 0}});
  EXPECT_TRUE(extract_halfline_changes(flat, real.space()).empty());
  EXPECT_THROW(extract_halfline_changes(flat, Space::parallel(1, 10)), ValidationError);
}

TEST(UV, HandFixture) {
  const auto real = hand(ProcessSpec::intersecting(std::numbers::pi / 2, 10), {1, 2, 3}, {3.5, 4});
  const Trajectory t = run_walk(real, default_start(), StopRule::run_to_exhaustion());
  ASSERT_EQ(t.steps, (std::vector<Site>{{1, 0}, {2, 0}, {3, 0}, {3.5, 1}, {4, 1}}));
  const auto uv = extract_UV_sequences(t, real.space());
  ASSERT_EQ(uv.size(), 1u);
  EXPECT_EQ(uv[0].j, 3u);
  EXPECT_EQ(uv[0].k, 1u);
  EXPECT_EQ(uv[0].U, (Site{1, 0}));
  EXPECT_EQ(uv[0].V, (Site{3, 0}));
  EXPECT_TRUE(uv[0].b_event);
  const Trajectory none = scripted(real, {{1, 0}, {2, 0}});
  EXPECT_TRUE(extract_UV_sequences(none, real.space()).empty());
}

TEST(Events, AkThinnedFixture) {
  auto real = hand(ProcessSpec::thinned(1.0, 1.0, 20), {-1, 2, 4, 9}, {});
  real.duplicate_flags.assign(4, DupFlag::Line0);
  const Trajectory t = scripted(real, {{4, 0}, {9, 0}});
  const auto ev = detect_Ak_thinned(real, t);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].verdict, Verdict::False);
  EXPECT_EQ(ev[0].witness.dx, 2.0);
  EXPECT_EQ(ev[1].index, 2);
  EXPECT_EQ(ev[1].witness.dx, 2.0);
  EXPECT_EQ(ev[1].witness.x_minus1, -1.0);
  EXPECT_EQ(ev[1].witness.gap, 5.0);
  EXPECT_EQ(ev[1].verdict, Verdict::True);

  // Small gaps are decided without D.
  auto close = hand(ProcessSpec::thinned(1.0, 1.0, 20), {-1, 2, 2.5}, {});
  const auto ec = detect_Ak_thinned(close, scripted(close, {{2, 0}}));
  ASSERT_EQ(ec.size(), 1u);
  EXPECT_EQ(ec[0].verdict, Verdict::False);
  EXPECT_TRUE(std::isnan(ec[0].witness.dx));
}

TEST(Events, UnknownBeyondPrefix) {
  auto real = hand(ProcessSpec::thinned(1.0, 1.0, 20), {-1, 2, 4, 9}, {});
  const Trajectory t = scripted(real, {{2, 0}});
  const auto ev = detect_Ak_thinned(real, t);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[1].verdict, Verdict::Unknown);
}

TEST(Events, AkShiftedOnlyForPositiveShift) {
  const Realization pos = generate(ProcessSpec::shifted(0.3, 1.0, 30), 1);
  const Realization neg = generate(ProcessSpec::shifted(-0.3, 1.0, 30), 1);
  EXPECT_FALSE(detect_Ak_shifted(pos, run_walk(pos, default_start())).empty());
  EXPECT_TRUE(detect_Ak_shifted(neg, run_walk(neg, default_start())).empty());
}

TEST(Events, AmOnReducedWalk) {
  // Leads {1, 4, -1.2}: from 4 the walk returns to -1.2.
  Realization leads = hand(ProcessSpec::single_line(10), {-1.2, 1, 4}, {});
  const Trajectory t = run_walk(leads, default_start(), StopRule::run_to_exhaustion());
  ASSERT_EQ(t.steps, (std::vector<Site>{{1, 0}, {-1.2, 0}, {4, 0}}));
  const auto ev = detect_Am_on_reduced(t, 1.0, 10.0);
  ASSERT_EQ(ev.size(), 9u);
  EXPECT_EQ(ev[0].verdict, Verdict::True);
  for (std::size_t m = 1; m < ev.size(); ++m) EXPECT_EQ(ev[m].verdict, Verdict::False);

  const Trajectory cut = scripted(leads, {{1, 0}, {-1.2, 0}});
  const auto eu = detect_Am_on_reduced(cut, 1.0, 10.0);
  EXPECT_EQ(eu[0].verdict, Verdict::True);
  EXPECT_EQ(eu[1].verdict, Verdict::Unknown);
}

TEST(Events, DispatchByConstruction) {
  EXPECT_TRUE(detect_A_events(generate(ProcessSpec::single_line(20), 1),
                              run_walk(generate(ProcessSpec::single_line(20), 1), default_start()))
                  .empty());
  const Realization dup = generate(ProcessSpec::duplicated(1.0, 20), 3);
  for (const auto& e : detect_A_events(dup, run_walk(dup, default_start()))) {
    EXPECT_EQ(e.family, EventFamily::AmParallel);
  }
}

TEST(Bounds, FrozenValues) {
  // 4 e^{-9} / (1 - e^{-1}), evaluated independently.
  const double expect = 4.0 * 1.2340980408667956e-4 / (1.0 - 0.36787944117144233);
  EXPECT_NEAR(intersect_B_bound(std::numbers::pi / 2, 10), expect, 1e-15);
  EXPECT_NEAR(intersect_B_bound(std::numbers::pi / 2, 10), 7.809e-4, 1e-7);
  EXPECT_NEAR(parallel_Am_first_term(1.0, 1), 0.5 * 0.1353352832366127 * (1 - 0.1353352832366127), 1e-15);
  EXPECT_NEAR(parallel_Am_first_term(1.0, 1), 0.05851, 1e-5);
  for (int n = 1; n < 20; ++n) EXPECT_GT(intersect_B_bound(1.0, n), intersect_B_bound(1.0, n + 1));
  for (int m = 1; m < 20; ++m) EXPECT_GT(parallel_Am_first_term(0.5, m), parallel_Am_first_term(0.5, m + 1));
  EXPECT_THROW(intersect_B_bound(0.0, 1), ValidationError);
  EXPECT_THROW(intersect_B_bound(1.0, 0), ValidationError);
  EXPECT_THROW(parallel_Am_first_term(-1.0, 1), ValidationError);
  const std::vector<double> gaps{0.5, 1.5, 2.5, 3.5};
  EXPECT_EQ(empirical_survival(gaps, 2.0), 0.5);
  EXPECT_EQ(parallel_Am_bound(1.0, 3, gaps).second_term, 0.25);
}
