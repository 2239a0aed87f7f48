#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gwlab/processes.hpp"
#include "gwlab/rng.hpp"

using namespace gwlab;

namespace {

Realization shifted_fixture(std::vector<double> base, double s, double r = 1.0, double L = 10.0) {
  Realization real;
  real.spec = ProcessSpec::shifted(s, r, L);
  real.lines[0] = base;
  for (double x : base) real.lines[1].push_back(x + s);
  real.base_points = base;
  real.coverage = {Interval{-L, L}, Interval{-L + s, L + s}};
  return real;
}

}  // namespace

TEST(Rng, SplitMixKnownAnswer) {
  // Reference outputs of SplitMix64 seeded with 0.
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64_next(s), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64_next(s), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(splitmix64_next(s), 0x06C45D188009454FULL);
}

TEST(Rng, DeterministicAndDistinctStreams) {
  Xoshiro256 a(42);
  Xoshiro256 b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 5), derive_seed(9, 5));
}

TEST(Rng, UniformRangeAndMean) {
  Xoshiro256 g(5);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = g.uniform_open01();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n).
  EXPECT_NEAR(sum / n, 0.5, 3 * std::sqrt(1.0 / 12 / n));
}

TEST(SamplePoisson, Basics) {
  Xoshiro256 g(1);
  EXPECT_TRUE(sample_poisson(0.0, {-5, 5}, g).empty());
  Xoshiro256 a(9);
  Xoshiro256 b(9);
  EXPECT_EQ(sample_poisson(1.0, {-50, 50}, a), sample_poisson(1.0, {-50, 50}, b));
}

TEST(SamplePoisson, MeanCountMatchesIntensity) {
  const int seeds = 10000;
  double sum = 0;
  double left_half = 0;
  for (int i = 0; i < seeds; ++i) {
    Xoshiro256 g(derive_seed(77, static_cast<std::uint64_t>(i)));
    const auto pts = sample_poisson(1.0, {-50, 50}, g);
    ASSERT_TRUE(std::is_sorted(pts.begin(), pts.end()));
    sum += static_cast<double>(pts.size());
    left_half += static_cast<double>(std::count_if(pts.begin(), pts.end(), [](double x) { return x < 0; }));
  }
  // Var(count) = 100, so the sd of the mean is 0.1.
  EXPECT_NEAR(sum / seeds, 100.0, 0.3);
  EXPECT_NEAR(left_half / seeds, 50.0, 3 * std::sqrt(50.0 / seeds));
}

TEST(Generate, SpecValidation) {
  EXPECT_THROW(generate(ProcessSpec::shifted(0.6, 1.0, 10), 1), ValidationError);
  EXPECT_THROW(generate(ProcessSpec::shifted(0.0, 1.0, 10), 1), ValidationError);
  EXPECT_THROW(generate(ProcessSpec::thinned(1.5, 1.0, 10), 1), ValidationError);
  EXPECT_THROW(generate(ProcessSpec::thinned(-0.1, 1.0, 10), 1), ValidationError);
  ProcessSpec bad = ProcessSpec::duplicated(1.0, 10);
  bad.space = Space::single_line(10);
  EXPECT_THROW(generate(bad, 1), ValidationError);
  ProcessSpec lam = ProcessSpec::single_line(10, 0.0);
  EXPECT_THROW(generate(lam, 1), ValidationError);

  ProcessSpec wide = ProcessSpec::shifted(0.6, 1.0, 10);
  wide.allow_unproven_s = true;
  EXPECT_NO_THROW(generate(wide, 1));
  EXPECT_TRUE(wide.exploratory());
  wide.shift_s = 1.0;
  EXPECT_THROW(generate(wide, 1), ValidationError);
  EXPECT_FALSE(ProcessSpec::shifted(0.3, 1.0, 10).exploratory());
}

TEST(Generate, ThinnedExtremes) {
  const Realization p0 = generate(ProcessSpec::thinned(0.0, 1.0, 30), 4);
  EXPECT_EQ(p0.lines[0], p0.base_points);
  EXPECT_EQ(p0.lines[1], p0.base_points);
  const Realization p1 = generate(ProcessSpec::thinned(1.0, 1.0, 30), 4);
  std::vector<double> inter;
  std::set_intersection(p1.lines[0].begin(), p1.lines[0].end(), p1.lines[1].begin(), p1.lines[1].end(),
                        std::back_inserter(inter));
  EXPECT_TRUE(inter.empty());
  EXPECT_EQ(p1.lines[0].size() + p1.lines[1].size(), p1.base_points.size());
  EXPECT_NO_THROW(check_invariants(p1));
}

TEST(Generate, InvariantsForEveryConstruction) {
  const std::vector<ProcessSpec> specs = {
      ProcessSpec::single_line(40), ProcessSpec::intersecting(1.0, 40), ProcessSpec::duplicated(1.0, 40),
      ProcessSpec::thinned(0.5, 1.0, 40), ProcessSpec::shifted(0.3, 1.0, 40), ProcessSpec::shifted(-0.4, 1.0, 40)};
  for (const auto& spec : specs) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const Realization real = generate(spec, seed);
      ASSERT_NO_THROW(check_invariants(real)) << to_string(spec.construction) << " seed " << seed;
      const Realization again = generate(spec, seed);
      EXPECT_EQ(real.lines, again.lines);
    }
  }
}

TEST(Generate, ThinnedDuplicateFractionAndLineIntensity) {
  const int runs = 10000;
  const double p = 0.3;
  double dup = 0;
  double base = 0;
  double per_line = 0;
  double per_line1 = 0;
  for (int i = 0; i < runs; ++i) {
    const Realization a = generate(ProcessSpec::thinned(p, 1.0, 20), derive_seed(5, static_cast<std::uint64_t>(i)));
    const double n = static_cast<double>(a.base_points.size());
    base += n;
    dup += static_cast<double>(a.lines[0].size() + a.lines[1].size()) - n;
    const Realization b = generate(ProcessSpec::thinned(1.0, 1.0, 20), derive_seed(6, static_cast<std::uint64_t>(i)));
    per_line += static_cast<double>(b.lines[0].size());
    per_line1 += static_cast<double>(b.lines[1].size());
  }
  // Given the base counts, #dup ~ Binomial(N, 1-p).
  EXPECT_NEAR(dup / base, 1 - p, 3 * std::sqrt(p * (1 - p) / base));
  // Each line of p = 1 is Poisson with mean 20.
  EXPECT_NEAR(per_line / runs, 20.0, 3 * std::sqrt(20.0 / runs));
  EXPECT_NEAR(per_line1 / runs, 20.0, 3 * std::sqrt(20.0 / runs));
}

TEST(Generate, ShiftedExample) {
  const Realization real = shifted_fixture({1.0, 2.5}, 0.3);
  EXPECT_DOUBLE_EQ(real.lines[1][0], 1.3);
  EXPECT_DOUBLE_EQ(real.lines[1][1], 2.8);
  const Realization g = generate(ProcessSpec::shifted(0.3, 1.0, 30), 12);
  EXPECT_EQ(g.coverage[1].lo, -30 + 0.3);
  for (std::size_t k = 0; k < g.lines[0].size(); ++k) EXPECT_EQ(g.lines[1][k], g.lines[0][k] + 0.3);
}

TEST(ShiftOperator, IdentityAndLineSwap) {
  const Realization real = generate(ProcessSpec::thinned(0.5, 1.0, 20), 8);
  const Realization same = shift_realization(real, {0.0, 0});
  EXPECT_EQ(same.lines, real.lines);
  EXPECT_EQ(same.duplicate_flags, real.duplicate_flags);

  ASSERT_FALSE(real.lines[1].empty());
  const double x = real.lines[1][real.lines[1].size() / 2];
  const Realization moved = shift_realization(real, {x, 1});
  EXPECT_TRUE(std::binary_search(moved.lines[0].begin(), moved.lines[0].end(), 0.0));
  ASSERT_EQ(moved.lines[0].size(), real.lines[1].size());
  for (std::size_t i = 0; i < moved.lines[0].size(); ++i) EXPECT_EQ(moved.lines[0][i], real.lines[1][i] - x);
  for (std::size_t i = 0; i < moved.lines[1].size(); ++i) EXPECT_EQ(moved.lines[1][i], real.lines[0][i] - x);
  EXPECT_NO_THROW(check_invariants(moved));

  // Back: the old line 0 now sits on line 1, so anchor there.
  const Realization back = shift_realization(moved, {-x, 1});
  ASSERT_EQ(back.lines[0].size(), real.lines[0].size());
  for (int l = 0; l < 2; ++l) {
    for (std::size_t i = 0; i < back.line(l).size(); ++i) EXPECT_NEAR(back.line(l)[i], real.line(l)[i], 1e-12);
  }
  EXPECT_EQ(back.duplicate_flags, real.duplicate_flags);
}

TEST(ShiftOperator, ShiftedConstructionFlipsShift) {
  const Realization real = shifted_fixture({-2.0, 1.0, 4.0}, 0.25);
  const Realization moved = shift_realization(real, {1.25, 1});
  EXPECT_EQ(*moved.spec.shift_s, -0.25);
  for (std::size_t k = 0; k < moved.lines[0].size(); ++k) {
    EXPECT_NEAR(moved.lines[1][k], moved.lines[0][k] - 0.25, 1e-12);
  }
  EXPECT_THROW(shift_realization(generate(ProcessSpec::intersecting(1.0, 5), 1), {0.0, 0}), ValidationError);
}

TEST(MirrorOperator, InvolutionAndExamples) {
  Realization line;
  line.spec = ProcessSpec::single_line(5);
  line.lines[0] = {1.0, 2.0};
  line.base_points = line.lines[0];
  line.coverage = symmetric_coverage(5);
  EXPECT_EQ(mirror_realization(line).lines[0], (std::vector<double>{-2.0, -1.0}));

  const Realization thin = generate(ProcessSpec::thinned(0.5, 1.0, 20), 3);
  const Realization twice = mirror_realization(mirror_realization(thin));
  EXPECT_EQ(twice.lines, thin.lines);
  EXPECT_EQ(twice.duplicate_flags, thin.duplicate_flags);
  EXPECT_NO_THROW(check_invariants(mirror_realization(thin)));

  const Realization sh = shifted_fixture({-3.0, 0.5, 2.0}, 0.3);
  const Realization m = mirror_realization(sh);
  EXPECT_EQ(*m.spec.shift_s, -0.3);
  for (std::size_t k = 0; k < m.lines[0].size(); ++k) EXPECT_NEAR(m.lines[1][k], m.lines[0][k] - 0.3, 1e-12);
}

TEST(Construction, NamesRoundTrip) {
  for (Construction c : kAllConstructions) EXPECT_EQ(construction_from_string(to_string(c)), c);
  EXPECT_THROW(construction_from_string("nope"), ValidationError);
}
