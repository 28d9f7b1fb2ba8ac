#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "hweno/reference.hpp"
#include "support.hpp"

using namespace hweno;
using hweno::test::Rng;
using hweno::test::total_variation;

TEST(FirstOrderStep, MaximumPrincipleAndTotalVariation) {
  Rng rng(61);
  const std::vector<FluxModel> fluxes = {FluxModel::cubic(), FluxModel::sine(), FluxModel::piecewise_trig()};
  for (const auto& f : fluxes) {
    for (auto flavor : {MonotoneFlux::Godunov, MonotoneFlux::LaxFriedrichs}) {
      for (int trial = 0; trial < 30; ++trial) {
        const int n = rng.integer(5, 60);
        auto q = rng.vector(n, 1.0, 3.0);
        const bool periodic = trial % 2 == 0;
        const BoundarySpec bc = periodic ? BoundarySpec::periodic() : BoundarySpec::fixed(q.front(), q.back());
        const double dx = 0.1;
        const double alpha = f.max_abs_df(1.0, 3.0);
        const double dt = rng.uniform(0.0, 1.0) * dx / alpha;
        const double lo = *std::min_element(q.begin(), q.end()), hi = *std::max_element(q.begin(), q.end());
        const double tv0 = total_variation(q, periodic);
        const auto next = first_order_step(q, f, dt, dx, flavor, bc);
        for (double v : next) {
          EXPECT_GE(v, lo - 1e-12) << f.name();
          EXPECT_LE(v, hi + 1e-12) << f.name();
        }
        EXPECT_LE(total_variation(next, periodic), tv0 + 1e-12) << f.name();
      }
    }
  }
}

TEST(FirstOrderStep, RejectsCflViolationAndEmptyData) {
  EXPECT_THROW(first_order_step({1.0, 2.0}, FluxModel::cubic(), 1.0, 0.1, MonotoneFlux::Godunov,
                                BoundarySpec::periodic()),
               CflViolation);
  EXPECT_THROW(first_order_step({}, FluxModel::cubic(), 0.1, 0.1, MonotoneFlux::Godunov, BoundarySpec::periodic()),
               InvalidArgument);
}

TEST(FirstOrderStep, ShockSpeedOfConvexRiemannProblem) {
  // q^3/3 with states 2 | 0: shock speed (8/3) / 2 = 4/3
  const int n = 4000;
  const Grid1D g = build_grid(-1.0, 3.0, n);
  std::vector<double> q(n);
  for (int j = 0; j < n; ++j) q[j] = g.center(j) < 0.0 ? 2.0 : 0.0;
  MonotoneStepper st(FluxModel::cubic(), MonotoneFlux::Godunov, BoundarySpec::fixed(2.0, 0.0), 4.0);
  const double dt = 0.9 * g.dx / 4.0;
  double t = 0.0;
  while (t < 1.0) {
    const double h = std::min(dt, 1.0 - t);
    st.step(q, h, g.dx);
    t += h;
  }
  double mass = 0.0;
  for (double v : q) mass += v * g.dx;
  // mass to the right of x = -1 grows by f(2) t = 8/3
  EXPECT_NEAR(mass, 2.0 + 8.0 / 3.0, 1e-9);
  int k = 0;
  while (q[k] > 1.0) ++k;
  EXPECT_NEAR(g.face(k), 4.0 / 3.0, 5 * g.dx);
}

TEST(Restriction, BlockAverages) {
  const std::vector<double> fine = {1, 2, 3, 4, 5, 6};
  EXPECT_EQ(restrict_conservative(fine, 3), (std::vector<double>{1.5, 3.5, 5.5}));
  EXPECT_THROW(restrict_conservative(fine, 4), InvalidArgument);
  const std::vector<double> f2 = {1, 2, 3, 4, 5, 6, 7, 8};  // 4 x 2
  EXPECT_EQ(restrict_conservative_2d(f2, 4, 2, 2, 1), (std::vector<double>{3.5, 5.5}));
  EXPECT_THROW(restrict_conservative_2d(f2, 4, 2, 3, 1), InvalidArgument);
}

TEST(ReferenceCache, RoundTripAndStaleness) {
  const auto dir = std::filesystem::temp_directory_path() / "hweno_reference_test";
  std::filesystem::remove_all(dir);
  const ProblemCase c = find_problem("sine-riemann");
  const ReferenceSolution a = reference_solution(c, 200, 0.5, dir);
  const auto path = reference_cache_path(dir, c, 200, 0, 0.5);
  ASSERT_TRUE(std::filesystem::exists(path));
  const ReferenceSolution b = reference_solution(c, 200, 0.5, dir);
  ASSERT_EQ(a.qbar.size(), b.qbar.size());
  for (std::size_t k = 0; k < a.qbar.size(); ++k) EXPECT_EQ(a.qbar[k], b.qbar[k]);
  // a corrupted cache is recomputed
  {
    std::ofstream out(path);
    out << "garbage\n";
  }
  const ReferenceSolution c2 = reference_solution(c, 200, 0.5, dir);
  EXPECT_EQ(c2.qbar, a.qbar);
  const ReferenceSolution d = reference_solution(c, 200, 0.5, {});
  EXPECT_EQ(d.qbar, a.qbar);
  std::filesystem::remove_all(dir);
}

TEST(Reference2D, SmallKppRunStaysInRange) {
  const ProblemCase c = find_problem("kpp");
  const ReferenceSolution r = reference_solution_2d(c, 40, 40, 0.2, {});
  ASSERT_EQ(r.qbar.size(), 1600u);
  for (double v : r.qbar) {
    EXPECT_GE(v, c.qmin - 1e-12);
    EXPECT_LE(v, c.qmax + 1e-12);
  }
  EXPECT_THROW(reference_solution(c, 10, 0.1, {}), InvalidArgument);
  EXPECT_THROW(reference_solution_2d(find_problem("cubic-smooth"), 10, 10, 0.1, {}), InvalidArgument);
}
