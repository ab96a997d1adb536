#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fscn/fdist.hpp"

using namespace fscn;

namespace {
bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// Reference values computed at 25+ digits from the defining integrals
// (independent ordered-region quadrature), frozen here.
struct Ref {
  int m, n, p;
  double t, value;
};
constexpr Ref kH0Refs[] = {
    {2, 2, 2, 1.5, 0.00187870257709942507472628},
    {2, 2, 2, 3.0, 0.03432465943831069285326612},
    {2, 2, 2, 5.0, 0.09680756020356671282082828},
    {2, 2, 2, 10.0, 0.23203205885285807761578636},
    {2, 2, 2, 50.0, 0.61166642310220090496810124},
    {2, 2, 3, 1.5, 0.00311568625066130822465806},
    {2, 2, 3, 3.0, 0.05522402440747814195861107},
    {2, 2, 3, 10.0, 0.33696975525094409703681945},
    {2, 3, 3, 1.5, 0.00562420946037414600614883},
    {2, 3, 3, 3.0, 0.09539478619903165109446845},
    {2, 3, 3, 10.0, 0.50280423137478642700178998},
    {2, 4, 3, 1.5, 0.00753122824678338822268132},
    {2, 4, 3, 3.0, 0.12375211829821065547029870},
    {2, 4, 3, 10.0, 0.59118594850971149817192470},
    {2, 3, 4, 3.0, 0.12375211829821065547029870},
    {3, 3, 4, 3.0, 0.00019058617124190447881775},
    {3, 3, 4, 10.0, 0.02932826765278329101543409},
    {3, 4, 5, 3.0, 0.00107525688116062868923464},
    {3, 4, 5, 10.0, 0.11367749342399215540561520},
    {3, 4, 4, 3.0, 0.00057945184960902829982776},
    {3, 4, 4, 10.0, 0.07203483536077946223450229},
};
}  // namespace

TEST_CASE("joint_density_h0 known one-dimensional form") {
  // m = 1, n = p = 1: density is 1/(1+x)^2
  const ProblemDims d{1, 1, 1};
  for (double x : {0.1, 1.0, 7.5}) {
    const double lam[1] = {x};
    CHECK(close(joint_density_h0(d, lam), 1.0 / ((1 + x) * (1 + x)), 1e-14));
  }
}

TEST_CASE("joint densities vanish at coincident eigenvalues and reject bad input") {
  const ProblemDims d{2, 3, 3};
  const double same[2] = {1.5, 1.5};
  CHECK(joint_density_h0(d, same) == 0.0);
  CHECK(joint_density_h1(d, 1.0, same) == 0.0);
  const double unordered[2] = {2.0, 1.0};
  CHECK_THROWS_AS(joint_density_h0(d, unordered), std::domain_error);
  const double nonpos[2] = {-1.0, 2.0};
  CHECK_THROWS_AS(joint_density_h0(d, nonpos), std::domain_error);
  CHECK_THROWS_AS(joint_density_h1(d, 0.0, same), std::domain_error);
}

TEST_CASE("joint_density_h1 tends to joint_density_h0 as the spike vanishes") {
  const ProblemDims d{2, 2, 2};
  const double lam[2] = {0.8, 2.6};
  const double f0 = joint_density_h0(d, lam);
  const double f1 = joint_density_h1(d, 1e-8, lam);
  CHECK(close(f1, f0, 1e-5 * f0));
}

TEST_CASE("corollary 2 reference values and limits") {
  for (const auto& r : kH0Refs) {
    if (!(r.m == r.n && r.n == r.p)) continue;
    auto e = cdf_h0_corollary2(r.m, r.t);
    CHECK(close(e.value, r.value, 1e-11));
  }
  // m = 1: SCN is identically 1
  CHECK(cdf_h0_corollary2(1, 2.0).value == doctest::Approx(1.0).epsilon(1e-14));
  // t -> 1+ vanishes like (t-1)^{m^2-1}
  const double f1 = cdf_h0_corollary2(2, 1.0 + 1e-4).value;
  const double f2 = cdf_h0_corollary2(2, 1.0 + 2e-4).value;
  CHECK(close(f2 / f1, 8.0, 0.01));  // cubic leading order
  // t -> infinity approaches 1
  CHECK(close(cdf_h0_corollary2(2, 1e6).value, 1.0, 1e-3));
}

TEST_CASE("corollary 1 reference values, degeneration and constraint") {
  for (const auto& r : kH0Refs) {
    if (r.n != r.m || r.p == r.m) continue;
    auto e = cdf_h0_corollary1({r.m, r.n, r.p}, r.t);
    CHECK(close(e.value, r.value, 1e-10));
  }
  // beta = 0 routes to the square-case value
  auto e = cdf_h0_corollary1({2, 2, 2}, 5.0);
  CHECK(e.method == CdfMethod::Corollary1);
  CHECK(close(e.value, 0.09680756020356671282082828, 1e-12));
  // alpha != 0 is a domain error
  CHECK_THROWS_AS(cdf_h0_corollary1({2, 3, 3}, 5.0), std::domain_error);
  // constraint violation: (m,n,p) = (2,2,6) has (p-m)(p+m-1) = 28 >= 24 = 2mp
  CHECK_THROWS_AS(cdf_h0_corollary1({2, 2, 6}, 5.0), std::domain_error);
}

TEST_CASE("theorem 1 reference values") {
  for (const auto& r : kH0Refs) {
    if (r.n == r.m && r.p == r.m) continue;  // square case routes elsewhere
    auto e = cdf_h0_theorem1({r.m, r.n, r.p}, r.t);
    CHECK(close(e.value, r.value, 1e-9));
    CHECK(e.err_estimate < 1e-8);
  }
}

TEST_CASE("theorem 1 limits") {
  auto near_one = cdf_h0_theorem1({2, 3, 3}, 1.0 + 1e-6);
  CHECK(near_one.value >= 0.0);
  CHECK(near_one.value < 1e-4);
  auto far = cdf_h0_theorem1({2, 3, 3}, 1e6);
  CHECK(close(far.value, 1.0, 1e-3));
  CHECK_THROWS_AS(cdf_h0_theorem1({2, 2, 2}, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(cdf_h0_theorem1({2, 3, 3}, 0.9), std::invalid_argument);
}

TEST_CASE("theorem 1 equals corollary 1 on the alpha = 0 overlap") {
  for (const auto& dims : {ProblemDims{2, 2, 3}, ProblemDims{3, 3, 4}, ProblemDims{2, 2, 4}}) {
    for (double t : {1.5, 3.0, 10.0}) {
      const double a = cdf_h0_theorem1(dims, t).value;
      const double b = cdf_h0_corollary1(dims, t).value;
      CHECK(close(a, b, 1e-8));
    }
  }
}

TEST_CASE("theorem 2 reference values") {
  // 25-digit references from the verified closed form / Appendix integrals
  CHECK(close(cdf_h1_theorem2(2, 1.0, 1.5).value, 0.00169151223982861366548490, 1e-11));
  CHECK(close(cdf_h1_theorem2(2, 1.0, 1.8).value, 0.00508373468261659041799801, 1e-11));
  CHECK(close(cdf_h1_theorem2(2, 1.0, 5.0).value, 0.08866575385649549971359423, 1e-10));
  CHECK(close(cdf_h1_theorem2(2, 2.0, 1.5).value, 0.00144590694666970027338593, 1e-11));
  CHECK(close(cdf_h1_theorem2(2, 2.0, 5.0).value, 0.07769282798406139876841887, 1e-10));
  CHECK(close(cdf_h1_theorem2(3, 1.0, 1.5).value, 2.327901086064450426544e-8, 1e-14));
  CHECK(close(cdf_h1_theorem2(3, 0.5, 3.0).value, 6.46359424218588871827e-5, 1e-11));
  CHECK(close(cdf_h1_theorem2(3, 5.0, 1.2).value, 1.039651616536713532585e-11, 1e-17));
  CHECK(close(cdf_h1_theorem2(4, 2.0, 1.8).value, 4.405661422880737255492e-13, 1e-19));
}

TEST_CASE("theorem 2 limits and degenerations") {
  // gamma -> 0 approaches the H0 square case (cancellation costs some digits)
  const double h0 = cdf_h0_corollary2(2, 1.5).value;
  const double h1 = cdf_h1_theorem2(2, 1e-6, 1.5).value;
  CHECK(close(h1, h0, 1e-4 * std::max(h0, 1e-30) + 1e-9));
  // t -> 1+ vanishes
  CHECK(cdf_h1_theorem2(2, 1.0, 1.0 + 1e-4).value < 1e-8);
  // evaluable far beyond t = 2 (the corrected series argument keeps the
  // integral representation regular)
  const double big = cdf_h1_theorem2(3, 1.0, 50.0).value;
  CHECK(big > 0.0);
  CHECK(big < 1.0);
  CHECK_THROWS_AS(cdf_h1_theorem2(2, 0.0, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(cdf_h1_theorem2(2, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("monte carlo cdf basic behavior") {
  // single draw: step function at the drawn SCN
  MonteCarloOptions mc;
  mc.draws = 1;
  mc.seed = 7;
  const double grid[2] = {1.1, 1e9};
  auto r = cdf_scn_monte_carlo({2, 2, 2}, std::nullopt, grid, mc);
  CHECK((r[0].value == 0.0 || r[0].value == 1.0));
  CHECK(r[1].value == 1.0);
  // m=1: SCN identically 1, cdf = 1 at every t > 1
  mc.draws = 100;
  auto r1 = cdf_scn_monte_carlo({1, 2, 3}, std::nullopt, grid, mc);
  CHECK(r1[0].value == 1.0);
  // grid validation
  const double bad_grid[2] = {3.0, 2.0};
  CHECK_THROWS_AS(cdf_scn_monte_carlo({2, 2, 2}, std::nullopt, bad_grid, mc),
                  std::invalid_argument);
}

TEST_CASE("monte carlo agrees with the exact square-case value") {
  MonteCarloOptions mc;
  mc.draws = 50000;
  mc.seed = 31337;
  const double grid[1] = {5.0};
  auto r = cdf_scn_monte_carlo({2, 2, 2}, std::nullopt, grid, mc);
  CHECK(close(r[0].value, 0.09680756020356671, 3.0 * r[0].err_estimate));
}

TEST_CASE("brute force quadrature oracle") {
  // t -> infinity gives total probability
  auto total = cdf_scn_bruteforce_quadrature({2, 3, 3}, std::nullopt, 1e8);
  CHECK(close(total.value, 1.0, 1e-6));
  // H0 square case matches the closed form
  auto q = cdf_scn_bruteforce_quadrature({2, 2, 2}, std::nullopt, 5.0);
  CHECK(close(q.value, 0.09680756020356671282082828, 1e-7));
  // H1 matches the Appell-based form
  SpikeParams spike = SpikeParams::with_gamma(2.0);
  auto h1 = cdf_scn_bruteforce_quadrature({2, 2, 2}, spike, 1.8);
  CHECK(close(h1.value, cdf_h1_theorem2(2, 2.0, 1.8).value, 1e-6));
  CHECK_THROWS_AS(cdf_scn_bruteforce_quadrature({3, 3, 3}, std::nullopt, 2.0),
                  std::invalid_argument);
}

TEST_CASE("stochastic dominance: H1 cdf lies below H0") {
  for (double t : {1.5, 3.0, 10.0}) {
    const double h0 = cdf_h0_corollary2(2, t).value;
    for (double g : {0.5, 2.0, 5.0})
      CHECK(cdf_h1_theorem2(2, g, t).value <= h0 + 1e-12);
  }
}

TEST_CASE("H1 cdf is non-increasing in gamma at fixed t") {
  for (int m : {2, 3}) {
    double prev = 2.0;
    for (double g : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double v = cdf_h1_theorem2(m, g, 1.8).value;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("dispatcher selects documented methods") {
  CHECK(cdf_h0({2, 2, 2}, 5.0).method == CdfMethod::Corollary2);
  CHECK(cdf_h0({2, 2, 3}, 5.0).method == CdfMethod::Corollary1);
  CHECK(cdf_h0({2, 3, 3}, 5.0).method == CdfMethod::Theorem1);
  CHECK(cdf_h0({1, 4, 7}, 5.0).value == 1.0);

  DispatchOptions opts;
  opts.mc.draws = 2000;
  opts.mc.seed = 5;
  // constraint-violating alpha=0 shape falls through Theorem 1 to Monte Carlo
  CHECK(cdf_h0({2, 2, 6}, 5.0, opts).method == CdfMethod::MonteCarlo);
  opts.allow_monte_carlo = false;
  CHECK_THROWS_AS(cdf_h0({2, 2, 6}, 5.0, opts), NonConvergenceError);

  CHECK(cdf_h1({2, 2, 2}, 1.0, 1.5).method == CdfMethod::Theorem2);
  CHECK(cdf_h1({2, 2, 2}, 0.0, 5.0).method == CdfMethod::Corollary2);  // spike off
  DispatchOptions mc_opts;
  mc_opts.mc.draws = 2000;
  mc_opts.mc.seed = 6;
  CHECK(cdf_h1({2, 3, 3}, 1.0, 2.0, mc_opts).method == CdfMethod::MonteCarlo);
  mc_opts.allow_monte_carlo = false;
  CHECK_THROWS_AS(cdf_h1({2, 3, 3}, 1.0, 2.0, mc_opts), NotEvaluableError);
}

TEST_CASE("exact cdf paths are monotone in t") {
  auto grid_check = [](auto&& eval) {
    double prev = -1.0;
    for (int i = 0; i < 60; ++i) {
      const double t = 1.0 + std::pow(10.0, -2.0 + 5.0 * i / 59.0);
      const CdfEvaluation e = eval(t);
      CHECK(e.value >= prev - e.err_estimate - 1e-12);
      CHECK(e.value >= -e.err_estimate);
      CHECK(e.value <= 1.0 + e.err_estimate + 1e-12);
      prev = e.value;
    }
  };
  grid_check([](double t) { return cdf_h0_corollary2(3, t); });
  grid_check([](double t) { return cdf_h0_corollary1({2, 2, 3}, t); });
  grid_check([](double t) { return cdf_h0_theorem1({2, 3, 3}, t); });
  grid_check([](double t) { return cdf_h1_theorem2(2, 1.0, t); });
}
