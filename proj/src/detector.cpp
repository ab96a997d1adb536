#include "fscn/detector.hpp"

#include <algorithm>
#include <cmath>

namespace fscn {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

double false_alarm_rate(const ProblemDims& dims, double mu_th,
                        const AccuracyBudget& budget) {
  if (!(mu_th > 1.0)) throw std::invalid_argument("false_alarm_rate: requires mu_th > 1");
  DispatchOptions opts;
  opts.budget = budget;
  opts.allow_monte_carlo = false;  // threshold work needs the exact paths
  return clamp01(1.0 - cdf_h0(dims, mu_th, opts).value);
}

double threshold_for_alpha(const ProblemDims& dims, double alpha_rate,
                           const AccuracyBudget& budget) {
  if (!(alpha_rate > 0.0 && alpha_rate < 1.0))
    throw std::invalid_argument("threshold_for_alpha: requires 0 < alpha_rate < 1");
  dims.validate();
  if (dims.m == 1)
    throw std::domain_error("threshold_for_alpha: m = 1 has SCN identically 1 (P_F is 0 or 1)");
  const double f_target = 1.0 - alpha_rate;

  DispatchOptions opts;
  opts.budget = budget;
  opts.allow_monte_carlo = false;
  auto cdf = [&](double mu) { return cdf_h0(dims, mu, opts).value; };

  double lo = 1.0 + 1e-12, hi = 2.0;
  int guard = 0;
  while (cdf(hi) < f_target) {
    lo = hi;
    hi *= 4.0;
    if (++guard > 200 || hi > 1e15)
      throw NonConvergenceError("threshold_for_alpha: bracket expansion failed");
  }
  // bisection on the monotone c.d.f. down to relative width 1e-10
  while ((hi - lo) > 1e-10 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < f_target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double detection_probability(const ProblemDims& dims, double gamma, double mu_th,
                             PdMethod method, const MonteCarloOptions& mc,
                             const AccuracyBudget& budget) {
  if (!(mu_th > 1.0))
    throw std::invalid_argument("detection_probability: requires mu_th > 1");
  if (gamma < 0.0) throw std::invalid_argument("detection_probability: gamma >= 0");
  if (gamma == 0.0) return false_alarm_rate(dims, mu_th, budget);  // H1 degenerates to H0
  if (method == PdMethod::Exact) {
    if (!(dims.m == dims.n && dims.n == dims.p))
      throw std::domain_error(
          "detection_probability: exact path requires m = n = p; use the Monte Carlo method");
    return clamp01(1.0 - cdf_h1_theorem2(dims.m, gamma, mu_th, budget).value);
  }
  const double grid[1] = {mu_th};
  SpikeParams spike = SpikeParams::with_gamma(gamma);
  return clamp01(1.0 - cdf_scn_monte_carlo(dims, spike, grid, mc)[0].value);
}

std::vector<DetectorOperatingPoint> roc_profile(const ProblemDims& dims, double gamma,
                                                std::span<const double> alpha_grid,
                                                const RocOptions& opts) {
  for (size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0.0 && alpha_grid[i] < 1.0))
      throw std::invalid_argument("roc_profile: alpha grid values must lie in (0,1)");
    if (i > 0 && alpha_grid[i] < alpha_grid[i - 1])
      throw std::invalid_argument("roc_profile: alpha grid must be ascending");
  }
  const bool square = dims.m == dims.n && dims.n == dims.p;
  std::vector<DetectorOperatingPoint> points;
  points.reserve(alpha_grid.size());
  for (double a : alpha_grid) {
    DetectorOperatingPoint pt;
    pt.mu_th = threshold_for_alpha(dims, a, opts.budget);
    pt.p_f = false_alarm_rate(dims, pt.mu_th, opts.budget);
    if (gamma == 0.0) {
      pt.p_d = pt.p_f;
      pt.pd_method = CdfMethod::Corollary2;
    } else if (square && !opts.force_monte_carlo) {
      pt.p_d = detection_probability(dims, gamma, pt.mu_th, PdMethod::Exact, opts.mc,
                                     opts.budget);
      pt.pd_method = CdfMethod::Theorem2;
    } else {
      pt.p_d = detection_probability(dims, gamma, pt.mu_th, PdMethod::MonteCarlo,
                                     opts.mc, opts.budget);
      pt.pd_method = CdfMethod::MonteCarlo;
    }
    points.push_back(pt);
  }
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.p_f < b.p_f; });
  return points;
}

CfarResult cfar_experiment(const ProblemDims& dims, double mu_th,
                           const std::vector<Eigen::MatrixXcd>& covariances,
                           long draws, std::uint64_t seed, int threads) {
  if (!(mu_th > 1.0)) throw std::invalid_argument("cfar_experiment: requires mu_th > 1");
  if (covariances.empty())
    throw std::invalid_argument("cfar_experiment: needs at least one covariance");
  if (draws < 1) throw std::invalid_argument("cfar_experiment: draws >= 1");

  CfarResult result;
  {
    DispatchOptions opts;
    CdfEvaluation e = cdf_h0(dims, mu_th, opts);
    result.exact_pf = clamp01(1.0 - e.value);
    result.exact_err = e.err_estimate;
  }

  for (size_t ci = 0; ci < covariances.size(); ++ci) {
    BatchLayout layout;
    layout.total = draws;
    layout.seed = seed;
    layout.stream_offset = static_cast<std::uint64_t>(ci) << 32;
    layout.threads = threads > 0 ? threads : default_thread_count();
    const long nblocks = layout.num_blocks();
    std::vector<long> exceed(nblocks, 0);
    const Eigen::MatrixXcd& cov = covariances[ci];
    run_blocks(layout, [&](long b, long n, RngStream& rng) {
      long c = 0;
      for (long d = 0; d < n; ++d)
        if (sample_f_eigenvalues(dims, std::nullopt, cov, rng).scn() > mu_th) ++c;
      exceed[b] = c;
    });
    long total = 0;
    for (long c : exceed) total += c;
    const double pf = static_cast<double>(total) / static_cast<double>(draws);
    result.empirical_pf.push_back(pf);
    result.stderr_pf.push_back(std::sqrt(pf * (1.0 - pf) / static_cast<double>(draws)));
  }

  for (size_t i = 0; i < result.empirical_pf.size(); ++i) {
    result.max_deviation_from_exact =
        std::max(result.max_deviation_from_exact,
                 std::fabs(result.empirical_pf[i] - result.exact_pf));
    for (size_t j = i + 1; j < result.empirical_pf.size(); ++j)
      result.max_pairwise_deviation =
          std::max(result.max_pairwise_deviation,
                   std::fabs(result.empirical_pf[i] - result.empirical_pf[j]));
  }
  return result;
}

namespace {

// Collects per-draw (scn, lambda_max) pairs under H0 with Sigma = I;
// used for both calibration and measurement of the robustness experiment.
void collect_statistics(const ProblemDims& dims, long draws, std::uint64_t seed,
                        std::uint64_t stream_offset, int threads,
                        std::vector<double>& scn, std::vector<double>& lmax) {
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dims.m, dims.m);
  BatchLayout layout;
  layout.total = draws;
  layout.seed = seed;
  layout.stream_offset = stream_offset;
  layout.threads = threads > 0 ? threads : default_thread_count();
  scn.assign(draws, 0.0);
  lmax.assign(draws, 0.0);
  run_blocks(layout, [&](long b, long n, RngStream& rng) {
    const long base = layout.block_begin(b);
    for (long d = 0; d < n; ++d) {
      FMatrixSample s = sample_f_eigenvalues(dims, std::nullopt, eye, rng);
      scn[base + d] = s.scn();
      lmax[base + d] = s.lambda_max();
    }
  });
}

double upper_quantile(std::vector<double> values, double rate) {
  // threshold with empirical exceedance closest to `rate` from below
  std::sort(values.begin(), values.end());
  const long n = static_cast<long>(values.size());
  long idx = static_cast<long>(std::ceil((1.0 - rate) * n)) - 1;
  idx = std::clamp(idx, 0L, n - 1);
  return values[idx];
}

}  // namespace

RobustnessResult robustness_experiment(const ProblemDims& dims,
                                       const RobustnessScenario& scenario,
                                       const ThresholdSpec& threshold, long draws,
                                       std::uint64_t seed, int threads) {
  if (scenario.epsilon < 0.0)
    throw std::invalid_argument("robustness_experiment: requires epsilon >= 0");
  if (draws < 1) throw std::invalid_argument("robustness_experiment: draws >= 1");
  const bool use_scn = scenario.statistic == RobustnessScenario::Statistic::Scn;

  RobustnessResult result;
  if (threshold.kind == ThresholdSpec::Kind::Explicit) {
    result.threshold = threshold.value;
  } else {
    // Calibrate at epsilon = 0 on a disjoint stream range; 4x draws keep the
    // quantile noise below the measurement noise.
    std::vector<double> scn, lmax;
    collect_statistics(dims, 4 * draws, seed, 1ULL << 40, threads, scn, lmax);
    result.nominal_pf = threshold.value;
    result.threshold = upper_quantile(use_scn ? scn : lmax, threshold.value);
  }

  // Measurement draws: the epsilon-perturbed matrix is Psi/(1+eps), so the
  // SCN stream is bitwise that of eps = 0 and lambda_max is scaled exactly.
  std::vector<double> scn, lmax;
  collect_statistics(dims, draws, seed, 0, threads, scn, lmax);
  const double scale = 1.0 / (1.0 + scenario.epsilon);
  long exceed = 0;
  for (long d = 0; d < draws; ++d) {
    const double stat = use_scn ? scn[d] : lmax[d] * scale;
    if (stat > result.threshold) ++exceed;
  }
  result.empirical_pf = static_cast<double>(exceed) / static_cast<double>(draws);
  result.stderr_pf =
      std::sqrt(result.empirical_pf * (1.0 - result.empirical_pf) / static_cast<double>(draws));
  return result;
}

std::vector<Eigen::MatrixXcd> cfar_covariance_family(int m, int count,
                                                     std::uint64_t seed) {
  if (m < 1 || count < 1)
    throw std::invalid_argument("cfar_covariance_family: m, count >= 1");
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(count);
  out.push_back(Eigen::MatrixXcd::Identity(m, m));
  if (count >= 2) {
    Eigen::VectorXd d(m);
    for (int i = 0; i < m; ++i) d(i) = 1.0 + 9.0 * i / std::max(1, m - 1);  // 1..10
    out.push_back(d.cast<std::complex<double>>().asDiagonal());
  }
  RngStream rng(seed, 0xC0F);
  while (static_cast<int>(out.size()) < count) {
    // random PD matrix: unitary rotation (QR of a Gaussian) of a graded diagonal
    Eigen::MatrixXcd g = sample_complex_gaussian_matrix(m, m, rng);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::VectorXd d(m);
    for (int i = 0; i < m; ++i) d(i) = 0.5 + 4.0 * rng.uniform();
    out.push_back(q * d.cast<std::complex<double>>().asDiagonal() * q.adjoint());
  }
  return out;
}

}  // namespace fscn
