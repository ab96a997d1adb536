#ifndef FSCN_DETECTOR_HPP
#define FSCN_DETECTOR_HPP

#include <vector>

#include "fscn/fdist.hpp"

namespace fscn {

/// One point of a ROC profile.
struct DetectorOperatingPoint {
  double mu_th = 0.0;
  double p_f = 0.0;
  double p_d = 0.0;
  CdfMethod pd_method = CdfMethod::Theorem2;  // records exact-vs-MC per point
};

/// P_F(mu) = 1 - F_H0(mu), exact dispatcher underneath. Note the signature:
/// no covariance and no gamma — the null distribution is parameter-free.
double false_alarm_rate(const ProblemDims& dims, double mu_th,
                        const AccuracyBudget& budget = {});

/// Solves P_F(mu) = alpha_rate by bracketing + bisection on the monotone
/// c.d.f.; the returned threshold satisfies |P_F(mu) - alpha_rate| <= 1e-8
/// plus the c.d.f.'s own error estimate.
double threshold_for_alpha(const ProblemDims& dims, double alpha_rate,
                           const AccuracyBudget& budget = {});

enum class PdMethod { Exact, MonteCarlo };

/// P_D(gamma, mu) = 1 - F_H1(mu). The exact path requires m = n = p;
/// gamma = 0 degenerates to the false alarm rate.
double detection_probability(const ProblemDims& dims, double gamma, double mu_th,
                             PdMethod method = PdMethod::Exact,
                             const MonteCarloOptions& mc = {},
                             const AccuracyBudget& budget = {});

struct RocOptions {
  AccuracyBudget budget{};
  bool force_monte_carlo = false;  // use MC for p_d even when exact applies
  MonteCarloOptions mc{};
};

/// Sweeps the target false-alarm grid: threshold inversion for each alpha,
/// then the detection probability (exact when available, MC otherwise).
std::vector<DetectorOperatingPoint> roc_profile(const ProblemDims& dims,
                                                double gamma,
                                                std::span<const double> alpha_grid,
                                                const RocOptions& opts = {});

struct CfarResult {
  std::vector<double> empirical_pf;  // one entry per covariance
  std::vector<double> stderr_pf;
  double exact_pf = 0.0;
  double exact_err = 0.0;
  double max_pairwise_deviation = 0.0;
  double max_deviation_from_exact = 0.0;
};

/// Empirical P_F at a fixed threshold under several noise covariances; the
/// spread across covariances is the CFAR check.
CfarResult cfar_experiment(const ProblemDims& dims, double mu_th,
                           const std::vector<Eigen::MatrixXcd>& covariances,
                           long draws, std::uint64_t seed, int threads = 0);

struct RobustnessScenario {
  enum class Statistic { Scn, LambdaMax };
  double epsilon = 0.0;
  Statistic statistic = Statistic::Scn;
};

/// Threshold specification for the robustness experiment: either an explicit
/// threshold or a nominal rate calibrated empirically at epsilon = 0.
struct ThresholdSpec {
  enum class Kind { Explicit, NominalRate };
  Kind kind = Kind::NominalRate;
  double value = 0.1;

  static ThresholdSpec explicit_mu(double mu) { return {Kind::Explicit, mu}; }
  static ThresholdSpec nominal(double rate) { return {Kind::NominalRate, rate}; }
};

struct RobustnessResult {
  double threshold = 0.0;      // threshold actually used (after calibration)
  double empirical_pf = 0.0;   // rate of the chosen statistic under epsilon
  double stderr_pf = 0.0;
  double nominal_pf = 0.0;     // rate targeted at calibration (0 if explicit)
};

/// Draws under H0 with the sample covariance scaled by 1/(1+epsilon), i.e.
/// Psi_eps = Psi/(1+eps); the SCN stream is unchanged draw-by-draw while the
/// lambda_max stream is scaled by exactly 1/(1+eps). Calibration draws use a
/// disjoint stream range from the measurement draws.
RobustnessResult robustness_experiment(const ProblemDims& dims,
                                       const RobustnessScenario& scenario,
                                       const ThresholdSpec& threshold,
                                       long draws, std::uint64_t seed,
                                       int threads = 0);

/// Built-in positive definite covariance family for CFAR demonstrations:
/// index 0 is I, index 1 a graded diagonal, further indices are randomly
/// rotated diagonals derived deterministically from the seed.
std::vector<Eigen::MatrixXcd> cfar_covariance_family(int m, int count,
                                                     std::uint64_t seed);

}  // namespace fscn

#endif
