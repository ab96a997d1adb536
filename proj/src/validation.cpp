#include "fscn/validation.hpp"

#include <cmath>
#include <sstream>

#include "fscn/detector.hpp"
#include "fscn/fdist.hpp"

namespace fscn {

namespace {

struct Collector {
  std::vector<CheckResult> results;
  // Worst-margin reporting: a check passes only if every sub-comparison does.
  void add(const std::string& name, bool ok, const std::string& detail) {
    results.push_back({name, ok, detail});
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Binomial stderr with a 1/N floor so zero-count cells still carry their
// sampling resolution (several H1 cells have true probability ~1e-9).
double mc_stderr(double f, long n) {
  const double raw = std::sqrt(f * (1.0 - f) / static_cast<double>(n));
  return std::max(raw, 1.0 / static_cast<double>(n));
}

// --- criterion 1: exact-vs-MC under H0 -------------------------------------
void criterion_exact_vs_mc_h0(const ValidationConfig& cfg, Collector& out) {
  const ProblemDims shapes[] = {{2, 2, 2}, {2, 3, 3}, {3, 3, 3},
                                {3, 3, 4}, {2, 4, 3}, {4, 4, 4}};
  const double ts[] = {1.5, 3.0, 10.0, 50.0};
  bool ok = true;
  double worst = 0.0;
  std::string worst_at;
  std::uint64_t stream = 0;
  for (const auto& dims : shapes) {
    MonteCarloOptions mc;
    mc.draws = cfg.mc_draws;
    mc.seed = cfg.seed + 101 + (stream++);
    mc.threads = cfg.threads;
    auto emp = cdf_scn_monte_carlo(dims, std::nullopt, ts, mc);
    for (size_t i = 0; i < 4; ++i) {
      const CdfEvaluation exact = cdf_h0(dims, ts[i], {});
      const double tol = 3.0 * mc_stderr(emp[i].value, cfg.mc_draws) + exact.err_estimate;
      const double diff = std::fabs(exact.value - emp[i].value);
      if (diff > tol) ok = false;
      if (diff / tol > worst) {
        worst = diff / tol;
        std::ostringstream os;
        os << "(" << dims.m << "," << dims.n << "," << dims.p << ") t=" << ts[i]
           << " method=" << to_string(exact.method) << " |diff|=" << fmt(diff)
           << " tol=" << fmt(tol);
        worst_at = os.str();
      }
    }
  }
  out.add("criterion-1 exact-vs-MC H0 (6 shapes x 4 thresholds, N=" +
              std::to_string(cfg.mc_draws) + ")",
          ok, "worst " + worst_at);
}

// --- criterion 2: exact vs brute-force quadrature (m = 2) ------------------
void criterion_exact_vs_quadrature(Collector& out) {
  struct Case {
    ProblemDims dims;
    const char* label;
  };
  const Case cases[] = {{{2, 2, 2}, "Corollary2"},
                        {{2, 2, 3}, "Corollary1"},
                        {{2, 3, 3}, "Theorem1"}};
  bool ok = true;
  double worst = 0.0;
  std::string detail;
  for (const auto& c : cases) {
    for (double t : {1.5, 3.0, 10.0}) {
      const CdfEvaluation exact = cdf_h0(c.dims, t, {});
      const CdfEvaluation oracle = cdf_scn_bruteforce_quadrature(c.dims, std::nullopt, t);
      const double diff = std::fabs(exact.value - oracle.value);
      if (diff > 1e-6) ok = false;
      if (diff > worst) {
        worst = diff;
        detail = std::string(c.label) + " t=" + fmt(t) + " |diff|=" + fmt(diff);
      }
    }
  }
  out.add("criterion-2 exact-vs-quadrature m=2 (tol 1e-6)", ok, "worst " + detail);
}

// --- criterion 3: degeneration chain ----------------------------------------
void criterion_degeneration_chain(Collector& out) {
  bool ok = true;
  double worst = 0.0;
  std::string detail = "all pairs agree";
  for (const auto& dims : {ProblemDims{2, 2, 3}, ProblemDims{3, 3, 4}, ProblemDims{2, 2, 4}}) {
    for (double t : {1.5, 3.0, 10.0}) {
      const double th1 = cdf_h0_theorem1(dims, t).value;
      const double co1 = cdf_h0_corollary1(dims, t).value;
      const double diff = std::fabs(th1 - co1);
      if (diff > 1e-8) ok = false;
      if (diff > worst) {
        worst = diff;
        detail = "Theorem1-vs-Corollary1 (" + std::to_string(dims.m) + "," +
                 std::to_string(dims.n) + "," + std::to_string(dims.p) +
                 ") t=" + fmt(t) + " |diff|=" + fmt(diff);
      }
    }
  }
  for (int m : {2, 3}) {
    for (double t : {1.5, 3.0, 10.0}) {
      const double co1 = cdf_h0_corollary1({m, m, m}, t).value;
      const double co2 = cdf_h0_corollary2(m, t).value;
      const double diff = std::fabs(co1 - co2);
      if (diff > 1e-8) ok = false;
      if (diff > worst) {
        worst = diff;
        detail = "Corollary1(beta=0)-vs-Corollary2 m=" + std::to_string(m) +
                 " t=" + fmt(t) + " |diff|=" + fmt(diff);
      }
    }
  }
  out.add("criterion-3 degeneration chain (tol 1e-8)", ok, "worst " + detail);
}

// --- criterion 4: H1 exact-vs-MC + dispatcher fallback ----------------------
void criterion_h1_exact_vs_mc(const ValidationConfig& cfg, Collector& out) {
  bool ok = true;
  double worst = 0.0;
  std::string detail;
  std::uint64_t stream = 0;
  for (int m : {2, 3}) {
    for (double gamma : {0.5, 2.0, 5.0}) {
      MonteCarloOptions mc;
      mc.draws = cfg.mc_draws;
      mc.seed = cfg.seed + 401 + (stream++);
      mc.threads = cfg.threads;
      const double ts[] = {1.2, 1.8};
      SpikeParams spike = SpikeParams::with_gamma(gamma);
      auto emp = cdf_scn_monte_carlo({m, m, m}, spike, ts, mc);
      for (size_t i = 0; i < 2; ++i) {
        const CdfEvaluation exact = cdf_h1_theorem2(m, gamma, ts[i]);
        const double tol = 3.0 * mc_stderr(emp[i].value, cfg.mc_draws) + exact.err_estimate;
        const double diff = std::fabs(exact.value - emp[i].value);
        if (diff > tol) ok = false;
        if (tol > 0 && diff / tol > worst) {
          worst = diff / tol;
          detail = "m=" + std::to_string(m) + " gamma=" + fmt(gamma) + " t=" + fmt(ts[i]) +
                   " |diff|=" + fmt(diff) + " tol=" + fmt(tol);
        }
      }
    }
  }
  out.add("criterion-4a H1 exact-vs-MC (m=2,3; N=" + std::to_string(cfg.mc_draws) + ")",
          ok, "worst " + detail);

  // With the corrected F1 argument the m = n = p formula evaluates for every
  // t > 1, so the dispatcher's MC fallback is exercised where no closed form
  // exists at all: a non-square H1 shape. The method flag must record it.
  DispatchOptions opts;
  opts.mc.draws = std::min<long>(cfg.mc_draws, 20000);
  opts.mc.seed = cfg.seed + 499;
  opts.mc.threads = cfg.threads;
  const CdfEvaluation fb = cdf_h1({2, 3, 3}, 1.0, 2.0, opts);
  const bool flagged = fb.method == CdfMethod::MonteCarlo;
  out.add("criterion-4b H1 dispatcher MC fallback flagged (non-square shape)", flagged,
          std::string("method=") + to_string(fb.method) + " value=" + fmt(fb.value));
}

// --- criterion 5: CFAR across covariances ----------------------------------
void criterion_cfar(const ValidationConfig& cfg, Collector& out) {
  bool ok = true;
  std::string detail;
  int idx = 0;
  for (const auto& dims : {ProblemDims{2, 3, 3}, ProblemDims{3, 4, 5}}) {
    const double mu = threshold_for_alpha(dims, 0.1);
    auto covs = cfar_covariance_family(dims.m, 3, cfg.seed + 500 + idx);
    CfarResult r = cfar_experiment(dims, mu, covs, cfg.cfar_draws, cfg.seed + 510 + idx,
                                   cfg.threads);
    for (size_t i = 0; i < r.empirical_pf.size(); ++i) {
      const double tol = 3.0 * mc_stderr(r.empirical_pf[i], cfg.cfar_draws) + r.exact_err;
      if (std::fabs(r.empirical_pf[i] - r.exact_pf) > tol) ok = false;
    }
    std::ostringstream os;
    os << "(" << dims.m << "," << dims.n << "," << dims.p << ") mu=" << fmt(mu)
       << " exact=" << fmt(r.exact_pf) << " empirical=[";
    for (size_t i = 0; i < r.empirical_pf.size(); ++i)
      os << (i ? " " : "") << fmt(r.empirical_pf[i]);
    os << "] maxdev=" << fmt(r.max_deviation_from_exact);
    detail += (idx ? " | " : "") + os.str();
    ++idx;
  }
  out.add("criterion-5 CFAR across 3 covariances (N=" + std::to_string(cfg.cfar_draws) + ")",
          ok, detail);
}

// --- criterion 6: P_D does not improve with m ------------------------------
void criterion_roc_m_ordering(const ValidationConfig& cfg, Collector& out) {
  bool ok = true;
  std::string detail;
  for (double pf : {0.01, 0.1}) {
    for (double gamma : {1.0, 5.0}) {
      double prev = 2.0;
      std::ostringstream os;
      os << "PF=" << fmt(pf) << " gamma=" << fmt(gamma) << " PD(m)=";
      for (int m : {2, 3, 4}) {
        const ProblemDims dims{m, m, m};
        const double mu = threshold_for_alpha(dims, pf);
        double pd;
        double slack = 1e-7;
        try {
          pd = detection_probability(dims, gamma, mu, PdMethod::Exact);
        } catch (const std::exception&) {
          MonteCarloOptions mc;
          mc.draws = cfg.mc_draws;
          mc.seed = cfg.seed + 601 + m;
          mc.threads = cfg.threads;
          pd = detection_probability(dims, gamma, mu, PdMethod::MonteCarlo, mc);
          slack = 3.0 * mc_stderr(pd, cfg.mc_draws);
        }
        os << fmt(pd) << " ";
        if (pd > prev + slack) ok = false;
        prev = pd;
      }
      detail += os.str();
    }
  }
  out.add("criterion-6 P_D non-increasing in m (m=n=p in {2,3,4})", ok, detail);
}

// --- criterion 7: robustness at (10,10,14) ----------------------------------
void criterion_robustness(const ValidationConfig& cfg, Collector& out) {
  const ProblemDims dims{10, 10, 14};
  const double eps = 0.3;
  const double nominal = 0.1;

  // Per-draw identities: the experiment evaluates the scaled matrix
  // Psi/(1+eps) through its spectrum, so SCN invariance and the lambda_max
  // division are exact by construction for any eps; the eigensolver itself is
  // verified bitwise-covariant under power-of-two scaling on re-solves.
  bool identities = true;
  {
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dims.m, dims.m);
    RngStream rng(cfg.seed + 700, 0);
    for (int d = 0; d < 100; ++d) {
      FMatrixSample s = sample_f_eigenvalues(dims, std::nullopt, eye, rng);
      const double scn_eps = (s.lambda_max() / (1.0 + eps)) / (s.lambda_min() / (1.0 + eps));
      if (scn_eps != s.scn()) identities = false;
      Eigen::MatrixXcd w = sample_wishart(dims.m, dims.p, eye, rng);
      const Eigen::VectorXd ev = hermitian_eigenvalues(w);
      const Eigen::VectorXd ev_scaled = hermitian_eigenvalues(Eigen::MatrixXcd(0.5 * w));
      for (int i = 0; i < dims.m; ++i)
        if (ev_scaled(i) != 0.5 * ev(i)) identities = false;
    }
  }

  RobustnessScenario scn_scen{eps, RobustnessScenario::Statistic::Scn};
  RobustnessScenario lmax_scen{eps, RobustnessScenario::Statistic::LambdaMax};
  const auto spec = ThresholdSpec::nominal(nominal);
  RobustnessResult r_scn = robustness_experiment(dims, scn_scen, spec,
                                                 cfg.robustness_draws, cfg.seed + 701,
                                                 cfg.threads);
  RobustnessResult r_lmax = robustness_experiment(dims, lmax_scen, spec,
                                                  cfg.robustness_draws, cfg.seed + 701,
                                                  cfg.threads);
  const double se = mc_stderr(nominal, cfg.robustness_draws);
  const bool scn_ok = std::fabs(r_scn.empirical_pf - nominal) <= 3.0 * se;
  const bool lmax_shifted = std::fabs(r_lmax.empirical_pf - nominal) > 5.0 * se;
  out.add("criterion-7 robustness m=n=10 p=14 eps=0.3",
          identities && scn_ok && lmax_shifted,
          "identities=" + std::string(identities ? "exact" : "VIOLATED") +
              " scn_pf=" + fmt(r_scn.empirical_pf) + " lmax_pf=" +
              fmt(r_lmax.empirical_pf) + " nominal=" + fmt(nominal) +
              " stderr=" + fmt(se));
}

// --- criterion 8: special-function kernel identities ------------------------
void criterion_specfun_kernel(const ValidationConfig& cfg, Collector& out) {
  RngStream rng(cfg.seed + 800, 0);
  const AccuracyBudget tight{1e-13, 1e-18, 400000, 40};
  bool ok = true;
  std::string detail = "all identities within tolerance";
  double worst = 0.0;

  auto record = [&](const char* what, double resid, double tol) {
    if (resid > tol) ok = false;
    if (resid / tol > worst) {
      worst = resid / tol;
      detail = std::string(what) + " resid=" + fmt(resid) + " tol=" + fmt(tol);
    }
  };

  // gamma/beta identities at 1e-12
  for (int i = 0; i < 400; ++i) {
    const double x = 0.5 + 49.5 * rng.uniform();
    const double lhs = ln_gamma(x + 1.0);
    const double rhs = ln_gamma(x) + std::log(x);
    record("lngamma recurrence", std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)), 1e-12);
    const double a = 0.5 + 9.5 * rng.uniform(), b = 0.5 + 9.5 * rng.uniform();
    record("lnbeta symmetry", std::fabs(ln_beta(a, b) - ln_beta(b, a)), 1e-12);
    record("beta(a,1)=1/a", std::fabs(ln_beta(a, 1.0) + std::log(a)), 1e-12);
  }
  // pochhammer consistency against factor-by-factor logs
  for (int i = 0; i < 200; ++i) {
    const double a = -10.0 + 20.0 * rng.uniform();
    const int k = static_cast<int>(rng.uniform() * 12);
    const SignedLog p = pochhammer_ln(a, k);
    SignedLog q = SignedLog::one();
    for (int j = 0; j < k; ++j) q *= SignedLog::from(a + j);
    if (p.sign != q.sign) ok = false;
    if (p.sign != 0)
      record("pochhammer log", std::fabs(p.log_abs - q.log_abs) /
                                   std::max(1.0, std::fabs(q.log_abs)), 1e-13);
  }
  // 2F1 contiguous relation at 1e-9
  for (int i = 0; i < 300; ++i) {
    const double a = 0.6 + 5.0 * rng.uniform();
    const double b = 0.6 + 5.0 * rng.uniform();
    const double c = a + b + 0.3 + 3.0 * rng.uniform();
    const double z = -5.0 + 5.9 * rng.uniform();
    const double f0 = gauss_2f1(a, b, c, z, tight);
    const double fm = gauss_2f1(a - 1.0, b, c, z, tight);
    const double fp = gauss_2f1(a, b, c + 1.0, z, tight);
    const double resid = c * (1.0 - z) * f0 - c * fm + (c - b) * z * fp;
    const double scale = std::max({std::fabs(c * (1.0 - z) * f0), std::fabs(c * fm), 1.0});
    record("2F1 contiguous", std::fabs(resid) / scale, 1e-9);
  }
  // Appell reduction identities and path agreement at 1e-9
  for (int i = 0; i < 150; ++i) {
    const double a = 0.8 + 3.0 * rng.uniform();
    const double b1 = 0.3 + 2.0 * rng.uniform();
    const double b2 = 0.3 + 2.0 * rng.uniform();
    const double c = a + 0.5 + 3.0 * rng.uniform();
    const double x = -0.8 + 1.5 * rng.uniform();
    const double y = -0.8 + 1.5 * rng.uniform();
    const double red = appell_f1(a, b1, 0.0, c, x, y, tight);
    record("F1(b2=0) reduction", std::fabs(red - gauss_2f1(a, b1, c, x, tight)) /
                                     std::max(1.0, std::fabs(red)), 1e-9);
    const double eq = appell_f1(a, b1, b2, c, x, x, tight);
    record("F1(x=y) reduction", std::fabs(eq - gauss_2f1(a, b1 + b2, c, x, tight)) /
                                    std::max(1.0, std::fabs(eq)), 1e-9);
    const double u = 0.3 + 0.4 * rng.uniform();   // overlap region
    const double v = 0.3 + 0.4 * rng.uniform();
    const double s = appell_f1_series_path(a, b1, b2, c, u, v, tight);
    const double q = appell_f1_integral_path(a, b1, b2, c, u, v, tight);
    record("F1 series-vs-integral", std::fabs(s - q) / std::max(1.0, std::fabs(s)), 1e-9);
  }
  out.add("criterion-8 special-function kernel identities", ok, "worst " + detail);
}

// --- criterion 9: density normalization, monotonicity, bounds ---------------
void criterion_distribution_sanity(Collector& out) {
  bool ok = true;
  std::string detail;

  // m = 2 normalization of f0 and f1 by nested semi-infinite quadrature
  auto normalize = [&](const ProblemDims& dims, double gamma) {
    AccuracyBudget inner;
    inner.rel_tol = 1e-11;
    auto outer = [&](double l1) {
      return integrate_semi_infinite(
                 [&](double s) {
                   const double lams[2] = {l1, l1 + s};
                   return gamma > 0 ? joint_density_h1(dims, gamma, lams)
                                    : joint_density_h0(dims, lams);
                 },
                 inner)
          .value;
    };
    return integrate_semi_infinite(outer, {}).value;
  };
  const double n0 = normalize({2, 3, 3}, 0.0);
  const double n1 = normalize({2, 2, 2}, 1.0);
  if (std::fabs(n0 - 1.0) > 1e-7 || std::fabs(n1 - 1.0) > 1e-7) ok = false;
  detail = "f0 integral=" + fmt(n0) + " f1 integral=" + fmt(n1);

  // monotonicity + bounds on a 100-point log grid over (1, 1e3]
  auto monotone = [&](const char* label, auto&& eval) {
    double prev = -1.0;
    for (int i = 0; i < 100; ++i) {
      const double t = 1.0 + std::pow(10.0, -3.0 + 6.0 * i / 99.0);  // 1+1e-3 .. 1+1e3
      const CdfEvaluation e = eval(t);
      if (e.value < prev - e.err_estimate - 1e-12 ||
          e.value < -e.err_estimate || e.value > 1.0 + e.err_estimate + 1e-12) {
        ok = false;
        detail += std::string(" ") + label + " violation at t=" + fmt(t);
        return;
      }
      prev = e.value;
    }
  };
  monotone("Corollary2", [&](double t) { return cdf_h0_corollary2(2, t); });
  monotone("Corollary1", [&](double t) { return cdf_h0_corollary1({2, 2, 3}, t); });
  monotone("Theorem1", [&](double t) { return cdf_h0_theorem1({2, 3, 3}, t); });
  monotone("Theorem2", [&](double t) { return cdf_h1_theorem2(2, 1.0, t); });
  monotone("Theorem2-m3", [&](double t) { return cdf_h1_theorem2(3, 1.0, t); });
  out.add("criterion-9 normalization + monotonicity + bounds", ok, detail);
}

}  // namespace

std::vector<CheckResult> run_validation_suite(const ValidationConfig& cfg) {
  Collector out;
  criterion_exact_vs_mc_h0(cfg, out);
  criterion_exact_vs_quadrature(out);
  criterion_degeneration_chain(out);
  criterion_h1_exact_vs_mc(cfg, out);
  criterion_cfar(cfg, out);
  criterion_roc_m_ordering(cfg, out);
  criterion_robustness(cfg, out);
  criterion_specfun_kernel(cfg, out);
  criterion_distribution_sanity(out);
  return out.results;
}

}  // namespace fscn
