// Command-line front end: evaluate SCN c.d.f.s, calibrate detector
// thresholds, generate ROC/CFAR/robustness datasets, run the validation
// suite. Emits CSV or JSON plus optional gnuplot scripts.
//
// Exit codes: 0 ok, 1 validation-suite failure, 2 input validation,
// 3 numerical non-convergence.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fscn/detector.hpp"
#include "fscn/fdist.hpp"
#include "fscn/validation.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationSuite = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNonConvergence = 3;

struct OutputSink {
  std::string path;    // empty = stdout
  std::string format;  // "csv" or "json"

  void write_table(const std::string& name, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) const {
    std::ostringstream os;
    if (format == "json") {
      json doc;
      doc["table"] = name;
      doc["columns"] = header;
      doc["rows"] = json::array();
      for (const auto& row : rows) {
        json r = json::object();
        for (size_t i = 0; i < header.size(); ++i) r[header[i]] = row[i];
        doc["rows"].push_back(r);
      }
      os << doc.dump(2) << "\n";
    } else {
      for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
      os << "\n";
      for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
      }
    }
    if (path.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream f(path, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error("cannot open output file: " + path);
      f << os.str();
    }
  }
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

void emit_plot_script(const std::string& csv_path, const std::string& script_path,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::string& using_spec, bool logx) {
  std::ofstream f(script_path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open plot script: " + script_path);
  f << "set datafile separator ','\n"
    << "set key left top\n"
    << "set xlabel '" << xlabel << "'\n"
    << "set ylabel '" << ylabel << "'\n";
  if (logx) f << "set logscale x\n";
  f << "plot '" << csv_path << "' skip 1 using " << using_spec
    << " with linespoints title '" << ylabel << "'\n"
    << "pause -1\n";
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw CLI::ValidationError("grid", "empty value list");
  return out;
}

fscn::ProblemDims make_dims(int m, int n, int p) {
  return fscn::ProblemDims(m, n, p);  // constructor validates
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SCN-of-F-matrix detector toolkit"};
  app.require_subcommand(1);

  int m = 2, n = 2, p = 2;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_path, format = "csv", plot_path;

  auto add_common = [&](CLI::App* cmd, bool with_dims = true) {
    if (with_dims) {
      cmd->add_option("--m", m, "sensor dimension")->required();
      cmd->add_option("--n", n, "noise-only sample count")->required();
      cmd->add_option("--p", p, "signal-plus-noise sample count")->required();
    }
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--threads", threads, "worker threads (default: FSCN_THREADS or all cores)");
    cmd->add_option("--out", out_path, "output file (default stdout)");
    cmd->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--emit-plot-script", plot_path,
                    "write a gnuplot script referencing the CSV output");
  };

  // ---- cdf ----
  auto* cdf_cmd = app.add_subcommand("cdf", "evaluate the SCN c.d.f. on a t grid");
  std::string t_list = "5";
  double gamma = 0.0;
  bool h1 = false;
  long draws = 100000;
  std::string method = "auto";
  add_common(cdf_cmd);
  cdf_cmd->add_option("--t", t_list, "comma-separated t grid (each > 1)");
  cdf_cmd->add_flag("--h1", h1, "evaluate under the spiked alternative");
  cdf_cmd->add_option("--gamma", gamma, "spike SNR (H1)");
  cdf_cmd->add_option("--draws", draws, "Monte Carlo draw count");
  cdf_cmd->add_option("--method", method, "auto|theorem1|corollary1|corollary2|theorem2|mc|quadrature")
      ->check(CLI::IsMember({"auto", "theorem1", "corollary1", "corollary2", "theorem2",
                             "mc", "quadrature"}));

  // ---- threshold ----
  auto* thr_cmd = app.add_subcommand("threshold", "invert P_F to a threshold");
  double alpha_rate = 0.1;
  add_common(thr_cmd);
  thr_cmd->add_option("--alpha", alpha_rate, "target false-alarm rate in (0,1)")->required();

  // ---- roc ----
  auto* roc_cmd = app.add_subcommand("roc", "ROC profile over a target P_F grid");
  std::string alpha_list = "0.01,0.02,0.05,0.1,0.2,0.5";
  double roc_gamma = 1.0;
  long roc_draws = 100000;
  bool roc_force_mc = false;
  add_common(roc_cmd);
  roc_cmd->add_option("--gamma", roc_gamma, "spike SNR");
  roc_cmd->add_option("--alpha-grid", alpha_list, "comma-separated target P_F values");
  roc_cmd->add_option("--draws", roc_draws, "MC draws when the exact P_D path is unavailable");
  roc_cmd->add_flag("--force-mc", roc_force_mc, "use Monte Carlo for P_D even when exact applies");

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo experiments (cdf|cfar|robustness)");
  std::string mode = "cdf";
  std::string sim_t_list = "1.5,3,10";
  double sim_gamma = 0.0;
  long sim_draws = 100000;
  int num_covs = 3;
  double sim_mu = 0.0;
  std::string eps_list = "0,0.1,0.3";
  double nominal = 0.1;
  add_common(sim_cmd);
  sim_cmd->add_option("--mode", mode, "cdf|cfar|robustness")
      ->check(CLI::IsMember({"cdf", "cfar", "robustness"}));
  sim_cmd->add_option("--t", sim_t_list, "t grid for mode=cdf");
  sim_cmd->add_option("--gamma", sim_gamma, "spike SNR (0 = H0) for mode=cdf");
  sim_cmd->add_option("--draws", sim_draws, "draw count");
  sim_cmd->add_option("--covariances", num_covs, "covariance count for mode=cfar");
  sim_cmd->add_option("--mu", sim_mu, "threshold for mode=cfar (default: P_F = 0.1 threshold)");
  sim_cmd->add_option("--eps", eps_list, "epsilon grid for mode=robustness");
  sim_cmd->add_option("--nominal", nominal, "nominal P_F for mode=robustness calibration");

  // ---- validate ----
  auto* val_cmd = app.add_subcommand("validate", "run the oracle/identity validation suite");
  bool quick = false;
  long val_draws = 0;
  bool inject_failure = false;
  val_cmd->add_option("--seed", seed, "RNG seed");
  val_cmd->add_option("--threads", threads, "worker threads");
  val_cmd->add_flag("--quick", quick, "reduced draw counts (~seconds)");
  val_cmd->add_option("--draws", val_draws, "override Monte Carlo draw count");
  val_cmd->add_flag("--inject-failure", inject_failure,
                    "corrupt one check to exercise the failure path (test mode)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    OutputSink sink{out_path, format};

    if (*cdf_cmd) {
      const auto dims = make_dims(m, n, p);
      auto ts = parse_grid(t_list);
      for (double t : ts)
        if (!(t > 1.0)) throw std::invalid_argument("cdf: every t must exceed 1");
      if (h1 && gamma < 0.0) throw std::invalid_argument("cdf: gamma must be >= 0");

      fscn::DispatchOptions opts;
      opts.mc.draws = draws;
      opts.mc.seed = seed;
      opts.mc.threads = threads;

      std::vector<std::vector<std::string>> rows;
      for (double t : ts) {
        fscn::CdfEvaluation e;
        if (method == "auto") {
          e = h1 ? fscn::cdf_h1(dims, gamma, t, opts) : fscn::cdf_h0(dims, t, opts);
        } else if (method == "theorem1") {
          e = fscn::cdf_h0_theorem1(dims, t);
        } else if (method == "corollary1") {
          e = fscn::cdf_h0_corollary1(dims, t);
        } else if (method == "corollary2") {
          e = fscn::cdf_h0_corollary2(dims.m, t);
        } else if (method == "theorem2") {
          e = fscn::cdf_h1_theorem2(dims.m, gamma, t);
        } else if (method == "mc") {
          const double grid[1] = {t};
          fscn::Hypothesis hyp =
              h1 ? fscn::Hypothesis(fscn::SpikeParams::with_gamma(gamma)) : std::nullopt;
          e = fscn::cdf_scn_monte_carlo(dims, hyp, grid, opts.mc)[0];
        } else {  // quadrature
          fscn::Hypothesis hyp =
              h1 ? fscn::Hypothesis(fscn::SpikeParams::with_gamma(gamma)) : std::nullopt;
          e = fscn::cdf_scn_bruteforce_quadrature(dims, hyp, t);
        }
        rows.push_back({num(t), num(e.value), num(e.err_estimate),
                        fscn::to_string(e.method), std::to_string(seed),
                        std::to_string(e.method == fscn::CdfMethod::MonteCarlo ? draws : 0)});
      }
      sink.write_table("cdf", {"t", "value", "err_estimate", "method", "seed", "draws"}, rows);
      if (!plot_path.empty() && !out_path.empty())
        emit_plot_script(out_path, plot_path, "t", "F(t)", "1:2", true);
      return kExitOk;
    }

    if (*thr_cmd) {
      const auto dims = make_dims(m, n, p);
      if (!(alpha_rate > 0.0 && alpha_rate < 1.0))
        throw std::invalid_argument("threshold: alpha must lie in (0,1)");
      const double mu = fscn::threshold_for_alpha(dims, alpha_rate);
      const double achieved = fscn::false_alarm_rate(dims, mu);
      sink.write_table("threshold",
                       {"alpha", "mu_th", "achieved_pf", "m", "n", "p"},
                       {{num(alpha_rate), num(mu), num(achieved), std::to_string(m),
                         std::to_string(n), std::to_string(p)}});
      return kExitOk;
    }

    if (*roc_cmd) {
      const auto dims = make_dims(m, n, p);
      auto alphas = parse_grid(alpha_list);
      for (double a : alphas)
        if (!(a > 0.0 && a < 1.0))
          throw std::invalid_argument("roc: alpha grid values must lie in (0,1)");
      fscn::RocOptions opts;
      opts.force_monte_carlo = roc_force_mc;
      opts.mc.draws = roc_draws;
      opts.mc.seed = seed;
      opts.mc.threads = threads;
      auto points = fscn::roc_profile(dims, roc_gamma, alphas, opts);
      std::vector<std::vector<std::string>> rows;
      for (size_t i = 0; i < points.size(); ++i)
        rows.push_back({num(alphas[i]), num(points[i].mu_th), num(points[i].p_f),
                        num(points[i].p_d), fscn::to_string(points[i].pd_method),
                        std::to_string(seed),
                        std::to_string(points[i].pd_method == fscn::CdfMethod::MonteCarlo
                                           ? roc_draws
                                           : 0)});
      sink.write_table("roc", {"alpha", "mu_th", "p_f", "p_d", "pd_method", "seed", "draws"},
                       rows);
      if (!plot_path.empty() && !out_path.empty())
        emit_plot_script(out_path, plot_path, "P_F", "P_D", "3:4", false);
      return kExitOk;
    }

    if (*sim_cmd) {
      const auto dims = make_dims(m, n, p);
      if (sim_draws < 1) throw std::invalid_argument("simulate: draws must be >= 1");

      if (mode == "cdf") {
        auto ts = parse_grid(sim_t_list);
        for (double t : ts)
          if (!(t > 1.0)) throw std::invalid_argument("simulate: every t must exceed 1");
        fscn::MonteCarloOptions mc;
        mc.draws = sim_draws;
        mc.seed = seed;
        mc.threads = threads;
        fscn::Hypothesis hyp = sim_gamma > 0.0
                                   ? fscn::Hypothesis(fscn::SpikeParams::with_gamma(sim_gamma))
                                   : std::nullopt;
        auto rows_eval = fscn::cdf_scn_monte_carlo(dims, hyp, ts, mc);
        std::vector<std::vector<std::string>> rows;
        for (const auto& e : rows_eval)
          rows.push_back({num(e.t), num(e.value), num(e.err_estimate), "MonteCarlo",
                          std::to_string(seed), std::to_string(sim_draws)});
        sink.write_table("simulate_cdf",
                         {"t", "value", "stderr", "method", "seed", "draws"}, rows);
        if (!plot_path.empty() && !out_path.empty())
          emit_plot_script(out_path, plot_path, "t", "empirical F(t)", "1:2", true);
      } else if (mode == "cfar") {
        const double mu = sim_mu > 1.0 ? sim_mu : fscn::threshold_for_alpha(dims, 0.1);
        auto covs = fscn::cfar_covariance_family(dims.m, num_covs, seed + 17);
        auto r = fscn::cfar_experiment(dims, mu, covs, sim_draws, seed, threads);
        std::vector<std::vector<std::string>> rows;
        for (size_t i = 0; i < r.empirical_pf.size(); ++i)
          rows.push_back({std::to_string(i), num(mu), num(r.empirical_pf[i]),
                          num(r.stderr_pf[i]), num(r.exact_pf), std::to_string(seed),
                          std::to_string(sim_draws)});
        sink.write_table("simulate_cfar",
                         {"covariance_index", "mu_th", "empirical_pf", "stderr",
                          "exact_pf", "seed", "draws"},
                         rows);
      } else {  // robustness
        auto eps_grid = parse_grid(eps_list);
        if (!(nominal > 0.0 && nominal < 1.0))
          throw std::invalid_argument("simulate: nominal rate must lie in (0,1)");
        std::vector<std::vector<std::string>> rows;
        for (double eps : eps_grid) {
          if (eps < 0.0) throw std::invalid_argument("simulate: eps must be >= 0");
          for (auto stat : {fscn::RobustnessScenario::Statistic::Scn,
                            fscn::RobustnessScenario::Statistic::LambdaMax}) {
            fscn::RobustnessScenario scen{eps, stat};
            auto r = fscn::robustness_experiment(dims, scen,
                                                 fscn::ThresholdSpec::nominal(nominal),
                                                 sim_draws, seed, threads);
            rows.push_back({num(eps),
                            stat == fscn::RobustnessScenario::Statistic::Scn ? "scn"
                                                                             : "lambda_max",
                            num(r.threshold), num(r.empirical_pf), num(r.stderr_pf),
                            num(nominal), std::to_string(seed), std::to_string(sim_draws)});
          }
        }
        sink.write_table("simulate_robustness",
                         {"epsilon", "statistic", "threshold", "empirical_pf", "stderr",
                          "nominal_pf", "seed", "draws"},
                         rows);
        if (!plot_path.empty() && !out_path.empty())
          emit_plot_script(out_path, plot_path, "epsilon", "empirical P_F", "1:4", false);
      }
      return kExitOk;
    }

    if (*val_cmd) {
      fscn::ValidationConfig cfg;
      if (quick) cfg = fscn::ValidationConfig::quick();
      if (val_draws > 0) {
        cfg.mc_draws = val_draws;
        cfg.cfar_draws = val_draws;
        cfg.robustness_draws = val_draws;
      }
      cfg.seed = seed;
      cfg.threads = threads;
      auto results = fscn::run_validation_suite(cfg);
      if (inject_failure && !results.empty()) {
        results.front().passed = false;
        results.front().detail += " [injected failure]";
      }
      int failures = 0;
      for (const auto& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "\n        "
                  << r.detail << "\n";
        if (!r.passed) ++failures;
      }
      std::cout << (failures ? "validation FAILED (" : "validation passed (")
                << results.size() - failures << "/" << results.size() << ")\n";
      return failures ? kExitValidationSuite : kExitOk;
    }
  } catch (const fscn::NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const fscn::NotEvaluableError& e) {
    std::cerr << "not evaluable: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}
