#ifndef FSCN_VALIDATION_HPP
#define FSCN_VALIDATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fscn {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Scale knobs for the validation suite. Defaults match the full acceptance
/// configuration; `quick()` shrinks the draw counts for a fast smoke run.
struct ValidationConfig {
  long mc_draws = 1000000;       // exact-vs-MC agreement runs
  long cfar_draws = 100000;      // per covariance
  long robustness_draws = 100000;
  std::uint64_t seed = 20250809;
  int threads = 0;               // 0 = default

  static ValidationConfig quick() {
    ValidationConfig c;
    c.mc_draws = 10000;
    c.cfar_draws = 10000;
    c.robustness_draws = 10000;
    return c;
  }
};

/// Runs the full oracle-agreement / degeneration / monotonicity / identity
/// suite; one CheckResult per numbered check.
std::vector<CheckResult> run_validation_suite(const ValidationConfig& config);

}  // namespace fscn

#endif
