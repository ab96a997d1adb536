// Acceptance suite: runs every validation criterion at full scale and prints
// one pass/fail line per criterion. Exit status is nonzero if any fails.
#include <cstring>
#include <iostream>

#include "fscn/validation.hpp"

int main(int argc, char** argv) {
  fscn::ValidationConfig cfg;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) cfg = fscn::ValidationConfig::quick();
  }
  const auto results = fscn::run_validation_suite(cfg);
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "\n        " << r.detail
              << "\n";
    if (!r.passed) ++failures;
  }
  std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed"
                              : "ACCEPTANCE: criteria failed")
            << " (" << results.size() - failures << "/" << results.size() << ")\n";
  return failures == 0 ? 0 : 1;
}
