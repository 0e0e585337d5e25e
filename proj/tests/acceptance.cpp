// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include <cstdio>

#include "repetilab/verify.hpp"

int main() {
  bool ok = true;
  repetilab::verify(repetilab::VerifyLevel::kFull, [&](const repetilab::CriterionResult& r) {
    std::printf("%s\n", repetilab::format_result(r).c_str());
    std::fflush(stdout);
    ok = ok && r.passed;
  });
  return ok ? 0 : 1;
}
