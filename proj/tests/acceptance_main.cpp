#include <cstdio>

#include "kmsad/acceptance.hpp"

int main() {
  const auto results = kmsad::run_acceptance(kmsad::AcceptanceConfig{});
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", kmsad::summary_line(r).c_str());
    if (r.status == kmsad::Status::fail) ++failed;
  }
  std::printf("%d/%zu criteria failed\n", failed, results.size());
  return failed == 0 ? 0 : 1;
}
