// Acceptance harness: runs every built-in criterion and prints one verdict
// line each; the exit status is the overall verdict.  PQED_WORKERS caps the
// threads used by the map criterion.

#include <cstdlib>
#include <iostream>

#include "pqed/validation.hpp"

int main() {
  pqed::ValidationOptions opt;
  if (const char* env = std::getenv("PQED_WORKERS")) {
    char* end = nullptr;
    long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1 && parsed <= 4096) {
      opt.workers = static_cast<int>(parsed);
    }
  }
  return pqed::print_validation(std::cout, opt) ? 0 : 1;
}
