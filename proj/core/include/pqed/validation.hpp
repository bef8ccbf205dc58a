#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pqed {

struct ValidationOptions {
  int workers = 8;              // parallel cells for the detuning map
  // Multiplies the in-coupling rate used by the extinction-calibration check.
  // Anything but 1.0 models a broken calibration and must fail that check;
  // exists so the suite itself can be tested against a corrupted build.
  double kappa_in_scale = 1.0;
  // 0 runs every criterion; 1..10 runs just that one (test hook).
  int only = 0;
};

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  double measured = 0.0;   // worst observed deviation, in the check's own units
  double tolerance = 0.0;  // pinned acceptance bound for `measured`
  std::string detail;      // values behind the verdict
  double runtime_s = 0.0;
};

struct ValidationReport {
  std::vector<CriterionResult> results;
  std::string informational;  // reported but not asserted

  bool all_passed() const;
};

// Runs the full acceptance suite (self-contained: builds its own systems,
// no configuration files involved).
ValidationReport run_validation(const ValidationOptions& options = {});

// Runs the suite and prints one verdict line per criterion plus the
// informational note; returns whether everything passed.
bool print_validation(std::ostream& out, const ValidationOptions& options = {});

}  // namespace pqed
