#pragma once

#include <string>
#include <vector>

namespace lesbox {

struct CheckRow {
  std::string name;
  double attained = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckRow> rows;
  bool pass = false;
};

// Fast self-checks behind the "verify" command.  Each suite runs in seconds
// on small grids; the acceptance binary repeats the load-bearing ones at
// their pinned sizes and tolerances.
SuiteReport verify_filter();     // symbol bounds, inverses, deviation bound
SuiteReport verify_identities(); // orthogonality, coupling cancellation,
                                 // projection/pressure consistency
SuiteReport verify_budget();     // exact decay and budget closure order
SuiteReport verify_reduction();  // coupled solver with zero magnetic field
                                 // equals the velocity-only solver

SuiteReport run_suite(const std::string& name);
std::string to_text(const SuiteReport& r);

} // namespace lesbox
