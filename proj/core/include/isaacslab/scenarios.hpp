#pragma once

#include <string>
#include <vector>

namespace isaacs {

// A named verification experiment: one per acceptance-style claim the
// laboratory checks.  Each runs with pinned parameters and tolerances and
// produces plot-ready rows.
struct ScenarioOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
};

std::vector<std::string> scenario_names();
ScenarioOutcome run_scenario(const std::string& name);

}  // namespace isaacs
