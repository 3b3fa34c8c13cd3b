#pragma once

// The acceptance suite: twelve numbered checks with pinned tolerances and
// time limits. With the Fibonacci basis over {-1,0,1} the checks compare
// against the known closed forms; other bases get the property versions.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pisotmw/constructions.hpp"

namespace pisotmw {

enum class Suite { All, Automata, Counts, Spectral };

Suite parse_suite(std::string_view name);
std::vector<int> suite_criteria(Suite suite);

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0;
  double time_limit = 0;  // 0 when untimed
  std::string detail;
  nlohmann::json values = nlohmann::json::object();

  /// "PASS  3 ..." style single line.
  std::string line() const;
  nlohmann::json to_json() const;
};

class AcceptanceRunner {
 public:
  AcceptanceRunner(PisotBasis basis, Alphabet alphabet, ConstructionOptions options = {});

  /// Whether the closed forms known for Fibonacci over {-1,0,1} apply.
  bool pinned() const { return pinned_; }

  CheckResult run(int id);
  std::vector<CheckResult> run(const std::vector<int>& ids);

 private:
  MinWeightAutomata& automata();

  CheckResult b_constants();
  CheckResult max_fk_law();
  CheckResult lu_equivalence();
  CheckResult normalizer_counts();
  CheckResult greedy_uniqueness();
  CheckResult zero_automaton();
  CheckResult transfer_counts();
  CheckResult jsr_bracket();
  CheckResult summatory_scaling();
  CheckResult charfun_convergence();
  CheckResult measure_invariants();
  CheckResult validation_gate();

  PisotBasis basis_;
  Alphabet alphabet_;
  ConstructionOptions options_;
  bool pinned_;
  std::unique_ptr<MinWeightAutomata> automata_;
};

nlohmann::json acceptance_report(const std::vector<CheckResult>& results);

}  // namespace pisotmw
