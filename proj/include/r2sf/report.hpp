#pragma once

// Command execution and JSON reports shared by the CLI, the acceptance
// binary and the Python bindings.
//
// A report is deterministic given its config: no timing and no worker count
// enter the JSON, and every object is emitted with sorted keys.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "r2sf/ffield.hpp"
#include "r2sf/presemifield.hpp"

namespace r2sf {

inline constexpr int kReportSchemaVersion = 1;

struct RunConfig {
  // build | check | nuclei | linset | derive | distinguish | lst | verify-paper
  std::string command;
  FamilySpec spec;
  std::string mode = "exhaustive";   // exhaustive | candidates | auto
  std::string nuclei = "spreadset";  // spreadset | bruteforce | sampled | all
  std::string derive;                // transpose | translation-dual
  std::string suite;
  std::uint64_t cap = 100000000ull;  // exhaustive long-line cap on |L|^2
  std::uint64_t seed = 0;
  unsigned workers = 1;              // not echoed
};

struct Check {
  std::string name;
  bool pass = false;
  std::string citation;
  nlohmann::json expected, observed;
};

class Report {
 public:
  explicit Report(const RunConfig& cfg);

  // Results keyed by section; sections are command specific.
  nlohmann::json results = nlohmann::json::object();
  std::vector<Check> checks;
  // Set for usage and infeasible-mode errors (exit 2).
  std::string error_type, error_message;

  void check(std::string name, bool pass, std::string citation, nlohmann::json expected,
             nlohmann::json observed);
  // First failing check, or nullptr.
  const Check* first_failure() const;
  // 0 = all checks pass, 1 = a check failed, 2 = usage / infeasible.
  int exit_code() const;

  nlohmann::json to_json() const;
  // One line per check plus the headline; for standard output.
  std::string summary() const;

 private:
  nlohmann::json config_;
};

// Never throws for library errors: they become exit 1 (InternalError) or
// exit 2 (InvalidArgument, ConstraintViolation, CapExceeded).
Report run(const RunConfig& cfg);

const std::vector<std::string>& suite_names();

// Least element in code order satisfying pred; throws InvalidArgument if none.
Elem first_by_code(const Field& F, const std::function<bool(Elem)>& pred);

// Serialization helpers.
nlohmann::json field_json(const Field& F);
nlohmann::json spec_json(const FamilySpec& s);
nlohmann::json nuclei_json(const NucleiReport& n);

}  // namespace r2sf
