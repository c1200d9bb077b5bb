#pragma once

// Run configuration and JSON reports for the command-line front end.

#include <cstdint>
#include <optional>
#include <string>

#include "nclc/invariants.hpp"
#include "nclc/models.hpp"
#include "nclc/serialize.hpp"

namespace nclc {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string model = "fuzzy-sphere";
  bool model_given = false;
  int k = 1;
  int dims = 3;
  int deformed = 2;
  Json theta;  // number, array or comma-separated string; null = zero
  int radius = 3;
  Route route = Route::Both;
  Json metric = "default";  // "default" | "random" | file path | {"components": ...}
  std::uint64_t seed = 1;
  int samples = 5;
  double tol = kDefaultTol;
  std::string out;

  // Unknown keys are rejected; missing keys keep their defaults.
  static RunConfig from_json(const Json& j);
  Json to_json() const;
};

// Default backend tolerance, overridable through NCLC_TOL.
double default_tolerance();

// n x n skew matrix from a number (theta_12 for n = 2), a flat row-major or
// nested array, or a comma-separated string. Unparsable text is NonSkew.
Eigen::MatrixXd parse_theta(const Json& value, int n);

Model build_model(const RunConfig& cfg);
MetricSpec build_metric(const RunConfig& cfg, const Model& model);
Json model_description(const Model& model);

Json connection_report(const Model& model, const MetricSpec& g, const LeviCivitaResult& r);
Json check_json(const CheckResult& c);

Json solve_report(const RunConfig& cfg);
Json verify_report(const RunConfig& cfg);
Json deform_report(const RunConfig& cfg);
Json oracle_report(const RunConfig& cfg);
// Dispatch on "solve" | "verify" | "deform" | "oracle-compare".
Json run_command(const std::string& command, const RunConfig& cfg);

// Reports carry "passed"; exit codes follow the error taxonomy.
bool report_passed(const Json& report);
int exit_code_for(ErrorKind kind);
Json error_report(ErrorKind kind, const std::string& detail);

}  // namespace nclc
