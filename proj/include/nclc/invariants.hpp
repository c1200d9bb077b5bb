#pragma once

// Property checks behind `verify`. Each check reports a measured residual and
// the tolerance it is held to.

#include <cstdint>
#include <string>
#include <vector>

#include "nclc/models.hpp"

namespace nclc {

struct CheckResult {
  std::string module;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// value <= tolerance
CheckResult make_check(std::string module, std::string name, double value, double tolerance);
// value > threshold (singular value certificates)
CheckResult make_lower_bound(std::string module, std::string name, double value, double threshold);

std::vector<CheckResult> algebra_checks(const CalculusSpec& spec, std::mt19937_64& rng, int trials = 20);
std::vector<CheckResult> forms_checks(const CalculusSpec& spec, std::mt19937_64& rng, int trials = 10);
std::vector<CheckResult> metric_checks(const CalculusSpec& spec, const MetricSpec& g, std::mt19937_64& rng,
                                       int trials = 10);
std::vector<CheckResult> levi_civita_checks(const CalculusSpec& spec, const MetricSpec& g, std::mt19937_64& rng,
                                            int trials = 10);
// Needs a graded model with a torus action.
std::vector<CheckResult> deformation_checks(const Model& model, const Eigen::MatrixXd& theta, std::mt19937_64& rng,
                                            int trials = 100);

// Every applicable suite for one model and metric.
std::vector<CheckResult> model_suite(const Model& model, const MetricSpec& g, const Eigen::MatrixXd& theta,
                                     std::uint64_t seed);

Eigen::MatrixXd random_skew(int n, std::mt19937_64& rng, double scale = 0.5);

}  // namespace nclc
