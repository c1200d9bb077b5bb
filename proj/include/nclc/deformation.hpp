#pragma once

// theta-deformation of torus-graded data by the bicharacter
//   chi_theta(k, l) = exp(pi i <k, theta l>).
//
// On a graded backend the torus acts on a subset of the coordinates and the
// grade of U^k is the projection of k onto them. The deformed algebra is the
// graded backend whose twist gains theta on those coordinates; deformed
// elements keep their coefficients.

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nclc/connection.hpp"

namespace nclc {

void validate_theta(const Eigen::MatrixXd& theta);
cplx bicharacter(const Eigen::MatrixXd& theta, const Mode& k, const Mode& l);

struct TorusAction {
  int circles = 0;
  std::vector<int> coordinates;  // graded backend: acting coordinates
  Eigen::MatrixXi weights;       // matrix backend: N x circles weights of the basis vectors

  static TorusAction graded(std::vector<int> coordinates);
  static TorusAction matrix(Eigen::MatrixXi weights);
  Mode grade_of(const Mode& k) const;
};

struct GradedDecomposition {
  std::map<Mode, AlgebraElement> components;
  AlgebraElement reconstruct() const;
};

// grid = points per circle for matrix backends (0 picks 2R+1 from the weights).
GradedDecomposition spectral_decompose(const AlgebraElement& x, const TorusAction& action,
                                       int grid = 0);
bool is_grade_zero(const AlgebraElement& a, const TorusAction& action, double tol);

Backend deformed_backend(const Backend& b, const Eigen::MatrixXd& theta, const TorusAction& action);
// The same coefficients read in another backend of the same shape.
AlgebraElement retag(const AlgebraElement& a, const Backend& target);

// sum_{k,l} chi_theta(k, l) a_k b_l, returned in the deformed backend (graded)
// or the original backend (matrix).
AlgebraElement deform_product(const AlgebraElement& a, const AlgebraElement& b,
                              const Eigen::MatrixXd& theta, const TorusAction& action);
// Right and left actions on one-forms with a grade-0 central frame.
OneForm deform_module_action(const OneForm& e, const AlgebraElement& a,
                             const Eigen::MatrixXd& theta, const TorusAction& action);
OneForm deform_left_action(const AlgebraElement& a, const OneForm& e,
                           const Eigen::MatrixXd& theta, const TorusAction& action);

// Bimodule map between free modules, (L x)_r = sum_c entries(r, c) x_c.
struct ModuleMap {
  int rows = 0;
  int cols = 0;
  std::vector<AlgebraElement> entries;

  static ModuleMap from_scalar(const Backend& b, const Eigen::MatrixXcd& m);
  const AlgebraElement& at(int r, int c) const { return entries[static_cast<size_t>(r * cols + c)]; }
  std::vector<AlgebraElement> apply(const std::vector<AlgebraElement>& x) const;
};

ModuleMap deform_map(const ModuleMap& l, const Eigen::MatrixXd& theta, const TorusAction& action);

CalculusSpec deform_calculus(const CalculusSpec& spec, const Eigen::MatrixXd& theta,
                             const TorusAction& action);
MetricSpec deform_metric(const MetricSpec& g, const CalculusSpec& deformed, const TorusAction& action);
std::pair<ConnectionCoeffs, MetricSpec> deform_connection(const ConnectionCoeffs& nabla,
                                                          const MetricSpec& g,
                                                          const CalculusSpec& deformed,
                                                          const TorusAction& action);

}  // namespace nclc
