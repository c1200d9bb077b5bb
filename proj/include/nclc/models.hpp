#pragma once

// The shipped example geometries.

#include <optional>
#include <random>
#include <string>

#include "nclc/deformation.hpp"
#include "nclc/metric.hpp"

namespace nclc {

struct Model {
  std::string name;
  CalculusSpec spec;
  MetricSpec metric;  // canonical metric of the realization
  OperatorRealization realization;
  std::optional<TorusAction> action;

  // Constructor parameters, kept for reports.
  int k = 0;
  int dims = 0;
  int deformed = 0;
  Eigen::MatrixXd theta;
};

inline constexpr int kMaxMatrixSize = 256;

// N = sum_{j = 0, 1/2, ..., k/2} (2j + 1)^2.
int fuzzy_sphere_dimension(int k);
// Spin-j generators J1, J2, J3 with [J1, J2] = i J3, basis m = j, j-1, ..., -j.
std::vector<Eigen::MatrixXcd> spin_matrices(int two_j);

// Matrix algebra on (+)_j V*_j (x) V_j with d_j = [J_j, .] for the diagonal
// spin generators J_j = (+)_j 1 (x) J^(j). These satisfy [d_1, d_2] = i d_3, which
// fixes d(e_i): Gamma^i_jk - Gamma^i_kj = i eps^{ijk} for torsion-free connections.
Model fuzzy_sphere(int k, double tol = kDefaultTol, int max_size = kMaxMatrixSize);

// Structure-constant model on scalar coefficients: [d_1, d_2] = d_3.
Model heisenberg(double tol = kDefaultTol);

// Z^m-graded algebra, twist theta on the first n coordinates, coordinate
// derivations and the flat frame.
Model torus_bundle(int m, int n, const Eigen::MatrixXd& theta, int radius, double tol = kDefaultTol);

// Random valid metric: L D L^T with constant diagonal D in [1, 2] and
// L = 1 + l E_ab, where l is a real trigonometric polynomial of degree one in a
// central coordinate of a graded model (a constant for matrix models).
MetricSpec random_oracle_metric(const Model& model, std::mt19937_64& rng);

// Last coordinate whose twist row vanishes, or -1.
int central_coordinate(const Backend& b);

}  // namespace nclc
