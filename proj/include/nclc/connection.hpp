#pragma once

// Right connections on the free one-form module and the Levi-Civita solver.
//
// A connection is stored by its Christoffel coefficients,
//   nabla(e_i) = sum_{jk} e_j (x) e_k Gamma^i_jk,
// where k is the differentiation direction, so that
//   nabla(sum_i e_i a_i)_jk = sum_i Gamma^i_jk a_i + d_k(a_j).

#include <string>
#include <vector>

#include "nclc/forms.hpp"
#include "nclc/metric.hpp"

namespace nclc {

struct ConnectionCoeffs {
  int n = 0;
  std::vector<AlgebraElement> gamma;  // index (i*n + j)*n + k

  static ConnectionCoeffs zero(int n, const Backend& b);
  AlgebraElement& at(int i, int j, int k) { return gamma[static_cast<size_t>((i * n + j) * n + k)]; }
  const AlgebraElement& at(int i, int j, int k) const {
    return gamma[static_cast<size_t>((i * n + j) * n + k)];
  }
  const Backend& backend() const { return gamma.front().backend(); }
  ConnectionCoeffs operator-(const ConnectionCoeffs& o) const;
  double norm() const;
};

TensorSquare apply_connection(const CalculusSpec& spec, const ConnectionCoeffs& nabla,
                              const OneForm& omega);

// T(e_i) = wedge(nabla(e_i)) + d(e_i), one two-form per basis element.
std::vector<TwoForm> torsion(const CalculusSpec& spec, const ConnectionCoeffs& nabla);
double torsion_norm(const CalculusSpec& spec, const ConnectionCoeffs& nabla);

// Minimal-norm constant torsionless connection.
ConnectionCoeffs nabla0(const CalculusSpec& spec);

// Pi_g(nabla)(e_i (x) e_j) = sum_l e_l (sum_k g_kj Gamma^i_kl + g_ki Gamma^j_kl),
// index i*n + j.
std::vector<OneForm> pi_g_basis(const MetricSpec& g, const ConnectionCoeffs& nabla);
// dg(e_i (x) e_j) = sum_l e_l d_l(g_ij).
std::vector<OneForm> dg_basis(const CalculusSpec& spec, const MetricSpec& g);

struct CompatibilityResidual {
  int n = 0;
  std::vector<AlgebraElement> r;  // index (i*n + j)*n + l
  double max_norm = 0.0;
};

CompatibilityResidual compat_residual(const CalculusSpec& spec, const MetricSpec& g,
                                      const ConnectionCoeffs& nabla);

// Right-linear maps E -> E (x) E are stored as connection-shaped cubes
// (L(e_a) = sum e_j (x) e_k L^a_jk); maps E (x) E -> E as cubes
// M(a, b, k) = coefficient of e_k in M(e_a (x) e_b).
using LinearMapE = ConnectionCoeffs;

TensorCube phi_g_apply(const MetricSpec& g, const LinearMapE& l);
LinearMapE phi_g_invert(const MetricSpec& g, const TensorCube& m);
double symmetric_range_defect(const LinearMapE& l);

enum class Route { Direct, Phi, Both };
Route parse_route(const std::string& name);
std::string route_name(Route r);

struct SolveOptions {
  double residual_tol = 1e-10;
  double kernel_tol = 1e-8;
  double route_tol = 1e-9;
};

struct LeviCivitaResult {
  ConnectionCoeffs gamma;
  double torsion_residual = 0.0;
  double compat_residual = 0.0;
  double min_singular_value = 0.0;  // relative to the largest
  double route_difference = 0.0;    // only for Route::Both
  int unknowns = 0;
  int equations = 0;
  Route route = Route::Direct;
};

// Uniqueness certificate and solution of the joint torsion + compatibility
// system. Throws NonUnique / Inconsistent / SingularMetric.
LeviCivitaResult levi_civita(const CalculusSpec& spec, const MetricSpec& g, Route route,
                             const SolveOptions& opt = {});

// Classical Christoffel symbols on a commutative graded backend, translated
// to the convention above (Gamma^i_jk = -Gamma_classical^i_jk).
ConnectionCoeffs koszul_oracle(const CalculusSpec& spec, const MetricSpec& g);

}  // namespace nclc
