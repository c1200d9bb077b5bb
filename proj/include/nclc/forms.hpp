#pragma once

// Free one-form bimodule with a central basis e_1..e_n.
//
// Coefficient conventions (the basis is central, so left actions commute
// through to the coefficient slot):
//   OneForm        sum_i e_i a_i
//   TensorSquare   sum_{ij} e_i (x) e_j a_ij              index i*n + j
//   TensorCube     sum_{ijk} e_i (x) e_j (x) e_k a_ijk     index (i*n + j)*n + k
//   TwoForm        sum_alpha f_alpha b_alpha
//
// Two-forms are described by wedge constants c^alpha_ij (e_i ^ e_j =
// sum_alpha f_alpha c^alpha_ij) and exterior constants D^alpha_i
// (d e_i = sum_alpha f_alpha D^alpha_i). The standard basis orders
// f_(i,j), i < j, lexicographically with c^(i,j)_ij = +1, c^(i,j)_ji = -1.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nclc/algebra.hpp"

namespace nclc {

struct CalculusSpec {
  int rank = 0;
  int two_form_rank = 0;
  std::vector<Eigen::MatrixXcd> wedge;  // wedge[alpha](i, j) = c^alpha_ij
  Eigen::MatrixXcd exterior;            // exterior(alpha, i) = D^alpha_i
  std::vector<Derivation> derivations;  // d a = sum_i e_i derivations[i](a)
  Backend backend;
  std::vector<AlgebraElement> generators;
  // Optional Lie structure of the derivations: [d_a, d_b] = sum_c f[c](a, b) d_c.
  std::optional<std::vector<Eigen::MatrixXcd>> lie_structure;
  // Only free modules with a central basis are representable.
  bool central_basis = true;

  // Checks antisymmetry of c, surjectivity of the wedge, d o d = 0 on the
  // generators and (when present) consistency of D with the Lie structure.
  void validate() const;
  double tol() const { return backend->tol(); }
};

std::vector<std::pair<int, int>> two_form_pairs(int n);
int two_form_index(int n, int i, int j);
std::vector<Eigen::MatrixXcd> standard_wedge(int n);

// D^alpha_c = -1/2 sum_{ik} c^alpha_ik f^c_ik, the unique exterior constants
// making d o d = 0 for linearly independent derivations with structure f.
Eigen::MatrixXcd exterior_from_lie_structure(const std::vector<Eigen::MatrixXcd>& wedge,
                                             const std::vector<Eigen::MatrixXcd>& lie);

struct OneForm {
  std::vector<AlgebraElement> c;

  static OneForm zero(int n, const Backend& b);
  static OneForm basis(int n, int i, const Backend& b);
  int rank() const { return static_cast<int>(c.size()); }
  OneForm operator+(const OneForm& o) const;
  OneForm operator-(const OneForm& o) const;
  OneForm right_mul(const AlgebraElement& a) const;
  OneForm left_mul(const AlgebraElement& a) const;
  double norm() const;
};

struct TwoForm {
  std::vector<AlgebraElement> c;

  TwoForm operator+(const TwoForm& o) const;
  TwoForm operator-(const TwoForm& o) const;
  TwoForm right_mul(const AlgebraElement& a) const;
  double norm() const;
};

struct TensorSquare {
  int n = 0;
  std::vector<AlgebraElement> c;

  static TensorSquare zero(int n, const Backend& b);
  static TensorSquare basis(int n, int i, int j, const Backend& b);
  AlgebraElement& at(int i, int j) { return c[static_cast<size_t>(i * n + j)]; }
  const AlgebraElement& at(int i, int j) const { return c[static_cast<size_t>(i * n + j)]; }
  TensorSquare operator+(const TensorSquare& o) const;
  TensorSquare operator-(const TensorSquare& o) const;
  TensorSquare scaled(cplx s) const;
  TensorSquare right_mul(const AlgebraElement& a) const;
  TensorSquare left_mul(const AlgebraElement& a) const;
  double norm() const;
};

struct TensorCube {
  int n = 0;
  std::vector<AlgebraElement> c;

  static TensorCube zero(int n, const Backend& b);
  AlgebraElement& at(int i, int j, int k) { return c[static_cast<size_t>((i * n + j) * n + k)]; }
  const AlgebraElement& at(int i, int j, int k) const {
    return c[static_cast<size_t>((i * n + j) * n + k)];
  }
  TensorCube operator+(const TensorCube& o) const;
  TensorCube operator-(const TensorCube& o) const;
  TensorCube right_mul(const AlgebraElement& a) const;
  double norm() const;
};

// Element of E^*: phi(sum e_i a_i) = sum phi_i a_i.
struct Functional {
  std::vector<AlgebraElement> c;

  static Functional coordinate(int n, int i, const Backend& b);
  AlgebraElement operator()(const OneForm& w) const;
  double norm() const;
};

// omega (x) eta for omega = sum e_i a_i, eta = sum e_j b_j.
TensorSquare tensor(const OneForm& omega, const OneForm& eta);

OneForm d0(const CalculusSpec& spec, const AlgebraElement& a);
TwoForm wedge(const CalculusSpec& spec, const TensorSquare& t);
TwoForm d1(const CalculusSpec& spec, const OneForm& omega);
// Image of the basis one-form e_i under d1, i.e. the exterior constants.
TwoForm d1_basis(const CalculusSpec& spec, int i);

TensorSquare sigma(const TensorSquare& t);
TensorSquare p_sym(const TensorSquare& t);

// The antisymmetric tensor A with wedge(A) = w (right inverse of the wedge on
// the complement of Ker(wedge)).
TensorSquare wedge_section(const CalculusSpec& spec, const TwoForm& w);
// Complex n^2 x m matrix of the section above.
Eigen::MatrixXcd wedge_section_matrix(const CalculusSpec& spec);
// m x n^2 matrix of the wedge on coefficient vectors (row-major (i,j)).
Eigen::MatrixXcd wedge_matrix(const CalculusSpec& spec);

// Permutation matrices on the n^3 coefficient space of E (x) E (x) E.
Eigen::MatrixXd flip12(int n);
Eigen::MatrixXd flip23(int n);
Eigen::MatrixXd sym12(int n);
Eigen::MatrixXd sym23(int n);

struct BraidReport {
  double braid_residual = 0.0;      // ||s12 s23 s12 - s23 s12 s23||
  int dim_ran_p12 = 0;
  int dim_ran_p23 = 0;
  int rank_p12_on_ran_p23 = 0;
  int rank_p23_on_ran_p12 = 0;
  bool bijective = false;
};

BraidReport braid_check(int n);
inline BraidReport braid_check(const CalculusSpec& spec) { return braid_check(spec.rank); }

// Q with P23 Q y = y and Q y in Ran(P12) for every y in Ran(P23): the inverse
// of P23 restricted to Ran(P12).
Eigen::MatrixXd p23_on_p12_inverse(int n);

// Apply a real n^3 x n^3 index matrix to the coefficients of a cube.
TensorCube apply_index_matrix(const Eigen::MatrixXd& m, const TensorCube& t);

// zeta: E (x) E (x) E^* -> Hom_A(E, E (x) E). A right-linear map L is stored by
// its values on the basis, L(e_i) = sum_{jk} e_j (x) e_k T(j, k, i).
TensorCube zeta_encode(const std::vector<TensorSquare>& values);
std::vector<TensorSquare> zeta_decode(const TensorCube& t);
// zeta(sum e (x) f (x) phi)(x) = sum e (x) f phi(x)
TensorSquare zeta_evaluate(const TensorCube& t, const OneForm& x);
// Coefficients of xi (x) eta (x) phi.
TensorCube simple_zeta_tensor(const OneForm& xi, const OneForm& eta, const Functional& phi);

}  // namespace nclc
