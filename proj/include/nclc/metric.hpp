#pragma once

// Bilinear metrics with central components g_ij = g(e_i (x) e_j).

#include <vector>

#include <Eigen/Dense>

#include "nclc/forms.hpp"

namespace nclc {

class MetricSpec {
 public:
  MetricSpec() = default;

  // Validates centrality (against spec.generators), symmetry and
  // invertibility, and caches the inverse component matrix.
  static MetricSpec build(const CalculusSpec& spec, std::vector<AlgebraElement> components);
  static MetricSpec identity(const CalculusSpec& spec);

  int rank() const noexcept { return n_; }
  const Backend& backend() const { return g_.front().backend(); }
  const AlgebraElement& at(int i, int j) const { return g_[static_cast<size_t>(i * n_ + j)]; }
  const AlgebraElement& inverse_at(int i, int j) const {
    return inv_[static_cast<size_t>(i * n_ + j)];
  }
  const std::vector<AlgebraElement>& components() const noexcept { return g_; }
  const std::vector<AlgebraElement>& inverse_components() const noexcept { return inv_; }
  // Smallest / largest singular value of the flattened component operator.
  double condition_ratio() const noexcept { return cond_ratio_; }
  // Every component is a multiple of the unit.
  bool is_constant(double tol) const;
  // Eigenvalues of the scalar part (trace of each component); diagnostic only.
  Eigen::VectorXd scalar_part_eigenvalues() const;

 private:
  int n_ = 0;
  std::vector<AlgebraElement> g_;
  std::vector<AlgebraElement> inv_;
  double cond_ratio_ = 0.0;
};

inline constexpr double kInvertibilityRatio = 1e-8;

// Inverse of a central component matrix; SingularMetric when the flattened
// operator is rank deficient, TruncationOverflow when the inverse does not fit
// into the backend's truncation box. `ratio` receives sigma_min / sigma_max.
std::vector<AlgebraElement> invert_components(const std::vector<AlgebraElement>& g, int n,
                                              double* ratio = nullptr);

AlgebraElement metric_eval(const MetricSpec& g, const TensorSquare& t);

Functional v_g(const MetricSpec& g, const OneForm& omega);
OneForm v_g_inverse(const MetricSpec& g, const Functional& phi);

// g2((e_k (x) e_l) a, (e_i (x) e_j) b) with basis value g_li g_kj.
AlgebraElement g2_eval(const MetricSpec& g, const TensorSquare& s, const TensorSquare& t);

// M[(k,l),(i,j)] = g_li g_kj as n^2 x n^2 flattened elements (row-major).
std::vector<AlgebraElement> v_g2_components(const MetricSpec& g);

struct VG2Report {
  double inverse_residual = 0.0;     // ||M M^{-1} - 1||
  double sigma_residual = 0.0;       // ||M(sigma x) - M(x) o sigma|| on the basis
  int symmetric_rank = 0;            // rank of P_sym M P_sym on Ran(P_sym), scalar part
  int symmetric_dim = 0;
};

VG2Report v_g2_check(const MetricSpec& g);

// Operator realization of the basis one-forms: e_i = sum_r a_ir (x) M_ir,
// acting on (representation of A) (x) C^w.
struct OperatorRealization {
  struct Term {
    AlgebraElement a;
    Eigen::MatrixXcd m;
  };
  std::vector<std::vector<Term>> terms;
  int spinor_dim = 1;
};

// g_ij determined by tau(g_ij c) = tau(e_i e_j c) for all c in A, with the
// trace tau (x) tr/w on the realization.
MetricSpec canonical_metric(const CalculusSpec& spec, const OperatorRealization& r);
// Components before validation (for diagnostics and tests).
std::vector<AlgebraElement> canonical_components(const CalculusSpec& spec,
                                                 const OperatorRealization& r);

// Pauli matrices and Euclidean gamma matrices (Jordan-Wigner).
std::vector<Eigen::MatrixXcd> pauli_matrices();
std::vector<Eigen::MatrixXcd> gamma_matrices(int count);

}  // namespace nclc
