#pragma once

// Unital *-algebra backends.
//
// Two coefficient backends are provided:
//  * matrix: the full matrix algebra M_N(C) with the normalized trace Tr/N;
//  * graded: finitely supported Fourier series sum_k a_k U^k over Z^t with the
//    twisted product U^k U^l = exp(pi i <k, Theta l>) U^{k+l}. The trace is
//    the zero mode. Supports are bounded by a per-coordinate radius R and any
//    product leaving the box raises TruncationOverflow.
//
// Every graded backend owns an "unbounded twin" with the same twist and an
// effectively infinite radius. Intermediate computations whose result is
// known to fit back into the box are carried out in the twin and brought back
// with rehome(), which still refuses to drop anything above tolerance.

#include <complex>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nclc/error.hpp"

namespace nclc {

using cplx = std::complex<double>;
using Mode = std::vector<int>;

inline constexpr double kDefaultTol = 1e-12;
inline constexpr int kUnboundedRadius = 1 << 20;

enum class BackendKind { Matrix, Graded };

class BackendDescriptor;
using Backend = std::shared_ptr<const BackendDescriptor>;

class BackendDescriptor {
 public:
  static Backend matrix(int size, double tol = kDefaultTol);
  static Backend graded(const Eigen::MatrixXd& twist, int radius, double tol = kDefaultTol);

  BackendKind kind() const noexcept { return kind_; }
  int size() const noexcept { return size_; }
  int dims() const noexcept { return dims_; }
  const Eigen::MatrixXd& twist() const noexcept { return twist_; }
  int radius() const noexcept { return radius_; }
  double tol() const noexcept { return tol_; }
  bool is_unbounded() const noexcept { return radius_ >= kUnboundedRadius; }

  // Same kind, size, dimension and twist; the truncation radius may differ.
  bool same_algebra(const BackendDescriptor& other) const noexcept;
  bool operator==(const BackendDescriptor& other) const noexcept;

  // Untwisted graded backends and the 1x1 matrix backend are commutative.
  bool is_commutative() const noexcept;

  // Phase of U^k U^l relative to U^{k+l}.
  cplx twist_phase(const Mode& k, const Mode& l) const;

 private:
  friend Backend work_backend(const Backend& b);

  BackendKind kind_ = BackendKind::Matrix;
  int size_ = 1;
  int dims_ = 0;
  Eigen::MatrixXd twist_;
  int radius_ = 0;
  double tol_ = kDefaultTol;
  Backend twin_;
};

// The unbounded twin of a graded backend; matrix backends are their own twin.
Backend work_backend(const Backend& b);

// Same algebra with a different tolerance (twin rebuilt accordingly).
Backend with_tolerance(const Backend& b, double tol);

class AlgebraElement {
 public:
  AlgebraElement() = default;

  static AlgebraElement zero(const Backend& b);
  static AlgebraElement unit(const Backend& b);
  static AlgebraElement scalar(const Backend& b, cplx value);
  static AlgebraElement from_matrix(const Backend& b, Eigen::MatrixXcd m);
  static AlgebraElement monomial(const Backend& b, const Mode& k, cplx coeff = 1.0);
  static AlgebraElement from_modes(const Backend& b, std::map<Mode, cplx> modes);

  const Backend& backend() const noexcept { return backend_; }
  bool valid() const noexcept { return static_cast<bool>(backend_); }
  BackendKind kind() const { return backend_->kind(); }

  const Eigen::MatrixXcd& matrix() const;
  const std::map<Mode, cplx>& modes() const;
  cplx coefficient(const Mode& k) const;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator-() const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator*(cplx s) const;
  friend AlgebraElement operator*(cplx s, const AlgebraElement& a) { return a * s; }
  AlgebraElement& operator+=(const AlgebraElement& o) { return *this = *this + o; }
  AlgebraElement& operator-=(const AlgebraElement& o) { return *this = *this - o; }

  AlgebraElement star() const;
  cplx trace() const;
  // Entrywise / coefficientwise max modulus.
  double norm() const;
  bool is_zero(double tol) const { return norm() <= tol; }
  bool is_scalar(double tol) const;
  // Largest |k|_inf over the support (0 for matrix elements).
  int support_radius() const;

  // Drops graded coefficients with modulus <= eps.
  AlgebraElement pruned(double eps) const;

 private:
  Backend backend_;
  Eigen::MatrixXcd matrix_;
  std::map<Mode, cplx> modes_;
};

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement star(const AlgebraElement& a);
cplx trace(const AlgebraElement& a);
AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b);

// Moves an element between backends of the same algebra. Coefficients outside
// the target box must be below the target tolerance, else TruncationOverflow.
AlgebraElement rehome(const AlgebraElement& a, const Backend& target);
inline AlgebraElement to_work(const AlgebraElement& a) {
  return rehome(a, work_backend(a.backend()));
}

// max ||a g - g a|| over the generators <= tol.
bool is_central(const AlgebraElement& a, const std::vector<AlgebraElement>& generators,
                double tol);

class Derivation {
 public:
  enum class Kind { Inner, Grading, Symbolic };

  // a -> i [X, a]
  static Derivation inner(AlgebraElement x);
  // U^k -> 2 pi i k_j U^k
  static Derivation grading(int index);
  // Explicit linear operator on the column-major flattened matrix entries.
  static Derivation symbolic(const Backend& b, Eigen::MatrixXcd op);

  Kind kind() const noexcept { return kind_; }
  const AlgebraElement& inner_element() const { return element_; }
  int grading_index() const noexcept { return index_; }
  const Eigen::MatrixXcd& symbolic_operator() const noexcept { return op_; }

  AlgebraElement apply(const AlgebraElement& a) const;

 private:
  Kind kind_ = Kind::Inner;
  AlgebraElement element_;
  int index_ = 0;
  Eigen::MatrixXcd op_;
};

AlgebraElement derive(const Derivation& d, const AlgebraElement& a);

// All modes with |k|_inf <= radius whose coordinates outside `active` vanish.
std::vector<Mode> mode_box(int dims, int radius, const std::vector<int>& active);

// Coordinates on which some element has a nonzero mode component.
std::vector<int> active_coordinates(const std::vector<AlgebraElement>& elements);

// Random element helper for property checks: matrix entries / mode
// coefficients uniform in the unit square, graded support within `radius`.
AlgebraElement random_element(const Backend& b, std::mt19937_64& rng, int radius = 1);

}  // namespace nclc
