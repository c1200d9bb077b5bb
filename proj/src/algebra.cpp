#include "nclc/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nclc {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BackendMismatch: return "BackendMismatch";
    case ErrorKind::TruncationOverflow: return "TruncationOverflow";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::NonCentralResult: return "NonCentralResult";
    case ErrorKind::NonUnique: return "NonUnique";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NonSkew: return "NonSkew";
    case ErrorKind::NotEquivariant: return "NotEquivariant";
    case ErrorKind::RangeNotSymmetric: return "RangeNotSymmetric";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::SizeTooLarge: return "SizeTooLarge";
    case ErrorKind::NonCommutativeBackend: return "NonCommutativeBackend";
    case ErrorKind::NotCentralBasis: return "NotCentralBasis";
  }
  return "Unknown";
}

namespace {

using std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

int sup_norm(const Mode& k) {
  int r = 0;
  for (int v : k) r = std::max(r, std::abs(v));
  return r;
}

void require_same(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
  require(a.valid() && b.valid(), ErrorKind::InvalidArgument,
          std::string(op) + ": uninitialized element");
  if (a.backend() == b.backend()) return;
  if (!(*a.backend() == *b.backend())) {
    fail(ErrorKind::BackendMismatch, std::string(op) + ": operands live in different backends");
  }
}

Mode add_modes(const Mode& k, const Mode& l) {
  Mode r(k.size());
  for (size_t i = 0; i < k.size(); ++i) r[i] = k[i] + l[i];
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// BackendDescriptor

Backend BackendDescriptor::matrix(int size, double tol) {
  require(size >= 1, ErrorKind::InvalidArgument, "matrix backend needs N >= 1");
  require(tol > 0, ErrorKind::InvalidArgument, "tolerance must be positive");
  auto d = std::shared_ptr<BackendDescriptor>(new BackendDescriptor());
  d->kind_ = BackendKind::Matrix;
  d->size_ = size;
  d->dims_ = 0;
  d->radius_ = 0;
  d->tol_ = tol;
  return d;
}

Backend BackendDescriptor::graded(const Eigen::MatrixXd& twist, int radius, double tol) {
  require(twist.rows() == twist.cols(), ErrorKind::InvalidArgument, "twist matrix must be square");
  require(twist.rows() >= 1, ErrorKind::InvalidArgument, "graded backend needs t >= 1");
  require(radius >= 1, ErrorKind::InvalidArgument, "truncation radius must be >= 1");
  require(tol > 0, ErrorKind::InvalidArgument, "tolerance must be positive");
  const double asym = (twist + twist.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-14) {
    std::ostringstream os;
    os << "twist matrix is not skew-symmetric: max |Theta + Theta^T| = " << asym;
    fail(ErrorKind::NonSkew, os.str());
  }
  auto build = [&](int r) {
    auto d = std::shared_ptr<BackendDescriptor>(new BackendDescriptor());
    d->kind_ = BackendKind::Graded;
    d->size_ = 0;
    d->dims_ = static_cast<int>(twist.rows());
    d->twist_ = twist;
    d->radius_ = r;
    d->tol_ = tol;
    return d;
  };
  auto d = build(radius);
  if (radius < kUnboundedRadius) d->twin_ = build(kUnboundedRadius);
  return d;
}

bool BackendDescriptor::same_algebra(const BackendDescriptor& o) const noexcept {
  if (kind_ != o.kind_) return false;
  if (kind_ == BackendKind::Matrix) return size_ == o.size_;
  return dims_ == o.dims_ && twist_ == o.twist_;
}

bool BackendDescriptor::operator==(const BackendDescriptor& o) const noexcept {
  return same_algebra(o) && radius_ == o.radius_;
}

bool BackendDescriptor::is_commutative() const noexcept {
  if (kind_ == BackendKind::Matrix) return size_ == 1;
  return twist_.cwiseAbs().maxCoeff() == 0.0;
}

cplx BackendDescriptor::twist_phase(const Mode& k, const Mode& l) const {
  double s = 0.0;
  for (int a = 0; a < dims_; ++a) {
    if (k[a] == 0) continue;
    for (int b = 0; b < dims_; ++b) {
      if (l[b] == 0) continue;
      s += k[a] * twist_(a, b) * l[b];
    }
  }
  if (s == 0.0) return 1.0;
  return std::exp(kI * (pi * s));
}

Backend work_backend(const Backend& b) { return b->twin_ ? b->twin_ : b; }

Backend with_tolerance(const Backend& b, double tol) {
  if (b->kind() == BackendKind::Matrix) return BackendDescriptor::matrix(b->size(), tol);
  return BackendDescriptor::graded(b->twist(), b->radius(), tol);
}

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement AlgebraElement::zero(const Backend& b) {
  AlgebraElement a;
  a.backend_ = b;
  if (b->kind() == BackendKind::Matrix) a.matrix_ = Eigen::MatrixXcd::Zero(b->size(), b->size());
  return a;
}

AlgebraElement AlgebraElement::unit(const Backend& b) { return scalar(b, 1.0); }

AlgebraElement AlgebraElement::scalar(const Backend& b, cplx value) {
  AlgebraElement a = zero(b);
  if (b->kind() == BackendKind::Matrix) {
    a.matrix_.diagonal().setConstant(value);
  } else if (value != cplx(0.0)) {
    a.modes_[Mode(b->dims(), 0)] = value;
  }
  return a;
}

AlgebraElement AlgebraElement::from_matrix(const Backend& b, Eigen::MatrixXcd m) {
  require(b->kind() == BackendKind::Matrix, ErrorKind::BackendMismatch,
          "from_matrix needs a matrix backend");
  require(m.rows() == b->size() && m.cols() == b->size(), ErrorKind::InvalidArgument,
          "matrix size does not match backend");
  AlgebraElement a;
  a.backend_ = b;
  a.matrix_ = std::move(m);
  return a;
}

AlgebraElement AlgebraElement::monomial(const Backend& b, const Mode& k, cplx coeff) {
  std::map<Mode, cplx> m;
  m[k] = coeff;
  return from_modes(b, std::move(m));
}

AlgebraElement AlgebraElement::from_modes(const Backend& b, std::map<Mode, cplx> modes) {
  require(b->kind() == BackendKind::Graded, ErrorKind::BackendMismatch,
          "from_modes needs a graded backend");
  AlgebraElement a;
  a.backend_ = b;
  for (auto& [k, c] : modes) {
    require(static_cast<int>(k.size()) == b->dims(), ErrorKind::InvalidArgument,
            "mode has wrong dimension");
    if (c == cplx(0.0)) continue;
    if (sup_norm(k) > b->radius()) {
      fail(ErrorKind::TruncationOverflow, "mode outside truncation radius " +
                                              std::to_string(b->radius()));
    }
    a.modes_.emplace(k, c);
  }
  return a;
}

const Eigen::MatrixXcd& AlgebraElement::matrix() const {
  require(valid() && kind() == BackendKind::Matrix, ErrorKind::BackendMismatch,
          "matrix() on a non-matrix element");
  return matrix_;
}

const std::map<Mode, cplx>& AlgebraElement::modes() const {
  require(valid() && kind() == BackendKind::Graded, ErrorKind::BackendMismatch,
          "modes() on a non-graded element");
  return modes_;
}

cplx AlgebraElement::coefficient(const Mode& k) const {
  auto it = modes().find(k);
  return it == modes_.end() ? cplx(0.0) : it->second;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same(*this, o, "add");
  AlgebraElement r = *this;
  if (kind() == BackendKind::Matrix) {
    r.matrix_ += o.matrix_;
  } else {
    for (const auto& [k, c] : o.modes_) {
      auto [it, inserted] = r.modes_.emplace(k, c);
      if (!inserted) {
        it->second += c;
        if (it->second == cplx(0.0)) r.modes_.erase(it);
      }
    }
  }
  return r;
}

AlgebraElement AlgebraElement::operator-() const { return *this * cplx(-1.0); }

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const { return *this + (-o); }

AlgebraElement AlgebraElement::operator*(cplx s) const {
  AlgebraElement r = *this;
  if (kind() == BackendKind::Matrix) {
    r.matrix_ *= s;
  } else if (s == cplx(0.0)) {
    r.modes_.clear();
  } else {
    for (auto& [k, c] : r.modes_) c *= s;
  }
  return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  require_same(*this, o, "mul");
  AlgebraElement r;
  r.backend_ = backend_;
  if (kind() == BackendKind::Matrix) {
    r.matrix_ = matrix_ * o.matrix_;
    return r;
  }
  const BackendDescriptor& d = *backend_;
  for (const auto& [k, a] : modes_) {
    for (const auto& [l, b] : o.modes_) {
      Mode s = add_modes(k, l);
      if (sup_norm(s) > d.radius()) {
        fail(ErrorKind::TruncationOverflow,
             "product support exceeds truncation radius " + std::to_string(d.radius()));
      }
      r.modes_[s] += d.twist_phase(k, l) * a * b;
    }
  }
  for (auto it = r.modes_.begin(); it != r.modes_.end();) {
    it = it->second == cplx(0.0) ? r.modes_.erase(it) : std::next(it);
  }
  return r;
}

AlgebraElement AlgebraElement::star() const {
  AlgebraElement r;
  r.backend_ = backend_;
  if (kind() == BackendKind::Matrix) {
    r.matrix_ = matrix_.adjoint();
    return r;
  }
  // (U^k)^* = U^{-k}; the symmetric bicharacter makes U^{-k} U^k = 1 exactly.
  for (const auto& [k, c] : modes_) {
    Mode nk(k.size());
    for (size_t i = 0; i < k.size(); ++i) nk[i] = -k[i];
    r.modes_[nk] = std::conj(c);
  }
  return r;
}

cplx AlgebraElement::trace() const {
  if (kind() == BackendKind::Matrix) return matrix_.trace() / static_cast<double>(matrix_.rows());
  return coefficient(Mode(backend_->dims(), 0));
}

double AlgebraElement::norm() const {
  if (kind() == BackendKind::Matrix) return matrix_.size() ? matrix_.cwiseAbs().maxCoeff() : 0.0;
  double m = 0.0;
  for (const auto& [k, c] : modes_) m = std::max(m, std::abs(c));
  return m;
}

bool AlgebraElement::is_scalar(double tol) const {
  return (*this - scalar(backend_, trace())).norm() <= tol;
}

int AlgebraElement::support_radius() const {
  if (kind() == BackendKind::Matrix) return 0;
  int r = 0;
  for (const auto& [k, c] : modes_) r = std::max(r, sup_norm(k));
  return r;
}

AlgebraElement AlgebraElement::pruned(double eps) const {
  if (kind() == BackendKind::Matrix) return *this;
  AlgebraElement r;
  r.backend_ = backend_;
  for (const auto& [k, c] : modes_) {
    if (std::abs(c) > eps) r.modes_.emplace(k, c);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Free functions

AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }
AlgebraElement star(const AlgebraElement& a) { return a.star(); }
cplx trace(const AlgebraElement& a) { return a.trace(); }
AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) {
  return a * b - b * a;
}

AlgebraElement rehome(const AlgebraElement& a, const Backend& target) {
  require(a.valid(), ErrorKind::InvalidArgument, "rehome of uninitialized element");
  if (a.backend() == target) return a;
  require(a.backend()->same_algebra(*target), ErrorKind::BackendMismatch,
          "rehome between different algebras");
  if (target->kind() == BackendKind::Matrix) return AlgebraElement::from_matrix(target, a.matrix());
  std::map<Mode, cplx> kept;
  for (const auto& [k, c] : a.modes()) {
    if (sup_norm(k) <= target->radius()) {
      kept.emplace(k, c);
    } else if (std::abs(c) > target->tol()) {
      std::ostringstream os;
      os << "coefficient of modulus " << std::abs(c) << " outside truncation radius "
         << target->radius();
      fail(ErrorKind::TruncationOverflow, os.str());
    }
  }
  return AlgebraElement::from_modes(target, std::move(kept));
}

bool is_central(const AlgebraElement& a, const std::vector<AlgebraElement>& generators,
                double tol) {
  const AlgebraElement aw = to_work(a);
  for (const auto& g : generators) {
    const AlgebraElement gw = rehome(g, aw.backend());
    if (commutator(aw, gw).norm() > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Derivations

Derivation Derivation::inner(AlgebraElement x) {
  Derivation d;
  d.kind_ = Kind::Inner;
  d.element_ = std::move(x);
  return d;
}

Derivation Derivation::grading(int index) {
  require(index >= 0, ErrorKind::InvalidArgument, "grading index must be >= 0");
  Derivation d;
  d.kind_ = Kind::Grading;
  d.index_ = index;
  return d;
}

Derivation Derivation::symbolic(const Backend& b, Eigen::MatrixXcd op) {
  require(b->kind() == BackendKind::Matrix, ErrorKind::InvalidArgument,
          "symbolic derivations act on matrix backends");
  const int n2 = b->size() * b->size();
  require(op.rows() == n2 && op.cols() == n2, ErrorKind::InvalidArgument,
          "symbolic operator must be N^2 x N^2");
  Derivation d;
  d.kind_ = Kind::Symbolic;
  d.op_ = std::move(op);
  d.element_ = AlgebraElement::zero(b);
  return d;
}

AlgebraElement Derivation::apply(const AlgebraElement& a) const {
  switch (kind_) {
    case Kind::Inner: {
      require(element_.backend()->same_algebra(*a.backend()), ErrorKind::BackendMismatch,
              "inner derivation applied to a foreign element");
      const AlgebraElement aw = to_work(a);
      const AlgebraElement x = rehome(element_, aw.backend());
      return rehome(commutator(x, aw) * cplx(0.0, 1.0), a.backend());
    }
    case Kind::Grading: {
      require(a.kind() == BackendKind::Graded, ErrorKind::BackendMismatch,
              "grading derivation needs a graded element");
      require(index_ < a.backend()->dims(), ErrorKind::InvalidArgument,
              "grading index out of range");
      std::map<Mode, cplx> out;
      for (const auto& [k, c] : a.modes()) {
        if (k[index_] != 0) out.emplace(k, c * kI * (2.0 * pi * k[index_]));
      }
      return AlgebraElement::from_modes(a.backend(), std::move(out));
    }
    case Kind::Symbolic: {
      require(element_.backend()->same_algebra(*a.backend()), ErrorKind::BackendMismatch,
              "symbolic derivation applied to a foreign element");
      const int n = a.backend()->size();
      Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(a.matrix().data(), n * n);
      Eigen::VectorXcd w = op_ * v;
      return AlgebraElement::from_matrix(a.backend(), Eigen::Map<Eigen::MatrixXcd>(w.data(), n, n));
    }
  }
  return a;
}

AlgebraElement derive(const Derivation& d, const AlgebraElement& a) { return d.apply(a); }

std::vector<Mode> mode_box(int dims, int radius, const std::vector<int>& active) {
  std::vector<Mode> out;
  std::vector<int> free;
  for (int j : active) {
    if (j >= 0 && j < dims && std::find(free.begin(), free.end(), j) == free.end()) free.push_back(j);
  }
  std::sort(free.begin(), free.end());
  Mode cur(dims, 0);
  for (int j : free) cur[j] = -radius;
  while (true) {
    out.push_back(cur);
    size_t p = 0;
    for (; p < free.size(); ++p) {
      int j = free[p];
      if (cur[j] < radius) {
        ++cur[j];
        break;
      }
      cur[j] = -radius;
    }
    if (p == free.size()) break;
  }
  return out;
}

AlgebraElement random_element(const Backend& b, std::mt19937_64& rng, int radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  if (b->kind() == BackendKind::Matrix) {
    Eigen::MatrixXcd m(b->size(), b->size());
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = cplx(u(rng), u(rng));
    return AlgebraElement::from_matrix(b, std::move(m));
  }
  const int r = std::min(radius, b->radius());
  std::vector<int> all(b->dims());
  for (int j = 0; j < b->dims(); ++j) all[j] = j;
  std::map<Mode, cplx> modes;
  for (const Mode& k : mode_box(b->dims(), r, all)) modes[k] = cplx(u(rng), u(rng));
  return AlgebraElement::from_modes(b, std::move(modes));
}

std::vector<int> active_coordinates(const std::vector<AlgebraElement>& elements) {
  std::vector<int> out;
  for (const auto& e : elements) {
    if (!e.valid() || e.kind() != BackendKind::Graded) continue;
    for (const auto& [k, c] : e.modes()) {
      if (c == cplx(0.0)) continue;
      for (int j = 0; j < static_cast<int>(k.size()); ++j) {
        if (k[j] != 0 && std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nclc
