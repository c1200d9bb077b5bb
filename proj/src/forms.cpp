#include "nclc/forms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nclc {

namespace {

Eigen::MatrixXd range_basis(const Eigen::MatrixXd& projector) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(projector);
  std::vector<int> keep;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  }
  Eigen::MatrixXd b(projector.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) b.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]);
  return b;
}

int numeric_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i) r += s(i) > 1e-10 * s(0) ? 1 : 0;
  return r;
}

template <class V>
V add_coeffs(const V& a, const V& b, double sign) {
  require(a.size() == b.size(), ErrorKind::InvalidArgument, "coefficient count mismatch");
  V r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = sign > 0 ? a[i] + b[i] : a[i] - b[i];
  return r;
}

template <class V>
double max_norm(const V& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.norm());
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Two-form basis

std::vector<std::pair<int, int>> two_form_pairs(int n) {
  std::vector<std::pair<int, int>> p;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) p.emplace_back(i, j);
  return p;
}

int two_form_index(int n, int i, int j) {
  const auto pairs = two_form_pairs(n);
  auto it = std::find(pairs.begin(), pairs.end(), std::make_pair(i, j));
  require(it != pairs.end(), ErrorKind::InvalidArgument, "two-form index needs i < j");
  return static_cast<int>(it - pairs.begin());
}

std::vector<Eigen::MatrixXcd> standard_wedge(int n) {
  const auto pairs = two_form_pairs(n);
  std::vector<Eigen::MatrixXcd> c(pairs.size(), Eigen::MatrixXcd::Zero(n, n));
  for (size_t a = 0; a < pairs.size(); ++a) {
    c[a](pairs[a].first, pairs[a].second) = 1.0;
    c[a](pairs[a].second, pairs[a].first) = -1.0;
  }
  return c;
}

Eigen::MatrixXcd exterior_from_lie_structure(const std::vector<Eigen::MatrixXcd>& wedge,
                                             const std::vector<Eigen::MatrixXcd>& lie) {
  const int m = static_cast<int>(wedge.size());
  const int n = static_cast<int>(lie.size());
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(m, n);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < n; ++c) d(a, c) = -0.5 * wedge[a].cwiseProduct(lie[c]).sum();
  return d;
}

void CalculusSpec::validate() const {
  require(static_cast<bool>(backend), ErrorKind::InvalidArgument, "calculus without backend");
  require(central_basis, ErrorKind::NotCentralBasis,
          "only free one-form modules with a central basis are supported");
  require(rank >= 1, ErrorKind::InvalidArgument, "rank must be >= 1");
  require(two_form_rank >= 0, ErrorKind::InvalidArgument, "two-form rank must be >= 0");
  require(static_cast<int>(wedge.size()) == two_form_rank, ErrorKind::InvalidArgument,
          "wedge constants must have two_form_rank slices");
  require(exterior.rows() == two_form_rank && exterior.cols() == rank,
          ErrorKind::InvalidArgument, "exterior constants must be two_form_rank x rank");
  require(static_cast<int>(derivations.size()) == rank, ErrorKind::InvalidArgument,
          "one derivation per basis one-form is required");
  const double t = tol();
  for (const auto& c : wedge) {
    require(c.rows() == rank && c.cols() == rank, ErrorKind::InvalidArgument,
            "wedge slice must be rank x rank");
    const double asym = (c + c.transpose()).cwiseAbs().maxCoeff();
    if (asym > t) {
      std::ostringstream os;
      os << "wedge constants are not antisymmetric (max |c + c^T| = " << asym << ")";
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
  if (two_form_rank > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(wedge_matrix(*this));
    const auto& s = svd.singularValues();
    int r = 0;
    for (int i = 0; i < s.size(); ++i) r += s(i) > 1e-10 * std::max(1.0, s(0)) ? 1 : 0;
    require(r == two_form_rank, ErrorKind::InvalidArgument,
            "wedge constants do not realize the two-form basis");
  }
  for (const auto& g : generators) {
    require(g.backend()->same_algebra(*backend), ErrorKind::BackendMismatch,
            "generator lives in a foreign backend");
  }
  // d o d = 0 on the generators.
  for (const auto& g : generators) {
    const OneForm da = d0(*this, g);
    double scale = 1.0;
    for (const auto& x : da.c) scale = std::max(scale, x.norm());
    const TwoForm dda = d1(*this, da);
    if (dda.norm() > 1e3 * t * scale * scale) {
      std::ostringstream os;
      os << "d o d != 0 on a generator (residual " << dda.norm() << ")";
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
  if (lie_structure) {
    const auto& f = *lie_structure;
    require(static_cast<int>(f.size()) == rank, ErrorKind::InvalidArgument,
            "lie structure must have rank slices");
    for (const auto& fc : f) {
      require(fc.rows() == rank && fc.cols() == rank, ErrorKind::InvalidArgument,
              "lie structure slice must be rank x rank");
      require((fc + fc.transpose()).cwiseAbs().maxCoeff() <= t, ErrorKind::InvalidArgument,
              "lie structure constants must be antisymmetric");
    }
    const Eigen::MatrixXcd expect = exterior_from_lie_structure(wedge, f);
    const double diff = (expect - exterior).cwiseAbs().maxCoeff();
    if (diff > 1e3 * t) {
      std::ostringstream os;
      os << "exterior constants violate d o d = 0 for the Lie structure (mismatch " << diff << ")";
      fail(ErrorKind::InvalidArgument, os.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Coefficient containers

OneForm OneForm::zero(int n, const Backend& b) {
  return OneForm{std::vector<AlgebraElement>(static_cast<size_t>(n), AlgebraElement::zero(b))};
}

OneForm OneForm::basis(int n, int i, const Backend& b) {
  OneForm w = zero(n, b);
  w.c[static_cast<size_t>(i)] = AlgebraElement::unit(b);
  return w;
}

OneForm OneForm::operator+(const OneForm& o) const { return {add_coeffs(c, o.c, 1)}; }
OneForm OneForm::operator-(const OneForm& o) const { return {add_coeffs(c, o.c, -1)}; }

OneForm OneForm::right_mul(const AlgebraElement& a) const {
  OneForm r = *this;
  for (auto& x : r.c) x = x * a;
  return r;
}

OneForm OneForm::left_mul(const AlgebraElement& a) const {
  OneForm r = *this;
  for (auto& x : r.c) x = a * x;
  return r;
}

double OneForm::norm() const { return max_norm(c); }

TwoForm TwoForm::operator+(const TwoForm& o) const { return {add_coeffs(c, o.c, 1)}; }
TwoForm TwoForm::operator-(const TwoForm& o) const { return {add_coeffs(c, o.c, -1)}; }

TwoForm TwoForm::right_mul(const AlgebraElement& a) const {
  TwoForm r = *this;
  for (auto& x : r.c) x = x * a;
  return r;
}

double TwoForm::norm() const { return max_norm(c); }

TensorSquare TensorSquare::zero(int n, const Backend& b) {
  return TensorSquare{n, std::vector<AlgebraElement>(static_cast<size_t>(n * n), AlgebraElement::zero(b))};
}

TensorSquare TensorSquare::basis(int n, int i, int j, const Backend& b) {
  TensorSquare t = zero(n, b);
  t.at(i, j) = AlgebraElement::unit(b);
  return t;
}

TensorSquare TensorSquare::operator+(const TensorSquare& o) const { return {n, add_coeffs(c, o.c, 1)}; }
TensorSquare TensorSquare::operator-(const TensorSquare& o) const { return {n, add_coeffs(c, o.c, -1)}; }

TensorSquare TensorSquare::scaled(cplx s) const {
  TensorSquare r = *this;
  for (auto& x : r.c) x = x * s;
  return r;
}

TensorSquare TensorSquare::right_mul(const AlgebraElement& a) const {
  TensorSquare r = *this;
  for (auto& x : r.c) x = x * a;
  return r;
}

TensorSquare TensorSquare::left_mul(const AlgebraElement& a) const {
  TensorSquare r = *this;
  for (auto& x : r.c) x = a * x;
  return r;
}

double TensorSquare::norm() const { return max_norm(c); }

TensorCube TensorCube::zero(int n, const Backend& b) {
  return TensorCube{n, std::vector<AlgebraElement>(static_cast<size_t>(n * n * n), AlgebraElement::zero(b))};
}

TensorCube TensorCube::operator+(const TensorCube& o) const { return {n, add_coeffs(c, o.c, 1)}; }
TensorCube TensorCube::operator-(const TensorCube& o) const { return {n, add_coeffs(c, o.c, -1)}; }

TensorCube TensorCube::right_mul(const AlgebraElement& a) const {
  TensorCube r = *this;
  for (auto& x : r.c) x = x * a;
  return r;
}

double TensorCube::norm() const { return max_norm(c); }

Functional Functional::coordinate(int n, int i, const Backend& b) {
  Functional f{std::vector<AlgebraElement>(static_cast<size_t>(n), AlgebraElement::zero(b))};
  f.c[static_cast<size_t>(i)] = AlgebraElement::unit(b);
  return f;
}

AlgebraElement Functional::operator()(const OneForm& w) const {
  require(w.c.size() == c.size(), ErrorKind::InvalidArgument, "functional rank mismatch");
  AlgebraElement r = AlgebraElement::zero(w.c.front().backend());
  for (size_t i = 0; i < c.size(); ++i) r += c[i] * w.c[i];
  return r;
}

double Functional::norm() const { return max_norm(c); }

TensorSquare tensor(const OneForm& omega, const OneForm& eta) {
  const int n = omega.rank();
  require(eta.rank() == n, ErrorKind::InvalidArgument, "tensor of one-forms of different rank");
  TensorSquare t{n, {}};
  t.c.reserve(static_cast<size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.c.push_back(omega.c[i] * eta.c[j]);
  return t;
}

// ---------------------------------------------------------------------------
// Differentials and wedge

OneForm d0(const CalculusSpec& spec, const AlgebraElement& a) {
  require(a.backend()->same_algebra(*spec.backend), ErrorKind::BackendMismatch,
          "d0: element outside the calculus backend");
  OneForm w{{}};
  w.c.reserve(spec.derivations.size());
  for (const auto& d : spec.derivations) w.c.push_back(d.apply(a));
  return w;
}

TwoForm wedge(const CalculusSpec& spec, const TensorSquare& t) {
  const int n = spec.rank;
  require(t.n == n, ErrorKind::InvalidArgument, "wedge: tensor rank mismatch");
  const Backend& b = t.c.front().backend();
  TwoForm w{std::vector<AlgebraElement>(static_cast<size_t>(spec.two_form_rank), AlgebraElement::zero(b))};
  for (int a = 0; a < spec.two_form_rank; ++a) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx c = spec.wedge[a](i, j);
        if (c != cplx(0.0)) w.c[a] += t.at(i, j) * c;
      }
  }
  return w;
}

TwoForm d1(const CalculusSpec& spec, const OneForm& omega) {
  const int n = spec.rank;
  require(omega.rank() == n, ErrorKind::InvalidArgument, "d1: one-form rank mismatch");
  const Backend& b = omega.c.front().backend();
  std::vector<OneForm> partials;  // partials[i].c[k] = d_k(a_i)
  partials.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) partials.push_back(d0(spec, omega.c[i]));
  TwoForm w{std::vector<AlgebraElement>(static_cast<size_t>(spec.two_form_rank), AlgebraElement::zero(b))};
  for (int a = 0; a < spec.two_form_rank; ++a) {
    for (int i = 0; i < n; ++i) {
      const cplx dc = spec.exterior(a, i);
      if (dc != cplx(0.0)) w.c[a] += omega.c[i] * dc;
      for (int k = 0; k < n; ++k) {
        const cplx c = spec.wedge[a](i, k);
        if (c != cplx(0.0)) w.c[a] -= partials[i].c[k] * c;
      }
    }
  }
  return w;
}

TwoForm d1_basis(const CalculusSpec& spec, int i) {
  return d1(spec, OneForm::basis(spec.rank, i, spec.backend));
}

TensorSquare sigma(const TensorSquare& t) {
  TensorSquare r = t;
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) r.at(i, j) = t.at(j, i);
  return r;
}

TensorSquare p_sym(const TensorSquare& t) { return (t + sigma(t)).scaled(0.5); }

Eigen::MatrixXcd wedge_matrix(const CalculusSpec& spec) {
  const int n = spec.rank;
  Eigen::MatrixXcd w(spec.two_form_rank, n * n);
  for (int a = 0; a < spec.two_form_rank; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w(a, i * n + j) = spec.wedge[a](i, j);
  return w;
}

Eigen::MatrixXcd wedge_section_matrix(const CalculusSpec& spec) {
  const int n = spec.rank;
  Eigen::MatrixXcd asym = Eigen::MatrixXcd::Identity(n * n, n * n) * 0.5;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) asym(i * n + j, j * n + i) -= 0.5;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(wedge_matrix(spec) * asym);
  return asym * cod.pseudoInverse();
}

TensorSquare wedge_section(const CalculusSpec& spec, const TwoForm& w) {
  const int n = spec.rank;
  const Eigen::MatrixXcd q = wedge_section_matrix(spec);
  const Backend& b = w.c.empty() ? spec.backend : w.c.front().backend();
  TensorSquare t = TensorSquare::zero(n, b);
  for (int r = 0; r < n * n; ++r)
    for (int a = 0; a < spec.two_form_rank; ++a) {
      if (std::abs(q(r, a)) > 1e-15) t.c[static_cast<size_t>(r)] += w.c[a] * q(r, a);
    }
  return t;
}

// ---------------------------------------------------------------------------
// Braid machinery on E (x) E (x) E

Eigen::MatrixXd flip12(int n) {
  const int n3 = n * n * n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n3, n3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m((j * n + i) * n + k, (i * n + j) * n + k) = 1.0;
  return m;
}

Eigen::MatrixXd flip23(int n) {
  const int n3 = n * n * n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n3, n3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) m((i * n + k) * n + j, (i * n + j) * n + k) = 1.0;
  return m;
}

Eigen::MatrixXd sym12(int n) {
  const int n3 = n * n * n;
  return 0.5 * (Eigen::MatrixXd::Identity(n3, n3) + flip12(n));
}

Eigen::MatrixXd sym23(int n) {
  const int n3 = n * n * n;
  return 0.5 * (Eigen::MatrixXd::Identity(n3, n3) + flip23(n));
}

BraidReport braid_check(int n) {
  require(n >= 1, ErrorKind::InvalidArgument, "braid_check needs n >= 1");
  const Eigen::MatrixXd s12 = flip12(n);
  const Eigen::MatrixXd s23 = flip23(n);
  BraidReport r;
  r.braid_residual = (s12 * s23 * s12 - s23 * s12 * s23).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd p12 = sym12(n);
  const Eigen::MatrixXd p23 = sym23(n);
  const Eigen::MatrixXd b12 = range_basis(p12);
  const Eigen::MatrixXd b23 = range_basis(p23);
  r.dim_ran_p12 = static_cast<int>(b12.cols());
  r.dim_ran_p23 = static_cast<int>(b23.cols());
  r.rank_p12_on_ran_p23 = numeric_rank(p12 * b23);
  r.rank_p23_on_ran_p12 = numeric_rank(p23 * b12);
  r.bijective = r.dim_ran_p12 == r.dim_ran_p23 && r.rank_p12_on_ran_p23 == r.dim_ran_p23 &&
                r.rank_p23_on_ran_p12 == r.dim_ran_p12;
  return r;
}

Eigen::MatrixXd p23_on_p12_inverse(int n) {
  const Eigen::MatrixXd b12 = range_basis(sym12(n));
  const Eigen::MatrixXd m = sym23(n) * b12;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(m);
  return b12 * cod.pseudoInverse();
}

TensorCube apply_index_matrix(const Eigen::MatrixXd& m, const TensorCube& t) {
  const int n3 = t.n * t.n * t.n;
  require(m.rows() == n3 && m.cols() == n3, ErrorKind::InvalidArgument,
          "index matrix size mismatch");
  const Backend& b = t.c.front().backend();
  TensorCube r = TensorCube::zero(t.n, b);
  for (int row = 0; row < n3; ++row)
    for (int col = 0; col < n3; ++col) {
      const double v = m(row, col);
      if (std::abs(v) > 1e-15) r.c[static_cast<size_t>(row)] += t.c[static_cast<size_t>(col)] * cplx(v);
    }
  return r;
}

// ---------------------------------------------------------------------------
// zeta

TensorCube zeta_encode(const std::vector<TensorSquare>& values) {
  require(!values.empty(), ErrorKind::InvalidArgument, "zeta_encode of an empty map");
  const int n = values.front().n;
  require(static_cast<int>(values.size()) == n, ErrorKind::InvalidArgument,
          "zeta_encode needs one value per basis element");
  TensorCube t = TensorCube::zero(n, values.front().c.front().backend());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t.at(j, k, i) = values[i].at(j, k);
  return t;
}

std::vector<TensorSquare> zeta_decode(const TensorCube& t) {
  const int n = t.n;
  const Backend& b = t.c.front().backend();
  std::vector<TensorSquare> values(static_cast<size_t>(n), TensorSquare::zero(n, b));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) values[i].at(j, k) = t.at(j, k, i);
  return values;
}

TensorSquare zeta_evaluate(const TensorCube& t, const OneForm& x) {
  const int n = t.n;
  require(x.rank() == n, ErrorKind::InvalidArgument, "zeta_evaluate rank mismatch");
  TensorSquare r = TensorSquare::zero(n, t.c.front().backend());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) r.at(j, k) += t.at(j, k, i) * x.c[i];
  return r;
}

TensorCube simple_zeta_tensor(const OneForm& xi, const OneForm& eta, const Functional& phi) {
  const int n = xi.rank();
  TensorCube t = TensorCube::zero(n, xi.c.front().backend());
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const AlgebraElement ab = xi.c[j] * eta.c[k];
      for (int i = 0; i < n; ++i) t.at(j, k, i) = ab * phi.c[i];
    }
  return t;
}

}  // namespace nclc
