#include "nclc/models.hpp"

#include <cmath>
#include <sstream>

namespace nclc {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

std::vector<Eigen::MatrixXcd> lie_structure_su2(cplx unit) {
  // [d_a, d_b] = unit * eps_abc d_c
  std::vector<Eigen::MatrixXcd> f(3, Eigen::MatrixXcd::Zero(3, 3));
  for (int c = 0; c < 3; ++c) {
    const int a = (c + 1) % 3;
    const int b = (c + 2) % 3;
    f[c](a, b) = unit;
    f[c](b, a) = -unit;
  }
  return f;
}

OperatorRealization frame_realization(const Backend& b, const std::vector<Eigen::MatrixXcd>& mats) {
  OperatorRealization r;
  r.spinor_dim = static_cast<int>(mats.front().rows());
  for (const auto& m : mats) r.terms.push_back({{AlgebraElement::unit(b), m}});
  return r;
}

}  // namespace

int fuzzy_sphere_dimension(int k) {
  int n = 0;
  for (int two_j = 0; two_j <= k; ++two_j) n += (two_j + 1) * (two_j + 1);
  return n;
}

std::vector<Eigen::MatrixXcd> spin_matrices(int two_j) {
  const int d = two_j + 1;
  const double j = two_j / 2.0;
  Eigen::MatrixXcd jp = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd j3 = Eigen::MatrixXcd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const double m = j - a;
    j3(a, a) = m;
    if (a > 0) jp(a - 1, a) = std::sqrt(j * (j + 1) - m * (m + 1));
  }
  const Eigen::MatrixXcd jm = jp.adjoint();
  return {(jp + jm) * 0.5, (jp - jm) * cplx(0.0, -0.5), j3};
}

Model fuzzy_sphere(int k, double tol, int max_size) {
  require(k >= 1, ErrorKind::InvalidArgument, "fuzzy sphere needs k >= 1");
  const int n = fuzzy_sphere_dimension(k);
  if (n > max_size) {
    std::ostringstream os;
    os << "fuzzy sphere k=" << k << " needs " << n << "x" << n << " matrices (cap " << max_size << ")";
    fail(ErrorKind::SizeTooLarge, os.str());
  }
  Model model;
  model.name = "fuzzy-sphere";
  model.k = k;
  const Backend b = BackendDescriptor::matrix(n, tol);

  std::vector<Eigen::MatrixXcd> big(3, Eigen::MatrixXcd::Zero(n, n));
  int offset = 0;
  for (int two_j = 0; two_j <= k; ++two_j) {
    const int d = two_j + 1;
    const auto spin = spin_matrices(two_j);
    for (int c = 0; c < 3; ++c)
      big[c].block(offset, offset, d * d, d * d) = kron(Eigen::MatrixXcd::Identity(d, d), spin[c]);
    offset += d * d;
  }

  CalculusSpec& s = model.spec;
  s.rank = 3;
  s.two_form_rank = 3;
  s.backend = b;
  s.wedge = standard_wedge(3);
  // d_c = [J_c, .] = i[-i J_c, .]
  for (int c = 0; c < 3; ++c)
    s.derivations.push_back(Derivation::inner(AlgebraElement::from_matrix(b, big[c] * cplx(0.0, -1.0))));
  s.lie_structure = lie_structure_su2(cplx(0.0, 1.0));
  s.exterior = exterior_from_lie_structure(s.wedge, *s.lie_structure);

  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    diag(a, a) = a;
    shift((a + 1) % n, a) = 1.0;
  }
  s.generators = {AlgebraElement::from_matrix(b, diag), AlgebraElement::from_matrix(b, shift)};
  s.validate();

  model.realization = frame_realization(b, pauli_matrices());
  model.metric = canonical_metric(s, model.realization);
  return model;
}

Model heisenberg(double tol) {
  Model model;
  model.name = "heisenberg";
  const Backend b = BackendDescriptor::matrix(1, tol);
  CalculusSpec& s = model.spec;
  s.rank = 3;
  s.two_form_rank = 3;
  s.backend = b;
  s.wedge = standard_wedge(3);
  for (int c = 0; c < 3; ++c) s.derivations.push_back(Derivation::symbolic(b, Eigen::MatrixXcd::Zero(1, 1)));
  std::vector<Eigen::MatrixXcd> f(3, Eigen::MatrixXcd::Zero(3, 3));
  f[2](0, 1) = 1.0;
  f[2](1, 0) = -1.0;
  s.lie_structure = f;
  s.exterior = exterior_from_lie_structure(s.wedge, f);
  s.generators = {AlgebraElement::unit(b)};
  s.validate();

  model.realization = frame_realization(b, pauli_matrices());
  model.metric = canonical_metric(s, model.realization);
  return model;
}

Model torus_bundle(int m, int n, const Eigen::MatrixXd& theta, int radius, double tol) {
  require(m >= 1, ErrorKind::InvalidArgument, "torus bundle needs at least one coordinate");
  require(n >= 1 && n <= m, ErrorKind::InvalidArgument, "deformed directions must satisfy 1 <= n <= m");
  require(radius >= 1, ErrorKind::InvalidArgument, "truncation radius must be >= 1");
  validate_theta(theta);
  if (theta.rows() != n) {
    std::ostringstream os;
    os << "theta must be " << n << "x" << n << ", got " << theta.rows() << "x" << theta.cols();
    fail(ErrorKind::InvalidArgument, os.str());
  }
  Model model;
  model.name = "torus";
  model.dims = m;
  model.deformed = n;
  model.theta = theta;
  Eigen::MatrixXd twist = Eigen::MatrixXd::Zero(m, m);
  twist.topLeftCorner(n, n) = theta;
  const Backend b = BackendDescriptor::graded(twist, radius, tol);

  CalculusSpec& s = model.spec;
  s.rank = m;
  s.two_form_rank = m * (m - 1) / 2;
  s.backend = b;
  s.wedge = standard_wedge(m);
  s.exterior = Eigen::MatrixXcd::Zero(s.two_form_rank, m);
  s.lie_structure = std::vector<Eigen::MatrixXcd>(static_cast<size_t>(m), Eigen::MatrixXcd::Zero(m, m));
  for (int j = 0; j < m; ++j) {
    s.derivations.push_back(Derivation::grading(j));
    Mode e(m, 0);
    e[j] = 1;
    s.generators.push_back(AlgebraElement::monomial(b, e));
  }
  s.validate();

  std::vector<int> coords;
  for (int j = 0; j < n; ++j) coords.push_back(j);
  model.action = TorusAction::graded(coords);
  model.realization = frame_realization(b, gamma_matrices(m));
  model.metric = canonical_metric(s, model.realization);
  return model;
}

int central_coordinate(const Backend& b) {
  if (b->kind() != BackendKind::Graded) return -1;
  for (int c = b->dims() - 1; c >= 0; --c) {
    if (b->twist().row(c).cwiseAbs().maxCoeff() == 0.0 && b->twist().col(c).cwiseAbs().maxCoeff() == 0.0)
      return c;
  }
  return -1;
}

MetricSpec random_oracle_metric(const Model& model, std::mt19937_64& rng) {
  const CalculusSpec& s = model.spec;
  const int n = s.rank;
  const Backend& b = s.backend;
  std::uniform_real_distribution<double> diag(1.0, 2.0);
  std::uniform_real_distribution<double> off(-0.25, 0.25);

  // The varying factor l only couples frame directions other than the central
  // coordinate c; this keeps the inverse metric and the Christoffel symbols
  // trigonometric polynomials of degree <= 2 in x_c.
  int c = -1;
  AlgebraElement l;
  if (b->kind() == BackendKind::Graded) {
    c = central_coordinate(b);
    require(c >= 0, ErrorKind::InvalidArgument, "random metric needs an untwisted coordinate");
    Mode k(b->dims(), 0);
    k[c] = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
    l = AlgebraElement::monomial(b, k, 2.0 * off(rng));
  } else {
    l = AlgebraElement::scalar(b, 2.0 * off(rng));
  }
  std::vector<int> block;
  for (int i = 0; i < n; ++i)
    if (i != c) block.push_back(i);

  std::vector<double> d(static_cast<size_t>(n));
  for (auto& x : d) x = diag(rng);
  int a = -1, e = -1;
  if (block.size() >= 2) {
    std::uniform_int_distribution<int> pick(1, static_cast<int>(block.size()) - 1);
    const int ia = pick(rng);
    std::uniform_int_distribution<int> below(0, ia - 1);
    a = block[ia];
    e = block[below(rng)];
  }
  // Constant mixing P within the block.
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (int r : block)
    for (int q : block)
      if (r != q) p(r, q) = off(rng);

  // g = P L D L^T P^T with L = 1 + l E_ae.
  const Backend w = work_backend(b);
  const AlgebraElement lw = rehome(l, w);
  std::vector<AlgebraElement> lmat;
  for (int r = 0; r < n; ++r)
    for (int q = 0; q < n; ++q) {
      AlgebraElement acc = AlgebraElement::scalar(w, p(r, q));
      if (q == e && a >= 0) acc += lw * p(r, a);
      lmat.push_back(acc);  // (P L)(r, q)
    }
  std::vector<AlgebraElement> comps;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      AlgebraElement acc = AlgebraElement::zero(w);
      for (int k = 0; k < n; ++k) acc += lmat[i * n + k] * lmat[j * n + k] * cplx(d[k]);
      comps.push_back(rehome(acc, b));
    }
  return MetricSpec::build(s, std::move(comps));
}

}  // namespace nclc
