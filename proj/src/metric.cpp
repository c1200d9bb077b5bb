#include "nclc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "system.hpp"

namespace nclc {

namespace {

constexpr double kInverseResidual = 1e-9;

double scale_of(const std::vector<AlgebraElement>& v) {
  double s = 1.0;
  for (const auto& x : v) s = std::max(s, x.norm());
  return s;
}

std::vector<AlgebraElement> invert_matrix_backend(const std::vector<AlgebraElement>& g, int n,
                                                  double* ratio) {
  const Backend& b = g.front().backend();
  const int big = b->size();
  Eigen::MatrixXcd m(n * big, n * big);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.block(i * big, j * big, big, big) = g[i * n + j].matrix();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double r = s(0) > 0.0 ? s(s.size() - 1) / s(0) : 0.0;
  if (ratio) *ratio = r;
  if (!(r > kInvertibilityRatio)) {
    std::ostringstream os;
    os << "metric component matrix is singular (sigma_min/sigma_max = " << r << ")";
    fail(ErrorKind::SingularMetric, os.str());
  }
  const Eigen::MatrixXcd inv =
      svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  std::vector<AlgebraElement> out;
  out.reserve(g.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.push_back(AlgebraElement::from_matrix(b, inv.block(i * big, j * big, big, big)));
  return out;
}

std::vector<AlgebraElement> invert_graded_backend(const std::vector<AlgebraElement>& g, int n,
                                                  double* ratio) {
  const Backend& b = g.front().backend();
  const Backend w = work_backend(b);
  std::vector<AlgebraElement> gw;
  for (const auto& x : g) gw.push_back(rehome(x, w));
  const std::vector<Mode> modes = mode_box(b->dims(), b->radius(), active_coordinates(g));
  const int per = static_cast<int>(modes.size());
  const AlgebraElement zero = AlgebraElement::zero(w);

  std::vector<AlgebraElement> out(static_cast<size_t>(n * n));
  double worst_ratio = 1.0;
  double worst_residual = 0.0;
  for (int j = 0; j < n; ++j) {
    auto eval = [&](int u) {
      std::vector<AlgebraElement> eqs(static_cast<size_t>(n), zero);
      for (int i = 0; i < n; ++i) {
        if (i == j) eqs[i] = AlgebraElement::scalar(w, -1.0);
        if (u >= 0) eqs[i] += gw[i * n + u / per] * AlgebraElement::monomial(w, modes[u % per]);
      }
      return eqs;
    };
    const detail::LinearSystem sys = detail::assemble(n * per, eval);
    const detail::LeastSquares ls = detail::least_squares(sys);
    worst_ratio = std::min(worst_ratio, ls.ratio);
    worst_residual = std::max(worst_residual, ls.residual);
    if (!(ls.ratio > kInvertibilityRatio)) break;
    for (int k = 0; k < n; ++k)
      out[k * n + j] = detail::combine_modes(b, modes, ls.x, static_cast<Eigen::Index>(k * per))
                           .pruned(b->tol() * 1e-3);
  }
  if (ratio) *ratio = worst_ratio;
  if (!(worst_ratio > kInvertibilityRatio)) {
    std::ostringstream os;
    os << "metric component matrix is singular (sigma_min/sigma_max = " << worst_ratio << ")";
    fail(ErrorKind::SingularMetric, os.str());
  }
  if (worst_residual > kInverseResidual * scale_of(g)) {
    std::ostringstream os;
    os << "inverse metric is not representable within truncation radius " << b->radius()
       << " (residual " << worst_residual << ")";
    fail(ErrorKind::TruncationOverflow, os.str());
  }
  return out;
}

}  // namespace

std::vector<AlgebraElement> invert_components(const std::vector<AlgebraElement>& g, int n,
                                              double* ratio) {
  require(n >= 1 && static_cast<int>(g.size()) == n * n, ErrorKind::InvalidArgument,
          "metric needs n*n components");
  if (g.front().kind() == BackendKind::Matrix) return invert_matrix_backend(g, n, ratio);
  return invert_graded_backend(g, n, ratio);
}

MetricSpec MetricSpec::build(const CalculusSpec& spec, std::vector<AlgebraElement> components) {
  const int n = spec.rank;
  if (static_cast<int>(components.size()) != n * n) {
    std::ostringstream os;
    os << "metric has " << components.size() << " components, expected " << n * n;
    fail(ErrorKind::InvalidArgument, os.str());
  }
  for (auto& c : components) {
    require(c.valid(), ErrorKind::InvalidArgument, "uninitialized metric component");
    c = rehome(c, spec.backend);
  }
  const double tol = spec.tol();
  const double scale = scale_of(components);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!is_central(components[i * n + j], spec.generators, 100.0 * tol * scale)) {
        std::ostringstream os;
        os << "metric component g_" << i + 1 << j + 1 << " is not central";
        fail(ErrorKind::NonCentralResult, os.str());
      }
      const double asym = (components[i * n + j] - components[j * n + i]).norm();
      if (asym > 100.0 * tol * scale) {
        std::ostringstream os;
        os << "metric is not symmetric (|g_" << i + 1 << j + 1 << " - g_" << j + 1 << i + 1
           << "| = " << asym << ")";
        fail(ErrorKind::InvalidArgument, os.str());
      }
    }
  MetricSpec m;
  m.n_ = n;
  m.g_ = std::move(components);
  m.inv_ = invert_components(m.g_, n, &m.cond_ratio_);
  return m;
}

MetricSpec MetricSpec::identity(const CalculusSpec& spec) {
  std::vector<AlgebraElement> c;
  for (int i = 0; i < spec.rank; ++i)
    for (int j = 0; j < spec.rank; ++j)
      c.push_back(i == j ? AlgebraElement::unit(spec.backend) : AlgebraElement::zero(spec.backend));
  return build(spec, std::move(c));
}

bool MetricSpec::is_constant(double tol) const {
  return std::all_of(g_.begin(), g_.end(), [tol](const AlgebraElement& x) { return x.is_scalar(tol); });
}

Eigen::VectorXd MetricSpec::scalar_part_eigenvalues() const {
  Eigen::MatrixXd s(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s(i, j) = at(i, j).trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  return es.eigenvalues();
}

AlgebraElement metric_eval(const MetricSpec& g, const TensorSquare& t) {
  const int n = g.rank();
  require(t.n == n, ErrorKind::InvalidArgument, "metric_eval: rank mismatch");
  const Backend& b = t.c.front().backend();
  require(b->same_algebra(*g.backend()), ErrorKind::BackendMismatch,
          "metric_eval: tensor outside the metric backend");
  const Backend w = work_backend(b);
  AlgebraElement r = AlgebraElement::zero(w);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r += rehome(g.at(i, j), w) * rehome(t.at(i, j), w);
  return rehome(r, b);
}

Functional v_g(const MetricSpec& g, const OneForm& omega) {
  const int n = g.rank();
  require(omega.rank() == n, ErrorKind::InvalidArgument, "v_g: rank mismatch");
  const Backend& b = omega.c.front().backend();
  const Backend w = work_backend(b);
  Functional f{std::vector<AlgebraElement>(static_cast<size_t>(n), AlgebraElement::zero(b))};
  for (int j = 0; j < n; ++j) {
    AlgebraElement acc = AlgebraElement::zero(w);
    for (int i = 0; i < n; ++i) acc += rehome(g.at(i, j), w) * rehome(omega.c[i], w);
    f.c[j] = rehome(acc, b);
  }
  return f;
}

OneForm v_g_inverse(const MetricSpec& g, const Functional& phi) {
  const int n = g.rank();
  require(static_cast<int>(phi.c.size()) == n, ErrorKind::InvalidArgument,
          "v_g_inverse: rank mismatch");
  const Backend& b = phi.c.front().backend();
  const Backend w = work_backend(b);
  OneForm out = OneForm::zero(n, b);
  for (int i = 0; i < n; ++i) {
    AlgebraElement acc = AlgebraElement::zero(w);
    for (int j = 0; j < n; ++j) acc += rehome(g.inverse_at(i, j), w) * rehome(phi.c[j], w);
    out.c[i] = rehome(acc, b);
  }
  return out;
}

AlgebraElement g2_eval(const MetricSpec& g, const TensorSquare& s, const TensorSquare& t) {
  const int n = g.rank();
  require(s.n == n && t.n == n, ErrorKind::InvalidArgument, "g2_eval: rank mismatch");
  const Backend& b = s.c.front().backend();
  const Backend w = work_backend(b);
  AlgebraElement r = AlgebraElement::zero(w);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      if (s.at(k, l).is_zero(0.0)) continue;
      const AlgebraElement skl = rehome(s.at(k, l), w);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const AlgebraElement coeff = rehome(g.at(l, i), w) * rehome(g.at(k, j), w);
          r += coeff * skl * rehome(t.at(i, j), w);
        }
    }
  return rehome(r, b);
}

std::vector<AlgebraElement> v_g2_components(const MetricSpec& g) {
  const int n = g.rank();
  const Backend w = work_backend(g.backend());
  std::vector<AlgebraElement> m;
  m.reserve(static_cast<size_t>(n * n * n * n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.push_back(rehome(g.at(l, i), w) * rehome(g.at(k, j), w));
  return m;
}

VG2Report v_g2_check(const MetricSpec& g) {
  const int n = g.rank();
  const int n2 = n * n;
  const Backend w = work_backend(g.backend());
  const auto m = v_g2_components(g);
  auto gi = [&](int a, int c) { return rehome(g.inverse_at(a, c), w); };
  auto mat = [&](int row, int col) -> const AlgebraElement& { return m[static_cast<size_t>(row * n2 + col)]; };

  VG2Report rep;
  // Candidate inverse: Minv[(i,j),(p,q)] = g^{jp} g^{iq}.
  std::vector<AlgebraElement> minv;
  minv.reserve(static_cast<size_t>(n2 * n2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) minv.push_back(gi(j, p) * gi(i, q));
  for (int r = 0; r < n2; ++r)
    for (int c = 0; c < n2; ++c) {
      AlgebraElement acc = AlgebraElement::scalar(w, r == c ? -1.0 : 0.0);
      for (int t = 0; t < n2; ++t) acc += mat(r, t) * minv[static_cast<size_t>(t * n2 + c)];
      rep.inverse_residual = std::max(rep.inverse_residual, acc.norm());
    }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double d = (mat(l * n + k, i * n + j) - mat(k * n + l, j * n + i)).norm();
          rep.sigma_residual = std::max(rep.sigma_residual, d);
        }

  Eigen::MatrixXcd m0(n2, n2);
  for (int r = 0; r < n2; ++r)
    for (int c = 0; c < n2; ++c) m0(r, c) = mat(r, c).trace();
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n2, n2) * 0.5;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p(i * n + j, j * n + i) += 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  std::vector<int> keep;
  for (int i = 0; i < n2; ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Eigen::MatrixXcd basis(n2, static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c)
    basis.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]).cast<cplx>();
  rep.symmetric_dim = static_cast<int>(keep.size());
  const Eigen::MatrixXcd compressed = basis.adjoint() * m0 * basis;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(compressed);
  const auto& s = svd.singularValues();
  for (int i = 0; i < s.size(); ++i) rep.symmetric_rank += s(i) > kInvertibilityRatio * s(0) ? 1 : 0;
  return rep;
}

std::vector<AlgebraElement> canonical_components(const CalculusSpec& spec,
                                                 const OperatorRealization& r) {
  const int n = spec.rank;
  require(static_cast<int>(r.terms.size()) == n, ErrorKind::InvalidArgument,
          "realization must provide every basis one-form");
  require(r.spinor_dim >= 1, ErrorKind::InvalidArgument, "spinor dimension must be >= 1");
  const Backend w = work_backend(spec.backend);
  // The conditional expectation id (x) tr/w onto A solves the trace equations.
  std::vector<AlgebraElement> g;
  g.reserve(static_cast<size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      AlgebraElement acc = AlgebraElement::zero(w);
      for (const auto& ti : r.terms[i])
        for (const auto& tj : r.terms[j]) {
          const cplx t = (ti.m * tj.m).trace() / static_cast<double>(r.spinor_dim);
          if (t != cplx(0.0)) acc += rehome(ti.a, w) * rehome(tj.a, w) * t;
        }
      g.push_back(rehome(acc, spec.backend));
    }
  return g;
}

MetricSpec canonical_metric(const CalculusSpec& spec, const OperatorRealization& r) {
  auto g = canonical_components(spec, r);
  const double tol = 100.0 * spec.tol() * scale_of(g);
  for (size_t a = 0; a < g.size(); ++a) {
    if (!is_central(g[a], spec.generators, tol)) {
      std::ostringstream os;
      os << "canonical metric component " << a << " is not central";
      fail(ErrorKind::NonCentralResult, os.str());
    }
  }
  return MetricSpec::build(spec, std::move(g));
}

std::vector<Eigen::MatrixXcd> pauli_matrices() {
  Eigen::MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, cplx(0, -1), cplx(0, 1), 0;
  s3 << 1, 0, 0, -1;
  return {s1, s2, s3};
}

std::vector<Eigen::MatrixXcd> gamma_matrices(int count) {
  require(count >= 1, ErrorKind::InvalidArgument, "gamma_matrices needs count >= 1");
  const int q = (count + 1) / 2;
  const auto pauli = pauli_matrices();
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
  };
  std::vector<Eigen::MatrixXcd> out;
  for (int g = 0; g < count; ++g) {
    const int site = g / 2;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (int s = 0; s < q; ++s) {
      const Eigen::MatrixXcd& f = s < site ? pauli[2] : (s == site ? pauli[g % 2] : id2);
      m = kron(m, f);
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace nclc
