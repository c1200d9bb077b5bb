#include "nclc/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nclc {

namespace {

using std::numbers::pi;

constexpr double kSkewTol = 1e-14;

Eigen::MatrixXd embed_theta(const Eigen::MatrixXd& theta, const TorusAction& action, int dims) {
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(dims, dims);
  for (int a = 0; a < action.circles; ++a)
    for (int c = 0; c < action.circles; ++c)
      full(action.coordinates[a], action.coordinates[c]) = theta(a, c);
  return full;
}

void check_action(const Eigen::MatrixXd& theta, const TorusAction& action) {
  validate_theta(theta);
  require(theta.rows() == action.circles, ErrorKind::InvalidArgument,
          "theta size differs from the number of acting circles");
}

Eigen::VectorXd off_grid_point(int circles, int salt) {
  Eigen::VectorXd t(circles);
  for (int a = 0; a < circles; ++a) {
    const double v = std::sqrt(2.0) * (a + 1) + 0.318309886 * (salt + 1);
    t(a) = v - std::floor(v);
  }
  return t;
}

Eigen::MatrixXcd act(const Eigen::MatrixXcd& x, const Eigen::MatrixXi& w, const Eigen::VectorXd& t) {
  Eigen::VectorXcd u(w.rows());
  for (int p = 0; p < w.rows(); ++p) {
    double phase = 0.0;
    for (int a = 0; a < w.cols(); ++a) phase += w(p, a) * t(a);
    u(p) = std::polar(1.0, 2.0 * pi * phase);
  }
  return u.asDiagonal() * x * u.conjugate().asDiagonal();
}

}  // namespace

void validate_theta(const Eigen::MatrixXd& theta) {
  if (theta.rows() != theta.cols()) {
    std::ostringstream os;
    os << "theta must be square, got " << theta.rows() << "x" << theta.cols();
    fail(ErrorKind::NonSkew, os.str());
  }
  if (!theta.allFinite()) fail(ErrorKind::NonSkew, "theta has non-finite entries");
  const double v = theta.size() ? (theta + theta.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (v > kSkewTol) {
    std::ostringstream os;
    os << "theta is not skew-symmetric: max |theta + theta^T| = " << v;
    fail(ErrorKind::NonSkew, os.str());
  }
}

cplx bicharacter(const Eigen::MatrixXd& theta, const Mode& k, const Mode& l) {
  validate_theta(theta);
  require(static_cast<int>(k.size()) == theta.rows() && static_cast<int>(l.size()) == theta.rows(),
          ErrorKind::InvalidArgument, "bicharacter: grade length differs from theta size");
  double s = 0.0;
  for (int a = 0; a < theta.rows(); ++a)
    for (int c = 0; c < theta.cols(); ++c) s += k[a] * theta(a, c) * l[c];
  return std::polar(1.0, pi * s);
}

TorusAction TorusAction::graded(std::vector<int> coordinates) {
  TorusAction t;
  t.circles = static_cast<int>(coordinates.size());
  t.coordinates = std::move(coordinates);
  return t;
}

TorusAction TorusAction::matrix(Eigen::MatrixXi weights) {
  TorusAction t;
  t.circles = static_cast<int>(weights.cols());
  t.weights = std::move(weights);
  return t;
}

Mode TorusAction::grade_of(const Mode& k) const {
  Mode g(static_cast<size_t>(circles));
  for (int a = 0; a < circles; ++a) g[a] = k[coordinates[a]];
  return g;
}

AlgebraElement GradedDecomposition::reconstruct() const {
  require(!components.empty(), ErrorKind::InvalidArgument, "empty decomposition");
  const Backend w = work_backend(components.begin()->second.backend());
  AlgebraElement s = AlgebraElement::zero(w);
  for (const auto& [m, c] : components) s += rehome(c, w);
  return rehome(s, components.begin()->second.backend());
}

GradedDecomposition spectral_decompose(const AlgebraElement& x, const TorusAction& action, int grid) {
  GradedDecomposition out;
  const Backend& b = x.backend();
  if (b->kind() == BackendKind::Graded) {
    for (int c : action.coordinates)
      require(c >= 0 && c < b->dims(), ErrorKind::InvalidArgument, "acting coordinate out of range");
    std::map<Mode, std::map<Mode, cplx>> parts;
    for (const auto& [k, c] : x.modes()) parts[action.grade_of(k)][k] = c;
    for (auto& [m, modes] : parts) out.components.emplace(m, AlgebraElement::from_modes(b, std::move(modes)));
    if (out.components.empty()) out.components.emplace(Mode(action.circles, 0), AlgebraElement::zero(b));
    return out;
  }

  const Eigen::MatrixXi& w = action.weights;
  require(w.rows() == b->size(), ErrorKind::InvalidArgument, "one weight row per basis vector is required");
  int radius = 0;
  for (int p = 0; p < w.rows(); ++p)
    for (int q = 0; q < w.rows(); ++q)
      for (int a = 0; a < w.cols(); ++a) radius = std::max(radius, std::abs(w(p, a) - w(q, a)));
  if (grid <= 0) grid = 2 * radius + 1;
  const int r = (grid - 1) / 2;
  std::vector<int> all(static_cast<size_t>(action.circles));
  for (int a = 0; a < action.circles; ++a) all[a] = a;
  const std::vector<Mode> grades = mode_box(action.circles, r, all);
  const std::vector<Mode> points = mode_box(action.circles, r, all);
  const double norm = std::pow(static_cast<double>(grid), -action.circles);
  for (const Mode& m : grades) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(b->size(), b->size());
    for (const Mode& p : points) {
      Eigen::VectorXd t(action.circles);
      double phase = 0.0;
      for (int a = 0; a < action.circles; ++a) {
        t(a) = static_cast<double>(p[a] + r) / grid;
        phase += m[a] * t(a);
      }
      acc += std::polar(1.0, -2.0 * pi * phase) * act(x.matrix(), w, t);
    }
    acc *= norm;
    if (acc.cwiseAbs().maxCoeff() > b->tol()) out.components.emplace(m, AlgebraElement::from_matrix(b, acc));
  }
  // A coarse grid aliases several grades into one component; such a component
  // fails to transform by its character away from the grid points.
  for (const auto& [m, c] : out.components) {
    for (int salt = 0; salt < 2; ++salt) {
      const Eigen::VectorXd t = off_grid_point(action.circles, salt);
      double phase = 0.0;
      for (int a = 0; a < action.circles; ++a) phase += m[a] * t(a);
      const double d = (act(c.matrix(), w, t) - std::polar(1.0, 2.0 * pi * phase) * c.matrix())
                           .cwiseAbs()
                           .maxCoeff();
      if (d > 1e3 * b->tol() * std::max(1.0, x.norm())) {
        std::ostringstream os;
        os << "grid of " << grid << " points per circle cannot separate the grades (defect " << d << ")";
        fail(ErrorKind::GridTooCoarse, os.str());
      }
    }
  }
  if (out.components.empty()) out.components.emplace(Mode(action.circles, 0), AlgebraElement::zero(b));
  return out;
}

bool is_grade_zero(const AlgebraElement& a, const TorusAction& action, double tol) {
  const auto d = spectral_decompose(a, action);
  const Mode zero(static_cast<size_t>(action.circles), 0);
  for (const auto& [m, c] : d.components) {
    if (m != zero && c.norm() > tol) return false;
  }
  return true;
}

Backend deformed_backend(const Backend& b, const Eigen::MatrixXd& theta, const TorusAction& action) {
  check_action(theta, action);
  require(b->kind() == BackendKind::Graded, ErrorKind::InvalidArgument,
          "deformed backends are graded backends");
  return BackendDescriptor::graded(b->twist() + embed_theta(theta, action, b->dims()), b->radius(), b->tol());
}

AlgebraElement retag(const AlgebraElement& a, const Backend& target) {
  const Backend& b = a.backend();
  require(b->kind() == target->kind(), ErrorKind::BackendMismatch, "retag across backend kinds");
  if (b->kind() == BackendKind::Matrix) {
    require(b->size() == target->size(), ErrorKind::BackendMismatch, "retag across matrix sizes");
    return AlgebraElement::from_matrix(target, a.matrix());
  }
  require(b->dims() == target->dims(), ErrorKind::BackendMismatch, "retag across lattice dimensions");
  return AlgebraElement::from_modes(target, a.modes());
}

AlgebraElement deform_product(const AlgebraElement& a, const AlgebraElement& b,
                              const Eigen::MatrixXd& theta, const TorusAction& action) {
  check_action(theta, action);
  require(*a.backend() == *b.backend(), ErrorKind::BackendMismatch, "deform_product: different backends");
  const auto da = spectral_decompose(a, action);
  const auto db = spectral_decompose(b, action);
  const Backend w = work_backend(a.backend());
  AlgebraElement s = AlgebraElement::zero(w);
  for (const auto& [k, ak] : da.components)
    for (const auto& [l, bl] : db.components) s += (rehome(ak, w) * rehome(bl, w)) * bicharacter(theta, k, l);
  if (a.kind() == BackendKind::Matrix) return rehome(s, a.backend());
  const Backend target = deformed_backend(a.backend(), theta, action);
  return rehome(retag(s, work_backend(target)), target);
}

OneForm deform_module_action(const OneForm& e, const AlgebraElement& a, const Eigen::MatrixXd& theta,
                             const TorusAction& action) {
  OneForm r{{}};
  for (const auto& c : e.c) r.c.push_back(deform_product(c, a, theta, action));
  return r;
}

OneForm deform_left_action(const AlgebraElement& a, const OneForm& e, const Eigen::MatrixXd& theta,
                           const TorusAction& action) {
  OneForm r{{}};
  for (const auto& c : e.c) r.c.push_back(deform_product(a, c, theta, action));
  return r;
}

ModuleMap ModuleMap::from_scalar(const Backend& b, const Eigen::MatrixXcd& m) {
  ModuleMap l;
  l.rows = static_cast<int>(m.rows());
  l.cols = static_cast<int>(m.cols());
  for (int r = 0; r < l.rows; ++r)
    for (int c = 0; c < l.cols; ++c) l.entries.push_back(AlgebraElement::scalar(b, m(r, c)));
  return l;
}

std::vector<AlgebraElement> ModuleMap::apply(const std::vector<AlgebraElement>& x) const {
  require(static_cast<int>(x.size()) == cols, ErrorKind::InvalidArgument, "module map size mismatch");
  const Backend& b = x.front().backend();
  const Backend w = work_backend(b);
  std::vector<AlgebraElement> y;
  for (int r = 0; r < rows; ++r) {
    AlgebraElement acc = AlgebraElement::zero(w);
    for (int c = 0; c < cols; ++c) acc += rehome(at(r, c), w) * rehome(x[c], w);
    y.push_back(rehome(acc, b));
  }
  return y;
}

ModuleMap deform_map(const ModuleMap& l, const Eigen::MatrixXd& theta, const TorusAction& action) {
  check_action(theta, action);
  ModuleMap out = l;
  if (l.entries.empty()) return out;
  const Backend& b = l.entries.front().backend();
  for (size_t q = 0; q < l.entries.size(); ++q) {
    if (!is_grade_zero(l.entries[q], action, b->tol())) {
      std::ostringstream os;
      os << "module map entry (" << q / static_cast<size_t>(l.cols) << ", " << q % static_cast<size_t>(l.cols)
         << ") does not commute with the torus action";
      fail(ErrorKind::NotEquivariant, os.str());
    }
  }
  if (b->kind() == BackendKind::Matrix) return out;
  const Backend target = deformed_backend(b, theta, action);
  for (auto& e : out.entries) e = retag(e, target);
  return out;
}

CalculusSpec deform_calculus(const CalculusSpec& spec, const Eigen::MatrixXd& theta,
                             const TorusAction& action) {
  CalculusSpec out = spec;
  out.backend = deformed_backend(spec.backend, theta, action);
  for (auto& g : out.generators) g = retag(g, out.backend);
  for (auto& d : out.derivations) {
    if (d.kind() == Derivation::Kind::Inner) {
      require(is_grade_zero(d.inner_element(), action, spec.tol()), ErrorKind::NotEquivariant,
              "inner derivation does not commute with the torus action");
      d = Derivation::inner(retag(d.inner_element(), out.backend));
    }
  }
  out.validate();
  return out;
}

MetricSpec deform_metric(const MetricSpec& g, const CalculusSpec& deformed, const TorusAction& action) {
  std::vector<AlgebraElement> c;
  for (const auto& x : g.components()) {
    if (!is_grade_zero(x, action, deformed.tol())) {
      fail(ErrorKind::NotEquivariant, "metric components must be invariant under the torus action");
    }
    c.push_back(retag(x, deformed.backend));
  }
  return MetricSpec::build(deformed, std::move(c));
}

std::pair<ConnectionCoeffs, MetricSpec> deform_connection(const ConnectionCoeffs& nabla, const MetricSpec& g,
                                                          const CalculusSpec& deformed,
                                                          const TorusAction& action) {
  ConnectionCoeffs out = ConnectionCoeffs::zero(nabla.n, deformed.backend);
  for (size_t q = 0; q < nabla.gamma.size(); ++q) {
    if (!is_grade_zero(nabla.gamma[q], action, deformed.tol())) {
      fail(ErrorKind::NotEquivariant, "connection coefficients must be invariant under the torus action");
    }
    out.gamma[q] = retag(nabla.gamma[q], deformed.backend);
  }
  return {std::move(out), deform_metric(g, deformed, action)};
}

}  // namespace nclc
