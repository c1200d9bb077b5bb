#include "nclc/connection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "system.hpp"

namespace nclc {

namespace {

std::vector<AlgebraElement> to_twin(const std::vector<AlgebraElement>& v, const Backend& w) {
  std::vector<AlgebraElement> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(rehome(x, w));
  return out;
}

// Torsion and compatibility equations for Gamma, all in the twin backend.
// Torsion rows (i, alpha) come first, then compatibility rows (i, j, l).
std::vector<AlgebraElement> lc_equations(const CalculusSpec& spec, const std::vector<AlgebraElement>& g,
                                         const std::vector<AlgebraElement>& dg,
                                         const std::vector<AlgebraElement>& gamma, bool affine) {
  const int n = spec.rank;
  const int m = spec.two_form_rank;
  const Backend& w = g.front().backend();
  auto G = [&](int i, int j, int k) -> const AlgebraElement& {
    return gamma[static_cast<size_t>((i * n + j) * n + k)];
  };
  std::vector<AlgebraElement> eqs;
  eqs.reserve(static_cast<size_t>(n * m + n * n * n));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < m; ++a) {
      AlgebraElement e = affine ? AlgebraElement::scalar(w, spec.exterior(a, i)) : AlgebraElement::zero(w);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const cplx c = spec.wedge[a](j, k);
          if (c != cplx(0.0) && !G(i, j, k).is_zero(0.0)) e += G(i, j, k) * c;
        }
      eqs.push_back(std::move(e));
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        AlgebraElement e = affine ? -dg[static_cast<size_t>((i * n + j) * n + l)] : AlgebraElement::zero(w);
        for (int k = 0; k < n; ++k) {
          if (!G(i, k, l).is_zero(0.0)) e += g[k * n + j] * G(i, k, l);
          if (!G(j, k, l).is_zero(0.0)) e += g[k * n + i] * G(j, k, l);
        }
        eqs.push_back(std::move(e));
      }
  return eqs;
}

struct DirectSolve {
  ConnectionCoeffs gamma;
  double ratio = 0.0;
  double residual = 0.0;
  int unknowns = 0;
  int equations = 0;
};

DirectSolve solve_direct(const CalculusSpec& spec, const MetricSpec& metric) {
  const int n = spec.rank;
  const Backend& b = spec.backend;
  const Backend w = work_backend(b);
  const auto g = to_twin(metric.components(), w);
  std::vector<AlgebraElement> dg;
  dg.reserve(static_cast<size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const OneForm d = d0(spec, metric.at(i, j));
      for (int l = 0; l < n; ++l) dg.push_back(rehome(d.c[l], w));
    }

  // Coefficient basis for each Gamma^i_jk. Central matrix components are
  // scalars, so the matrix system is a scalar system tensored with the
  // identity; graded solutions live on the metric's mode sublattice.
  std::vector<Mode> modes;
  if (b->kind() == BackendKind::Graded) {
    modes = mode_box(b->dims(), b->radius(), active_coordinates(metric.components()));
  } else {
    modes.push_back(Mode{});
  }
  const int per = static_cast<int>(modes.size());
  const int n3 = n * n * n;
  const int unknowns = n3 * per;
  const AlgebraElement zero = AlgebraElement::zero(w);
  std::vector<AlgebraElement> gamma(static_cast<size_t>(n3), zero);

  auto basis_element = [&](int s) {
    return b->kind() == BackendKind::Graded ? AlgebraElement::monomial(w, modes[s])
                                            : AlgebraElement::unit(w);
  };
  auto eval = [&](int u) {
    if (u < 0) return lc_equations(spec, g, dg, gamma, true);
    gamma[static_cast<size_t>(u / per)] = basis_element(u % per);
    auto eqs = lc_equations(spec, g, dg, gamma, true);
    gamma[static_cast<size_t>(u / per)] = zero;
    return eqs;
  };
  const detail::LinearSystem sys = detail::assemble(unknowns, eval);
  const detail::LeastSquares ls = detail::least_squares(sys);

  DirectSolve out;
  out.ratio = ls.ratio;
  out.residual = ls.residual;
  out.unknowns = unknowns;
  out.equations = static_cast<int>(sys.a.rows());
  out.gamma = ConnectionCoeffs::zero(n, b);
  for (int q = 0; q < n3; ++q) {
    if (b->kind() == BackendKind::Graded) {
      out.gamma.gamma[q] = detail::combine_modes(b, modes, ls.x, static_cast<Eigen::Index>(q * per));
    } else {
      out.gamma.gamma[q] = AlgebraElement::scalar(b, ls.x(q));
    }
  }
  return out;
}

ConnectionCoeffs solve_phi(const CalculusSpec& spec, const MetricSpec& g) {
  const int n = spec.rank;
  const ConnectionCoeffs base = nabla0(spec);
  const auto pi = pi_g_basis(g, base);
  const auto dg = dg_basis(spec, g);
  const Backend w = work_backend(spec.backend);
  TensorCube m = TensorCube::zero(n, w);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        m.at(a, b, k) = rehome(dg[a * n + b].c[k], w) - rehome(pi[a * n + b].c[k], w);
  const LinearMapE l = phi_g_invert(g, m);
  ConnectionCoeffs out = ConnectionCoeffs::zero(n, spec.backend);
  for (size_t q = 0; q < out.gamma.size(); ++q)
    out.gamma[q] = rehome(to_work(base.gamma[q]) + to_work(l.gamma[q]), spec.backend);
  return out;
}

}  // namespace

ConnectionCoeffs ConnectionCoeffs::zero(int n, const Backend& b) {
  return ConnectionCoeffs{n, std::vector<AlgebraElement>(static_cast<size_t>(n * n * n), AlgebraElement::zero(b))};
}

ConnectionCoeffs ConnectionCoeffs::operator-(const ConnectionCoeffs& o) const {
  require(n == o.n, ErrorKind::InvalidArgument, "connection rank mismatch");
  ConnectionCoeffs r = *this;
  for (size_t q = 0; q < gamma.size(); ++q) {
    const Backend w = work_backend(gamma[q].backend());
    r.gamma[q] = rehome(gamma[q], w) - rehome(o.gamma[q], w);
  }
  return r;
}

double ConnectionCoeffs::norm() const {
  double m = 0.0;
  for (const auto& x : gamma) m = std::max(m, x.norm());
  return m;
}

TensorSquare apply_connection(const CalculusSpec& spec, const ConnectionCoeffs& nabla,
                              const OneForm& omega) {
  const int n = spec.rank;
  require(nabla.n == n && omega.rank() == n, ErrorKind::InvalidArgument,
          "apply_connection: rank mismatch");
  const Backend& b = omega.c.front().backend();
  const Backend w = work_backend(b);
  std::vector<OneForm> da;
  for (int j = 0; j < n; ++j) da.push_back(d0(spec, omega.c[j]));
  TensorSquare t = TensorSquare::zero(n, b);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      AlgebraElement acc = rehome(da[j].c[k], w);
      for (int i = 0; i < n; ++i) acc += rehome(nabla.at(i, j, k), w) * rehome(omega.c[i], w);
      t.at(j, k) = rehome(acc, b);
    }
  return t;
}

std::vector<TwoForm> torsion(const CalculusSpec& spec, const ConnectionCoeffs& nabla) {
  const int n = spec.rank;
  require(nabla.n == n, ErrorKind::InvalidArgument, "torsion: rank mismatch");
  std::vector<TwoForm> out;
  for (int i = 0; i < n; ++i) {
    TensorSquare t{n, {}};
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t.c.push_back(nabla.at(i, j, k));
    TwoForm w = wedge(spec, t);
    for (int a = 0; a < spec.two_form_rank; ++a) {
      w.c[a] = rehome(to_work(w.c[a]) + AlgebraElement::scalar(work_backend(w.c[a].backend()), spec.exterior(a, i)),
                      w.c[a].backend());
    }
    out.push_back(std::move(w));
  }
  return out;
}

double torsion_norm(const CalculusSpec& spec, const ConnectionCoeffs& nabla) {
  double m = 0.0;
  for (const auto& t : torsion(spec, nabla)) m = std::max(m, t.c.empty() ? 0.0 : t.norm());
  return m;
}

ConnectionCoeffs nabla0(const CalculusSpec& spec) {
  const int n = spec.rank;
  ConnectionCoeffs out = ConnectionCoeffs::zero(n, spec.backend);
  if (spec.two_form_rank == 0) return out;
  const Eigen::MatrixXcd w = wedge_matrix(spec);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(w);
  const Eigen::MatrixXcd pinv = cod.pseudoInverse();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXcd rhs = -spec.exterior.col(i);
    const Eigen::VectorXcd x = pinv * rhs;
    const double res = (w * x - rhs).cwiseAbs().maxCoeff();
    if (res > 1e-10) {
      std::ostringstream os;
      os << "scalar torsion system is inconsistent (residual " << res << ")";
      fail(ErrorKind::NoSolution, os.str());
    }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        cplx v = x(j * n + k);
        if (std::abs(v) < 1e-15) v = 0.0;
        out.at(i, j, k) = AlgebraElement::scalar(spec.backend, v);
      }
  }
  return out;
}

std::vector<OneForm> pi_g_basis(const MetricSpec& g, const ConnectionCoeffs& nabla) {
  const int n = g.rank();
  require(nabla.n == n, ErrorKind::InvalidArgument, "pi_g_basis: rank mismatch");
  const Backend& b = nabla.backend();
  const Backend w = work_backend(b);
  std::vector<OneForm> out;
  out.reserve(static_cast<size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      OneForm f = OneForm::zero(n, b);
      for (int l = 0; l < n; ++l) {
        AlgebraElement acc = AlgebraElement::zero(w);
        for (int k = 0; k < n; ++k) {
          acc += rehome(g.at(k, j), w) * rehome(nabla.at(i, k, l), w);
          acc += rehome(g.at(k, i), w) * rehome(nabla.at(j, k, l), w);
        }
        f.c[l] = rehome(acc, b);
      }
      out.push_back(std::move(f));
    }
  return out;
}

std::vector<OneForm> dg_basis(const CalculusSpec& spec, const MetricSpec& g) {
  std::vector<OneForm> out;
  for (int i = 0; i < g.rank(); ++i)
    for (int j = 0; j < g.rank(); ++j) out.push_back(d0(spec, g.at(i, j)));
  return out;
}

CompatibilityResidual compat_residual(const CalculusSpec& spec, const MetricSpec& g,
                                      const ConnectionCoeffs& nabla) {
  const int n = spec.rank;
  const auto pi = pi_g_basis(g, nabla);
  const auto dg = dg_basis(spec, g);
  CompatibilityResidual r;
  r.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const auto& p = pi[i * n + j].c[l];
        const Backend w = work_backend(p.backend());
        AlgebraElement e = rehome(p, w) - rehome(dg[i * n + j].c[l], w);
        r.max_norm = std::max(r.max_norm, e.norm());
        r.r.push_back(std::move(e));
      }
  return r;
}

double symmetric_range_defect(const LinearMapE& l) {
  double m = 0.0;
  const int n = l.n;
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const Backend w = work_backend(l.at(a, j, k).backend());
        m = std::max(m, (rehome(l.at(a, j, k), w) - rehome(l.at(a, k, j), w)).norm());
      }
  return m;
}

TensorCube phi_g_apply(const MetricSpec& g, const LinearMapE& l) {
  const int n = g.rank();
  require(l.n == n, ErrorKind::InvalidArgument, "phi_g_apply: rank mismatch");
  const double defect = symmetric_range_defect(l);
  if (defect > 1e3 * g.backend()->tol() * std::max(1.0, l.norm())) {
    std::ostringstream os;
    os << "map does not take values in the symmetric tensors (defect " << defect << ")";
    fail(ErrorKind::RangeNotSymmetric, os.str());
  }
  const Backend& b = l.backend();
  const Backend w = work_backend(b);
  TensorCube m = TensorCube::zero(n, b);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) {
        AlgebraElement acc = AlgebraElement::zero(w);
        for (int j = 0; j < n; ++j) {
          acc += rehome(g.at(j, c), w) * rehome(l.at(a, j, k), w);
          acc += rehome(g.at(j, a), w) * rehome(l.at(c, j, k), w);
        }
        m.at(a, c, k) = rehome(acc, b);
      }
  return m;
}

LinearMapE phi_g_invert(const MetricSpec& g, const TensorCube& m) {
  const int n = g.rank();
  require(m.n == n, ErrorKind::InvalidArgument, "phi_g_invert: rank mismatch");
  const Backend& b = m.c.front().backend();
  const Backend w = work_backend(b);
  double asym = 0.0, scale = 1.0;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c)
      for (int k = 0; k < n; ++k) {
        scale = std::max(scale, m.at(a, c, k).norm());
        asym = std::max(asym, (rehome(m.at(a, c, k), w) - rehome(m.at(c, a, k), w)).norm());
      }
  if (asym > 1e3 * g.backend()->tol() * scale) {
    std::ostringstream os;
    os << "target is not symmetric under the flip (defect " << asym << ")";
    fail(ErrorKind::RangeNotSymmetric, os.str());
  }
  auto gi = [&](int a, int c) { return rehome(g.inverse_at(a, c), w); };

  // Y = (id (x) V_{g2}^{-1})(1/2 m), indexed (j, k, r).
  TensorCube y = TensorCube::zero(n, w);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int r = 0; r < n; ++r) {
        AlgebraElement acc = AlgebraElement::zero(w);
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c) acc += gi(c, k) * gi(a, r) * rehome(m.at(a, c, j), w);
        y.at(j, k, r) = acc * cplx(0.5);
      }
  // X in Ran(P12) with P23 X = Y.
  const TensorCube x = apply_index_matrix(p23_on_p12_inverse(n), y);
  LinearMapE l = ConnectionCoeffs::zero(n, b);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        AlgebraElement acc = AlgebraElement::zero(w);
        for (int r = 0; r < n; ++r) acc += rehome(g.at(i, r), w) * x.at(j, k, r);
        l.at(i, j, k) = rehome(acc.pruned(1e-3 * b->tol()), b);
      }
  return l;
}

Route parse_route(const std::string& name) {
  if (name == "direct") return Route::Direct;
  if (name == "phi") return Route::Phi;
  if (name == "both") return Route::Both;
  fail(ErrorKind::InvalidArgument, "unknown route '" + name + "' (expected direct, phi or both)");
}

std::string route_name(Route r) {
  switch (r) {
    case Route::Direct: return "direct";
    case Route::Phi: return "phi";
    case Route::Both: return "both";
  }
  return "direct";
}

LeviCivitaResult levi_civita(const CalculusSpec& spec, const MetricSpec& g, Route route,
                             const SolveOptions& opt) {
  require(g.rank() == spec.rank, ErrorKind::InvalidArgument, "metric rank differs from calculus rank");
  require(g.backend()->same_algebra(*spec.backend), ErrorKind::BackendMismatch,
          "metric lives in a different algebra");
  require(g.condition_ratio() > kInvertibilityRatio, ErrorKind::SingularMetric, "metric is singular");

  const DirectSolve direct = solve_direct(spec, g);
  LeviCivitaResult out;
  out.route = route;
  out.min_singular_value = direct.ratio;
  out.unknowns = direct.unknowns;
  out.equations = direct.equations;
  if (!(direct.ratio > opt.kernel_tol)) {
    std::ostringstream os;
    os << "joint torsion/compatibility operator has a kernel (sigma_min/sigma_max = "
       << direct.ratio << ")";
    fail(ErrorKind::NonUnique, os.str());
  }
  if (route != Route::Phi && direct.residual > opt.residual_tol) {
    std::ostringstream os;
    os << "no torsionless compatible connection in the truncation (least-squares residual "
       << direct.residual << ")";
    fail(ErrorKind::Inconsistent, os.str());
  }

  if (route == Route::Direct) {
    out.gamma = direct.gamma;
  } else {
    ConnectionCoeffs phi = solve_phi(spec, g);
    if (route == Route::Both) {
      out.route_difference = (direct.gamma - phi).norm();
      if (out.route_difference > opt.route_tol) {
        std::ostringstream os;
        os << "direct and phi routes disagree (max difference " << out.route_difference << ")";
        fail(ErrorKind::Inconsistent, os.str());
      }
      out.gamma = direct.gamma;
    } else {
      out.gamma = std::move(phi);
    }
  }

  out.torsion_residual = torsion_norm(spec, out.gamma);
  out.compat_residual = compat_residual(spec, g, out.gamma).max_norm;
  if (out.torsion_residual > opt.residual_tol || out.compat_residual > opt.residual_tol) {
    std::ostringstream os;
    os << "solution residuals exceed tolerance (torsion " << out.torsion_residual
       << ", compatibility " << out.compat_residual << ")";
    fail(ErrorKind::Inconsistent, os.str());
  }
  return out;
}

}  // namespace nclc
