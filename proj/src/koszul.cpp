#include <cmath>
#include <numbers>
#include <sstream>

#include "nclc/connection.hpp"

namespace nclc {

namespace {

using std::numbers::pi;

cplx evaluate(const AlgebraElement& a, const std::vector<double>& x) {
  cplx s = 0.0;
  for (const auto& [k, c] : a.modes()) {
    double phase = 0.0;
    for (size_t j = 0; j < k.size(); ++j) phase += k[j] * x[j];
    s += c * std::polar(1.0, 2.0 * pi * phase);
  }
  return s;
}

cplx evaluate_derivative(const AlgebraElement& a, int dir, const std::vector<double>& x) {
  cplx s = 0.0;
  for (const auto& [k, c] : a.modes()) {
    if (k[dir] == 0) continue;
    double phase = 0.0;
    for (size_t j = 0; j < k.size(); ++j) phase += k[j] * x[j];
    s += c * cplx(0.0, 2.0 * pi * k[dir]) * std::polar(1.0, 2.0 * pi * phase);
  }
  return s;
}

}  // namespace

ConnectionCoeffs koszul_oracle(const CalculusSpec& spec, const MetricSpec& g) {
  const Backend& b = spec.backend;
  if (b->kind() != BackendKind::Graded || !b->is_commutative()) {
    fail(ErrorKind::NonCommutativeBackend,
         "the classical Christoffel formula needs a commutative graded backend");
  }
  const int n = spec.rank;
  require(n == b->dims(), ErrorKind::InvalidArgument, "oracle needs one frame element per coordinate");
  for (int i = 0; i < n; ++i) {
    const auto& d = spec.derivations[i];
    require(d.kind() == Derivation::Kind::Grading && d.grading_index() == i,
            ErrorKind::InvalidArgument, "oracle needs the coordinate derivations");
  }
  require(spec.two_form_rank == 0 || spec.exterior.cwiseAbs().maxCoeff() == 0.0,
          ErrorKind::InvalidArgument, "oracle needs a closed coordinate frame");

  const int radius = b->radius();
  const std::vector<int> active = active_coordinates(g.components());
  const int points = 4 * radius + 1;
  const std::vector<Mode> grid = mode_box(n, 2 * radius, active);  // shifted grid indices
  const std::vector<Mode> out_modes = mode_box(n, 2 * radius, active);

  // Samples of the classical symbols, gamma_cl[(i*n + j)*n + k][point].
  std::vector<std::vector<cplx>> samples(static_cast<size_t>(n * n * n));
  std::vector<std::vector<double>> xs;
  for (const Mode& p : grid) {
    std::vector<double> x(n, 0.0);
    for (int j = 0; j < n; ++j) x[j] = static_cast<double>(p[j] + 2 * radius) / points;
    xs.push_back(x);
    Eigen::MatrixXcd G(n, n);
    std::vector<Eigen::MatrixXcd> dG(static_cast<size_t>(n), Eigen::MatrixXcd(n, n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        G(i, j) = evaluate(g.at(i, j), x);
        for (int l = 0; l < n; ++l) dG[l](i, j) = evaluate_derivative(g.at(i, j), l, x);
      }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(G);
    if (!lu.isInvertible()) fail(ErrorKind::SingularMetric, "metric is singular at a grid point");
    const Eigen::MatrixXcd gamma = lu.inverse();  // metric on vector fields
    std::vector<Eigen::MatrixXcd> dgamma;
    for (int l = 0; l < n; ++l) dgamma.push_back(-gamma * dG[l] * gamma);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          cplx s = 0.0;
          for (int l = 0; l < n; ++l)
            s += G(k, l) * (dgamma[i](j, l) + dgamma[j](i, l) - dgamma[l](i, j));
          samples[static_cast<size_t>((k * n + i) * n + j)].push_back(0.5 * s);
        }
  }

  const double norm = 1.0 / static_cast<double>(grid.size());
  ConnectionCoeffs out = ConnectionCoeffs::zero(n, b);
  for (size_t q = 0; q < samples.size(); ++q) {
    std::map<Mode, cplx> modes;
    for (const Mode& s : out_modes) {
      cplx c = 0.0;
      for (size_t p = 0; p < xs.size(); ++p) {
        double phase = 0.0;
        for (int j = 0; j < n; ++j) phase += s[j] * xs[p][j];
        c += samples[q][p] * std::polar(1.0, -2.0 * pi * phase);
      }
      c *= norm;
      int sup = 0;
      for (int v : s) sup = std::max(sup, std::abs(v));
      if (sup > radius) {
        if (std::abs(c) > 1e-9) {
          std::ostringstream os;
          os << "classical Christoffel symbols exceed truncation radius " << radius
             << " (mode coefficient " << std::abs(c) << ")";
          fail(ErrorKind::TruncationOverflow, os.str());
        }
        continue;
      }
      if (std::abs(c) > 1e-15) modes[s] = -c;
    }
    out.gamma[q] = AlgebraElement::from_modes(b, std::move(modes));
  }
  return out;
}

}  // namespace nclc
