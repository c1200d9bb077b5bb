#pragma once

// Assembly of complex linear systems whose equations are algebra elements.

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nclc/algebra.hpp"

namespace nclc::detail {

// Calls f(key, value) for every stored coordinate: modes for graded elements,
// (row, col) for matrix entries.
template <class F>
void for_each_coordinate(const AlgebraElement& a, F&& f) {
  if (a.kind() == BackendKind::Graded) {
    for (const auto& [k, c] : a.modes()) f(k, c);
    return;
  }
  const auto& m = a.matrix();
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r) {
      if (m(r, c) != cplx(0.0)) f(Mode{r, c}, m(r, c));
    }
}

struct LinearSystem {
  Eigen::MatrixXcd a;
  Eigen::VectorXcd b;
};

// Builds A x = b for the affine map x -> F(x) = 0 where eval(-1) = F(0) and
// eval(u) = F(unit vector u). Each returned vector lists equation residuals.
template <class Eval>
LinearSystem assemble(int unknowns, Eval&& eval) {
  const std::vector<AlgebraElement> base = eval(-1);
  std::vector<std::vector<AlgebraElement>> cols;
  cols.reserve(static_cast<size_t>(unknowns));
  for (int u = 0; u < unknowns; ++u) cols.push_back(eval(u));

  std::map<std::pair<int, Mode>, int> rows;
  auto collect = [&](const std::vector<AlgebraElement>& eqs) {
    for (size_t e = 0; e < eqs.size(); ++e) {
      for_each_coordinate(eqs[e], [&](const Mode& k, cplx) {
        rows.emplace(std::make_pair(static_cast<int>(e), k), 0);
      });
    }
  };
  collect(base);
  for (const auto& c : cols) collect(c);
  int next = 0;
  for (auto& [key, idx] : rows) idx = next++;

  LinearSystem sys;
  sys.a = Eigen::MatrixXcd::Zero(next, unknowns);
  sys.b = Eigen::VectorXcd::Zero(next);
  for (size_t e = 0; e < base.size(); ++e) {
    for_each_coordinate(base[e], [&](const Mode& k, cplx v) {
      sys.b(rows.at({static_cast<int>(e), k})) -= v;
    });
  }
  for (int u = 0; u < unknowns; ++u) {
    const auto& eqs = cols[static_cast<size_t>(u)];
    for (size_t e = 0; e < eqs.size(); ++e) {
      for_each_coordinate(eqs[e], [&](const Mode& k, cplx v) {
        sys.a(rows.at({static_cast<int>(e), k}), u) += v;
      });
    }
    // Remove the constant part so that column u holds the linear action only.
    for (size_t e = 0; e < base.size(); ++e) {
      for_each_coordinate(base[e], [&](const Mode& k, cplx v) {
        sys.a(rows.at({static_cast<int>(e), k}), u) -= v;
      });
    }
  }
  return sys;
}

struct LeastSquares {
  Eigen::VectorXcd x;
  double ratio = 0.0;     // sigma_min / sigma_max over the unknowns
  double residual = 0.0;  // max |A x - b|
};

inline LeastSquares least_squares(const LinearSystem& sys) {
  LeastSquares out;
  const auto cols = sys.a.cols();
  if (cols == 0) {
    out.x = Eigen::VectorXcd::Zero(0);
    out.ratio = 1.0;
    out.residual = sys.b.size() ? sys.b.cwiseAbs().maxCoeff() : 0.0;
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(sys.a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (sys.a.rows() < cols || s.size() == 0 || s(0) == 0.0) {
    out.ratio = 0.0;
  } else {
    out.ratio = s(s.size() - 1) / s(0);
  }
  out.x = svd.solve(sys.b);
  out.residual = sys.a.rows() ? (sys.a * out.x - sys.b).cwiseAbs().maxCoeff() : 0.0;
  return out;
}

// Element with the given modes and coefficients.
inline AlgebraElement combine_modes(const Backend& b, const std::vector<Mode>& modes,
                                    const Eigen::VectorXcd& x, Eigen::Index offset) {
  std::map<Mode, cplx> m;
  for (size_t s = 0; s < modes.size(); ++s) {
    const cplx v = x(offset + static_cast<Eigen::Index>(s));
    if (v != cplx(0.0)) m[modes[s]] = v;
  }
  return AlgebraElement::from_modes(b, std::move(m));
}

}  // namespace nclc::detail
