#include <doctest.h>

#include <chrono>
#include <functional>
#include <numbers>

#include "nclc/connection.hpp"
#include "nclc/models.hpp"

using namespace nclc;

namespace {

int eps(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

// Unknowns x[(i*3 + j)*3 + k] = Gamma^i_jk for the scalar Heisenberg frame with
// g = delta: compatibility is Gamma^i_jl + Gamma^j_il = 0, and torsion on the
// slot (a, b), a < b, reads Gamma^i_ab - Gamma^i_ba + D^(ab)_i = 0 where the
// only nonzero exterior constant is D^(12)_3 = -1.
Eigen::VectorXd heisenberg_brute_force() {
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  auto idx = [](int i, int j, int k) { return (i * 3 + j) * 3 + k; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(27);
        r(idx(i, j, l)) += 1.0;
        r(idx(j, i, l)) += 1.0;
        rows.push_back(r);
        rhs.push_back(0.0);
      }
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(27);
        r(idx(i, a, b)) += 1.0;
        r(idx(i, b, a)) -= 1.0;
        rows.push_back(r);
        rhs.push_back((a == 0 && b == 1 && i == 2) ? 1.0 : 0.0);
      }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), 27);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    m.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
    y(static_cast<Eigen::Index>(r)) = rhs[r];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  REQUIRE(lu.rank() == 27);
  Eigen::VectorXd x = m.colPivHouseholderQr().solve(y);
  REQUIRE((m * x - y).norm() < 1e-13);
  return x;
}

}  // namespace

TEST_CASE("heisenberg matches the brute-force solve") {
  const Model m = heisenberg();
  const Eigen::VectorXd x = heisenberg_brute_force();
  for (Route route : {Route::Direct, Route::Phi, Route::Both}) {
    const LeviCivitaResult r = levi_civita(m.spec, m.metric, route);
    for (int q = 0; q < 27; ++q) CHECK(std::abs(r.gamma.gamma[q].trace() - cplx(x(q))) < 1e-12);
    CHECK(r.min_singular_value > 1e-8);
  }
  // The brute-force values: Gamma^3_12 = 1/2, Gamma^1_23 = -1/2, Gamma^2_13 = 1/2.
  CHECK(x((2 * 3 + 0) * 3 + 1) == doctest::Approx(0.5));
  CHECK(x((0 * 3 + 1) * 3 + 2) == doctest::Approx(-0.5));
  CHECK(x((1 * 3 + 0) * 3 + 2) == doctest::Approx(0.5));
}

TEST_CASE("fuzzy sphere Christoffel symbols are (i/2) eps") {
  for (int k : {1, 2}) {
    const Model m = fuzzy_sphere(k);
    const auto t0 = std::chrono::steady_clock::now();
    const LeviCivitaResult r = levi_civita(m.spec, m.metric, Route::Both);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 1.0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
          const auto expected = AlgebraElement::scalar(m.spec.backend, cplx(0.0, 0.5 * eps(i, j, l)));
          CHECK((r.gamma.at(i, j, l) - expected).norm() < 1e-12);
        }
    CHECK(r.route_difference < 1e-12);
    CHECK(r.torsion_residual < 1e-12);
  }
}

TEST_CASE("flat torus has vanishing symbols") {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
  t(0, 1) = 0.4;
  t(1, 0) = -0.4;
  const Model m = torus_bundle(3, 2, t, 2);
  const LeviCivitaResult r = levi_civita(m.spec, m.metric, Route::Both);
  CHECK(r.gamma.norm() < 1e-13);
}

TEST_CASE("solver agrees with the classical Christoffel symbols") {
  const Model m = torus_bundle(3, 2, Eigen::MatrixXd::Zero(2, 2), 3);
  std::mt19937_64 rng(2024);
  for (int s = 0; s < 3; ++s) {
    const MetricSpec g = random_oracle_metric(m, rng);
    const LeviCivitaResult r = levi_civita(m.spec, g, Route::Both);
    const ConnectionCoeffs oracle = koszul_oracle(m.spec, g);
    CHECK((r.gamma - oracle).norm() < 1e-8);
    CHECK(torsion_norm(m.spec, oracle) < 1e-9);
    CHECK(compat_residual(m.spec, g, oracle).max_norm < 1e-9);
  }
}

TEST_CASE("conformal factor in the central direction") {
  // g = diag(1, 1, U3): compatibility reads 2 g_33 Gamma^3_33 = d_3 g_33 = 2 pi i U3
  const Model m = torus_bundle(3, 2, Eigen::MatrixXd::Zero(2, 2), 2);
  const Backend& b = m.spec.backend;
  std::vector<AlgebraElement> c(9, AlgebraElement::zero(b));
  c[0] = c[4] = AlgebraElement::unit(b);
  c[8] = AlgebraElement::monomial(b, {0, 0, 1});
  const MetricSpec g = MetricSpec::build(m.spec, c);
  const LeviCivitaResult r = levi_civita(m.spec, g, Route::Both);
  CHECK(std::abs(r.gamma.at(2, 2, 2).trace() - cplx(0.0, std::numbers::pi)) < 1e-12);
  CHECK((r.gamma - koszul_oracle(m.spec, g)).norm() < 1e-10);
}

TEST_CASE("the classical oracle needs a commutative coordinate calculus") {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
  t(0, 1) = 0.4;
  t(1, 0) = -0.4;
  const Model m = torus_bundle(3, 2, t, 2);
  CHECK(kind_of([&] { koszul_oracle(m.spec, m.metric); }) == ErrorKind::NonCommutativeBackend);
  const Model h = heisenberg();
  CHECK(kind_of([&] { koszul_oracle(h.spec, h.metric); }) == ErrorKind::NonCommutativeBackend);
}

TEST_CASE("nabla0 is torsionless") {
  for (const Model& m : {heisenberg(), fuzzy_sphere(1)}) CHECK(torsion_norm(m.spec, nabla0(m.spec)) < 1e-13);
}

TEST_CASE("Phi_g roundtrip and range checks") {
  const Model m = heisenberg();
  const Backend& b = m.spec.backend;
  LinearMapE l = ConnectionCoeffs::zero(3, b);
  l.at(0, 1, 2) = l.at(0, 2, 1) = AlgebraElement::scalar(b, 2.0);
  l.at(2, 0, 0) = AlgebraElement::scalar(b, cplx(0.0, 1.0));
  const LinearMapE back = phi_g_invert(m.metric, phi_g_apply(m.metric, l));
  CHECK((back - l).norm() < 1e-13);

  LinearMapE bad = l;
  bad.at(1, 0, 1) = AlgebraElement::unit(b);
  CHECK(kind_of([&] { phi_g_apply(m.metric, bad); }) == ErrorKind::RangeNotSymmetric);
}

TEST_CASE("rank-deficient wedge leaves the system without a unique solution") {
  CalculusSpec s;
  s.rank = 2;
  s.two_form_rank = 0;
  s.backend = BackendDescriptor::matrix(1);
  s.exterior = Eigen::MatrixXcd::Zero(0, 2);
  for (int c = 0; c < 2; ++c) s.derivations.push_back(Derivation::symbolic(s.backend, Eigen::MatrixXcd::Zero(1, 1)));
  s.generators = {AlgebraElement::unit(s.backend)};
  const MetricSpec g = MetricSpec::identity(s);
  CHECK(kind_of([&] { levi_civita(s, g, Route::Direct); }) == ErrorKind::NonUnique);
}

TEST_CASE("solutions outside the truncation are reported") {
  // l = 0.3 (U3 + U3^*) couples e_1, e_2; the symbols need modes beyond R = 2.
  const Model m = torus_bundle(3, 2, Eigen::MatrixXd::Zero(2, 2), 2);
  const Backend& b = m.spec.backend;
  const Backend w = work_backend(b);
  const auto u = AlgebraElement::monomial(w, {0, 0, 1});
  const auto l = (u + u.star()) * cplx(0.3);
  std::vector<AlgebraElement> c(9, AlgebraElement::zero(w));
  c[0] = AlgebraElement::unit(w);
  c[1] = c[3] = l;
  c[4] = AlgebraElement::unit(w) + l * l;
  c[8] = AlgebraElement::unit(w);
  const MetricSpec g = MetricSpec::build(m.spec, c);
  const ErrorKind k = kind_of([&] { levi_civita(m.spec, g, Route::Direct); });
  CHECK((k == ErrorKind::Inconsistent || k == ErrorKind::TruncationOverflow));
}
