#include <doctest.h>

#include "nclc/forms.hpp"
#include "nclc/models.hpp"

using namespace nclc;

TEST_CASE("standard wedge table") {
  const auto c = standard_wedge(3);
  REQUIRE(c.size() == 3);
  CHECK(two_form_index(3, 0, 1) == 0);
  CHECK(two_form_index(3, 0, 2) == 1);
  CHECK(two_form_index(3, 1, 2) == 2);
  CHECK(c[0](0, 1) == cplx(1.0));
  CHECK(c[0](1, 0) == cplx(-1.0));
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i) CHECK(c[a](i, i) == cplx(0.0));
}

TEST_CASE("exterior constants from su(2) brackets") {
  // [d1, d2] = i d3 and cyclic. d(e_3) carries -1/2 (c^(12)_12 f^3_12 + c^(12)_21 f^3_21) = -i
  std::vector<Eigen::MatrixXcd> f(3, Eigen::MatrixXcd::Zero(3, 3));
  const cplx i(0.0, 1.0);
  f[2](0, 1) = i;
  f[2](1, 0) = -i;
  f[0](1, 2) = i;
  f[0](2, 1) = -i;
  f[1](2, 0) = i;
  f[1](0, 2) = -i;
  const Eigen::MatrixXcd d = exterior_from_lie_structure(standard_wedge(3), f);
  CHECK(std::abs(d(two_form_index(3, 0, 1), 2) + i) < 1e-15);
  CHECK(std::abs(d(two_form_index(3, 1, 2), 0) + i) < 1e-15);
  // e_3 ^ e_1 = -f_(1,3)
  CHECK(std::abs(d(two_form_index(3, 0, 2), 1) - i) < 1e-15);
  CHECK(std::abs(d(two_form_index(3, 0, 1), 0)) == 0.0);
}

TEST_CASE("sigma, P_sym and the wedge") {
  const Model m = heisenberg();
  const CalculusSpec& s = m.spec;
  const Backend& b = s.backend;
  TensorSquare t = TensorSquare::zero(3, b);
  t.at(0, 1) = AlgebraElement::scalar(b, 2.0);
  t.at(2, 2) = AlgebraElement::scalar(b, 1.0);
  const TensorSquare st = sigma(t);
  CHECK(st.at(1, 0).trace() == cplx(2.0));
  CHECK(st.at(0, 1).trace() == cplx(0.0));
  const TensorSquare p = p_sym(t);
  CHECK(p.at(0, 1).trace() == cplx(1.0));
  CHECK(p.at(1, 0).trace() == cplx(1.0));
  CHECK(wedge(s, p).norm() == 0.0);
  const TwoForm w = wedge(s, t);
  CHECK(w.c[0].trace() == cplx(2.0));
  // the section reproduces the antisymmetric part
  const TensorSquare a = wedge_section(s, w);
  CHECK(std::abs(a.at(0, 1).trace() - cplx(1.0)) < 1e-14);
  CHECK(std::abs(a.at(1, 0).trace() + cplx(1.0)) < 1e-14);
}

TEST_CASE("d1 of the basis forms and d o d") {
  const Model m = heisenberg();
  // [d1, d2] = d3 gives d(e_3) = -f_(1,2)
  const TwoForm de3 = d1_basis(m.spec, 2);
  CHECK(std::abs(de3.c[0].trace() + 1.0) < 1e-15);
  CHECK(de3.c[1].norm() == 0.0);
  CHECK(d1_basis(m.spec, 0).norm() == 0.0);

  const Model t = torus_bundle(2, 2, Eigen::MatrixXd::Zero(2, 2), 2);
  for (const auto& g : t.spec.generators) CHECK(d1(t.spec, d0(t.spec, g)).norm() < 1e-12);
}

TEST_CASE("braid relation and the P12/P23 ranks") {
  for (int n = 1; n <= 4; ++n) {
    const BraidReport r = braid_check(n);
    CHECK(r.braid_residual == doctest::Approx(0.0));
    // Ran(P12) = Sym^2 (x) C^n
    CHECK(r.dim_ran_p12 == n * n * (n + 1) / 2);
    CHECK(r.dim_ran_p23 == r.dim_ran_p12);
    CHECK(r.bijective);
  }
  const int n = 3;
  const Eigen::MatrixXd q = p23_on_p12_inverse(n);
  const Eigen::MatrixXd p12 = sym12(n), p23 = sym23(n);
  CHECK((p23 * q * p23 - p23).norm() < 1e-12);
  CHECK((p12 * q - q).norm() < 1e-12);
}

TEST_CASE("zeta encoding roundtrip") {
  const Backend b = BackendDescriptor::matrix(1);
  std::vector<TensorSquare> values;
  for (int i = 0; i < 2; ++i) {
    TensorSquare t = TensorSquare::zero(2, b);
    t.at(i, 1 - i) = AlgebraElement::scalar(b, cplx(i + 1.0));
    values.push_back(t);
  }
  const TensorCube z = zeta_encode(values);
  const auto back = zeta_decode(z);
  CHECK((back[1] - values[1]).norm() == 0.0);
  const TensorSquare v = zeta_evaluate(z, OneForm::basis(2, 1, b));
  CHECK((v - values[1]).norm() == 0.0);
}

TEST_CASE("validation rejects broken calculi") {
  Model m = heisenberg();
  CalculusSpec s = m.spec;
  s.wedge[0](1, 0) = 0.0;  // no longer antisymmetric
  CHECK_THROWS_AS(s.validate(), Error);
  CalculusSpec t = m.spec;
  t.exterior(0, 2) = 0.5;  // d o d no longer vanishes
  CHECK_THROWS_AS(t.validate(), Error);
  CalculusSpec u = m.spec;
  u.central_basis = false;
  try {
    u.validate();
    FAIL("expected NotCentralBasis");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCentralBasis);
  }
}
