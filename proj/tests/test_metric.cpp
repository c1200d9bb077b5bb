#include <doctest.h>

#include <functional>

#include "nclc/metric.hpp"
#include "nclc/models.hpp"

using namespace nclc;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

std::vector<AlgebraElement> diag3(const Backend& b, AlgebraElement a, AlgebraElement c, AlgebraElement d) {
  std::vector<AlgebraElement> g(9, AlgebraElement::zero(b));
  g[0] = std::move(a);
  g[4] = std::move(c);
  g[8] = std::move(d);
  return g;
}

Eigen::MatrixXd twist_top(double s) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
  t(0, 1) = s;
  t(1, 0) = -s;
  return t;
}

}  // namespace

TEST_CASE("Clifford relations of the frame matrices") {
  const auto p = pauli_matrices();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const Eigen::MatrixXcd ac = p[i] * p[j] + p[j] * p[i];
      const Eigen::MatrixXcd expected = (i == j ? 2.0 : 0.0) * Eigen::MatrixXcd::Identity(2, 2);
      CHECK((ac - expected).norm() < 1e-15);
    }
  const auto g = gamma_matrices(5);
  REQUIRE(g.size() == 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const Eigen::MatrixXcd ac = g[i] * g[j] + g[j] * g[i];
      const Eigen::MatrixXcd expected = (i == j ? 2.0 : 0.0) * Eigen::MatrixXcd::Identity(g[0].rows(), g[0].cols());
      CHECK((ac - expected).norm() < 1e-14);
    }
}

TEST_CASE("canonical metrics of the shipped models are the identity") {
  for (const Model& m : {fuzzy_sphere(1), heisenberg(), torus_bundle(3, 2, twist_top(0.2), 2)}) {
    const MetricSpec& g = m.metric;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const auto& x = g.at(i, j);
        CHECK(x.is_scalar(1e-14));
        CHECK(std::abs(x.trace() - cplx(i == j ? 1.0 : 0.0)) < 1e-14);
      }
  }
}

TEST_CASE("coordinate-dependent metrics in the central direction") {
  const Model m = torus_bundle(3, 2, twist_top(0.31), 3);
  const Backend& b = m.spec.backend;
  const auto u3 = AlgebraElement::monomial(b, {0, 0, 1});
  const MetricSpec g = MetricSpec::build(m.spec, diag3(b, AlgebraElement::unit(b), AlgebraElement::unit(b), u3));
  CHECK(std::abs(g.inverse_at(2, 2).coefficient({0, 0, -1}) - cplx(1.0)) < 1e-12);
  CHECK(g.inverse_at(2, 2).pruned(1e-12).modes().size() == 1);

  const auto u1 = AlgebraElement::monomial(b, {1, 0, 0});
  CHECK(kind_of([&] { MetricSpec::build(m.spec, diag3(b, AlgebraElement::unit(b), AlgebraElement::unit(b), u1 + u1.star())); }) ==
        ErrorKind::NonCentralResult);
}

TEST_CASE("degenerate and asymmetric metrics are rejected") {
  const Model m = torus_bundle(3, 2, Eigen::MatrixXd::Zero(2, 2), 2);
  const Backend& b = m.spec.backend;
  CHECK(kind_of([&] {
          MetricSpec::build(m.spec, diag3(b, AlgebraElement::unit(b), AlgebraElement::unit(b), AlgebraElement::zero(b)));
        }) == ErrorKind::SingularMetric);
  auto g = diag3(b, AlgebraElement::unit(b), AlgebraElement::unit(b), AlgebraElement::unit(b));
  g[1] = AlgebraElement::scalar(b, 0.5);
  CHECK(kind_of([&] { MetricSpec::build(m.spec, g); }) == ErrorKind::InvalidArgument);

  const Model f = fuzzy_sphere(1);
  const Backend& fb = f.spec.backend;
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(5, 5);
  x(0, 0) = 1.0;
  CHECK(kind_of([&] {
          MetricSpec::build(f.spec, diag3(fb, AlgebraElement::from_matrix(fb, x) + AlgebraElement::unit(fb),
                                          AlgebraElement::unit(fb), AlgebraElement::unit(fb)));
        }) == ErrorKind::NonCentralResult);
  // rank one constant matrix
  std::vector<AlgebraElement> r1(9, AlgebraElement::unit(fb));
  CHECK(kind_of([&] { MetricSpec::build(f.spec, r1); }) == ErrorKind::SingularMetric);
}

TEST_CASE("constant inverse matches a dense inverse") {
  const Model h = heisenberg();
  const Backend& b = h.spec.backend;
  Eigen::Matrix3d a;
  a << 2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 1.0;
  std::vector<AlgebraElement> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.push_back(AlgebraElement::scalar(b, a(i, j)));
  const MetricSpec g = MetricSpec::build(h.spec, c);
  const Eigen::Matrix3d inv = a.inverse();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(g.inverse_at(i, j).trace() - cplx(inv(i, j))) < 1e-14);

  // V_g(e_1 * 7) = 7 g(e_1 (x) .)
  OneForm w = OneForm::zero(3, b);
  w.c[0] = AlgebraElement::scalar(b, 7.0);
  const Functional phi = v_g(g, w);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(phi.c[j].trace() - cplx(7.0 * a(0, j))) < 1e-14);
  CHECK((v_g_inverse(g, phi) - w).norm() < 1e-13);
  CHECK(std::abs(metric_eval(g, tensor(w, OneForm::basis(3, 1, b))).trace() - cplx(7.0 * a(0, 1))) < 1e-14);
}

TEST_CASE("V_g2 on a random oracle metric") {
  const Model m = torus_bundle(3, 2, Eigen::MatrixXd::Zero(2, 2), 3);
  std::mt19937_64 rng(11);
  const MetricSpec g = random_oracle_metric(m, rng);
  const VG2Report r = v_g2_check(g);
  CHECK(r.inverse_residual < 1e-10);
  CHECK(r.sigma_residual < 1e-12);
  CHECK(r.symmetric_rank == r.symmetric_dim);
  CHECK(r.symmetric_dim == 6);
  CHECK(g.condition_ratio() > kInvertibilityRatio);
}
