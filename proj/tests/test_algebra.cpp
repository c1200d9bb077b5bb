#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nclc/algebra.hpp"

using namespace nclc;

namespace {

Eigen::MatrixXd twist2(double s) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
  t(0, 1) = s;
  t(1, 0) = -s;
  return t;
}

}  // namespace

TEST_CASE("twisted product phase") {
  const double s = 0.3;
  const Backend b = BackendDescriptor::graded(twist2(s), 2);
  const auto u = AlgebraElement::monomial(b, {1, 0});
  const auto v = AlgebraElement::monomial(b, {0, 1});
  // exponent pi i <(1,0), Theta (0,1)> = pi i s
  const cplx expected = std::exp(cplx(0.0, std::numbers::pi * s));
  CHECK(std::abs((u * v).coefficient({1, 1}) - expected) < 1e-15);
  CHECK(std::abs((v * u).coefficient({1, 1}) - std::conj(expected)) < 1e-15);
  CHECK((u * v).modes().size() == 1);
}

TEST_CASE("star and trace on the graded backend") {
  const Backend b = BackendDescriptor::graded(twist2(0.17), 2);
  const auto a = AlgebraElement::monomial(b, {1, -1}, cplx(2.0, 3.0)) + AlgebraElement::scalar(b, 5.0);
  const auto s = a.star();
  CHECK(s.coefficient({-1, 1}) == cplx(2.0, -3.0));
  CHECK(s.coefficient({0, 0}) == cplx(5.0, 0.0));
  CHECK(a.trace() == cplx(5.0, 0.0));
  const auto u = AlgebraElement::monomial(b, {1, 1});
  CHECK((u * u.star() - AlgebraElement::unit(b)).norm() < 1e-15);
}

TEST_CASE("matrix backend uses the normalized trace") {
  const Backend b = BackendDescriptor::matrix(3);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m.diagonal() << 1.0, 2.0, 3.0;
  CHECK(std::abs(AlgebraElement::from_matrix(b, m).trace() - cplx(2.0)) < 1e-15);
  CHECK(AlgebraElement::unit(b).is_scalar(0.0));
}

TEST_CASE("products leaving the box overflow") {
  const Backend b = BackendDescriptor::graded(Eigen::MatrixXd::Zero(2, 2), 1);
  const auto u = AlgebraElement::monomial(b, {1, 0});
  CHECK_THROWS_AS(u * u, Error);
  try {
    (void)(u * u);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TruncationOverflow);
  }
  const auto w = to_work(u);
  const auto uu = w * w;
  CHECK(uu.coefficient({2, 0}) == cplx(1.0));
  CHECK_THROWS_AS(rehome(uu, b), Error);
  // negligible coefficients are dropped on the way back
  const auto tiny = AlgebraElement::monomial(work_backend(b), {3, 0}, 1e-20) + w;
  CHECK((rehome(tiny, b) - u).norm() == 0.0);
}

TEST_CASE("operands from different algebras are rejected") {
  const auto a = AlgebraElement::unit(BackendDescriptor::matrix(2));
  const auto c = AlgebraElement::unit(BackendDescriptor::matrix(3));
  try {
    (void)(a * c);
    FAIL("expected BackendMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BackendMismatch);
  }
}

TEST_CASE("derivations") {
  const Backend b = BackendDescriptor::graded(twist2(0.4), 2);
  const auto u = AlgebraElement::monomial(b, {2, -1}, 0.5);
  const auto d0 = Derivation::grading(0).apply(u);
  const auto d1 = Derivation::grading(1).apply(u);
  CHECK(std::abs(d0.coefficient({2, -1}) - cplx(0.0, 2.0 * std::numbers::pi * 2 * 0.5)) < 1e-14);
  CHECK(std::abs(d1.coefficient({2, -1}) - cplx(0.0, -2.0 * std::numbers::pi * 0.5)) < 1e-14);

  const Backend m = BackendDescriptor::matrix(2);
  Eigen::MatrixXcd x(2, 2), a(2, 2);
  x << 1.0, 2.0, 0.0, -1.0;
  a << 0.0, 1.0, 1.0, 0.0;
  const auto da = Derivation::inner(AlgebraElement::from_matrix(m, x)).apply(AlgebraElement::from_matrix(m, a));
  const Eigen::MatrixXcd expected = cplx(0.0, 1.0) * (x * a - a * x);
  CHECK((da.matrix() - expected).norm() < 1e-15);
}

TEST_CASE("centrality") {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 3);
  t(0, 1) = 0.3;
  t(1, 0) = -0.3;
  const Backend b = BackendDescriptor::graded(t, 2);
  std::vector<AlgebraElement> gens;
  for (int j = 0; j < 3; ++j) {
    Mode e(3, 0);
    e[j] = 1;
    gens.push_back(AlgebraElement::monomial(b, e));
  }
  CHECK_FALSE(is_central(gens[0], gens, 1e-12));
  CHECK(is_central(gens[2], gens, 1e-12));
  CHECK(is_central(AlgebraElement::scalar(b, 2.0), gens, 1e-12));
}

TEST_CASE("mode box and active coordinates") {
  CHECK(mode_box(3, 2, {0, 2}).size() == 25);
  CHECK(mode_box(3, 1, {}).size() == 1);
  const Backend b = BackendDescriptor::graded(Eigen::MatrixXd::Zero(3, 3), 2);
  const auto x = AlgebraElement::monomial(b, {0, 0, 1}) + AlgebraElement::scalar(b, 1.0);
  CHECK(active_coordinates({x}) == std::vector<int>{2});
}

TEST_CASE("random elements respect the radius") {
  std::mt19937_64 rng(3);
  const Backend b = BackendDescriptor::graded(Eigen::MatrixXd::Zero(2, 2), 3);
  const auto x = random_element(b, rng, 1);
  CHECK(x.support_radius() == 1);
  CHECK(x.modes().size() == 9);
}
