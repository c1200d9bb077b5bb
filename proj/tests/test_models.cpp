#include <doctest.h>

#include "nclc/models.hpp"

using namespace nclc;

TEST_CASE("fuzzy sphere dimensions") {
  CHECK(fuzzy_sphere_dimension(1) == 5);
  CHECK(fuzzy_sphere_dimension(2) == 14);
  const Model m = fuzzy_sphere(1);
  CHECK(m.spec.backend->size() == 5);
  CHECK(m.spec.rank == 3);
  CHECK(m.spec.two_form_rank == 3);
  try {
    fuzzy_sphere(9);
    FAIL("expected SizeTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SizeTooLarge);
  }
  CHECK_THROWS_AS(fuzzy_sphere(0), Error);
}

TEST_CASE("spin matrices satisfy [J1, J2] = i J3") {
  for (int two_j = 0; two_j <= 4; ++two_j) {
    const auto s = spin_matrices(two_j);
    const Eigen::MatrixXcd c = s[0] * s[1] - s[1] * s[0];
    CHECK((c - cplx(0.0, 1.0) * s[2]).norm() < 1e-13);
    const Eigen::MatrixXcd casimir = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
    const double j = two_j / 2.0;
    CHECK((casimir - j * (j + 1) * Eigen::MatrixXcd::Identity(two_j + 1, two_j + 1)).norm() < 1e-13);
  }
}

TEST_CASE("fuzzy derivations close on su(2)") {
  const Model m = fuzzy_sphere(2);
  std::mt19937_64 rng(5);
  const auto a = random_element(m.spec.backend, rng);
  const auto& d = m.spec.derivations;
  // [d1, d2] a = i d3 a
  const auto lhs = d[0].apply(d[1].apply(a)) - d[1].apply(d[0].apply(a));
  CHECK((lhs - cplx(0.0, 1.0) * d[2].apply(a)).norm() < 1e-12);
}

TEST_CASE("heisenberg exterior constants") {
  const Model m = heisenberg();
  int nonzero = 0;
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      if (std::abs(m.spec.exterior(a, i)) > 0.0) ++nonzero;
  CHECK(nonzero == 1);
  CHECK(m.spec.exterior(two_form_index(3, 0, 1), 2) == cplx(-1.0));
}

TEST_CASE("torus bundles") {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
  t(0, 1) = 0.25;
  t(1, 0) = -0.25;
  const Model m = torus_bundle(2, 2, t, 2);
  CHECK_FALSE(is_central(m.spec.generators[0], m.spec.generators, 1e-12));
  const Model m3 = torus_bundle(3, 2, t, 2);
  CHECK(is_central(m3.spec.generators[2], m3.spec.generators, 1e-12));
  CHECK(central_coordinate(m3.spec.backend) == 2);
  CHECK(m3.action->coordinates == std::vector<int>{0, 1});

  Eigen::MatrixXd bad = t;
  bad(1, 0) = 0.25;
  try {
    torus_bundle(2, 2, bad, 2);
    FAIL("expected NonSkew");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSkew);
  }
  CHECK_THROWS_AS(torus_bundle(2, 2, t, 0), Error);
  CHECK_THROWS_AS(torus_bundle(2, 3, t, 1), Error);
}

TEST_CASE("random oracle metrics are reproducible and valid") {
  const Model m = torus_bundle(3, 2, Eigen::MatrixXd::Zero(2, 2), 3);
  std::mt19937_64 a(7), b(7);
  const MetricSpec g1 = random_oracle_metric(m, a);
  const MetricSpec g2 = random_oracle_metric(m, b);
  for (int q = 0; q < 9; ++q) CHECK((g1.components()[q] - g2.components()[q]).norm() == 0.0);
  // only the central coordinate varies
  for (const auto& x : g1.components())
    for (const auto& [k, c] : x.modes()) {
      CHECK(k[0] == 0);
      CHECK(k[1] == 0);
    }
}
