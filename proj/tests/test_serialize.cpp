#include <doctest.h>

#include <functional>

#include "nclc/reports.hpp"

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

}  // namespace

TEST_CASE("element encodings roundtrip") {
  const Backend g = BackendDescriptor::graded(Eigen::MatrixXd::Zero(2, 2), 2);
  const auto x = AlgebraElement::monomial(g, {1, -2}, cplx(0.5, -1.0)) + AlgebraElement::scalar(g, 3.0);
  const Json j = encode_element(x);
  CHECK(j.contains("modes"));
  CHECK((decode_element(j, g) - x).norm() == 0.0);
  CHECK(encode_element(AlgebraElement::scalar(g, cplx(0.0, 0.5))).dump() == R"({"scalar":[0.0,0.5]})");

  const Backend m = BackendDescriptor::matrix(2);
  Eigen::MatrixXcd a(2, 2);
  a << 1.0, cplx(0.0, 2.0), 3.0, 4.0;
  const auto y = AlgebraElement::from_matrix(m, a);
  CHECK((decode_element(encode_element(y), m) - y).norm() == 0.0);
  CHECK(kind_of([&] { decode_element(Json::parse(R"({"matrix": [[1]]})"), m); }) == ErrorKind::BackendMismatch);
  CHECK(kind_of([&] { decode_element(Json::parse(R"({"vector": 1})"), m); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("calculus and metric encodings roundtrip") {
  for (const Model& model : {heisenberg(), fuzzy_sphere(1), torus_bundle(3, 2, Eigen::MatrixXd::Zero(2, 2), 2)}) {
    const Json j = encode_calculus(model.spec);
    const CalculusSpec back = decode_calculus(j);
    CHECK(back.rank == model.spec.rank);
    CHECK((back.exterior - model.spec.exterior).norm() == 0.0);
    CHECK(*back.backend == *model.spec.backend);
    const MetricSpec g = decode_metric(encode_metric(model.metric), back);
    for (int q = 0; q < 9; ++q) CHECK(std::abs(g.components()[q].trace() - model.metric.components()[q].trace()) == 0.0);
  }
  Json bad = encode_calculus(heisenberg().spec);
  bad["colour"] = 1;
  CHECK(kind_of([&] { decode_calculus(bad); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("theta parsing") {
  const Eigen::MatrixXd a = parse_theta(Json(0.25), 2);
  CHECK(a(0, 1) == 0.25);
  CHECK(a(1, 0) == -0.25);
  CHECK(parse_theta(Json("0"), 3).norm() == 0.0);
  CHECK(parse_theta(Json(), 3).norm() == 0.0);
  const Eigen::MatrixXd b = parse_theta(Json("0, 0.1, -0.1, 0"), 2);
  CHECK(b(0, 1) == 0.1);
  const Eigen::MatrixXd c = parse_theta(Json::parse("[[0, 0.2], [-0.2, 0]]"), 2);
  CHECK(c(1, 0) == -0.2);
  CHECK(kind_of([] { parse_theta(Json("not-skew"), 2); }) == ErrorKind::NonSkew);
  CHECK(kind_of([] { parse_theta(Json("0, 0.1, 0.1, 0"), 2); }) == ErrorKind::NonSkew);
  CHECK(kind_of([] { parse_theta(Json("0, 0.1, 0.1"), 2); }) == ErrorKind::NonSkew);
  CHECK(kind_of([] { parse_theta(Json(0.3), 3); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("run configuration") {
  const RunConfig c = RunConfig::from_json(Json::parse(R"({"model": "torus", "dims": 3, "random_metric": 4})"));
  CHECK(c.model == "torus");
  CHECK(c.metric == "random");
  CHECK(c.seed == 4);
  CHECK(kind_of([] { RunConfig::from_json(Json::parse(R"({"modle": "torus"})")); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { RunConfig::from_json(Json::parse(R"({"model": "klein"})")); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { RunConfig::from_json(Json::parse(R"({"route": "sideways"})")); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { RunConfig::from_json(Json::parse(R"({"k": "two"})")); }) == ErrorKind::InvalidArgument);
  CHECK(RunConfig::from_json(c.to_json()).to_json() == c.to_json());
}

TEST_CASE("solve report schema") {
  const Json r = solve_report(RunConfig::from_json(Json::parse(R"({"model": "fuzzy-sphere", "k": 1})")));
  std::vector<std::string> keys;
  for (auto it = r.begin(); it != r.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expected = {"schema_version", "command", "model", "metric", "route",
                                             "gamma", "torsion_residual", "compat_residual", "min_singular_value",
                                             "route_difference", "unknowns", "equations", "passed"};
  CHECK(keys == expected);
  CHECK(r["gamma"][2][0][1]["scalar"][1].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r["passed"].get<bool>());
}

TEST_CASE("exit codes follow the error taxonomy") {
  CHECK(exit_code_for(ErrorKind::NonUnique) == 1);
  CHECK(exit_code_for(ErrorKind::Inconsistent) == 1);
  CHECK(exit_code_for(ErrorKind::NonSkew) == 2);
  CHECK(exit_code_for(ErrorKind::SingularMetric) == 2);
  const Json e = error_report(ErrorKind::NonSkew, "x");
  CHECK(e["error"] == "NonSkew");
  CHECK(e["detail"] == "x");
}
