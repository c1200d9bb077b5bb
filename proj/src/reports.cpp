#include "nclc/reports.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace nclc {

namespace {

template <class T>
T get_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    fail(ErrorKind::InvalidArgument, std::string("config field '") + key + "' has the wrong type");
  }
}

double parse_number(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') fail(ErrorKind::NonSkew, "theta is not a real matrix: cannot parse '" + text + "'");
  return v;
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t\n[]");
    const auto last = item.find_last_not_of(" \t\n[]");
    if (first == std::string::npos) fail(ErrorKind::NonSkew, "theta is not a real matrix: empty entry in '" + s + "'");
    out.push_back(parse_number(item.substr(first, last - first + 1)));
  }
  if (out.empty()) fail(ErrorKind::NonSkew, "theta is not a real matrix: empty string");
  return out;
}

Eigen::MatrixXd theta_from_values(const std::vector<double>& v, int n) {
  if (v.size() == 1) {
    if (v[0] == 0.0) return Eigen::MatrixXd::Zero(n, n);
    require(n == 2, ErrorKind::InvalidArgument, "a single theta value needs exactly 2 deformed directions");
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
    t(0, 1) = v[0];
    t(1, 0) = -v[0];
    return t;
  }
  if (static_cast<int>(v.size()) != n * n) {
    std::ostringstream os;
    os << "theta needs " << n * n << " row-major entries, got " << v.size();
    fail(ErrorKind::NonSkew, os.str());
  }
  Eigen::MatrixXd t(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) t(r, c) = v[static_cast<size_t>(r * n + c)];
  return t;
}

Json encode_real_matrix(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorKind::InvalidArgument, "'" + path + "' is not valid JSON: " + e.what());
  }
}

Json header(const char* command) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

Model torus_base(const RunConfig& cfg) {
  return torus_bundle(cfg.dims, cfg.deformed, Eigen::MatrixXd::Zero(cfg.deformed, cfg.deformed), cfg.radius, cfg.tol);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Json suite_json(const Model& model, const char* metric_name, const std::vector<CheckResult>& checks) {
  Json j = Json::object();
  j["model"] = model_description(model);
  j["metric"] = metric_name;
  Json arr = Json::array();
  bool ok = true;
  for (const auto& c : checks) {
    arr.push_back(check_json(c));
    ok = ok && c.passed;
  }
  j["checks"] = std::move(arr);
  j["passed"] = ok;
  return j;
}

}  // namespace

double default_tolerance() {
  const char* env = std::getenv("NCLC_TOL");
  if (!env || !*env) return kDefaultTol;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0)) fail(ErrorKind::InvalidArgument, std::string("NCLC_TOL is not a positive number: ") + env);
  return v;
}

RunConfig RunConfig::from_json(const Json& j) {
  require(j.is_object(), ErrorKind::InvalidArgument, "config must be a JSON object");
  static const std::set<std::string> known = {"model", "k",      "dims",  "deformed",      "theta", "radius", "route",
                                              "metric", "seed", "samples", "random_metric", "tol",   "out"};
  for (auto it = j.begin(); it != j.end(); ++it)
    require(known.count(it.key()) > 0, ErrorKind::InvalidArgument, "unknown config key '" + it.key() + "'");

  RunConfig c;
  c.tol = default_tolerance();
  if (j.contains("model")) {
    c.model = get_as<std::string>(j, "model");
    c.model_given = true;
  }
  if (j.contains("k")) c.k = get_as<int>(j, "k");
  if (j.contains("dims")) c.dims = get_as<int>(j, "dims");
  if (j.contains("deformed")) c.deformed = get_as<int>(j, "deformed");
  else if (j.contains("dims")) c.deformed = std::min(c.deformed, c.dims);
  if (j.contains("theta")) c.theta = j["theta"];
  if (j.contains("radius")) c.radius = get_as<int>(j, "radius");
  if (j.contains("route")) c.route = parse_route(get_as<std::string>(j, "route"));
  if (j.contains("metric")) {
    c.metric = j["metric"];
    require(c.metric.is_string() || c.metric.is_object(), ErrorKind::InvalidArgument,
            "metric must be 'default', 'random', a file path or an object");
  }
  if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("random_metric")) {
    c.seed = get_as<std::uint64_t>(j, "random_metric");
    c.metric = "random";
  }
  if (j.contains("samples")) c.samples = get_as<int>(j, "samples");
  if (j.contains("tol")) c.tol = get_as<double>(j, "tol");
  if (j.contains("out")) c.out = get_as<std::string>(j, "out");

  require(c.k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
  require(c.dims >= 1, ErrorKind::InvalidArgument, "dims must be >= 1");
  require(c.deformed >= 1 && c.deformed <= c.dims, ErrorKind::InvalidArgument, "deformed must satisfy 1 <= deformed <= dims");
  require(c.radius >= 1, ErrorKind::InvalidArgument, "radius must be >= 1");
  require(c.samples >= 1, ErrorKind::InvalidArgument, "samples must be >= 1");
  require(c.tol > 0.0, ErrorKind::InvalidArgument, "tol must be positive");
  require(c.model == "fuzzy-sphere" || c.model == "heisenberg" || c.model == "torus", ErrorKind::InvalidArgument,
          "unknown model '" + c.model + "' (expected fuzzy-sphere, heisenberg or torus)");
  return c;
}

Json RunConfig::to_json() const {
  Json j = Json::object();
  j["model"] = model;
  j["k"] = k;
  j["dims"] = dims;
  j["deformed"] = deformed;
  j["theta"] = theta;
  j["radius"] = radius;
  j["route"] = route_name(route);
  j["metric"] = metric;
  j["seed"] = seed;
  j["samples"] = samples;
  j["tol"] = tol;
  if (!out.empty()) j["out"] = out;
  return j;
}

Eigen::MatrixXd parse_theta(const Json& value, int n) {
  Eigen::MatrixXd t;
  if (value.is_null()) {
    t = Eigen::MatrixXd::Zero(n, n);
  } else if (value.is_number()) {
    t = theta_from_values({value.get<double>()}, n);
  } else if (value.is_string()) {
    t = theta_from_values(split_numbers(value.get<std::string>()), n);
  } else if (value.is_array() && !value.empty() && value.front().is_array()) {
    std::vector<double> flat;
    for (const auto& row : value) {
      require(row.is_array() && static_cast<int>(row.size()) == n, ErrorKind::NonSkew, "theta rows must have n entries");
      for (const auto& x : row) {
        require(x.is_number(), ErrorKind::NonSkew, "theta entries must be real numbers");
        flat.push_back(x.get<double>());
      }
    }
    require(static_cast<int>(value.size()) == n, ErrorKind::NonSkew, "theta must have n rows");
    t = theta_from_values(flat, n);
  } else if (value.is_array()) {
    std::vector<double> flat;
    for (const auto& x : value) {
      require(x.is_number(), ErrorKind::NonSkew, "theta entries must be real numbers");
      flat.push_back(x.get<double>());
    }
    require(!flat.empty(), ErrorKind::NonSkew, "theta is empty");
    t = theta_from_values(flat, n);
  } else {
    fail(ErrorKind::NonSkew, "theta must be a number, an array or a comma-separated string");
  }
  validate_theta(t);
  return t;
}

Model build_model(const RunConfig& cfg) {
  if (cfg.model == "fuzzy-sphere") return fuzzy_sphere(cfg.k, cfg.tol);
  if (cfg.model == "heisenberg") return heisenberg(cfg.tol);
  return torus_bundle(cfg.dims, cfg.deformed, parse_theta(cfg.theta, cfg.deformed), cfg.radius, cfg.tol);
}

MetricSpec build_metric(const RunConfig& cfg, const Model& model) {
  if (cfg.metric.is_object()) return decode_metric(cfg.metric, model.spec);
  const std::string source = cfg.metric.get<std::string>();
  if (source == "default") return model.metric;
  if (source == "identity") return MetricSpec::identity(model.spec);
  if (source == "random") {
    std::mt19937_64 rng(cfg.seed);
    return random_oracle_metric(model, rng);
  }
  const Json j = read_json_file(source);
  return decode_metric(j.contains("metric") ? j["metric"] : j, model.spec);
}

Json model_description(const Model& model) {
  Json j = Json::object();
  j["name"] = model.name;
  if (model.name == "fuzzy-sphere") j["k"] = model.k;
  if (model.name == "torus") {
    j["dims"] = model.dims;
    j["deformed"] = model.deformed;
    j["theta"] = encode_real_matrix(model.theta);
    j["radius"] = model.spec.backend->radius();
  }
  if (model.spec.backend->kind() == BackendKind::Matrix) j["matrix_size"] = model.spec.backend->size();
  j["rank"] = model.spec.rank;
  j["two_form_rank"] = model.spec.two_form_rank;
  j["tol"] = model.spec.tol();
  return j;
}

Json check_json(const CheckResult& c) {
  Json j = Json::object();
  j["module"] = c.module;
  j["name"] = c.name;
  j["value"] = c.value;
  j["tolerance"] = c.tolerance;
  j["passed"] = c.passed;
  return j;
}

Json connection_report(const Model& model, const MetricSpec& g, const LeviCivitaResult& r) {
  Json j = header("solve");
  j["model"] = model_description(model);
  j["metric"] = encode_metric(g);
  j["route"] = route_name(r.route);
  j["gamma"] = encode_gamma(r.gamma);
  j["torsion_residual"] = r.torsion_residual;
  j["compat_residual"] = r.compat_residual;
  j["min_singular_value"] = r.min_singular_value;
  j["route_difference"] = r.route_difference;
  j["unknowns"] = r.unknowns;
  j["equations"] = r.equations;
  const SolveOptions opt;
  j["passed"] = r.torsion_residual <= opt.residual_tol && r.compat_residual <= opt.residual_tol;
  return j;
}

Json solve_report(const RunConfig& cfg) {
  const Model model = build_model(cfg);
  const MetricSpec g = build_metric(cfg, model);
  return connection_report(model, g, levi_civita(model.spec, g, cfg.route));
}

Json verify_report(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  Json j = header("verify");
  Json suites = Json::array();
  bool ok = true;
  auto run = [&](const Model& model, const MetricSpec& g, const char* metric_name) {
    const Eigen::MatrixXd theta = random_skew(model.deformed, rng);
    Json s = suite_json(model, metric_name, model_suite(model, g, theta, cfg.seed));
    ok = ok && s["passed"].get<bool>();
    suites.push_back(std::move(s));
  };
  if (cfg.model_given) {
    const Model m = build_model(cfg);
    run(m, build_metric(cfg, m), cfg.metric.is_string() ? cfg.metric.get<std::string>().c_str() : "inline");
  } else {
    run(fuzzy_sphere(cfg.k, cfg.tol), fuzzy_sphere(cfg.k, cfg.tol).metric, "default");
    const Model h = heisenberg(cfg.tol);
    run(h, h.metric, "default");
    const Model t = torus_base(cfg);
    run(t, t.metric, "default");
    std::mt19937_64 mrng(cfg.seed);
    run(t, random_oracle_metric(t, mrng), "random");
    const Model twisted =
        torus_bundle(cfg.dims, cfg.deformed, random_skew(cfg.deformed, rng), cfg.radius, cfg.tol);
    run(twisted, twisted.metric, "default");
  }
  j["suites"] = std::move(suites);
  j["passed"] = ok;
  return j;
}

Json deform_report(const RunConfig& cfg) {
  const Eigen::MatrixXd theta = parse_theta(cfg.theta, cfg.deformed);
  RunConfig base_cfg = cfg;
  base_cfg.model = "torus";
  base_cfg.theta = nullptr;
  const Model base = torus_base(cfg);
  const MetricSpec g = build_metric(base_cfg, base);
  const LeviCivitaResult lc = levi_civita(base.spec, g, Route::Direct);
  const CalculusSpec deformed = deform_calculus(base.spec, theta, *base.action);
  const auto [pushed, g_theta] = deform_connection(lc.gamma, g, deformed, *base.action);
  const LeviCivitaResult direct = levi_civita(deformed, g_theta, cfg.route);
  const double diff = (direct.gamma - pushed).norm();

  Json j = header("deform");
  j["model"] = model_description(base);
  j["theta"] = encode_real_matrix(theta);
  j["metric"] = encode_metric(g);
  j["deformed_metric"] = encode_metric(g_theta);
  j["route"] = route_name(cfg.route);
  j["gamma"] = encode_gamma(direct.gamma);
  j["deformed_gamma_difference"] = diff;
  j["torsion_residual"] = direct.torsion_residual;
  j["compat_residual"] = direct.compat_residual;
  j["min_singular_value"] = direct.min_singular_value;
  j["tolerance"] = 1e-8;
  j["passed"] = diff <= 1e-8;
  return j;
}

Json oracle_report(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.model = "torus";
  c.theta = nullptr;
  const Model model = torus_base(c);
  std::vector<std::pair<std::string, MetricSpec>> metrics;
  const bool sampled = c.metric.is_string() && (c.metric == "random" || c.metric == "default");
  if (sampled) {
    std::mt19937_64 rng(c.seed);
    for (int s = 0; s < c.samples; ++s) metrics.emplace_back("random", random_oracle_metric(model, rng));
  } else {
    metrics.emplace_back("given", build_metric(c, model));
  }

  const auto t0 = std::chrono::steady_clock::now();
  Json rows = Json::array();
  bool ok = true;
  double worst = 0.0;
  for (const auto& [name, g] : metrics) {
    const LeviCivitaResult r = levi_civita(model.spec, g, c.route);
    const ConnectionCoeffs oracle = koszul_oracle(model.spec, g);
    const double diff = (r.gamma - oracle).norm();
    worst = std::max(worst, diff);
    Json row = Json::object();
    row["metric"] = encode_metric(g);
    row["difference"] = diff;
    row["torsion_residual"] = r.torsion_residual;
    row["compat_residual"] = r.compat_residual;
    row["min_singular_value"] = r.min_singular_value;
    row["passed"] = diff <= 1e-8;
    ok = ok && diff <= 1e-8;
    rows.push_back(std::move(row));
  }
  Json j = header("oracle-compare");
  j["model"] = model_description(model);
  j["route"] = route_name(c.route);
  j["samples"] = std::move(rows);
  j["max_difference"] = worst;
  j["tolerance"] = 1e-8;
  j["runtime_seconds"] = seconds_since(t0);
  j["passed"] = ok;
  return j;
}

Json run_command(const std::string& command, const RunConfig& cfg) {
  if (command == "solve") return solve_report(cfg);
  if (command == "verify") return verify_report(cfg);
  if (command == "deform") return deform_report(cfg);
  if (command == "oracle-compare") return oracle_report(cfg);
  fail(ErrorKind::InvalidArgument, "unknown command '" + command + "' (expected solve, verify, deform or oracle-compare)");
}

bool report_passed(const Json& report) { return report.value("passed", true); }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonUnique:
    case ErrorKind::Inconsistent:
    case ErrorKind::NoSolution:
    case ErrorKind::RangeNotSymmetric:
    case ErrorKind::GridTooCoarse:
    case ErrorKind::TruncationOverflow:
      return 1;
    default:
      return 2;
  }
}

Json error_report(ErrorKind kind, const std::string& detail) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["error"] = std::string(error_kind_name(kind));
  j["detail"] = detail;
  return j;
}

}  // namespace nclc
