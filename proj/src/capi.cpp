#include "nclc/nclc.h"

#include <cstring>
#include <string>

#include "nclc/reports.hpp"

struct nclc_model {
  nclc::Model model;
};

struct nclc_metric {
  nclc::MetricSpec metric;
};

struct nclc_connection {
  nclc::Model model;
  nclc::MetricSpec metric;
  nclc::LeviCivitaResult result;
};

namespace {

thread_local std::string last_error;

nclc_status to_status(nclc::ErrorKind kind) { return static_cast<nclc_status>(static_cast<int>(kind) + 1); }

static_assert(NCLC_INVALID_ARGUMENT == static_cast<int>(nclc::ErrorKind::InvalidArgument) + 1);
static_assert(NCLC_NOT_CENTRAL_BASIS == static_cast<int>(nclc::ErrorKind::NotCentralBasis) + 1);

template <class F>
nclc_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return NCLC_OK;
  } catch (const nclc::Error& e) {
    last_error = e.detail();
    return to_status(e.kind());
  } catch (const std::exception& e) {
    last_error = e.what();
    return NCLC_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return NCLC_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  nclc::require(p != nullptr, nclc::ErrorKind::InvalidArgument, std::string(what) + " is null");
}

nclc::Route to_route(nclc_route r) {
  switch (r) {
    case NCLC_ROUTE_DIRECT: return nclc::Route::Direct;
    case NCLC_ROUTE_PHI: return nclc::Route::Phi;
    case NCLC_ROUTE_BOTH: return nclc::Route::Both;
  }
  nclc::fail(nclc::ErrorKind::InvalidArgument, "unknown route");
}

Eigen::MatrixXd theta_matrix(const double* theta, int n) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  if (theta)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) t(r, c) = theta[r * n + c];
  return t;
}

}  // namespace

extern "C" {

const char* nclc_status_name(nclc_status status) {
  if (status == NCLC_OK) return "Ok";
  if (status == NCLC_INTERNAL) return "Internal";
  if (status < NCLC_OK || status > NCLC_INTERNAL) return "Unknown";
  return nclc::error_kind_name(static_cast<nclc::ErrorKind>(static_cast<int>(status) - 1)).data();
}

const char* nclc_last_error(void) { return last_error.c_str(); }

void nclc_string_free(char* s) { delete[] s; }

int nclc_exit_code(nclc_status status) {
  if (status == NCLC_OK) return 0;
  if (status == NCLC_INTERNAL) return 2;
  return nclc::exit_code_for(static_cast<nclc::ErrorKind>(static_cast<int>(status) - 1));
}

nclc_status nclc_model_create(const char* config_json, nclc_model** out) {
  return guard([&] {
    need(out, "out");
    nclc::Json j;
    try {
      j = config_json ? nclc::Json::parse(config_json) : nclc::Json::object();
    } catch (const nclc::Json::exception& e) {
      nclc::fail(nclc::ErrorKind::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
    }
    *out = new nclc_model{nclc::build_model(nclc::RunConfig::from_json(j))};
  });
}

nclc_status nclc_model_fuzzy_sphere(int k, nclc_model** out) {
  return guard([&] {
    need(out, "out");
    *out = new nclc_model{nclc::fuzzy_sphere(k, nclc::default_tolerance())};
  });
}

nclc_status nclc_model_heisenberg(nclc_model** out) {
  return guard([&] {
    need(out, "out");
    *out = new nclc_model{nclc::heisenberg(nclc::default_tolerance())};
  });
}

nclc_status nclc_model_torus(int dims, int deformed, const double* theta, int radius, nclc_model** out) {
  return guard([&] {
    need(out, "out");
    nclc::require(deformed >= 1, nclc::ErrorKind::InvalidArgument, "deformed must be >= 1");
    *out = new nclc_model{
        nclc::torus_bundle(dims, deformed, theta_matrix(theta, deformed), radius, nclc::default_tolerance())};
  });
}

nclc_status nclc_model_describe(const nclc_model* model, char** json) {
  return guard([&] {
    need(model, "model");
    need(json, "json");
    *json = dup(nclc::model_description(model->model).dump());
  });
}

int nclc_model_rank(const nclc_model* model) { return model ? model->model.spec.rank : 0; }

void nclc_model_destroy(nclc_model* model) { delete model; }

nclc_status nclc_metric_default(const nclc_model* model, nclc_metric** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = new nclc_metric{model->model.metric};
  });
}

nclc_status nclc_metric_from_json(const nclc_model* model, const char* json, nclc_metric** out) {
  return guard([&] {
    need(model, "model");
    need(json, "json");
    need(out, "out");
    nclc::Json j;
    try {
      j = nclc::Json::parse(json);
    } catch (const nclc::Json::exception& e) {
      nclc::fail(nclc::ErrorKind::InvalidArgument, std::string("metric is not valid JSON: ") + e.what());
    }
    *out = new nclc_metric{nclc::decode_metric(j, model->model.spec)};
  });
}

nclc_status nclc_metric_random_oracle(const nclc_model* model, uint64_t seed, nclc_metric** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    std::mt19937_64 rng(seed);
    *out = new nclc_metric{nclc::random_oracle_metric(model->model, rng)};
  });
}

nclc_status nclc_metric_to_json(const nclc_metric* metric, char** json) {
  return guard([&] {
    need(metric, "metric");
    need(json, "json");
    *json = dup(nclc::encode_metric(metric->metric).dump());
  });
}

void nclc_metric_destroy(nclc_metric* metric) { delete metric; }

nclc_status nclc_solve(const nclc_model* model, const nclc_metric* metric, nclc_route route, double tol,
                       nclc_connection** out) {
  return guard([&] {
    need(model, "model");
    need(metric, "metric");
    need(out, "out");
    nclc::SolveOptions opt;
    if (tol > 0.0) opt.residual_tol = tol;
    auto r = nclc::levi_civita(model->model.spec, metric->metric, to_route(route), opt);
    *out = new nclc_connection{model->model, metric->metric, std::move(r)};
  });
}

nclc_status nclc_connection_gamma(const nclc_connection* c, int i, int j, int k, double* re, double* im) {
  return guard([&] {
    need(c, "connection");
    need(re, "re");
    need(im, "im");
    const int n = c->result.gamma.n;
    nclc::require(i >= 0 && i < n && j >= 0 && j < n && k >= 0 && k < n, nclc::ErrorKind::InvalidArgument,
                  "index out of range");
    const nclc::cplx v = c->result.gamma.at(i, j, k).trace();
    *re = v.real();
    *im = v.imag();
  });
}

nclc_status nclc_connection_diagnostics(const nclc_connection* c, double* torsion_residual, double* compat_residual,
                                        double* min_singular_value) {
  return guard([&] {
    need(c, "connection");
    if (torsion_residual) *torsion_residual = c->result.torsion_residual;
    if (compat_residual) *compat_residual = c->result.compat_residual;
    if (min_singular_value) *min_singular_value = c->result.min_singular_value;
  });
}

nclc_status nclc_connection_report(const nclc_connection* c, char** json) {
  return guard([&] {
    need(c, "connection");
    need(json, "json");
    *json = dup(nclc::connection_report(c->model, c->metric, c->result).dump());
  });
}

void nclc_connection_destroy(nclc_connection* c) { delete c; }

nclc_status nclc_deform_compare(const nclc_model* model, const nclc_metric* metric, const double* theta,
                                double* difference) {
  return guard([&] {
    need(model, "model");
    need(metric, "metric");
    need(difference, "difference");
    const nclc::Model& m = model->model;
    nclc::require(m.action.has_value(), nclc::ErrorKind::InvalidArgument, "model has no torus action");
    const Eigen::MatrixXd t = theta_matrix(theta, m.action->circles);
    const auto lc = nclc::levi_civita(m.spec, metric->metric, nclc::Route::Direct);
    const nclc::CalculusSpec deformed = nclc::deform_calculus(m.spec, t, *m.action);
    const auto [pushed, g_theta] = nclc::deform_connection(lc.gamma, metric->metric, deformed, *m.action);
    const auto direct = nclc::levi_civita(deformed, g_theta, nclc::Route::Direct);
    *difference = (direct.gamma - pushed).norm();
  });
}

nclc_status nclc_oracle_compare(const nclc_model* model, const nclc_metric* metric, double* difference) {
  return guard([&] {
    need(model, "model");
    need(metric, "metric");
    need(difference, "difference");
    const auto r = nclc::levi_civita(model->model.spec, metric->metric, nclc::Route::Direct);
    *difference = (r.gamma - nclc::koszul_oracle(model->model.spec, metric->metric)).norm();
  });
}

nclc_status nclc_verify(const nclc_model* model, const nclc_metric* metric, uint64_t seed, char** report,
                        int* all_passed) {
  return guard([&] {
    need(model, "model");
    need(metric, "metric");
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd theta = nclc::random_skew(model->model.deformed, rng);
    const auto checks = nclc::model_suite(model->model, metric->metric, theta, seed);
    nclc::Json arr = nclc::Json::array();
    bool ok = true;
    for (const auto& c : checks) {
      arr.push_back(nclc::check_json(c));
      ok = ok && c.passed;
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
    if (report) {
      nclc::Json j = nclc::Json::object();
      j["schema_version"] = nclc::kSchemaVersion;
      j["checks"] = std::move(arr);
      j["passed"] = ok;
      *report = dup(j.dump());
    }
  });
}

nclc_status nclc_theta_validate(const double* theta, int n) {
  return guard([&] {
    need(theta, "theta");
    nclc::require(n >= 0, nclc::ErrorKind::InvalidArgument, "negative size");
    nclc::validate_theta(theta_matrix(theta, n));
  });
}

nclc_status nclc_run(const char* command, const char* config_json, char** report, int* exit_code) {
  nclc::Json out;
  const nclc_status status = guard([&] {
    need(command, "command");
    nclc::Json j;
    try {
      j = config_json ? nclc::Json::parse(config_json) : nclc::Json::object();
    } catch (const nclc::Json::exception& e) {
      nclc::fail(nclc::ErrorKind::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
    }
    out = nclc::run_command(command, nclc::RunConfig::from_json(j));
  });
  int code = 0;
  if (status != NCLC_OK) {
    const auto kind = status == NCLC_INTERNAL ? nclc::ErrorKind::InvalidArgument
                                              : static_cast<nclc::ErrorKind>(static_cast<int>(status) - 1);
    out = nclc::error_report(kind, last_error);
    if (status == NCLC_INTERNAL) out["error"] = "Internal";
    code = nclc_exit_code(status);
  } else if (!nclc::report_passed(out)) {
    code = 1;
  }
  if (exit_code) *exit_code = code;
  if (report) *report = dup(out.dump(2));
  return status;
}

}  // extern "C"
