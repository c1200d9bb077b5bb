// nclc: command-line front end over the C API.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nclc/nclc.h"

namespace {

using Json = nlohmann::ordered_json;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> model;
  std::optional<int> k;
  std::optional<int> dims;
  std::optional<int> deformed;
  std::optional<std::string> theta;
  std::optional<int> radius;
  std::optional<std::string> route;
  std::optional<std::string> metric;
  std::optional<std::uint64_t> random_metric;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol;
  std::optional<std::string> out;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its keys");
  sub->add_option("--model", f.model, "fuzzy-sphere | heisenberg | torus");
  sub->add_option("--k", f.k, "fuzzy sphere truncation");
  sub->add_option("--dims", f.dims, "torus dimension m");
  sub->add_option("--deformed", f.deformed, "number of twisted/deformed torus directions n");
  sub->add_option("--theta", f.theta, "theta_12, or n*n row-major entries separated by commas");
  sub->add_option("--radius", f.radius, "graded truncation radius R");
  sub->add_option("--route", f.route, "direct | phi | both");
  sub->add_option("--metric", f.metric, "default | identity | random | path to JSON | inline JSON object");
  sub->add_option("--random-metric", f.random_metric, "use a random oracle-family metric with this seed");
  sub->add_option("--seed", f.seed, "seed for random metrics and property checks");
  sub->add_option("--samples", f.samples, "number of random metrics for oracle-compare");
  sub->add_option("--tol", f.tol, "backend tolerance (default from NCLC_TOL or 1e-12)");
  sub->add_option("--out", f.out, "write the report here instead of standard output");
}

int emit_error(const std::string& kind, const std::string& detail) {
  Json j = Json::object();
  j["schema_version"] = 1;
  j["error"] = kind;
  j["detail"] = detail;
  std::cout << j.dump(2) << "\n";
  std::cerr << "nclc: " << kind << ": " << detail << "\n";
  return 2;
}

Json merged_config(const Flags& f) {
  Json cfg = Json::object();
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw std::runtime_error("cannot open config '" + *f.config + "'");
    cfg = Json::parse(in);
    if (!cfg.is_object()) throw std::runtime_error("config must be a JSON object");
  }
  if (f.model) cfg["model"] = *f.model;
  if (f.k) cfg["k"] = *f.k;
  if (f.dims) cfg["dims"] = *f.dims;
  if (f.deformed) cfg["deformed"] = *f.deformed;
  if (f.theta) cfg["theta"] = *f.theta;
  if (f.radius) cfg["radius"] = *f.radius;
  if (f.route) cfg["route"] = *f.route;
  if (f.metric) {
    if (!f.metric->empty() && f.metric->front() == '{') cfg["metric"] = Json::parse(*f.metric);
    else cfg["metric"] = *f.metric;
  }
  if (f.random_metric) cfg["random_metric"] = *f.random_metric;
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.samples) cfg["samples"] = *f.samples;
  if (f.tol) cfg["tol"] = *f.tol;
  if (f.out) cfg["out"] = *f.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levi-Civita connections on noncommutative calculi"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"solve", "verify", "deform", "oracle-compare"}) {
    add_flags(app.add_subcommand(name, std::string(name) + " (JSON report on standard output)"), flags);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("InvalidArgument", e.what());
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Json cfg;
  try {
    cfg = merged_config(flags);
  } catch (const std::exception& e) {
    return emit_error("InvalidArgument", e.what());
  }
  std::string out_path;
  if (cfg.contains("out") && cfg["out"].is_string()) out_path = cfg["out"].get<std::string>();

  char* report = nullptr;
  int code = 0;
  const nclc_status status = nclc_run(command.c_str(), cfg.dump().c_str(), &report, &code);
  const std::string text = report ? report : "{}";
  nclc_string_free(report);

  if (!out_path.empty() && status == NCLC_OK) {
    std::ofstream out(out_path);
    if (!out) return emit_error("InvalidArgument", "cannot write '" + out_path + "'");
    out << text << "\n";
  } else {
    std::cout << text << "\n";
  }
  if (status != NCLC_OK) {
    std::cerr << "nclc " << command << ": " << nclc_status_name(status) << ": " << nclc_last_error() << "\n";
  } else {
    std::cerr << "nclc " << command << ": " << (code == 0 ? "passed" : "FAILED") << "\n";
  }
  return code;
}
