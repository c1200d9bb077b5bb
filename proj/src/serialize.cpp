#include "nclc/serialize.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace nclc {

namespace {

const Json& field(const Json& j, const char* key) {
  require(j.is_object(), ErrorKind::InvalidArgument, std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  require(it != j.end(), ErrorKind::InvalidArgument, std::string("missing field '") + key + "'");
  return *it;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const char* what) {
  require(j.is_object(), ErrorKind::InvalidArgument, std::string(what) + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) fail(ErrorKind::InvalidArgument, std::string("unknown key '") + it.key() + "' in " + what);
  }
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("malformed JSON: ") + e.what());
  }
}

Json encode_matrix(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(encode_complex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd decode_matrix(const Json& j) {
  require(j.is_array(), ErrorKind::InvalidArgument, "matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    require(j.at(r).is_array() && static_cast<Eigen::Index>(j.at(r).size()) == cols,
            ErrorKind::InvalidArgument, "ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = decode_complex(j.at(r).at(c));
  }
  return m;
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

}  // namespace

Json encode_complex(cplx c) { return Json::array({c.real(), c.imag()}); }

cplx decode_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::InvalidArgument,
          "complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json encode_element(const AlgebraElement& a) {
  Json j = Json::object();
  if (a.is_scalar(1e-14 * std::max(1.0, a.norm()))) {
    j["scalar"] = encode_complex(a.trace());
  } else if (a.kind() == BackendKind::Matrix) {
    j["matrix"] = encode_matrix(a.matrix());
  } else {
    Json modes = Json::array();
    for (const auto& [k, c] : a.modes()) modes.push_back(Json::array({Json(k), encode_complex(c)}));
    j["modes"] = std::move(modes);
  }
  return j;
}

AlgebraElement decode_element(const Json& j, const Backend& b) {
  return guarded([&] {
    if (j.is_number() || j.is_array()) return AlgebraElement::scalar(b, decode_complex(j));
    require(j.is_object() && j.size() == 1, ErrorKind::InvalidArgument,
            "element must be {\"scalar\"|\"matrix\"|\"modes\": ...}");
    if (j.contains("scalar")) return AlgebraElement::scalar(b, decode_complex(j["scalar"]));
    if (j.contains("matrix")) {
      require(b->kind() == BackendKind::Matrix, ErrorKind::BackendMismatch, "matrix element for a graded backend");
      Eigen::MatrixXcd m = decode_matrix(j["matrix"]);
      require(m.rows() == b->size() && m.cols() == b->size(), ErrorKind::BackendMismatch,
              "matrix element has the wrong size");
      return AlgebraElement::from_matrix(b, std::move(m));
    }
    if (j.contains("modes")) {
      require(b->kind() == BackendKind::Graded, ErrorKind::BackendMismatch, "mode element for a matrix backend");
      std::map<Mode, cplx> modes;
      for (const auto& entry : j["modes"]) {
        require(entry.is_array() && entry.size() == 2, ErrorKind::InvalidArgument, "mode entries are [k, c]");
        Mode k = entry[0].get<Mode>();
        require(static_cast<int>(k.size()) == b->dims(), ErrorKind::BackendMismatch, "mode has the wrong length");
        modes[k] += decode_complex(entry[1]);
      }
      return AlgebraElement::from_modes(b, std::move(modes));
    }
    fail(ErrorKind::InvalidArgument, "element must be {\"scalar\"|\"matrix\"|\"modes\": ...}");
  });
}

Json encode_backend(const Backend& b) {
  Json j = Json::object();
  if (b->kind() == BackendKind::Matrix) {
    j["kind"] = "matrix";
    j["size"] = b->size();
  } else {
    j["kind"] = "graded";
    j["dims"] = b->dims();
    j["twist"] = encode_real_matrix(b->twist());
    j["radius"] = b->radius();
  }
  j["tol"] = b->tol();
  return j;
}

Backend decode_backend(const Json& j) {
  return guarded([&] {
    const std::string kind = field(j, "kind").get<std::string>();
    const double tol = j.value("tol", kDefaultTol);
    if (kind == "matrix") {
      reject_unknown(j, {"kind", "size", "tol"}, "backend");
      const int size = field(j, "size").get<int>();
      require(size >= 1, ErrorKind::InvalidArgument, "matrix size must be >= 1");
      return BackendDescriptor::matrix(size, tol);
    }
    if (kind == "graded") {
      reject_unknown(j, {"kind", "dims", "twist", "radius", "tol"}, "backend");
      const int dims = field(j, "dims").get<int>();
      require(dims >= 1, ErrorKind::InvalidArgument, "dims must be >= 1");
      Eigen::MatrixXd twist = Eigen::MatrixXd::Zero(dims, dims);
      if (j.contains("twist")) {
        const auto& t = j["twist"];
        require(t.is_array() && static_cast<int>(t.size()) == dims, ErrorKind::InvalidArgument, "twist must be dims x dims");
        for (int r = 0; r < dims; ++r) {
          require(t[r].is_array() && static_cast<int>(t[r].size()) == dims, ErrorKind::InvalidArgument,
                  "twist must be dims x dims");
          for (int c = 0; c < dims; ++c) twist(r, c) = t[r][c].get<double>();
        }
      }
      return BackendDescriptor::graded(twist, field(j, "radius").get<int>(), tol);
    }
    fail(ErrorKind::InvalidArgument, "backend kind must be 'matrix' or 'graded'");
  });
}

Json encode_calculus(const CalculusSpec& spec) {
  Json j = Json::object();
  j["rank"] = spec.rank;
  j["two_form_rank"] = spec.two_form_rank;
  Json wedge = Json::array();
  for (const auto& c : spec.wedge) wedge.push_back(encode_matrix(c));
  j["wedge_constants"] = std::move(wedge);
  j["exterior_constants"] = encode_matrix(spec.exterior);
  Json ders = Json::array();
  for (const auto& d : spec.derivations) {
    Json e = Json::object();
    switch (d.kind()) {
      case Derivation::Kind::Inner:
        e["kind"] = "inner";
        e["element"] = encode_element(d.inner_element());
        break;
      case Derivation::Kind::Grading:
        e["kind"] = "grading";
        e["index"] = d.grading_index();
        break;
      case Derivation::Kind::Symbolic:
        e["kind"] = "symbolic";
        e["operator"] = encode_matrix(d.symbolic_operator());
        break;
    }
    ders.push_back(std::move(e));
  }
  j["derivations"] = std::move(ders);
  j["backend"] = encode_backend(spec.backend);
  Json gens = Json::array();
  for (const auto& g : spec.generators) gens.push_back(encode_element(g));
  j["generators"] = std::move(gens);
  if (spec.lie_structure) {
    Json lie = Json::array();
    for (const auto& f : *spec.lie_structure) lie.push_back(encode_matrix(f));
    j["lie_structure"] = std::move(lie);
  }
  return j;
}

CalculusSpec decode_calculus(const Json& j) {
  return guarded([&] {
    reject_unknown(j, {"rank", "two_form_rank", "wedge_constants", "exterior_constants", "derivations", "backend",
                       "generators", "lie_structure"},
                   "calculus");
    CalculusSpec s;
    s.rank = field(j, "rank").get<int>();
    s.two_form_rank = field(j, "two_form_rank").get<int>();
    s.backend = decode_backend(field(j, "backend"));
    for (const auto& c : field(j, "wedge_constants")) s.wedge.push_back(decode_matrix(c));
    s.exterior = decode_matrix(field(j, "exterior_constants"));
    if (s.exterior.size() == 0) s.exterior = Eigen::MatrixXcd::Zero(s.two_form_rank, s.rank);
    for (const auto& d : field(j, "derivations")) {
      const std::string kind = field(d, "kind").get<std::string>();
      if (kind == "inner") {
        s.derivations.push_back(Derivation::inner(decode_element(field(d, "element"), s.backend)));
      } else if (kind == "grading") {
        s.derivations.push_back(Derivation::grading(field(d, "index").get<int>()));
      } else if (kind == "symbolic") {
        s.derivations.push_back(Derivation::symbolic(s.backend, decode_matrix(field(d, "operator"))));
      } else {
        fail(ErrorKind::InvalidArgument, "derivation kind must be inner, grading or symbolic");
      }
    }
    if (j.contains("generators")) {
      for (const auto& g : j["generators"]) s.generators.push_back(decode_element(g, s.backend));
    }
    if (j.contains("lie_structure")) {
      std::vector<Eigen::MatrixXcd> lie;
      for (const auto& f : j["lie_structure"]) lie.push_back(decode_matrix(f));
      s.lie_structure = std::move(lie);
    }
    s.validate();
    return s;
  });
}

Json encode_metric(const MetricSpec& g) {
  Json rows = Json::array();
  for (int i = 0; i < g.rank(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < g.rank(); ++j) row.push_back(encode_element(g.at(i, j)));
    rows.push_back(std::move(row));
  }
  Json j = Json::object();
  j["components"] = std::move(rows);
  return j;
}

MetricSpec decode_metric(const Json& j, const CalculusSpec& spec) {
  return guarded([&] {
    reject_unknown(j, {"components"}, "metric");
    const Json& rows = field(j, "components");
    require(rows.is_array() && static_cast<int>(rows.size()) == spec.rank, ErrorKind::InvalidArgument,
            "metric components must be an n x n array");
    std::vector<AlgebraElement> c;
    for (const auto& row : rows) {
      require(row.is_array() && static_cast<int>(row.size()) == spec.rank, ErrorKind::InvalidArgument,
              "metric components must be an n x n array");
      for (const auto& e : row) c.push_back(decode_element(e, spec.backend));
    }
    return MetricSpec::build(spec, std::move(c));
  });
}

Json encode_gamma(const ConnectionCoeffs& c) {
  Json out = Json::array();
  for (int i = 0; i < c.n; ++i) {
    Json a = Json::array();
    for (int j = 0; j < c.n; ++j) {
      Json b = Json::array();
      for (int k = 0; k < c.n; ++k) b.push_back(encode_element(c.at(i, j, k).pruned(1e-15)));
      a.push_back(std::move(b));
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace nclc
