#include "devdec/io.hpp"

#include <fstream>
#include <sstream>

#include "devdec/closedform.hpp"

namespace devdec {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Json components(const Tensor& t) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < t.size(); ++i) a.push_back(t[i]);
  return a;
}

}  // namespace

Json to_json(const Tensor& t) { return {{"order", t.order()}, {"components", components(t)}}; }

Tensor tensor_from_json(const Json& j, const std::string& where) {
  const int order = integer(field(j, "order", where), where + ".order");
  if (order < 0 || order > kMaxOrder)
    fail(where + ".order", "must lie in [0, " + std::to_string(kMaxOrder) + "]");
  const Json& c = field(j, "components", where);
  if (!c.is_array()) fail(where + ".components", "expected an array");
  if (static_cast<Eigen::Index>(c.size()) != component_count(order))
    fail(where + ".components", "order " + std::to_string(order) + " needs " +
                                    std::to_string(component_count(order)) +
                                    " components, got " + std::to_string(c.size()));
  Tensor t(order);
  for (std::size_t i = 0; i < c.size(); ++i)
    t[static_cast<Eigen::Index>(i)] =
        number(c[i], where + ".components[" + std::to_string(i) + "]");
  return t;
}

Json to_json(const Decomposition& d) {
  Json parts = Json::array();
  for (const auto& p : d.parts)
    parts.push_back({{"s", p.s},
                     {"J", p.J},
                     {"deviator", to_json(p.deviator)},
                     {"embedded", to_json(p.embedded)}});
  return {{"order", d.order}, {"parts", parts}};
}

Decomposition decomposition_from_json(const Json& j) {
  Decomposition d;
  d.order = integer(field(j, "order", "decomposition"), "decomposition.order");
  if (d.order < 0 || d.order > kMaxOrder) fail("decomposition.order", "out of range");
  const Json& parts = field(j, "parts", "decomposition");
  if (!parts.is_array()) fail("decomposition.parts", "expected an array");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string where = "decomposition.parts[" + std::to_string(i) + "]";
    IrreduciblePart p;
    p.s = integer(field(parts[i], "s", where), where + ".s");
    p.J = integer(field(parts[i], "J", where), where + ".J");
    p.deviator = tensor_from_json(field(parts[i], "deviator", where), where + ".deviator");
    p.embedded = tensor_from_json(field(parts[i], "embedded", where), where + ".embedded");
    if (p.deviator.order() != p.s)
      fail(where + ".deviator.order", "differs from s = " + std::to_string(p.s));
    if (p.embedded.order() != d.order)
      fail(where + ".embedded.order", "differs from the decomposition order");
    d.parts.push_back(std::move(p));
  }
  return d;
}

Json to_json(const VerifyReport& r, double tolerance) {
  Json failures = Json::array();
  for (const auto& f : r.failures(tolerance)) failures.push_back(f);
  return {{"order", r.order},
          {"tolerance", tolerance},
          {"counts_ok", r.counts_ok},
          {"reconstruction_residual", r.reconstruction_residual},
          {"max_symmetry_residual", r.max_symmetry_residual},
          {"max_trace_residual", r.max_trace_residual},
          {"max_embedding_residual", r.max_embedding_residual},
          {"max_orthogonality", r.max_orthogonality},
          {"passed", failures.empty()},
          {"failures", failures}};
}

Json to_json(const StiffnessDeviators& d) {
  return {{"lambda", d.lambda},
          {"mu", d.mu},
          {"D1", to_json(d.D1)},
          {"D2", to_json(d.D2)},
          {"D4", to_json(d.D4)},
          {"norms", {{"D1", d.D1.norm()}, {"D2", d.D2.norm()}, {"D4", d.D4.norm()}}}};
}

Json to_json(const CouplingDeviators& d) {
  return {{"alpha", d.alpha},
          {"v1", to_json(d.v1)},
          {"v2", to_json(d.v2)},
          {"v3", to_json(d.v3)},
          {"D1", to_json(d.D1)},
          {"D2", to_json(d.D2)},
          {"D3", to_json(d.D3)},
          {"norms",
           {{"v1", d.v1.norm()},
            {"v2", d.v2.norm()},
            {"v3", d.v3.norm()},
            {"D1", d.D1.norm()},
            {"D2", d.D2.norm()},
            {"D3", d.D3.norm()}}}};
}

Json to_json(const CouplingCoefficientDiff& d) {
  Json entries = Json::array();
  for (const auto& e : d.entries)
    entries.push_back({{"field", e.field},
                       {"basis", e.basis},
                       {"printed", e.printed},
                       {"fitted", e.fitted},
                       {"difference", e.fitted - e.printed}});
  return {{"basis", "H = e_a e_b e_c + e_b e_a e_c, a <= b, indices 0-based"},
          {"tolerance", d.tolerance},
          {"entries", entries},
          {"printed_weights", d.printed_weights},
          {"fitted_weights", d.fitted_weights},
          {"literal_roundtrip_residual", d.literal_roundtrip},
          {"fitted_roundtrip_residual", d.fitted_roundtrip}};
}

Json to_json(const VoigtMatrix& m) {
  Json rows = Json::array();
  for (int a = 0; a < 6; ++a) {
    Json row = Json::array();
    for (int b = 0; b < 6; ++b) row.push_back(m(a, b));
    rows.push_back(row);
  }
  return rows;
}

VoigtMatrix voigt_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 6) fail("voigt", "expected an array of 6 rows");
  VoigtMatrix m;
  for (int a = 0; a < 6; ++a) {
    const std::string where = "voigt[" + std::to_string(a) + "]";
    if (!j[a].is_array() || j[a].size() != 6) fail(where, "expected 6 numbers");
    for (int b = 0; b < 6; ++b) m(a, b) = number(j[a][b], where + "[" + std::to_string(b) + "]");
  }
  return m;
}

VoigtMatrix voigt_from_text(const std::string& text, const std::string& source) {
  VoigtMatrix m;
  std::istringstream in(text);
  std::string line;
  int row = 0, line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (row == 6) fail(where, "more than 6 rows");
    std::istringstream fields(line);
    std::string token;
    int col = 0;
    while (fields >> token) {
      if (col == 6) fail(where, "more than 6 numbers");
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) fail(where, "not a number: \"" + token + "\"");
      m(row, col++) = v;
    }
    if (col != 6) fail(where, "expected 6 numbers, got " + std::to_string(col));
    ++row;
  }
  if (row != 6) fail(source, "expected 6 rows, got " + std::to_string(row));
  return m;
}

VoigtMatrix parse_voigt(const std::string& text, const std::string& source) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    const Json j = parse_json(text, source);
    try {
      return voigt_from_json(j);
    } catch (const InputError& e) {
      throw InputError(source + ": " + e.what());
    }
  }
  return voigt_from_text(text, source);
}

Json closed_form_coefficients_json() {
  Json out = Json::object();
  for (int order : {3, 4}) {
    const auto terms = closed_form_terms(order);
    const auto coeff = structural_coefficients(order);
    Json list = Json::array();
    for (std::size_t i = 0; i < terms.size(); ++i)
      list.push_back({{"s", terms[i].s},
                      {"J", terms[i].J},
                      {"term", terms[i].expression},
                      {"coefficient", coeff[i]}});
    out["order" + std::to_string(order)] = list;
  }
  return out;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open file for writing");
  out << content;
  if (!out) throw InputError(path + ": write failed");
}

}  // namespace devdec
