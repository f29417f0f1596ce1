#include "projsys/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace projsys::io {

namespace {

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) throw FormatError(field, "expected a number");
  return j.get<double>();
}

Vector vector_field(const json& obj, const std::string& field, std::optional<std::size_t> len) {
  if (!obj.contains(field)) throw FormatError(field, "missing");
  const json& j = obj.at(field);
  if (!j.is_array()) throw FormatError(field, "expected an array");
  if (len && j.size() != *len) {
    throw FormatError(field, "expected " + std::to_string(*len) + " entries, got " +
                                 std::to_string(j.size()));
  }
  Vector out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number_at(j[i], field + "[" + std::to_string(i + 1) + "]"));
  }
  return out;
}

Matrix matrix_field(const json& obj, const std::string& field, std::size_t k) {
  if (!obj.contains(field)) throw FormatError(field, "missing");
  const json& j = obj.at(field);
  const std::string shape = "expected a " + std::to_string(k) + "x" + std::to_string(k) +
                            " array of arrays";
  if (!j.is_array() || j.size() != k) throw FormatError(field, shape);
  Matrix m(k, k);
  for (std::size_t r = 0; r < k; ++r) {
    if (!j[r].is_array() || j[r].size() != k) {
      throw FormatError(field, shape + " (row " + std::to_string(r + 1) + " has " +
                                   (j[r].is_array() ? std::to_string(j[r].size()) + " entries"
                                                    : std::string("wrong type")) +
                                   ")");
    }
    for (std::size_t c = 0; c < k; ++c) {
      m(r, c) = number_at(j[r][c], field + "[" + std::to_string(r + 1) + "," +
                                       std::to_string(c + 1) + "]");
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(json(Vector(m.row(r).begin(), m.row(r).end())));
  }
  return rows;
}

std::optional<State> optional_state(const json& j, std::size_t dim) {
  if (!j.contains("x0")) return std::nullopt;
  State x0 = vector_field(j, "x0", dim);
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (!(x0[i] > 0.0) || !std::isfinite(x0[i])) {
      throw FormatError("x0", "entry " + std::to_string(i + 1) + " must be finite and positive");
    }
  }
  return x0;
}

AffineForm form_from_json(const json& j, const std::string& field, std::size_t dim) {
  if (!j.is_object()) throw FormatError(field, "expected an object with c and coeffs");
  if (!j.contains("c")) throw FormatError(field + ".c", "missing");
  return {number_at(j.at("c"), field + ".c"), vector_field(j, "coeffs", dim)};
}

json form_to_json(const AffineForm& f) { return {{"c", f.c}, {"coeffs", f.coeffs}}; }

}  // namespace

SpecFile spec_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("spec", "expected a JSON object");
  if (!j.contains("k")) throw FormatError("k", "missing");
  if (!j.at("k").is_number_unsigned() || j.at("k").get<std::size_t>() == 0) {
    throw FormatError("k", "expected a positive integer");
  }
  SpecFile out;
  const std::size_t k = j.at("k").get<std::size_t>();
  out.spec.k = k;
  out.spec.alpha = vector_field(j, "alpha", k);
  out.spec.beta = matrix_field(j, "beta", k);
  out.spec.A = vector_field(j, "A", k);
  out.spec.B = matrix_field(j, "B", k);
  out.x0 = optional_state(j, k);
  if (j.contains("labels")) {
    const json& labels = j.at("labels");
    if (!labels.is_array() || labels.size() != k) {
      throw FormatError("labels", "expected " + std::to_string(k) + " strings");
    }
    for (const auto& l : labels) {
      if (!l.is_string()) throw FormatError("labels", "expected strings");
      out.labels.push_back(l.get<std::string>());
    }
  }
  return out;
}

json to_json(const SpecFile& file) {
  const auto& s = file.spec;
  json j = {{"k", s.k},
            {"alpha", s.alpha},
            {"beta", matrix_to_json(s.beta)},
            {"A", s.A},
            {"B", matrix_to_json(s.B)}};
  if (file.x0) j["x0"] = *file.x0;
  if (!file.labels.empty()) j["labels"] = file.labels;
  return j;
}

ReducedFile reduced_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("spec", "expected a JSON object");
  if (!j.at("kind").is_string()) throw FormatError("kind", "expected a string");
  auto kind = reduced_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw FormatError("kind", "unknown reduced kind '" + j.at("kind").get<std::string>() + "'");
  if (!j.contains("components") || !j.at("components").is_array() || j.at("components").empty()) {
    throw FormatError("components", "expected a non-empty array");
  }
  ReducedFile out;
  out.system.kind = *kind;
  const std::size_t dim = j.at("components").size();
  if (!j.contains("pivot") || !j.at("pivot").is_number_unsigned()) {
    throw FormatError("pivot", "expected a positive integer");
  }
  out.system.pivot = j.at("pivot").get<std::size_t>();
  if (out.system.pivot < 1 || out.system.pivot > dim + 1) {
    throw FormatError("pivot", "must lie in 1.." + std::to_string(dim + 1));
  }
  for (std::size_t c = 0; c < dim; ++c) {
    const json& comp = j.at("components")[c];
    const std::string base = "components[" + std::to_string(c + 1) + "]";
    if (!comp.is_object()) throw FormatError(base, "expected an object");
    auto form = [&](const char* name) {
      if (!comp.contains(name)) throw FormatError(base + "." + name, "missing");
      return form_from_json(comp.at(name), base + "." + name, dim);
    };
    out.system.components.push_back({form("num_a"), form("num_b"), form("den_a"), form("den_b")});
  }
  out.x0 = optional_state(j, dim);
  return out;
}

json to_json(const ReducedFile& file) {
  json comps = json::array();
  for (const auto& c : file.system.components) {
    comps.push_back({{"num_a", form_to_json(c.num_a)},
                     {"num_b", form_to_json(c.num_b)},
                     {"den_a", form_to_json(c.den_a)},
                     {"den_b", form_to_json(c.den_b)}});
  }
  json j = {{"kind", to_string(file.system.kind)},
            {"pivot", file.system.pivot},
            {"components", comps}};
  if (file.x0) j["x0"] = *file.x0;
  return j;
}

SystemFile system_from_json(const json& j) {
  if (j.is_object() && j.contains("kind")) return reduced_from_json(j);
  return spec_from_json(j);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string(), "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

SystemFile load_system(const std::filesystem::path& path) {
  return system_from_json(read_json(path));
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError(path.string(), "cannot open file for writing");
  out << j.dump(2) << '\n';
  if (!out) throw FormatError(path.string(), "write failed");
}

json to_json(const ValidationReport& report) {
  json issues = json::array();
  for (const auto& issue : report.issues) {
    issues.push_back({{"field", issue.field}, {"index", issue.index}, {"message", issue.message}});
  }
  return {{"ok", report.ok()}, {"issues", issues}};
}

json to_json(const Breakdown& b) {
  return {{"step", b.step}, {"cause", to_string(b.cause)}, {"component", b.component + 1}};
}

json to_json(const LimitReport& report) {
  json j = {{"behavior", behavior_name(report.behavior)},
            {"steps_used", report.steps_used},
            {"tolerance", report.tolerance}};
  if (const auto* p = std::get_if<ConvergedPoint>(&report.behavior)) {
    j["limit"] = p->limit;
  } else if (const auto* p2 = std::get_if<ConvergedPeriod2>(&report.behavior)) {
    j["even"] = p2->even;
    j["odd"] = p2->odd;
  } else if (const auto* d = std::get_if<DivergentComponent>(&report.behavior)) {
    auto one_based = [](std::vector<std::size_t> v) {
      for (auto& i : v) ++i;
      return v;
    };
    j["to_infinity"] = one_based(d->to_infinity);
    j["to_zero"] = one_based(d->to_zero);
  }
  return j;
}

json to_json(const ConjugacyReport& report) {
  json j = {{"max_deviation", report.max_deviation},
            {"steps_compared", report.steps_compared},
            {"tolerance", report.tolerance},
            {"passed", report.passed}};
  if (report.breakdown) j["breakdown"] = to_json(*report.breakdown);
  return j;
}

json to_json(const Example2Params& p, const Example2Limits& l) {
  return {{"example", "ex2"},
          {"params", {{"C", p.C}, {"A", p.A}, {"D", p.D}, {"beta", p.beta}, {"alpha", p.alpha}}},
          {"limits", {{"x", l.x}, {"y", l.y}, {"z", l.z}, {"u", l.u}, {"v", l.v}}}};
}

json to_json(const Example3Analysis& a) {
  json j = {{"example", "ex3"},
            {"params", {{"alpha", a.params.alpha}, {"A1", a.params.A1}, {"A2", a.params.A2}}},
            {"case", to_string(a.regime)},
            {"rule", a.rule},
            {"P_coeffs", a.P},
            {"D_coeffs", a.D},
            {"w_m", a.w_m ? json(*a.w_m) : json(nullptr)},
            {"P_at_wm", a.P_at_wm ? json(*a.P_at_wm) : json(nullptr)}};
  j["roots"] = a.roots ? json::array({a.roots->first, a.roots->second}) : json::array();
  return j;
}

json to_json(const Example3Limits& l) {
  return {{"x", l.x}, {"y", l.y}, {"z", l.z ? json(*l.z) : json("unbounded")}};
}

json to_json(const Example4Params& p, const Example4Limits& l) {
  return {{"example", "ex4"},
          {"params", {{"A", p.A}, {"B", p.B}, {"C", p.C}, {"D", p.D}, {"z0", p.z0}}},
          {"u", l.u},
          {"v", l.v},
          {"even", l.even},
          {"odd", l.odd}};
}

namespace {

void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, os);
    }
    return;
  }
  os << prefix << " = ";
  if (j.is_string()) {
    os << j.get<std::string>();
  } else {
    os << j.dump();
  }
  os << '\n';
}

}  // namespace

std::string to_key_value(const json& j) {
  std::ostringstream os;
  flatten(j, "", os);
  return os.str();
}

}  // namespace projsys::io
