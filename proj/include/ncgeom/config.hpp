#pragma once

// Experiment configs: JSON text -> validated ExperimentConfig. Syntax
// errors report line and column; semantic errors report the JSON pointer
// of the offending field.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncgeom/domains.hpp"
#include "ncgeom/json_io.hpp"
#include "ncgeom/ncmap.hpp"

namespace ncgeom {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"dw",      "wolff",         "metrics_equiv", "horo",
                                              "retract", "maxball_probe", "oracle_equiv"};
  return names;
}

struct ExperimentConfig {
  std::string experiment;
  std::optional<Domain<double>> domain;
  std::optional<NcMap<double>> map;
  std::vector<int> levels;
  std::uint64_t seed = 0;
  json tolerances;
  json params;
  std::string output_dir = "reports";
  std::string output_name;
  json resolved;  // the full config with defaults filled in
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& path, const std::string& why) {
  throw invalid_input("config error at " + (path.empty() ? std::string("/") : path) + ": " + why);
}

inline const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) field_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(path + "/" + key, "missing field");
  return *it;
}

inline int int_field(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_number_integer()) field_error(path + "/" + key, "expected an integer");
  return v.get<int>();
}

inline std::string string_field(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_string()) field_error(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

inline std::complex<double> complex_value(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  field_error(path, "expected a number or a [re, im] pair");
}

inline std::vector<std::complex<double>> complex_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) field_error(path, "expected a nonempty list of complex numbers");
  std::vector<std::complex<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(complex_value(v[i], path + "/" + std::to_string(i)));
  return out;
}

/// Largest letter index xN in a polynomial string (0 when none).
inline int max_letter(const std::string& s) {
  int best = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != 'x') continue;
    std::size_t j = i + 1;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i + 1) best = std::max(best, std::stoi(s.substr(i + 1, j - i - 1)));
  }
  return best;
}

inline FreePolynomial<double> poly_value(const json& v, const std::string& path, int d) {
  if (!v.is_string()) field_error(path, "expected a polynomial string");
  try {
    return parse_polynomial(v.get<std::string>(), d);
  } catch (const invalid_input& e) {
    field_error(path, e.what());
  }
}

/// p x q grid of polynomial strings; d from "d" or the largest letter used.
inline NcMap<double> parse_matrix_poly(const json& j, const std::string& path, std::optional<int> d_hint) {
  const int p = int_field(j, path, "p");
  const int q = int_field(j, path, "q");
  const json& grid = field(j, path, "grid");
  if (!grid.is_array() || static_cast<int>(grid.size()) != p) field_error(path + "/grid", "expected p rows");
  int d = 0;
  if (j.contains("d")) {
    d = int_field(j, path, "d");
  } else if (d_hint) {
    d = *d_hint;
  } else {
    for (const auto& row : grid)
      if (row.is_array())
        for (const auto& e : row)
          if (e.is_string()) d = std::max(d, max_letter(e.get<std::string>()));
  }
  if (d < 1) field_error(path + "/d", "alphabet size must be positive");
  std::vector<std::vector<FreePolynomial<double>>> g;
  for (int i = 0; i < p; ++i) {
    const std::string rp = path + "/grid/" + std::to_string(i);
    if (!grid[i].is_array() || static_cast<int>(grid[i].size()) != q) field_error(rp, "expected q entries");
    g.emplace_back();
    for (int k = 0; k < q; ++k) g.back().push_back(poly_value(grid[i][k], rp + "/" + std::to_string(k), d));
  }
  try {
    return NcMap<double>::matrix_poly(p, q, std::move(g));
  } catch (const invalid_input& e) {
    field_error(path, e.what());
  }
}

}  // namespace detail

/// NcMap from its JSON description:
///   {"type":"polynomial","d":2,"outputs":["0.5*x1","x2*x1"]}
///   {"type":"matrix_poly","d":2,"p":1,"q":2,"grid":[["x1","x2"]]}
///   {"type":"mobius","a":[0.5, [0, 0.1]]}
///   {"type":"compose","outer":{..},"inner":{..}}
///   {"type":"affine","terms":[{"weight":-1,"map":{..}}, ..]}
///   {"type":"identity","d":2}
///   {"type":"linear","M":[[..],[..]], "c":[..]}
inline NcMap<double> parse_map(const json& j, const std::string& path = "") {
  using namespace detail;
  const std::string type = string_field(j, path, "type");
  try {
    if (type == "polynomial") {
      const json& outs = field(j, path, "outputs");
      if (!outs.is_array() || outs.empty()) field_error(path + "/outputs", "expected a nonempty list");
      int d = 0;
      if (j.contains("d")) {
        d = int_field(j, path, "d");
      } else {
        for (const auto& o : outs)
          if (o.is_string()) d = std::max(d, max_letter(o.get<std::string>()));
        d = std::max(d, static_cast<int>(outs.size()));
      }
      if (d < 1) field_error(path + "/d", "alphabet size must be positive");
      std::vector<FreePolynomial<double>> o;
      for (std::size_t i = 0; i < outs.size(); ++i) o.push_back(poly_value(outs[i], path + "/outputs/" + std::to_string(i), d));
      return NcMap<double>::polynomial(std::move(o));
    }
    if (type == "matrix_poly") return parse_matrix_poly(j, path, std::nullopt);
    if (type == "mobius") return NcMap<double>::mobius(complex_list(field(j, path, "a"), path + "/a"));
    if (type == "compose")
      return NcMap<double>::compose(parse_map(field(j, path, "outer"), path + "/outer"),
                                    parse_map(field(j, path, "inner"), path + "/inner"));
    if (type == "affine") {
      const json& terms = field(j, path, "terms");
      if (!terms.is_array() || terms.empty()) field_error(path + "/terms", "expected a nonempty list");
      std::vector<std::pair<std::complex<double>, NcMap<double>>> t;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = path + "/terms/" + std::to_string(i);
        t.emplace_back(complex_value(field(terms[i], tp, "weight"), tp + "/weight"),
                       parse_map(field(terms[i], tp, "map"), tp + "/map"));
      }
      return NcMap<double>::affine(std::move(t));
    }
    if (type == "identity") return identity_map<double>(int_field(j, path, "d"));
    if (type == "linear") {
      const json& m = field(j, path, "M");
      if (!m.is_array() || m.empty() || !m[0].is_array()) field_error(path + "/M", "expected a matrix (list of rows)");
      const auto rows = static_cast<Eigen::Index>(m.size()), cols = static_cast<Eigen::Index>(m[0].size());
      CMatrix<double> mm(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        const std::string rp = path + "/M/" + std::to_string(r);
        if (!m[r].is_array() || static_cast<Eigen::Index>(m[r].size()) != cols) field_error(rp, "ragged matrix row");
        for (Eigen::Index c = 0; c < cols; ++c) mm(r, c) = complex_value(m[r][c], rp + "/" + std::to_string(c));
      }
      std::vector<std::complex<double>> c;
      if (j.contains("c")) c = complex_list(j["c"], path + "/c");
      if (!c.empty() && static_cast<Eigen::Index>(c.size()) != rows) field_error(path + "/c", "needs one entry per row");
      return linear_map<double>(mm, c);
    }
  } catch (const json::exception& e) {
    field_error(path, e.what());
  } catch (const invalid_input& e) {
    if (std::string(e.what()).rfind("config error", 0) == 0) throw;
    field_error(path, e.what());
  }
  field_error(path + "/type", "unknown map type \"" + type + "\"");
}

/// Domain from its JSON description:
///   {"type":"row_ball","d":2} | {"type":"max_ball","d":2}
///   {"type":"dq","Q":{"p":1,"q":2,"grid":[["1*x1","1*x2"]]}} | {"type":"hl","L":{..}}
inline Domain<double> parse_domain(const json& j, const std::string& path = "") {
  using namespace detail;
  const std::string type = string_field(j, path, "type");
  std::optional<int> d_hint;
  if (j.contains("d")) d_hint = int_field(j, path, "d");
  try {
    if (type == "row_ball") return Domain<double>::row_ball(int_field(j, path, "d"));
    if (type == "max_ball") return Domain<double>::max_ball(int_field(j, path, "d"));
    if (type == "dq") return Domain<double>::dq(parse_matrix_poly(field(j, path, "Q"), path + "/Q", d_hint));
    if (type == "hl") return Domain<double>::hl(parse_matrix_poly(field(j, path, "L"), path + "/L", d_hint));
  } catch (const invalid_input& e) {
    if (std::string(e.what()).rfind("config error", 0) == 0) throw;
    field_error(path, e.what());
  }
  field_error(path + "/type", "unknown domain type \"" + type + "\"");
}

/// Default experiment parameters; user values override these.
inline json default_params(const std::string& experiment) {
  if (experiment == "dw") return {{"max_iter", 20000}, {"tol", 1e-12}, {"residual_tol", 1e-5}, {"start_radius", 0.5}};
  if (experiment == "wolff")
    return {{"R", 1.5}, {"samples", 50}, {"n_iters", 30}, {"triangle_triples", 200}, {"sample_fraction", 0.95}};
  if (experiment == "metrics_equiv")
    return {{"pairs", 50},        {"radius", 0.8},       {"max_points", 256},
            {"quad_points", 64},  {"chain_slack", 1e-3}, {"path_slack", 5e-2}};
  if (experiment == "oracle_equiv") return {{"cases", 300}, {"radius", 0.8}, {"direction_scale", 1.0}, {"tol", 1e-6}};
  if (experiment == "horo")
    return {{"R", 1.0}, {"points", 100}, {"radius", 0.9}, {"agreement_tol", 2e-2}, {"schedule_points", 14}};
  if (experiment == "retract")
    return {{"m", 2}, {"iters", 200}, {"test_points", 50}, {"radius", 0.9}, {"defect_tol", 1e-6}};
  if (experiment == "maxball_probe")
    return {{"points", 500}, {"restarts", 64}, {"epsilons", {0.1, 0.01}}, {"radius", 0.95}, {"agreement_tol", 1e-9}};
  return json::object();
}

inline bool experiment_needs_map(const std::string& e) { return e == "dw" || e == "wolff" || e == "retract"; }

/// Validates a parsed JSON config and resolves defaults.
inline ExperimentConfig load_config(const json& j) {
  using namespace detail;
  if (!j.is_object()) field_error("", "config must be a JSON object");
  ExperimentConfig c;
  c.experiment = string_field(j, "", "experiment");
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end())
    field_error("/experiment", "unknown experiment \"" + c.experiment + "\"");
  c.domain = parse_domain(field(j, "", "domain"), "/domain");
  const int d = c.domain->dim();
  if (j.contains("map")) {
    c.map = parse_map(j["map"], "/map");
    if (c.map->in_dim() != d)
      field_error("/map", "map takes " + std::to_string(c.map->in_dim()) + " coordinates but the domain has d = " +
                              std::to_string(d));
    if (experiment_needs_map(c.experiment) && (!c.map->is_tuple_valued() || c.map->out_dim() != d))
      field_error("/map", "experiment needs a self-map with " + std::to_string(d) + " outputs");
  } else if (experiment_needs_map(c.experiment)) {
    field_error("/map", "missing field (required by experiment \"" + c.experiment + "\")");
  }
  c.levels = {1};
  if (j.contains("levels")) {
    const json& lv = j["levels"];
    if (!lv.is_array() || lv.empty()) field_error("/levels", "expected a nonempty list of integers");
    c.levels.clear();
    for (std::size_t i = 0; i < lv.size(); ++i) {
      if (!lv[i].is_number_integer() || lv[i].get<int>() < 1)
        field_error("/levels/" + std::to_string(i), "levels must be integers >= 1");
      c.levels.push_back(lv[i].get<int>());
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      field_error("/seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  c.tolerances = json{{"boundary_tol", default_boundary_tol}};
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) field_error("/tolerances", "expected an object");
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number()) field_error("/tolerances/" + k, "expected a number");
      c.tolerances[k] = v;
    }
  }
  c.params = default_params(c.experiment);
  if (j.contains("params")) {
    if (!j["params"].is_object()) field_error("/params", "expected an object");
    for (const auto& [k, v] : j["params"].items()) {
      if (c.params.contains(k) && c.params[k].is_number() != v.is_number() && k != "zeta")
        field_error("/params/" + k, "expected a number");
      c.params[k] = v;
    }
  }
  c.output_name = c.experiment;
  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) field_error("/output", "expected an object");
    if (o.contains("dir")) c.output_dir = string_field(o, "/output", "dir");
    if (o.contains("name")) c.output_name = string_field(o, "/output", "name");
  }
  if (c.output_name.empty() || c.output_name.find('/') != std::string::npos)
    field_error("/output/name", "must be a nonempty file stem");
  c.resolved = j;
  c.resolved["levels"] = c.levels;
  c.resolved["seed"] = c.seed;
  c.resolved["tolerances"] = c.tolerances;
  c.resolved["params"] = c.params;
  c.resolved["output"] = {{"dir", c.output_dir}, {"name", c.output_name}};
  return c;
}

/// Parses config text; syntax errors carry line and column.
inline ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw invalid_input("config parse error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                        ": " + e.what());
  }
  return load_config(j);
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ncgeom
