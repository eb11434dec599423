#pragma once

// Experiment runners behind the ncgeom CLI. Each runner turns a validated
// config into a Report (JSON body, optional CSV rows and JSONL trace lines,
// violation count); write_report persists it only after the run succeeded.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "ncgeom/config.hpp"
#include "ncgeom/horospheres.hpp"

namespace ncgeom {

struct CsvRow {
  int case_id;
  std::string method;
  double value;
  double oracle_value;
  double abs_err;
  std::uint64_t seed;
};

struct Report {
  json result = json::object();
  std::vector<CsvRow> rows;
  std::vector<json> trace;
  int violations = 0;
  std::vector<std::string> violation_notes;

  void violate(std::string note) {
    ++violations;
    if (violation_notes.size() < 100) violation_notes.push_back(std::move(note));
  }
};

/// Deterministic per-case seed (splitmix64 of seed and case id).
inline std::uint64_t case_seed(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (id + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace detail {

inline double num(const ExperimentConfig& c, const char* key) { return c.params.at(key).get<double>(); }
inline int inum(const ExperimentConfig& c, const char* key) {
  const json& v = c.params.at(key);
  if (!v.is_number_integer() || v.get<int>() < 0)
    throw invalid_input(std::string("config error at /params/") + key + ": expected a nonnegative integer");
  return v.get<int>();
}

inline Eigen::Index level_for(const ExperimentConfig& c, int i) {
  return c.levels[static_cast<std::size_t>(i) % c.levels.size()];
}

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline Report run_dw(const ExperimentConfig& c) {
  using detail::num;
  const auto& f = *c.map;
  const auto& dom = *c.domain;
  const double tol = num(c, "tol");
  DenjoyWolffOptions o;
  o.max_iter = detail::inum(c, "max_iter");
  o.start_radius = num(c, "start_radius");
  o.seed = case_seed(c.seed, 0);
  const auto dw = denjoy_wolff_point(f, dom, tol, o);
  Report rep;
  rep.result["classification"] = to_string(dw.classification);
  rep.result["zeta"] = to_json(dw.point);
  rep.result["orbit_limit_diameter"] = static_cast<double>(dw.limit_diameter);
  json levels = json::array();
  for (std::size_t li = 0; li < c.levels.size(); ++li) {
    const int n = c.levels[li];
    const auto tr = iterate(f, dom, MatrixTuple<double>::zero(dom.dim(), n), o.max_iter, tol);
    const double residual = max_abs_diff<double>(tr.limit, ampliate(dw.point, n));
    levels.push_back({{"n", n},
                      {"iterations", tr.iterations},
                      {"verdict", to_string(tr.verdict)},
                      {"residual", residual}});
    if (dw.classification == DWClass::BoundaryDW && !(residual < num(c, "residual_tol")))
      rep.violate("level " + std::to_string(n) + ": limit residual " + detail::fmt(residual));
    for (std::size_t k = 0; k < tr.step_sizes.size(); ++k) {
      json line{{"level", n}, {"k", static_cast<int>(k + 1)}, {"point", to_json(tr.points[k + 1])}};
      line["step_delta"] = tr.step_deltas[k] ? json(*tr.step_deltas[k]) : json(nullptr);
      line["margin"] = tr.margins[k];
      rep.trace.push_back(std::move(line));
    }
  }
  rep.result["levels"] = std::move(levels);
  return rep;
}

inline Report run_wolff(const ExperimentConfig& c) {
  using detail::num;
  using LD = long double;
  // Deep iterates sit within 1e-15 of the boundary point; extended
  // precision keeps their defect operators above the floor.
  const auto f = c.map->cast<LD>();
  const auto dom = c.domain->cast<LD>();
  WolffExperimentOptions o;
  o.levels = c.levels;
  o.seed = case_seed(c.seed, 0);
  o.triangle_triples = detail::inum(c, "triangle_triples");
  o.sample_fraction = num(c, "sample_fraction");
  const auto r = wolff_experiment(f, dom, LD(num(c, "R")), detail::inum(c, "samples"), detail::inum(c, "n_iters"), o);
  Report rep;
  rep.result["xi"] = to_json(r.xi.cast<double>());
  rep.result["R"] = static_cast<double>(r.R);
  rep.result["wolff_points"] = json::array();
  for (std::size_t i = 0; i < r.wolff.radii.size(); ++i)
    rep.result["wolff_points"].push_back({{"r", static_cast<double>(r.wolff.radii[i])},
                                          {"w", to_json(r.wolff.fixed_points[i].cast<double>())},
                                          {"distance_to_xi", static_cast<double>(r.wolff.distances[i])}});
  rep.result["denjoy_wolff_mismatch"] = static_cast<double>(r.wolff.dw_mismatch);
  json samples = json::array();
  for (const auto& s : r.samples) {
    json verdicts = json::array(), tail = json::array();
    for (auto v : s.verdicts) verdicts.push_back(to_string(v));
    for (auto v : s.ratio_tail) tail.push_back(static_cast<double>(v));
    samples.push_back({{"Z_id", s.id}, {"level", s.level}, {"verdicts_per_iterate", verdicts}, {"ratio_tail", tail}});
  }
  rep.result["samples"] = std::move(samples);
  json viol = json::array();
  for (const auto& v : r.violations) {
    viol.push_back({{"Z_id", v.sample_id}, {"iterate", v.iterate}, {"liminf_est", static_cast<double>(v.liminf_est)},
                    {"detail", v.detail}});
    rep.violate("sample " + std::to_string(v.sample_id) + " iterate " + std::to_string(v.iterate) + " is Outside");
  }
  rep.result["violations"] = std::move(viol);
  rep.result["triangle"] = {{"checked", r.triangle.checked},
                            {"violations", r.triangle.violations},
                            {"max_excess", static_cast<double>(r.triangle.max_excess)}};
  for (int i = 0; i < r.triangle.violations; ++i) rep.violate("triangle bound violated");
  return rep;
}

inline Report run_metrics_equiv(const ExperimentConfig& c) {
  using detail::num;
  const auto& dom = *c.domain;
  const int pairs = detail::inum(c, "pairs");
  const int max_points = detail::inum(c, "max_points");
  const int quad = detail::inum(c, "quad_points");
  Report rep;
  int ok = 0;
  for (int i = 0; i < pairs; ++i) {
    const auto s = case_seed(c.seed, static_cast<std::uint64_t>(i));
    Rng rng(s);
    const auto n = detail::level_for(c, i);
    const auto x = sample_interior(dom, n, rng, num(c, "radius"));
    const auto y = sample_interior(dom, n, rng, num(c, "radius"));
    const double chain = chain_distance(dom, x, y, max_points).value;
    const double path = path_distance(dom, x, y, quad).value;
    rep.rows.push_back({i, "chain", chain, path, std::abs(chain - path), s});
    rep.rows.push_back({i, "path", path, chain, std::abs(chain - path), s});
    bool good = true;
    if (chain > path + num(c, "chain_slack")) {
      good = false;
      rep.violate("case " + std::to_string(i) + ": chain exceeds path");
    }
    if (path > std::numbers::pi * chain + num(c, "path_slack")) {
      good = false;
      rep.violate("case " + std::to_string(i) + ": path exceeds pi * chain");
    }
    ok += good;
  }
  rep.result["pairs"] = pairs;
  rep.result["passing"] = ok;
  return rep;
}

inline Report run_oracle_equiv(const ExperimentConfig& c) {
  using detail::num;
  const auto& dom = *c.domain;
  const int cases = detail::inum(c, "cases");
  Report rep;
  double worst = 0;
  for (int i = 0; i < cases; ++i) {
    const auto s = case_seed(c.seed, static_cast<std::uint64_t>(i));
    Rng rng(s);
    const auto n = detail::level_for(c, i), m = detail::level_for(c, i + 1);
    const auto x = sample_interior(dom, n, rng, num(c, "radius"));
    const auto y = sample_interior(dom, m, rng, num(c, "radius"));
    const auto z = random_direction<double>(dom.dim(), n, m, num(c, "direction_scale"), rng);
    const double closed = lempert_delta(dom, x, y, z).value;
    const double oracle = lempert_delta_oracle(dom, x, y, z).value;
    const double err = std::abs(closed - oracle);
    worst = std::max(worst, err);
    rep.rows.push_back({i, dom.is_max_ball() ? "bisection" : "closed_form", closed, oracle, err, s});
    if (!(err < num(c, "tol"))) rep.violate("case " + std::to_string(i) + ": |closed - oracle| = " + detail::fmt(err));
  }
  rep.result["cases"] = cases;
  rep.result["max_abs_err"] = worst;
  return rep;
}

inline Report run_horo(const ExperimentConfig& c) {
  using detail::num;
  const auto& dom = *c.domain;
  const int d = dom.dim();
  std::vector<Complex<double>> zeta(static_cast<std::size_t>(d), 0.0);
  zeta[0] = 1.0;
  if (c.params.contains("zeta")) zeta = detail::complex_list(c.params["zeta"], "/params/zeta");
  if (static_cast<int>(zeta.size()) != d) throw invalid_input("config error at /params/zeta: needs d entries");
  const auto sched = default_schedule<double>(detail::inum(c, "schedule_points"));
  const double t_last = sched.back();
  const int points = detail::inum(c, "points");
  Report rep;
  json counts = {{"InSmall", 0}, {"InBigOnly", 0}, {"Outside", 0}, {"Inconclusive", 0}};
  json per_point = json::array();
  for (int i = 0; i < points; ++i) {
    const auto s = case_seed(c.seed, static_cast<std::uint64_t>(i));
    Rng rng(s);
    const auto z = sample_interior(dom, detail::level_for(c, i), rng, num(c, "radius"));
    HorosphereQuery<double> q{dom, zeta, num(c, "R"), z, sched};
    const auto est = horosphere_membership(q);
    counts[to_string(est.verdict)] = counts[to_string(est.verdict)].get<int>() + 1;
    std::vector<Complex<double>> w(zeta);
    for (auto& v : w) v *= t_last;
    const double sampled = horosphere_ratio(dom, z, MatrixTuple<double>::scalar(w));
    const double limit = est.liminf_est;
    const double err = std::abs(sampled - limit);
    rep.rows.push_back({i, est.closed_form ? "schedule_vs_closed_form" : "schedule_vs_tail", sampled, limit, err, s});
    per_point.push_back({{"id", i}, {"level", z.level()}, {"verdict", to_string(est.verdict)},
                         {"liminf_est", est.liminf_est}, {"limsup_est", est.limsup_est}});
    if (est.closed_form && !(err < num(c, "agreement_tol")))
      rep.violate("point " + std::to_string(i) + ": schedule ratio differs from the closed form by " + detail::fmt(err));
  }
  rep.result["verdict_counts"] = counts;
  rep.result["points"] = std::move(per_point);
  return rep;
}

inline Report run_retract(const ExperimentConfig& c) {
  using detail::num;
  const auto& f = *c.map;
  const auto& dom = *c.domain;
  const int m = detail::inum(c, "m");
  const auto phi = cesaro_average(f, m);
  std::vector<MatrixTuple<double>> tests;
  Rng rng(case_seed(c.seed, 0));
  for (int i = 0; i < detail::inum(c, "test_points"); ++i)
    tests.push_back(sample_interior(dom, detail::level_for(c, i), rng, num(c, "radius")));
  std::vector<MatrixTuple<double>> fixed;
  if (c.params.contains("fixed_points"))
    for (const auto& p : c.params["fixed_points"]) fixed.push_back(tuple_from_json<double>(p));
  const auto r = retraction_limit(phi, dom, detail::inum(c, "iters"), tests, fixed);
  // The image of psi should consist of fixed points of f.
  double image_defect = 0;
  for (const auto& x : tests) {
    const auto y = evaluate(r.psi, x);
    image_defect = std::max(image_defect, max_abs_diff<double>(evaluate(f, y), y));
  }
  Report rep;
  rep.result = {{"m", m},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"cauchy_defect", r.cauchy_defect},
                {"idempotency_defect", r.idempotency_defect},
                {"fixed_set_defect", r.fixed_set_defect},
                {"image_fixed_defect", image_defect},
                {"psi", describe(r.psi)}};
  const double dt = num(c, "defect_tol");
  if (!(r.idempotency_defect < dt)) rep.violate("idempotency defect " + detail::fmt(r.idempotency_defect));
  if (!(r.fixed_set_defect < dt)) rep.violate("fixed set defect " + detail::fmt(r.fixed_set_defect));
  if (!(image_defect < dt)) rep.violate("image of psi is not fixed by f: " + detail::fmt(image_defect));
  return rep;
}

inline Report run_maxball_probe(const ExperimentConfig& c) {
  using detail::num;
  const auto& dom = *c.domain;
  if (!dom.is_max_ball()) throw invalid_input("config error at /domain/type: maxball_probe needs a max_ball domain");
  const int d = dom.dim();
  MaxBallOptions mo;
  mo.restarts = detail::inum(c, "restarts");
  Report rep;
  // (I, eps E_12, 0, ...) sits outside although its row norm is near 1.
  json eps_out = json::array();
  if (d >= 2) {
    for (const auto& e : c.params.at("epsilons")) {
      const double eps = e.get<double>();
      std::vector<CMatrix<double>> coords(static_cast<std::size_t>(d), CMatrix<double>::Zero(2, 2));
      coords[0] = CMatrix<double>::Identity(2, 2);
      coords[1](0, 1) = eps;
      const auto v = contains(dom, MatrixTuple<double>(coords), default_boundary_tol, mo);
      eps_out.push_back({{"epsilon", eps}, {"verdict", to_string(v.status)}, {"margin", v.margin}});
      if (v.status != Membership::Exterior) rep.violate("(I, eps E12) not rejected at eps = " + detail::fmt(eps));
    }
  }
  rep.result["boundary_probes"] = std::move(eps_out);
  const int points = detail::inum(c, "points");
  double worst_level1 = 0;
  int inclusion_failures = 0;
  for (int i = 0; i < points; ++i) {
    const auto s = case_seed(c.seed, static_cast<std::uint64_t>(i));
    Rng rng(s);
    mo.seed = s;
    const auto z = random_tuple<double>(d, 1, num(c, "radius"), rng);
    const double sup = max_ball_support(z, mo).value;
    const double eu = row_norm(z);
    worst_level1 = std::max(worst_level1, std::abs(sup - eu));
    rep.rows.push_back({2 * i, "level1_support", sup, eu, std::abs(sup - eu), s});
    if (!(std::abs(sup - eu) < num(c, "agreement_tol"))) rep.violate("level-1 support differs from the Euclidean norm");
    const auto x = random_tuple<double>(d, detail::level_for(c, i), num(c, "radius"), rng);
    const auto v = contains(dom, x, default_boundary_tol, mo);
    const double xs = 1 - v.margin, rn = row_norm(x);
    rep.rows.push_back({2 * i + 1, "rowball_inclusion", xs, rn, std::max(0.0, xs - rn), s});
    if (v.status != Membership::Interior) {
      ++inclusion_failures;
      rep.violate("row-ball point rejected by MaxBall");
    }
  }
  rep.result["level1_max_abs_err"] = worst_level1;
  rep.result["inclusion_failures"] = inclusion_failures;
  return rep;
}

inline Report run_experiment(const ExperimentConfig& c) {
  if (c.experiment == "dw") return run_dw(c);
  if (c.experiment == "wolff") return run_wolff(c);
  if (c.experiment == "metrics_equiv") return run_metrics_equiv(c);
  if (c.experiment == "oracle_equiv") return run_oracle_equiv(c);
  if (c.experiment == "horo") return run_horo(c);
  if (c.experiment == "retract") return run_retract(c);
  if (c.experiment == "maxball_probe") return run_maxball_probe(c);
  throw invalid_input("unknown experiment " + c.experiment);
}

// ---------------------------------------------------------------------------
// Output

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::filesystem::path report_dir(const ExperimentConfig& c) {
  if (const char* env = std::getenv("NCGEOM_REPORT_DIR"); env && *env) return env;
  return c.output_dir;
}

struct WrittenFiles {
  std::vector<std::filesystem::path> paths;
};

namespace detail {

inline void write_atomic(const std::filesystem::path& path, const std::string& body) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw invalid_input("cannot write " + tmp);
    out << body;
    if (!out) throw invalid_input("failed writing " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// Writes <name>.json and, when present, <name>.csv and <name>.jsonl.
/// The timestamp lives only in the header / comment lines.
inline WrittenFiles write_report(const ExperimentConfig& c, const Report& rep, const std::string& timestamp) {
  const auto dir = report_dir(c);
  std::filesystem::create_directories(dir);
  WrittenFiles out;
  json doc{{"header", {{"tool", "ncgeom"}, {"timestamp", timestamp}}},
           {"config", c.resolved},
           {"experiment", c.experiment},
           {"result", rep.result},
           {"violations", rep.violations},
           {"violation_notes", rep.violation_notes}};
  const auto jpath = dir / (c.output_name + ".json");
  detail::write_atomic(jpath, doc.dump(2) + "\n");
  out.paths.push_back(jpath);
  if (!rep.rows.empty()) {
    std::string csv = "# timestamp: " + timestamp + "\n# config: " + c.resolved.dump() + "\n";
    csv += "case_id,method,value,oracle_value,abs_err,seed\n";
    for (const auto& r : rep.rows)
      csv += std::to_string(r.case_id) + "," + r.method + "," + detail::fmt(r.value) + "," + detail::fmt(r.oracle_value) +
             "," + detail::fmt(r.abs_err) + "," + std::to_string(r.seed) + "\n";
    const auto cpath = dir / (c.output_name + ".csv");
    detail::write_atomic(cpath, csv);
    out.paths.push_back(cpath);
  }
  if (!rep.trace.empty()) {
    std::string body;
    for (const auto& line : rep.trace) body += line.dump() + "\n";
    const auto tpath = dir / (c.output_name + ".jsonl");
    detail::write_atomic(tpath, body);
    out.paths.push_back(tpath);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Built-in showcase configs

inline json demo_config(const std::string& experiment) {
  const json hyperbolic = {{"type", "affine"},
                           {"terms", {{{"weight", -1}, {"map", {{"type", "mobius"}, {"a", {-0.5}}}}}}}};
  if (experiment == "dw")
    return {{"experiment", "dw"}, {"domain", {{"type", "row_ball"}, {"d", 1}}}, {"map", hyperbolic},
            {"levels", {1, 2, 3}}, {"seed", 7}};
  if (experiment == "wolff")
    return {{"experiment", "wolff"}, {"domain", {{"type", "row_ball"}, {"d", 1}}}, {"map", hyperbolic},
            {"levels", {1, 2}}, {"seed", 11}, {"params", {{"R", 1.5}, {"samples", 20}, {"n_iters", 30}, {"triangle_triples", 50}}}};
  if (experiment == "metrics_equiv")
    return {{"experiment", "metrics_equiv"}, {"domain", {{"type", "row_ball"}, {"d", 1}}}, {"levels", {1}},
            {"seed", 3}, {"params", {{"pairs", 50}}}};
  if (experiment == "oracle_equiv")
    return {{"experiment", "oracle_equiv"},
            {"domain", {{"type", "dq"}, {"Q", {{"p", 1}, {"q", 2}, {"grid", json::array({json::array({"0.5*x1 + 0.5*x1x2", "0.7*x2 - 0.2*x2x1"})})}}}}},
            {"levels", {1, 2}}, {"seed", 5}, {"params", {{"cases", 40}}}};
  if (experiment == "horo")
    return {{"experiment", "horo"}, {"domain", {{"type", "row_ball"}, {"d", 2}}}, {"levels", {1, 2}}, {"seed", 9},
            {"params", {{"R", 1.1}, {"points", 40}}}};
  if (experiment == "retract")
    return {{"experiment", "retract"}, {"domain", {{"type", "row_ball"}, {"d", 2}}},
            {"map", {{"type", "polynomial"}, {"d", 2}, {"outputs", json::array({"x1", "-1*x2"})}}}, {"levels", {1, 2, 3}},
            {"seed", 13}, {"params", {{"m", 2}, {"test_points", 30}}}};
  if (experiment == "maxball_probe")
    return {{"experiment", "maxball_probe"}, {"domain", {{"type", "max_ball"}, {"d", 2}}}, {"levels", {1, 2, 3}},
            {"seed", 17}, {"params", {{"points", 100}}}};
  throw invalid_input("unknown demo \"" + experiment + "\"; choose one of dw, wolff, metrics_equiv, horo, retract, "
                      "maxball_probe, oracle_equiv");
}

}  // namespace ncgeom
