#include "sociotraffic/scenario.hpp"

#include <cmath>
#include <fstream>

#include "sociotraffic/errors.hpp"

namespace sociotraffic::cli {

using nlohmann::json;

namespace {

struct Violations {
  std::vector<std::string> list;
  void add(const std::string& s) { list.push_back(s); }
  void finish() const {
    if (!list.empty()) throw ValidationError(list);
  }
};

bool expect_object(const json& j, const std::string& path, Violations& v) {
  if (j.is_object()) return true;
  v.add(path + ": expected an object");
  return false;
}

double get_number(const json& j, const std::string& path, const char* key, Violations& v,
                  std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    v.add(path + "." + key + ": missing required number");
    return 0.0;
  }
  if (!j[key].is_number()) {
    v.add(path + "." + key + ": expected a number");
    return fallback.value_or(0.0);
  }
  return j[key].get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path, const char* key, Violations& v,
                         std::optional<std::int64_t> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    v.add(path + "." + key + ": missing required integer");
    return 0;
  }
  if (!j[key].is_number_integer()) {
    v.add(path + "." + key + ": expected an integer");
    return fallback.value_or(0);
  }
  return j[key].get<std::int64_t>();
}

Eigen::Matrix4d get_matrix(const json& j, const std::string& path, const char* key, Violations& v) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  if (!j.contains(key)) return m;  // boundary matrices default to zero
  const json& arr = j[key];
  if (!arr.is_array() || arr.size() != 4) {
    v.add(path + "." + key + ": expected a 4x4 array");
    return m;
  }
  for (int r = 0; r < 4; ++r) {
    if (!arr[r].is_array() || arr[r].size() != 4) {
      v.add(path + "." + key + "[" + std::to_string(r) + "]: expected 4 numbers");
      continue;
    }
    for (int c = 0; c < 4; ++c) {
      if (!arr[r][c].is_number()) {
        v.add(path + "." + key + ": entries must be numbers");
        return m;
      }
      m(r, c) = arr[r][c].get<double>();
    }
  }
  return m;
}

rng::TruncatedNormalLaw parse_law(const json& j, const std::string& path, Violations& v) {
  rng::TruncatedNormalLaw law;
  if (!expect_object(j, path, v)) return law;
  law.mean = get_number(j, path, "mean", v);
  law.std = get_number(j, path, "std", v);
  law.lower = get_number(j, path, "lower", v);
  law.upper = get_number(j, path, "upper", v);
  if (!(law.std > 0.0)) v.add(path + ".std: must be positive");
  if (!(law.lower < law.upper)) v.add(path + ": lower must be < upper");
  return law;
}

route_choice::SocialScenario parse_social(const json& j, std::uint64_t scenario_seed,
                                          Violations& v) {
  route_choice::SocialScenario sc;
  const std::string path = "social";
  if (!expect_object(j, path, v)) return sc;

  const auto vehicles = get_integer(j, path, "num_vehicles", v);
  if (vehicles < 2)
    v.add(path + ".num_vehicles: must be >= 2");
  else
    sc.num_vehicles = static_cast<std::size_t>(vehicles);

  if (j.contains("alerts")) {
    if (!j["alerts"].is_array()) {
      v.add(path + ".alerts: expected an array");
    } else {
      for (std::size_t i = 0; i < j["alerts"].size(); ++i) {
        const json& a = j["alerts"][i];
        const std::string apath = path + ".alerts[" + std::to_string(i) + "]";
        route_choice::Alert alert;
        if (!expect_object(a, apath, v)) continue;
        alert.trust = get_number(a, apath, "trust", v);
        const bool has_signal = a.contains("signal");
        const bool has_rate = a.contains("rate");
        if (has_signal == has_rate) {
          v.add(apath + ": exactly one of signal/rate required");
        } else if (has_signal) {
          const auto s = get_integer(a, apath, "signal", v);
          if (s != 0 && s != 1)
            v.add(apath + ".signal: must be 0 or 1");
          else
            alert.signal = static_cast<int>(s);
        } else {
          const double r = get_number(a, apath, "rate", v);
          if (!(r >= 0.0))
            v.add(apath + ".rate: must be >= 0");
          else
            alert.poisson_rate = r;
        }
        sc.alerts.push_back(alert);
      }
    }
  }

  if (!j.contains("travel_time") || !j["travel_time"].is_array() || j["travel_time"].size() != 2) {
    v.add(path + ".travel_time: expected an array of 2 laws (route 1, route 2)");
  } else {
    sc.travel_time[0] = parse_law(j["travel_time"][0], path + ".travel_time[0]", v);
    sc.travel_time[1] = parse_law(j["travel_time"][1], path + ".travel_time[1]", v);
  }

  sc.k1 = get_number(j, path, "k1", v);
  if (!j.contains("k2") || !j["k2"].is_array() || j["k2"].size() != 2 ||
      !j["k2"][0].is_number() || !j["k2"][1].is_number()) {
    v.add(path + ".k2: expected an array of 2 numbers");
  } else {
    sc.k2 = {j["k2"][0].get<double>(), j["k2"][1].get<double>()};
  }

  if (!j.contains("cpt") || !j["cpt"].is_object()) {
    v.add(path + ".cpt: missing required object");
  } else {
    const json& c = j["cpt"];
    const std::string cpath = path + ".cpt";
    const double reference = get_number(c, cpath, "reference", v);
    const double bp = get_number(c, cpath, "beta_plus", v, 0.88);
    const double bm = get_number(c, cpath, "beta_minus", v, 0.88);
    const double lambda = get_number(c, cpath, "lambda", v, 2.25);
    const double gamma = get_number(c, cpath, "gamma", v, 0.65);
    const double phi = get_number(c, cpath, "phi", v, 1.0);
    try {
      sc.cpt_params = cpt::CptParams(reference, bp, bm, lambda, gamma, phi);
    } catch (const ValidationError& e) {
      for (const auto& msg : e.violations()) v.add(path + "." + msg);
    }
  }

  const auto n = get_integer(j, path, "samples_per_vehicle", v, 256);
  if (n < 1)
    v.add(path + ".samples_per_vehicle: must be >= 1");
  else
    sc.samples_per_vehicle = static_cast<std::size_t>(n);

  sc.rng_seed = static_cast<std::uint64_t>(
      get_integer(j, path, "rng_seed", v, static_cast<std::int64_t>(scenario_seed)));
  return sc;
}

solver::Scheme parse_scheme(const json& j, const std::string& path, Violations& v) {
  const std::string s = j.value("scheme", std::string("local-lax-friedrichs"));
  if (s == "local-lax-friedrichs") return solver::Scheme::local_lax_friedrichs;
  if (s == "upwind-linearized") return solver::Scheme::upwind_linearized;
  v.add(path + ".scheme: unknown scheme '" + s +
        "' (expected local-lax-friedrichs or upwind-linearized)");
  return solver::Scheme::local_lax_friedrichs;
}

solver::Perturbation parse_perturbation(const json& j, const std::string& path, Violations& v) {
  solver::Perturbation p;
  if (!j.contains("perturbation")) return p;
  const json& jp = j["perturbation"];
  const std::string ppath = path + ".perturbation";
  if (!expect_object(jp, ppath, v)) return p;

  const std::string shape = jp.value("shape", std::string("gaussian-bump"));
  if (shape == "gaussian-bump")
    p.shape = solver::PerturbationShape::gaussian_bump;
  else if (shape == "sinusoid")
    p.shape = solver::PerturbationShape::sinusoid;
  else
    v.add(ppath + ".shape: unknown shape '" + shape + "'");

  if (jp.contains("amplitude")) {
    if (!jp["amplitude"].is_array() || jp["amplitude"].size() != 4) {
      v.add(ppath + ".amplitude: expected 4 numbers (rho1, u1, rho2, u2)");
    } else {
      for (int k = 0; k < 4; ++k) {
        if (!jp["amplitude"][k].is_number()) {
          v.add(ppath + ".amplitude: entries must be numbers");
          break;
        }
        p.amplitude[k] = jp["amplitude"][k].get<double>();
      }
    }
  }
  p.center = get_number(jp, ppath, "center", v, 0.5);
  p.width = get_number(jp, ppath, "width", v, 0.1);
  if (!(p.width > 0.0)) v.add(ppath + ".width: must be positive");
  return p;
}

}  // namespace

Scenario parse_scenario_json(const json& j) {
  Violations v;
  Scenario sc;

  if (!j.is_object()) {
    v.add("scenario: top level must be an object");
    v.finish();
  }

  const auto schema = get_integer(j, "scenario", "schema", v, -1);
  if (schema != kSchemaVersion)
    v.add("schema: expected version " + std::to_string(kSchemaVersion));
  sc.schema = kSchemaVersion;

  if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty())
    v.add("name: missing required nonempty string");
  else
    sc.name = j["name"].get<std::string>();

  sc.seed = static_cast<std::uint64_t>(get_integer(j, "scenario", "seed", v, 0));
  sc.outputs = j.value("outputs", std::string("out"));
  if (sc.outputs.empty()) v.add("outputs: must be nonempty");

  const bool has_social = j.contains("social");
  const bool has_alpha = j.contains("alpha_override");
  if (has_social == has_alpha)
    v.add("scenario: exactly one of social/alpha_override must supply alpha");
  if (has_alpha) {
    if (!j["alpha_override"].is_number()) {
      v.add("alpha_override: expected a number");
    } else {
      const double a = j["alpha_override"].get<double>();
      if (!(a > 0.0 && a < 1.0))
        v.add("alpha_override: alpha must lie in (0,1)");
      else
        sc.alpha_override = a;
    }
  }
  if (has_social) sc.social = parse_social(j["social"], sc.seed, v);

  if (!j.contains("model") || !j["model"].is_object()) {
    v.add("model: missing required object");
  } else {
    const json& m = j["model"];
    if (!m.contains("domain") || !m["domain"].is_array() || m["domain"].size() != 2 ||
        !m["domain"][0].is_number() || !m["domain"][1].is_number()) {
      v.add("model.domain: expected [start, end]");
    } else {
      sc.domain_start = m["domain"][0].get<double>();
      sc.domain_end = m["domain"][1].get<double>();
      if (!(sc.domain_start < sc.domain_end)) v.add("model.domain: start must be < end");
    }
    sc.junction = get_number(m, "model", "junction", v, sc.domain_end);
    if (!(sc.domain_start < sc.junction && sc.junction <= sc.domain_end))
      v.add("model.junction: must lie in (start, end]");
  }

  if (!j.contains("operating_point") || !j["operating_point"].is_object()) {
    v.add("operating_point: missing required object");
  } else {
    const json& o = j["operating_point"];
    sc.op.rho1 = get_number(o, "operating_point", "rho1", v);
    sc.op.u1 = get_number(o, "operating_point", "u1", v);
    sc.op.rho2 = get_number(o, "operating_point", "rho2", v);
    sc.op.u2 = get_number(o, "operating_point", "u2", v);
    if (!sc.op.strictly_positive())
      v.add("operating_point: all components must be strictly positive");
  }

  {
    const std::string path = "solver";
    const json empty = json::object();
    const json& s = j.contains("solver") && j["solver"].is_object() ? j["solver"] : empty;
    const auto cells = get_integer(s, path, "cells", v, 200);
    if (cells < 16)
      v.add(path + ".cells: must be >= 16");
    else
      sc.solver_config.cells = static_cast<std::size_t>(cells);
    sc.solver_config.cfl = get_number(s, path, "cfl", v, 0.9);
    if (!(sc.solver_config.cfl > 0.0 && sc.solver_config.cfl < 1.0))
      v.add(path + ".cfl: must lie in (0,1)");
    sc.solver_config.t_end = get_number(s, path, "t_end", v, 50.0);
    if (!(sc.solver_config.t_end > 0.0)) v.add(path + ".t_end: must be positive");
    sc.solver_config.output_interval = get_number(s, path, "output_interval", v, 0.5);
    if (!(sc.solver_config.output_interval > 0.0))
      v.add(path + ".output_interval: must be positive");
    sc.solver_config.scheme = parse_scheme(s, path, v);
    sc.solver_config.g_b = get_matrix(s, path, "g_b", v);
    sc.solver_config.g_c = get_matrix(s, path, "g_c", v);
    sc.solver_config.op = sc.op;
    sc.solver_config.perturbation = parse_perturbation(s, path, v);

    if (sc.op.rho1 - std::abs(sc.solver_config.perturbation.amplitude[0]) <= 0.0)
      v.add(path + ".perturbation.amplitude[0]: rho1 must stay positive initially");
    if (sc.op.rho2 - std::abs(sc.solver_config.perturbation.amplitude[2]) <= 0.0)
      v.add(path + ".perturbation.amplitude[2]: rho2 must stay positive initially");
    if (sc.solver_config.scheme == solver::Scheme::upwind_linearized &&
        sc.junction < sc.domain_end)
      v.add(path + ".scheme: upwind-linearized requires junction == domain end");
  }

  v.finish();
  return sc;
}

Scenario parse_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open scenario file: " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("scenario parse error in " + file.string() + ": " + e.what());
  }
  return parse_scenario_json(j);
}

nlohmann::json scenario_to_json(const Scenario& sc) {
  json j;
  j["schema"] = sc.schema;
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["outputs"] = sc.outputs;
  if (sc.alpha_override) j["alpha_override"] = *sc.alpha_override;
  if (sc.social) {
    const auto& s = *sc.social;
    json js;
    js["num_vehicles"] = s.num_vehicles;
    js["alerts"] = json::array();
    for (const auto& a : s.alerts) {
      json ja;
      if (a.signal) ja["signal"] = *a.signal;
      if (a.poisson_rate) ja["rate"] = *a.poisson_rate;
      ja["trust"] = a.trust;
      js["alerts"].push_back(ja);
    }
    js["travel_time"] = json::array();
    for (const auto& law : s.travel_time)
      js["travel_time"].push_back(
          {{"mean", law.mean}, {"std", law.std}, {"lower", law.lower}, {"upper", law.upper}});
    js["k1"] = s.k1;
    js["k2"] = {s.k2[0], s.k2[1]};
    js["cpt"] = {{"reference", s.cpt_params.reference}, {"beta_plus", s.cpt_params.beta_plus},
                 {"beta_minus", s.cpt_params.beta_minus}, {"lambda", s.cpt_params.lambda},
                 {"gamma", s.cpt_params.gamma},           {"phi", s.cpt_params.phi}};
    js["samples_per_vehicle"] = s.samples_per_vehicle;
    js["rng_seed"] = s.rng_seed;
    j["social"] = js;
  }
  j["model"] = {{"domain", {sc.domain_start, sc.domain_end}}, {"junction", sc.junction}};
  j["operating_point"] = {
      {"rho1", sc.op.rho1}, {"u1", sc.op.u1}, {"rho2", sc.op.rho2}, {"u2", sc.op.u2}};

  json s;
  s["cells"] = sc.solver_config.cells;
  s["cfl"] = sc.solver_config.cfl;
  s["t_end"] = sc.solver_config.t_end;
  s["output_interval"] = sc.solver_config.output_interval;
  s["scheme"] = sc.solver_config.scheme == solver::Scheme::local_lax_friedrichs
                    ? "local-lax-friedrichs"
                    : "upwind-linearized";
  const auto matrix_json = [](const Eigen::Matrix4d& m) {
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
      json row = json::array();
      for (int c = 0; c < 4; ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  s["g_b"] = matrix_json(sc.solver_config.g_b);
  s["g_c"] = matrix_json(sc.solver_config.g_c);
  const auto& p = sc.solver_config.perturbation;
  s["perturbation"] = {
      {"shape",
       p.shape == solver::PerturbationShape::gaussian_bump ? "gaussian-bump" : "sinusoid"},
      {"amplitude", {p.amplitude[0], p.amplitude[1], p.amplitude[2], p.amplitude[3]}},
      {"center", p.center},
      {"width", p.width}};
  j["solver"] = s;
  return j;
}

double resolve_alpha(const Scenario& scenario) {
  if (scenario.alpha_override) return *scenario.alpha_override;
  const auto outcome = route_choice::choose_routes(*scenario.social);
  return outcome.alpha;
}

}  // namespace sociotraffic::cli
