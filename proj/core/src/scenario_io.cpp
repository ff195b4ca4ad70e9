#include "diffuse/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace diffuse {

using nlohmann::json;

namespace {

Setpoint parse_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("a point must be [p, q]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Setpoint> parse_points(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a non-empty list of [p, q] points");
  std::vector<Setpoint> out;
  for (const auto& p : j) out.push_back(parse_point(p));
  return out;
}

// Row-major: either a list of rows or a flat list of n*n entries.
Eigen::MatrixXd parse_matrix(const json& j, Eigen::Index n) {
  if (!j.is_array()) throw ConfigError("gamma_mat must be an array");
  Eigen::MatrixXd m(n, n);
  if (!j.empty() && j[0].is_array()) {
    if (static_cast<Eigen::Index>(j.size()) != n) throw ConfigError("gamma_mat has the wrong number of rows");
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto& row = j[static_cast<std::size_t>(r)];
      if (static_cast<Eigen::Index>(row.size()) != n) throw ConfigError("gamma_mat row has the wrong length");
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  } else {
    if (static_cast<Eigen::Index>(j.size()) != n * n) throw ConfigError("gamma_mat must have n*n entries");
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) m(r, c) = j[static_cast<std::size_t>(r * n + c)].get<double>();
  }
  return m;
}

QuadraticObjective parse_objective(const json& j) {
  const auto& gv = j.at("gamma_vec");
  Eigen::VectorXd g(static_cast<Eigen::Index>(gv.size()));
  for (std::size_t i = 0; i < gv.size(); ++i) g(static_cast<Eigen::Index>(i)) = gv[i].get<double>();
  const Eigen::MatrixXd m = parse_matrix(j.at("gamma_mat"), g.size());
  try {
    return QuadraticObjective(m, g, j.value("offset", 0.0));
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("objective: ") + e.what());
  }
}

IrradianceProfile parse_irradiance(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "constant") return ConstantIrradiance{j.at("value_w").get<double>()};
  if (type == "square_wave") {
    return SquareWaveIrradiance{j.at("period_s").get<double>(), j.at("low_w").get<double>(),
                                j.at("high_w").get<double>()};
  }
  if (type == "random_walk") {
    RandomWalkIrradiance r;
    if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
    r.sigma_w = j.value("sigma_w", r.sigma_w);
    if (j.contains("start_w")) r.start_w = j["start_w"].get<double>();
    r.max_w = j.value("max_w", r.max_w);
    return r;
  }
  throw ConfigError("unknown irradiance type '" + type + "'");
}

ComfortBand parse_band(const json& j) {
  ComfortBand b;
  if (j.contains("band")) {
    const auto& band = j["band"];
    if (!band.is_array() || band.size() != 2) throw ConfigError("band must be [t_min, t_max]");
    b.t_min = band[0].get<double>();
    b.t_max = band[1].get<double>();
    if (b.t_min > b.t_max) throw ConfigError("band is inverted");
  }
  return b;
}

ResourceConfig parse_resource(const json& j, std::size_t index) {
  ResourceConfig r;
  r.id = j.value("id", "r" + std::to_string(index));
  const auto type = j.at("type").get<std::string>();
  if (type == "heater" || type == "multi_heater") {
    HeaterResource h;
    h.band = parse_band(j);
    h.lock_steps = j.value("lock_steps", h.lock_steps);
    h.tie_toward_request = j.value("tie_toward_request", h.tie_toward_request);
    if (type == "heater") {
      h.p_heat.push_back(j.at("p_heat").get<double>());
      h.initial_on.push_back(j.value("initial_on", false));
    } else {
      for (const auto& e : j.at("heaters")) {
        h.p_heat.push_back(e.at("p_heat").get<double>());
        h.initial_on.push_back(e.value("initial_on", false));
      }
    }
    if (h.lock_steps < 0) throw ConfigError("lock_steps must be non-negative");
    for (double p : h.p_heat)
      if (!(p > 0.0)) throw ConfigError("p_heat must be positive");
    r.kind = h;
  } else if (type == "pv") {
    PvResource pv;
    pv.params.p_max = j.at("p_max").get<double>();
    pv.params.phi = j.value("phi", 0.0);
    if (j.contains("s_rated")) pv.params.s_rated = j["s_rated"].get<double>();
    try {
      (void)pv_error_bound(pv.params);
    } catch (const ContractViolation& e) {
      throw ConfigError(std::string("pv: ") + e.what());
    }
    r.kind = pv;
  } else if (type == "delayed") {
    DelayedResource d;
    d.base_set = convex_hull(parse_points(j.at("base_set")));
    d.tau = j.at("tau").get<int>();
    d.initial = j.contains("initial") ? parse_point(j["initial"]) : d.base_set.vertex(0);
    if (d.tau < 1) throw ConfigError("tau must be at least 1");
    if (!d.base_set.contains(d.initial)) throw ConfigError("delayed initial setpoint outside base_set");
    r.kind = d;
  } else if (type == "ideal") {
    IdealResource d;
    if (j.contains("profile")) d.profile = convex_hull(parse_points(j["profile"]));
    if (j.contains("initial")) d.initial = parse_point(j["initial"]);
    r.kind = d;
  } else {
    throw ConfigError("unknown resource type '" + type + "'");
  }
  return r;
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  return guarded("scenario", [&] {
    const json j = json::parse(json_text);
    ScenarioConfig cfg;
    cfg.dt = j.value("dt", cfg.dt);
    cfg.steps = j.at("steps").get<std::size_t>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.objective = parse_objective(j.at("objective"));
    const auto admissible = j.value("admissible", std::string("profiles"));
    if (admissible != "profiles" && admissible != "unconstrained")
      throw ConfigError("admissible must be 'profiles' or 'unconstrained'");
    cfg.unconstrained = admissible == "unconstrained";
    const auto& res = j.at("resources");
    for (std::size_t i = 0; i < res.size(); ++i) cfg.resources.push_back(parse_resource(res[i], i));
    if (j.contains("irradiance")) cfg.irradiance = parse_irradiance(j["irradiance"]);
    if (j.contains("thermal")) {
      for (const auto& t : j["thermal"]) {
        ThermalParams th;
        th.c_th = t.value("c_th", th.c_th);
        th.kappa = t.value("kappa", th.kappa);
        th.t_out = t.value("t_out", th.t_out);
        th.t_init = t.value("t_init", th.t_init);
        if (!(th.c_th > 0.0)) throw ConfigError("c_th must be positive");
        cfg.thermal.push_back(th);
      }
    }
    cfg.diffusion_enabled = j.value("diffusion_enabled", true);
    cfg.seed = j.value("seed", std::uint64_t{0});
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    return cfg;
  });
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text_file(path));
}

PolygonRequest parse_polygon_request(const std::string& json_text) {
  return guarded("polygon", [&] {
    const json j = json::parse(json_text);
    PolygonRequest r;
    r.polygon = convex_hull(parse_points(j.at("vertices")));
    if (j.contains("offsets")) r.choice.offsets = j["offsets"].get<std::vector<double>>();
    if (j.contains("offset")) r.choice.uniform_offset = j["offset"].get<double>();
    if (j.contains("g")) r.choice.g = convex_hull(parse_points(j["g"]));
    r.choice.seed = j.value("seed", std::uint64_t{0});
    return r;
  });
}

PolygonRequest load_polygon_request(const std::filesystem::path& path) {
  return parse_polygon_request(read_text_file(path));
}

std::string construction_to_json(const ConvexPolygon& input, const PtiConstruction& c) {
  auto pts = [](const ConvexPolygon& p) {
    json a = json::array();
    for (const auto& v : p.vertices()) a.push_back({v.p, v.q});
    return a;
  };
  json out;
  out["input"] = pts(input);
  out["offsets"] = c.offsets;
  out["g"] = pts(c.g);
  out["superset"] = pts(c.d);
  out["diameter"] = diameter(c.d);
  out["verified"] = c.verification.ok;
  out["points_checked"] = c.verification.points_checked;
  return out.dump(2) + "\n";
}

}  // namespace diffuse
