#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "diffuse/discrete_agents.hpp"
#include "diffuse/geometry.hpp"
#include "diffuse/grid_agent.hpp"
#include "diffuse/uncertain_agents.hpp"

namespace diffuse {

struct ThermalParams {
  double c_th = 1e6;    // J/K
  double kappa = 750.0;  // W/K
  double t_out = 12.0;
  double t_init = 22.0;
};

// T' = T + dt / c_th * (kappa (t_out - T) + |p_heat|).
double thermal_step(double t, double p_heat, const ThermalParams& th, double dt);

struct ConstantIrradiance {
  double value_w = 0.0;
};
// High for the first half period, then low, alternating.
struct SquareWaveIrradiance {
  double period_s = 0.3;
  double low_w = 0.0;
  double high_w = 1e4;
};
// Gaussian steps clamped to [0, max_w]; starts at start_w (default max_w / 2).
struct RandomWalkIrradiance {
  std::optional<std::uint64_t> seed;  // default: the scenario seed
  double sigma_w = 500.0;
  std::optional<double> start_w;
  double max_w = 1e4;
};
using IrradianceProfile = std::variant<ConstantIrradiance, SquareWaveIrradiance, RandomWalkIrradiance>;

// max(1, round(period / (2 dt))).
std::size_t square_wave_half_steps(double period_s, double dt);
// Available PV power for steps 0 .. steps-1.
std::vector<double> irradiance_series(const IrradianceProfile& profile, std::size_t steps, double dt,
                                      std::uint64_t scenario_seed);
double irradiance_at(const IrradianceProfile& profile, std::size_t k, double dt,
                     std::uint64_t scenario_seed);

struct HeaterResource {
  std::vector<double> p_heat;
  std::vector<bool> initial_on;
  ComfortBand band;
  int lock_steps = 10;
  bool tie_toward_request = true;
};
struct PvResource {
  PvParams params;
};
struct DelayedResource {
  ConvexPolygon base_set = ConvexPolygon::point({});
  int tau = 1;
  Setpoint initial;
};
// Implements every request exactly.
struct IdealResource {
  ConvexPolygon profile = ConvexPolygon::box(-1e6, 1e6, -1e6, 1e6);
  Setpoint initial;
};

struct ResourceConfig {
  std::string id;
  std::variant<HeaterResource, PvResource, DelayedResource, IdealResource> kind;
};

struct ScenarioConfig {
  double dt = 0.1;
  std::size_t steps = 0;
  std::optional<QuadraticObjective> objective;
  double alpha = 0.0;
  // Project grid requests onto the product of advertised profiles, or not.
  bool unconstrained = false;
  std::vector<ResourceConfig> resources;
  IrradianceProfile irradiance = ConstantIrradiance{};
  // One room per heater, in resource order.
  std::vector<ThermalParams> thermal;
  bool diffusion_enabled = true;
  std::uint64_t seed = 0;
};

struct ResourceSample {
  Setpoint req;
  Setpoint imp;
  Setpoint e;
};

struct TraceRow {
  std::size_t k = 0;
  std::vector<ResourceSample> resources;
  double objective = 0.0;
  bool projection_active = false;
  std::vector<double> temperatures;
  Eigen::VectorXd running_mean;  // (1/k) sum_{i<=k} y_i
};

struct ScenarioTrace {
  std::vector<std::string> resource_ids;
  // Accumulated-error bound each resource guarantees.
  std::vector<double> error_bounds;
  std::size_t rooms = 0;
  Eigen::VectorXd x_star;
  Eigen::VectorXd x1;
  std::vector<TraceRow> rows;
};

// Throws ConfigError for an inconsistent configuration and ContractViolation
// when an agent contract breaks mid-run.
ScenarioTrace run_scenario(const ScenarioConfig& cfg);

// Columns: k, per resource <id>.p_req,q_req,p_imp,q_imp,e_p,e_q, then J,
// proj_active, then room<j>.temp. Reals use 9 significant digits.
void emit_csv(const ScenarioTrace& trace, std::ostream& os);
std::string emit_csv(const ScenarioTrace& trace);

}  // namespace diffuse
