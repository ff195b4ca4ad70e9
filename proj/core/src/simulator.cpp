#include "diffuse/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "diffuse/delayed_agent.hpp"

namespace diffuse {

double thermal_step(double t, double p_heat, const ThermalParams& th, double dt) {
  if (!(th.c_th > 0.0)) throw ContractViolation("thermal capacity must be positive");
  return t + dt / th.c_th * (th.kappa * (th.t_out - t) + std::abs(p_heat));
}

std::size_t square_wave_half_steps(double period_s, double dt) {
  if (!(period_s > 0.0) || !(dt > 0.0)) throw ContractViolation("period and dt must be positive");
  // Nudge before rounding so that e.g. 0.3 / 0.2 = 1.4999999999999998 lands on 2.
  const double half = std::round(period_s / (2.0 * dt) * (1.0 + 1e-12));
  return half < 1.0 ? 1 : static_cast<std::size_t>(half);
}

std::vector<double> irradiance_series(const IrradianceProfile& profile, std::size_t steps, double dt,
                                      std::uint64_t scenario_seed) {
  std::vector<double> out(steps);
  if (const auto* c = std::get_if<ConstantIrradiance>(&profile)) {
    std::fill(out.begin(), out.end(), c->value_w);
  } else if (const auto* s = std::get_if<SquareWaveIrradiance>(&profile)) {
    const std::size_t half = square_wave_half_steps(s->period_s, dt);
    for (std::size_t k = 0; k < steps; ++k) out[k] = (k / half) % 2 == 0 ? s->high_w : s->low_w;
  } else {
    const auto& r = std::get<RandomWalkIrradiance>(profile);
    if (!(r.max_w >= 0.0) || !(r.sigma_w >= 0.0)) throw ContractViolation("random walk parameters must be non-negative");
    std::mt19937_64 rng(r.seed.value_or(scenario_seed));
    std::normal_distribution<double> step(0.0, r.sigma_w);
    double p = std::clamp(r.start_w.value_or(0.5 * r.max_w), 0.0, r.max_w);
    for (std::size_t k = 0; k < steps; ++k) {
      out[k] = p;
      p = std::clamp(p + step(rng), 0.0, r.max_w);
    }
  }
  for (double p : out)
    if (!(p >= 0.0)) throw ContractViolation("available power must be non-negative");
  return out;
}

double irradiance_at(const IrradianceProfile& profile, std::size_t k, double dt,
                     std::uint64_t scenario_seed) {
  return irradiance_series(profile, k + 1, dt, scenario_seed)[k];
}

namespace {

class Follower {
 public:
  virtual ~Follower() = default;
  virtual ConvexPolygon advertise() const = 0;
  virtual Setpoint implement(Setpoint req, std::size_t k) = 0;
  virtual Setpoint error() const = 0;
  virtual Setpoint initial() const = 0;
  virtual double bound() const = 0;
};

class HeaterFollower final : public Follower {
 public:
  HeaterFollower(const HeaterResource& r, std::vector<double>& temps, std::size_t room0,
                 std::span<const ThermalParams> thermal, double dt, DiffusionMode mode)
      : temps_(temps), room0_(room0), thermal_(thermal.begin(), thermal.end()), dt_(dt),
        agent_(make_config(r, mode), std::span<const double>(temps).subspan(room0, r.p_heat.size())) {}

  ConvexPolygon advertise() const override { return agent_.profile().polygon(); }

  Setpoint implement(Setpoint req, std::size_t) override {
    if (std::abs(req.q) > kPointTol) throw ContractViolation("request not in advertised profile");
    const double imp = agent_.step(req.p);
    const auto& hs = agent_.heaters();
    for (std::size_t i = 0; i < hs.size(); ++i) {
      double& t = temps_[room0_ + i];
      t = thermal_step(t, hs[i].power(), thermal_[i], dt_);
      agent_.set_temperature(i, t);
    }
    return {imp, 0.0};
  }

  Setpoint error() const override { return agent_.state().e(); }
  Setpoint initial() const override { return {agent_.power(), 0.0}; }
  double bound() const override { return agent_.error_bound(); }

 private:
  static HeaterBankConfig make_config(const HeaterResource& r, DiffusionMode mode) {
    HeaterBankConfig c;
    c.p_heat = r.p_heat;
    c.initial_on = r.initial_on;
    c.band = r.band;
    c.lock_steps = r.lock_steps;
    c.tie_toward_request = r.tie_toward_request;
    c.mode = mode;
    return c;
  }

  std::vector<double>& temps_;
  std::size_t room0_;
  std::vector<ThermalParams> thermal_;
  double dt_;
  HeaterBankAgent agent_;
};

class PvFollower final : public Follower {
 public:
  PvFollower(const PvResource& r, const std::vector<double>& p_avail, DiffusionMode mode)
      : params_(r.params),
        p_avail_(p_avail),
        agent_(pv_feasible_set(r.params, p_avail.empty() ? 0.0 : p_avail.front()),
               TriangleSet{r.params.p_max, r.params.phi}.polygon(), false, mode) {}

  ConvexPolygon advertise() const override { return to_polygon(agent_.advertisement()); }
  Setpoint implement(Setpoint req, std::size_t k) override {
    return agent_.step(req, pv_feasible_set(params_, p_avail_[k - 1]));
  }
  Setpoint error() const override { return agent_.state().e(); }
  Setpoint initial() const override { return {}; }
  double bound() const override { return pv_error_bound(params_); }

 private:
  PvParams params_;
  const std::vector<double>& p_avail_;
  UncertainAgent agent_;
};

class DelayedFollower final : public Follower {
 public:
  explicit DelayedFollower(const DelayedResource& r) : agent_(r.base_set, r.tau, r.initial) {}
  ConvexPolygon advertise() const override { return agent_.advertisement(); }
  Setpoint implement(Setpoint req, std::size_t) override { return agent_.step(req); }
  Setpoint error() const override { return agent_.state().e(); }
  Setpoint initial() const override { return agent_.current(); }
  double bound() const override { return agent_.error_bound(); }

 private:
  DelayedAgent agent_;
};

class IdealFollower final : public Follower {
 public:
  explicit IdealFollower(const IdealResource& r) : r_(r) {
    if (!r_.profile.contains(r_.initial)) throw ConfigError("ideal resource starts outside its profile");
  }
  ConvexPolygon advertise() const override { return r_.profile; }
  Setpoint implement(Setpoint req, std::size_t) override {
    if (!r_.profile.contains(req)) throw ContractViolation("request not in advertised profile");
    return req;
  }
  Setpoint error() const override { return {}; }
  Setpoint initial() const override { return r_.initial; }
  double bound() const override { return 0.0; }

 private:
  IdealResource r_;
};

}  // namespace

ScenarioTrace run_scenario(const ScenarioConfig& cfg) {
  if (!cfg.objective) throw ConfigError("scenario has no objective");
  if (cfg.resources.empty()) throw ConfigError("scenario has no resources");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (cfg.steps < 1) throw ConfigError("steps must be at least 1");
  const auto& j = *cfg.objective;
  const auto n = static_cast<Eigen::Index>(cfg.resources.size());
  if (j.dim() != 2 * n) throw ConfigError("objective dimension must be twice the number of resources");

  std::size_t heaters = 0;
  for (const auto& r : cfg.resources)
    if (const auto* h = std::get_if<HeaterResource>(&r.kind)) heaters += h->p_heat.size();
  if (cfg.thermal.size() != heaters) throw ConfigError("thermal must list one room per heater");

  const auto mode = cfg.diffusion_enabled ? DiffusionMode::kErrorDiffusion : DiffusionMode::kNaiveProjection;
  const auto p_avail = irradiance_series(cfg.irradiance, cfg.steps, cfg.dt, cfg.seed);
  std::vector<double> temps;
  for (const auto& th : cfg.thermal) temps.push_back(th.t_init);

  std::vector<std::unique_ptr<Follower>> agents;
  ScenarioTrace trace;
  std::size_t room = 0;
  for (const auto& r : cfg.resources) {
    trace.resource_ids.push_back(r.id);
    std::visit([&](const auto& kind) {
      using T = std::decay_t<decltype(kind)>;
      if constexpr (std::is_same_v<T, HeaterResource>) {
        agents.push_back(std::make_unique<HeaterFollower>(
            kind, temps, room, std::span<const ThermalParams>(cfg.thermal).subspan(room, kind.p_heat.size()),
            cfg.dt, mode));
        room += kind.p_heat.size();
      } else if constexpr (std::is_same_v<T, PvResource>) {
        agents.push_back(std::make_unique<PvFollower>(kind, p_avail, mode));
      } else if constexpr (std::is_same_v<T, DelayedResource>) {
        agents.push_back(std::make_unique<DelayedFollower>(kind));
      } else {
        agents.push_back(std::make_unique<IdealFollower>(kind));
      }
    }, r.kind);
    trace.error_bounds.push_back(agents.back()->bound());
  }
  trace.rooms = heaters;
  trace.x_star = optimum(j);

  Eigen::VectorXd y(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Setpoint s = agents[static_cast<std::size_t>(i)]->initial();
    y(2 * i) = s.p;
    y(2 * i + 1) = s.q;
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(2 * n);
  trace.rows.reserve(cfg.steps);

  for (std::size_t k = 1; k <= cfg.steps; ++k) {
    GridAgentConfig ga{cfg.alpha, Unconstrained{}};
    if (!cfg.unconstrained) {
      ProfileProduct prod;
      for (const auto& a : agents) prod.sets.push_back(a->advertise());
      ga.admissible = std::move(prod);
    }
    const auto step = gradient_step(j, ga, y);
    if (k == 1) trace.x1 = step.x_next;

    TraceRow row;
    row.k = k;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& a = *agents[static_cast<std::size_t>(i)];
      const Setpoint req{step.x_next(2 * i), step.x_next(2 * i + 1)};
      Setpoint imp;
      try {
        imp = a.implement(req, k);
      } catch (const ContractViolation& e) {
        throw ContractViolation("step " + std::to_string(k) + ", resource '" +
                                trace.resource_ids[static_cast<std::size_t>(i)] + "': " + e.what());
      }
      y(2 * i) = imp.p;
      y(2 * i + 1) = imp.q;
      row.resources.push_back({req, imp, a.error()});
    }
    sum += y;
    row.objective = j.value(y);
    row.projection_active = step.projection_active;
    row.temperatures = temps;
    row.running_mean = sum / static_cast<double>(k);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

namespace {

void put_real(std::ostream& os, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  os << buf;
}

}  // namespace

void emit_csv(const ScenarioTrace& trace, std::ostream& os) {
  os << "k";
  for (const auto& id : trace.resource_ids)
    for (const char* col : {"p_req", "q_req", "p_imp", "q_imp", "e_p", "e_q"}) os << ',' << id << '.' << col;
  os << ",J,proj_active";
  for (std::size_t r = 0; r < trace.rooms; ++r) os << ",room" << r << ".temp";
  os << '\n';
  for (const auto& row : trace.rows) {
    os << row.k;
    for (const auto& s : row.resources) {
      for (double v : {s.req.p, s.req.q, s.imp.p, s.imp.q, s.e.p, s.e.q}) {
        os << ',';
        put_real(os, v);
      }
    }
    os << ',';
    put_real(os, row.objective);
    os << ',' << (row.projection_active ? 1 : 0);
    for (double t : row.temperatures) {
      os << ',';
      put_real(os, t);
    }
    os << '\n';
  }
}

std::string emit_csv(const ScenarioTrace& trace) {
  std::ostringstream os;
  emit_csv(trace, os);
  return os.str();
}

}  // namespace diffuse
