#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "diffuse/error_diffusion.hpp"
#include "diffuse/geometry.hpp"

namespace diffuse {

enum class DiffusionMode {
  kErrorDiffusion,
  // Plain nearest-point projection of the request; no error feedback.
  kNaiveProjection,
};

// Real-power follower with a time-varying codebook S_{i_k}. The advertised
// profile is conv(S_{i_k}) x {0}. With error diffusion |e_k| <= Delta/2, where
// Delta is the largest step size over every codebook seen so far.
class DiscreteAgent {
 public:
  explicit DiscreteAgent(bool tie_toward_request = true,
                         DiffusionMode mode = DiffusionMode::kErrorDiffusion);

  static Interval profile(const FiniteSet1D& s) { return {s.min(), s.max()}; }

  // Requires p_req in conv(current) up to kPointTol.
  double step(const FiniteSet1D& current, double p_req);

  const ErrorState& state() const { return state_; }
  double max_stepsize_seen() const { return delta_seen_; }
  DiffusionMode mode() const { return mode_; }

 private:
  bool tie_toward_request_;
  DiffusionMode mode_;
  ErrorState state_;
  double delta_seen_ = 0.0;
};

struct ComfortBand {
  double t_min = 18.0;
  double t_max = 26.0;
};

// One on/off heater. Consumption is reported as negative real power.
// Invariant: lock_remaining >= 0; the heater is locked iff lock_remaining > 0.
struct HeaterState {
  bool on = false;
  int lock_remaining = 0;
  double p_heat = 0.0;
  double temperature = 0.0;

  bool locked() const { return lock_remaining > 0; }
  double power() const { return on ? -p_heat : 0.0; }
};

FiniteSet1D heater_implementable(const HeaterState& h, const ComfortBand& band);
// {a_k - sum_{i in S} P_i : S subset of the free heaters}, where free means
// unlocked and inside the band, and a_k collects the locked and forced ones.
FiniteSet1D multi_heater_implementable(std::span<const HeaterState> heaters,
                                       const ComfortBand& band);

// Throws when the heater is locked and turn_on differs from its state.
HeaterState heater_transition(const HeaterState& h, bool turn_on, int lock_steps);

// Free heaters to switch on so that the bank draws exactly `target`. Coldest
// rooms are preferred, then lower index. Throws when no subset matches.
std::vector<std::size_t> select_heater_subset(double target,
                                              std::span<const HeaterState> heaters,
                                              const ComfortBand& band);

struct HeaterBankConfig {
  std::vector<double> p_heat;
  std::vector<bool> initial_on;  // empty means all off
  ComfortBand band;
  int lock_steps = 10;
  bool tie_toward_request = true;
  DiffusionMode mode = DiffusionMode::kErrorDiffusion;
};

// A bank of heaters behind one discrete follower. Temperatures are owned by
// the caller's thermal model and pushed in through set_temperature.
class HeaterBankAgent {
 public:
  HeaterBankAgent(HeaterBankConfig cfg, std::span<const double> initial_temperatures);

  FiniteSet1D implementable() const;
  Interval profile() const { return DiscreteAgent::profile(implementable()); }

  // Implements p_req in the current profile and switches the heaters.
  double step(double p_req);

  void set_temperature(std::size_t i, double t) { heaters_.at(i).temperature = t; }
  const std::vector<HeaterState>& heaters() const { return heaters_; }
  const ErrorState& state() const { return agent_.state(); }
  double power() const;
  // max_i P_i / 2
  double error_bound() const;

 private:
  HeaterBankConfig cfg_;
  std::vector<HeaterState> heaters_;
  DiscreteAgent agent_;
};

}  // namespace diffuse
