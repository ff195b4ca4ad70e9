#pragma once

#include <optional>

#include "diffuse/error_diffusion.hpp"
#include "diffuse/geometry.hpp"

namespace diffuse {

// Resource that reaches a new setpoint tau steps after it is requested.
//
// A request at step k that differs from the current setpoint starts a
// transition: imp_k .. imp_{k+tau-1} stay at the old setpoint and
// imp_{k+tau} is the new one. The profile advertised during the transition
// is a singleton ({old} up to k+tau-1, {new} at k+tau), so error only accrues
// at the step that starts a transition and ||e_k|| <= diam I.
class DelayedAgent {
 public:
  DelayedAgent(ConvexPolygon base_set, int tau, Setpoint initial);

  // Profile for the coming step.
  const ConvexPolygon& advertisement() const { return advert_; }
  bool transitioning() const { return pending_.has_value(); }
  const Setpoint& current() const { return current_; }

  // Requires u_req in advertisement().
  Setpoint step(Setpoint u_req);

  const ErrorState& state() const { return state_; }
  const ConvexPolygon& base_set() const { return base_; }
  int tau() const { return tau_; }
  double error_bound() const { return diameter(base_); }

 private:
  struct Pending {
    Setpoint target;
    int steps_left;  // steps until imp == target
  };

  ConvexPolygon base_;
  int tau_;
  Setpoint current_;
  std::optional<Pending> pending_;
  ConvexPolygon advert_;
  ErrorState state_;
};

struct DelayedStepResult {
  Setpoint u_imp;
  ConvexPolygon next_advertisement;
};

// Functional form: advances `agent` and returns what it implemented and what
// it advertises next.
DelayedStepResult delayed_step(DelayedAgent& agent, Setpoint u_req);

}  // namespace diffuse
