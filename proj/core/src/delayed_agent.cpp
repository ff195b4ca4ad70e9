#include "diffuse/delayed_agent.hpp"

namespace diffuse {

DelayedAgent::DelayedAgent(ConvexPolygon base_set, int tau, Setpoint initial)
    : base_(std::move(base_set)), tau_(tau), current_(initial), advert_(base_) {
  if (tau_ < 1) throw ContractViolation("delay must be at least one step");
  if (!base_.contains(initial)) throw ContractViolation("initial setpoint outside the base set");
}

Setpoint DelayedAgent::step(Setpoint u_req) {
  if (!advert_.contains(u_req)) throw ContractViolation("request not in advertised profile");
  Setpoint imp;
  if (pending_) {
    if (--pending_->steps_left == 0) {
      current_ = pending_->target;
      pending_.reset();
      advert_ = base_;
      imp = current_;
    } else {
      imp = current_;
      advert_ = ConvexPolygon::point(pending_->steps_left == 1 ? pending_->target : current_);
    }
  } else {
    imp = current_;
    if (!near(u_req, current_)) {
      pending_ = Pending{u_req, tau_};
      advert_ = ConvexPolygon::point(tau_ == 1 ? u_req : current_);
    }
  }
  state_.record(u_req, imp);
  return imp;
}

DelayedStepResult delayed_step(DelayedAgent& agent, Setpoint u_req) {
  const Setpoint imp = agent.step(u_req);
  return {imp, agent.advertisement()};
}

}  // namespace diffuse
