#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "diffuse/geometry.hpp"

namespace diffuse {

// Accumulated error e_k = sum_{i<=k} (imp_i - req_i), with e_0 = 0.
// Invariant: e() equals that sum and errors()[i-1] == e_i for i = 1..k.
class ErrorState {
 public:
  ErrorState() = default;

  const Setpoint& e() const { return e_; }
  std::size_t k() const { return req_.size(); }
  const std::vector<Setpoint>& history_req() const { return req_; }
  const std::vector<Setpoint>& history_imp() const { return imp_; }
  const std::vector<Setpoint>& errors() const { return err_; }
  // e_i with e_0 = 0.
  Setpoint e_at(std::size_t i) const { return i == 0 ? Setpoint{} : err_.at(i - 1); }

  // Appends one step in place.
  ErrorState& record(Setpoint req, Setpoint imp);
  // Pure form: returns the successor state.
  [[nodiscard]] ErrorState update(Setpoint req, Setpoint imp) const;

 private:
  Setpoint e_;
  std::vector<Setpoint> req_;
  std::vector<Setpoint> imp_;
  std::vector<Setpoint> err_;
};

// u - e left the domain of the approximation map.
class DomainViolation : public ContractViolation {
 public:
  DomainViolation(Setpoint req, Setpoint e);
  Setpoint req;
  Setpoint e;
};

// F : D -> I. `apply(x, u_req)` is only called when in_domain(x) holds; the
// request is passed so that distance ties may break toward it.
struct ApproximationMap {
  std::function<bool(Setpoint)> in_domain;
  std::function<Setpoint(Setpoint, Setpoint)> apply;
};

ApproximationMap identity_map();
// Projection onto a convex set with domain D.
ApproximationMap convex_projection_map(ConvexSet target, ConvexPolygon domain);
// Real-power projection onto a codebook; the domain is the hull widened by
// `margin` on both sides. Ties break toward the request when asked.
ApproximationMap finite_projection_map(FiniteSet1D codebook, double margin,
                                       bool tie_toward_request);

// u_imp = F(u_req - e_{k-1}); records the step. Throws DomainViolation with
// (u_req, e_{k-1}) when u_req - e_{k-1} is outside the domain of f.
Setpoint diffuse_step(ErrorState& state, Setpoint u_req, const ApproximationMap& f);

// || mean(imp) - mean(req) || over the window ending at `end` (default: k)
// of length m + 1. Requires 0 <= m <= end - 1.
double windowed_tracking_error(const ErrorState& state, std::size_t m,
                               std::optional<std::size_t> end = std::nullopt);

// True when every e_i (i >= 1) lies in g.
bool check_contained(const ErrorState& state, const ConvexPolygon& g,
                     double tol = kPointTol);

}  // namespace diffuse
