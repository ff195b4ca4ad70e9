#include "diffuse/error_diffusion.hpp"

#include <cstdio>

namespace diffuse {

ErrorState& ErrorState::record(Setpoint req, Setpoint imp) {
  e_ += imp - req;
  req_.push_back(req);
  imp_.push_back(imp);
  err_.push_back(e_);
  return *this;
}

ErrorState ErrorState::update(Setpoint req, Setpoint imp) const {
  ErrorState next = *this;
  next.record(req, imp);
  return next;
}

namespace {

std::string domain_message(Setpoint req, Setpoint e) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "u_req - e outside approximation domain: u_req=(%.9g, %.9g) e=(%.9g, %.9g)",
                req.p, req.q, e.p, e.q);
  return buf;
}

}  // namespace

DomainViolation::DomainViolation(Setpoint r, Setpoint err)
    : ContractViolation(domain_message(r, err)), req(r), e(err) {}

ApproximationMap identity_map() {
  return {[](Setpoint) { return true; }, [](Setpoint x, Setpoint) { return x; }};
}

ApproximationMap convex_projection_map(ConvexSet target, ConvexPolygon domain) {
  return {[d = std::move(domain)](Setpoint x) { return d.contains(x); },
          [t = std::move(target)](Setpoint x, Setpoint) { return project_convex(t, x); }};
}

ApproximationMap finite_projection_map(FiniteSet1D codebook, double margin,
                                       bool tie_toward_request) {
  const double lo = codebook.min() - margin;
  const double hi = codebook.max() + margin;
  return {[lo, hi](Setpoint x) { return x.q == 0.0 && x.p >= lo - kPointTol && x.p <= hi + kPointTol; },
          [s = std::move(codebook), tie_toward_request](Setpoint x, Setpoint req) {
            const auto tie = tie_toward_request ? std::optional<double>(req.p) : std::nullopt;
            return Setpoint{project_finite(s, x.p, tie), 0.0};
          }};
}

Setpoint diffuse_step(ErrorState& state, Setpoint u_req, const ApproximationMap& f) {
  const Setpoint x = u_req - state.e();
  if (!f.in_domain(x)) throw DomainViolation(u_req, state.e());
  const Setpoint imp = f.apply(x, u_req);
  state.record(u_req, imp);
  return imp;
}

double windowed_tracking_error(const ErrorState& state, std::size_t m,
                               std::optional<std::size_t> end) {
  const std::size_t k = end.value_or(state.k());
  if (k > state.k()) throw ContractViolation("window end beyond recorded steps");
  if (k == 0 || m > k - 1) throw ContractViolation("window length must satisfy 0 <= m <= k-1");
  Setpoint s_imp, s_req;
  for (std::size_t i = k - m; i <= k; ++i) {
    s_imp += state.history_imp()[i - 1];
    s_req += state.history_req()[i - 1];
  }
  return norm(s_imp - s_req) / static_cast<double>(m + 1);
}

bool check_contained(const ErrorState& state, const ConvexPolygon& g, double tol) {
  for (const auto& e : state.errors())
    if (!g.contains(e, tol)) return false;
  return true;
}

}  // namespace diffuse
