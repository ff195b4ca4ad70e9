#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "diffuse/discrete_agents.hpp"
#include "diffuse/error_diffusion.hpp"
#include "diffuse/geometry.hpp"

namespace diffuse {

struct PvParams {
  double p_max = 0.0;
  double phi = 0.0;
  // When set, p_max <= s_rated * cos(phi) must hold.
  std::optional<double> s_rated;
};

// T(min(p_avail, p_max)). Requires p_avail >= 0.
TriangleSet pv_feasible_set(const PvParams& params, double p_avail);
// max{p_max / cos(phi), 2 p_max tan(phi)}, the diameter of T(p_max).
double pv_error_bound(const PvParams& params);

struct PtiWitness {
  Setpoint u;  // in I
  Setpoint v;  // in D
};

struct PtiResult {
  bool ok = true;
  std::optional<PtiWitness> witness;
  std::size_t points_checked = 0;
};

// Checks u + v - proj_I(v) in D. Every candidate v is tested against all
// vertices of I, which covers all u since the map is affine in u. Candidates
// are n_samples seeded uniform points of D, the vertices of D and I, and the
// vertices of D clipped to each projection region of I. Throws
// "not a subset" when I is not contained in D.
PtiResult is_pti_subset(const ConvexSet& i, const ConvexPolygon& d, std::size_t n_samples,
                        std::uint64_t seed);

// Degrees of freedom for the polygon construction. The outer lines l_j are
// parallel to the edges of I at outward offsets d_j >= 0; the corner points
// p_j = l_{j-1} cap l_j must satisfy p_j - v_j in (-C_j) cap C_j° except for
// the last vertex, which the construction fixes.
struct ConstructionChoice {
  // Per-edge offsets. Empty: derived from `g` when given, else uniform.
  std::vector<double> offsets;
  // Uniform offset when no per-edge offsets are given; default 0.1 * diam(I).
  std::optional<double> uniform_offset;
  // Translation set; default conv(union of P_i^min).
  std::optional<ConvexPolygon> g;
  std::size_t verify_samples = 10000;
  std::uint64_t seed = 0;
};

struct PtiConstruction {
  std::vector<double> offsets;
  std::vector<Setpoint> outer;         // p_j
  std::vector<ConvexPolygon> p_min;    // per vertex, translation coordinates
  std::vector<ConvexPolygon> p_max;    // per vertex, translation coordinates
  ConvexPolygon g = ConvexPolygon::point({});
  ConvexPolygon d = ConvexPolygon::point({});
  PtiResult verification;
};

// Requires a strictly convex polygon with at least 3 vertices. The result is
// re-verified with is_pti_subset and a failure throws.
PtiConstruction build_pti_construction(const ConvexPolygon& i, const ConstructionChoice& choice = {});
ConvexPolygon construct_pti_superset(const ConvexPolygon& i, const ConstructionChoice& choice = {});

// Heuristic common PTI superset. Not minimal in general.
ConvexPolygon minimal_superset(std::span<const ConvexPolygon> sets, std::size_t verify_samples = 2000,
                               std::uint64_t seed = 0);

// Persistent-predictor follower: advertises A_k = I_{k-1} and implements
// proj_{I_k}(u_req - e_{k-1}). With every I_k a PTI subset of D,
// ||e_k|| <= diam D.
class UncertainAgent {
 public:
  explicit UncertainAgent(ConvexSet initial_advertisement,
                          std::optional<ConvexPolygon> superset = std::nullopt,
                          bool debug_checks = false,
                          DiffusionMode mode = DiffusionMode::kErrorDiffusion);

  const ConvexSet& advertisement() const { return advert_; }
  // Requires u_req in the advertisement. In debug mode also checks that i_now
  // is a PTI subset of D and that u_req - e_{k-1} lies in D.
  Setpoint step(Setpoint u_req, const ConvexSet& i_now);

  const ErrorState& state() const { return state_; }
  const std::optional<ConvexPolygon>& superset() const { return superset_; }

 private:
  ConvexSet advert_;
  std::optional<ConvexPolygon> superset_;
  bool debug_;
  DiffusionMode mode_;
  ErrorState state_;
};

}  // namespace diffuse
