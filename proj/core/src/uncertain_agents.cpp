#include "diffuse/uncertain_agents.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

namespace diffuse {

namespace {

void validate(const PvParams& params) {
  if (!(params.p_max >= 0.0) || !std::isfinite(params.p_max))
    throw ContractViolation("p_max must be finite and non-negative");
  if (!(params.phi >= 0.0 && params.phi < std::numbers::pi / 2))
    throw ContractViolation("phi must lie in [0, pi/2)");
  if (params.s_rated && params.p_max > *params.s_rated * std::cos(params.phi) * (1 + 1e-12))
    throw ContractViolation("p_max exceeds s_rated * cos(phi)");
}

std::string describe(const char* what, Setpoint u, Setpoint v) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s: u=(%.9g, %.9g) v=(%.9g, %.9g)", what, u.p, u.q, v.p, v.q);
  return buf;
}

// Outward unit normal of the CCW edge a -> b.
Setpoint outward_normal(Setpoint a, Setpoint b) {
  const Setpoint t = b - a;
  return (1.0 / norm(t)) * Setpoint{t.q, -t.p};
}

struct HalfPlane {
  Setpoint n;  // n . x <= b
  double b;
};

std::vector<Setpoint> clip(std::vector<Setpoint> poly, std::span<const HalfPlane> hs) {
  for (const auto& h : hs) {
    if (poly.empty()) break;
    poly = clip_halfplane(poly, h.n, h.b);
  }
  return poly;
}

// Regions on which v -> v - proj_I(v) is affine.
std::vector<std::vector<HalfPlane>> projection_regions(const ConvexPolygon& i) {
  const auto& v = i.vertices();
  std::vector<std::vector<HalfPlane>> regions;
  if (v.size() == 1) return {{}};
  if (v.size() == 2) {
    const Setpoint t = v[1] - v[0];
    regions.push_back({{t, dot(t, v[0])}});
    regions.push_back({{-t, -dot(t, v[0])}, {t, dot(t, v[1])}});
    regions.push_back({{-t, -dot(t, v[1])}});
    return regions;
  }
  const std::size_t n = v.size();
  std::vector<HalfPlane> interior;
  for (std::size_t j = 0; j < n; ++j) {
    const Setpoint nj = outward_normal(v[j], i.vertex(j + 1));
    interior.push_back({nj, dot(nj, v[j])});
  }
  regions.push_back(interior);
  for (std::size_t j = 0; j < n; ++j) {
    const Setpoint a = v[j];
    const Setpoint b = i.vertex(j + 1);
    const Setpoint t = b - a;
    const Setpoint nj = outward_normal(a, b);
    regions.push_back({{-nj, -dot(nj, a)}, {-t, -dot(t, a)}, {t, dot(t, b)}});
    const Setpoint t_prev = a - i.vertex(j + n - 1);
    regions.push_back({{-t_prev, -dot(t_prev, a)}, {t, dot(t, a)}});
  }
  return regions;
}

double polygon_area(const ConvexPolygon& p) {
  const auto& v = p.vertices();
  double a = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) a += cross(v[j], p.vertex(j + 1));
  return 0.5 * a;
}

std::vector<Setpoint> sample_points(const ConvexPolygon& d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Setpoint> out;
  out.reserve(n);
  const auto& v = d.vertices();
  if (v.size() == 1) {
    out.assign(n, v[0]);
    return out;
  }
  const auto b = d.bounds();
  const double box_area = (b.p_hi - b.p_lo) * (b.q_hi - b.q_lo);
  const bool thin = v.size() == 2 || polygon_area(d) < 1e-6 * box_area || box_area == 0.0;
  if (thin) {
    // Rejection in the bounding box would almost never hit; sample along D.
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    while (out.size() < n) {
      const double t = unit(rng);
      out.push_back((1 - t) * v[pick(rng)] + t * v[pick(rng)]);
    }
    return out;
  }
  while (out.size() < n) {
    const Setpoint x{b.p_lo + unit(rng) * (b.p_hi - b.p_lo), b.q_lo + unit(rng) * (b.q_hi - b.q_lo)};
    if (d.contains(x, 0.0)) out.push_back(x);
  }
  return out;
}

Setpoint intersect_lines(Setpoint n1, double c1, Setpoint n2, double c2) {
  const double det = cross(n1, n2);
  if (std::abs(det) <= kSignTol) throw ContractViolation("construction lines are parallel");
  return {(c1 * n2.q - c2 * n1.q) / det, (n1.p * c2 - n2.p * c1) / det};
}

}  // namespace

TriangleSet pv_feasible_set(const PvParams& params, double p_avail) {
  validate(params);
  if (!(p_avail >= 0.0) || !std::isfinite(p_avail))
    throw ContractViolation("available power must be finite and non-negative");
  return {std::min(p_avail, params.p_max), params.phi};
}

double pv_error_bound(const PvParams& params) {
  validate(params);
  return std::max(params.p_max / std::cos(params.phi), 2.0 * params.p_max * std::tan(params.phi));
}

PtiResult is_pti_subset(const ConvexSet& i_set, const ConvexPolygon& d, std::size_t n_samples,
                        std::uint64_t seed) {
  const ConvexPolygon i = to_polygon(i_set);
  for (const auto& u : i.vertices())
    if (!d.contains(u)) throw ContractViolation("not a subset");

  std::vector<Setpoint> candidates(d.vertices());
  candidates.insert(candidates.end(), i.vertices().begin(), i.vertices().end());
  for (const auto& region : projection_regions(i)) {
    const auto part = clip(d.vertices(), region);
    candidates.insert(candidates.end(), part.begin(), part.end());
  }
  const auto samples = sample_points(d, n_samples, seed);
  candidates.insert(candidates.end(), samples.begin(), samples.end());

  PtiResult result;
  for (const auto& v : candidates) {
    const Setpoint tau = v - project_convex(i, v);
    for (const auto& u : i.vertices()) {
      ++result.points_checked;
      if (!d.contains(u + tau)) {
        result.ok = false;
        result.witness = PtiWitness{u, v};
        return result;
      }
    }
  }
  return result;
}

PtiConstruction build_pti_construction(const ConvexPolygon& i, const ConstructionChoice& choice) {
  const std::size_t n = i.size();
  if (n < 3) throw ContractViolation("construction needs a strictly convex polygon with >= 3 vertices");
  const auto& v = i.vertices();
  const double scale = diameter(i);
  const double tol = kPointTol * std::max(1.0, scale);

  std::vector<Setpoint> normal(n);
  for (std::size_t j = 0; j < n; ++j) normal[j] = outward_normal(v[j], i.vertex(j + 1));

  PtiConstruction out;
  if (!choice.offsets.empty()) {
    if (choice.offsets.size() != n) throw ContractViolation("one offset per edge is required");
    out.offsets = choice.offsets;
  } else if (choice.g && !choice.uniform_offset) {
    // Tightest lines that keep I + G inside the outer polygon.
    for (std::size_t j = 0; j < n; ++j) {
      double h = 0.0;
      for (const auto& g : choice.g->vertices()) h = std::max(h, dot(normal[j], g));
      out.offsets.push_back(h);
    }
  } else {
    out.offsets.assign(n, choice.uniform_offset.value_or(0.1 * scale));
  }
  for (double d : out.offsets)
    if (!(d >= 0.0) || !std::isfinite(d)) throw ContractViolation("offsets must be finite and non-negative");

  // Line l_j : normal_j . x = normal_j . v_j + d_j.
  std::vector<double> level(n);
  for (std::size_t j = 0; j < n; ++j) level[j] = dot(normal[j], v[j]) + out.offsets[j];

  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t prev = (j + n - 1) % n;
    const Setpoint p = intersect_lines(normal[prev], level[prev], normal[j], level[j]);
    out.outer.push_back(p);
    if (j + 1 == n) break;
    const Cone c = corner_cone(i, j);
    const Setpoint pi = p - v[j];
    if (norm(pi) > tol && !(c.contains_negated(pi) && c.polar_contains(pi))) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "offset choice violates the corner-cone condition at vertex %zu", j);
      throw ContractViolation(buf);
    }
  }

  // Outer polygon R as the intersection of the offset half-planes.
  const auto b = i.bounds();
  double reach = scale;
  for (double d : out.offsets) reach += d;
  reach *= 4.0;
  std::vector<Setpoint> r_poly = ConvexPolygon::box(b.p_lo - reach, b.p_hi + reach, b.q_lo - reach,
                                                    b.q_hi + reach).vertices();
  std::vector<HalfPlane> lines;
  for (std::size_t j = 0; j < n; ++j) lines.push_back({normal[j], level[j]});
  r_poly = clip(r_poly, lines);
  const ConvexPolygon r = convex_hull(r_poly);

  std::vector<Setpoint> min_points{{0.0, 0.0}};
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t prev = (j + n - 1) % n;
    const Setpoint a = out.offsets[prev] * normal[prev];
    const Setpoint c = out.offsets[j] * normal[j];
    out.p_min.push_back(convex_hull(std::vector<Setpoint>{{0.0, 0.0}, a, c}));
    min_points.push_back(c);

    // C_j° cap (R - v_j)
    const std::vector<HalfPlane> polar{{i.vertex(j + 1) - v[j], 0.0}, {i.vertex(j + n - 1) - v[j], 0.0}};
    const auto part = clip(r.translated(-v[j]).vertices(), polar);
    out.p_max.push_back(part.empty() ? ConvexPolygon::point({}) : convex_hull(part));
  }

  const ConvexPolygon hull_min = convex_hull(min_points);
  out.g = choice.g.value_or(hull_min);
  if (choice.g) {
    for (const auto& p : hull_min.vertices())
      if (!out.g.contains(p, tol)) throw ContractViolation("G must contain every minimal translation region");
  }
  // The normal cones tile the plane, so G lies in the union of the P_j^max
  // iff each piece G cap C_j° lies in R - v_j.
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<HalfPlane> polar{{i.vertex(j + 1) - v[j], 0.0}, {i.vertex(j + n - 1) - v[j], 0.0}};
    for (const auto& p : clip(out.g.vertices(), polar))
      if (!r.contains(p + v[j], tol)) throw ContractViolation("convexification exceeded P_max envelope");
  }

  out.d = minkowski_sum(i, out.g);
  out.verification = is_pti_subset(i, out.d, choice.verify_samples, choice.seed);
  if (!out.verification.ok) {
    const auto& w = *out.verification.witness;
    throw ContractViolation(describe("constructed superset failed PTI verification", w.u, w.v));
  }
  return out;
}

ConvexPolygon construct_pti_superset(const ConvexPolygon& i, const ConstructionChoice& choice) {
  return build_pti_construction(i, choice).d;
}

ConvexPolygon minimal_superset(std::span<const ConvexPolygon> sets, std::size_t verify_samples,
                               std::uint64_t seed) {
  if (sets.empty()) throw ContractViolation("minimal superset of an empty family");
  if (sets.size() == 1) {
    if (sets[0].size() < 3) return sets[0];
    ConstructionChoice c;
    c.verify_samples = verify_samples;
    c.seed = seed;
    return construct_pti_superset(sets[0], c);
  }
  std::vector<Setpoint> all;
  for (const auto& s : sets) all.insert(all.end(), s.vertices().begin(), s.vertices().end());
  const double base = 0.05 * diameter(convex_hull(all));

  constexpr int kRounds = 10;
  for (int round = 0; round < kRounds; ++round) {
    const double offset = round == 0 ? 0.0 : base * std::ldexp(1.0, round - 1);
    std::vector<Setpoint> pts;
    for (const auto& s : sets) {
      if (s.size() < 3) {
        pts.insert(pts.end(), s.vertices().begin(), s.vertices().end());
        continue;
      }
      ConstructionChoice c;
      c.uniform_offset = offset;
      c.verify_samples = verify_samples;
      c.seed = seed;
      const auto d = construct_pti_superset(s, c);
      pts.insert(pts.end(), d.vertices().begin(), d.vertices().end());
    }
    const ConvexPolygon d = convex_hull(pts);
    bool ok = true;
    for (const auto& s : sets) {
      if (!is_pti_subset(s, d, verify_samples, seed).ok) {
        ok = false;
        break;
      }
    }
    if (ok) return d;
  }
  throw ContractViolation("no common PTI superset found after 10 inflation rounds");
}

UncertainAgent::UncertainAgent(ConvexSet initial_advertisement, std::optional<ConvexPolygon> superset,
                               bool debug_checks, DiffusionMode mode)
    : advert_(std::move(initial_advertisement)),
      superset_(std::move(superset)),
      debug_(debug_checks),
      mode_(mode) {}

Setpoint UncertainAgent::step(Setpoint u_req, const ConvexSet& i_now) {
  if (!to_polygon(advert_).contains(u_req)) throw ContractViolation("request not in advertised profile");
  const Setpoint x = mode_ == DiffusionMode::kErrorDiffusion ? u_req - state_.e() : u_req;
  if (debug_ && superset_) {
    const auto r = is_pti_subset(i_now, *superset_, 64, state_.k());
    if (!r.ok) throw ContractViolation(describe("implementable set is not PTI in D", r.witness->u, r.witness->v));
    if (!superset_->contains(x)) throw DomainViolation(u_req, state_.e());
  }
  const Setpoint imp = project_convex(i_now, x);
  state_.record(u_req, imp);
  advert_ = i_now;
  return imp;
}

}  // namespace diffuse
