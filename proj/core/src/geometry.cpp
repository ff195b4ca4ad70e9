#include "diffuse/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace diffuse {

FiniteSet1D::FiniteSet1D(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractViolation("finite set must be non-empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw ContractViolation("finite set values must be finite");
    if (i > 0 && !(values_[i - 1] < values_[i]))
      throw ContractViolation("finite set values must be strictly increasing");
  }
}

FiniteSet1D FiniteSet1D::from_unsorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return FiniteSet1D(std::move(values));
}

bool FiniteSet1D::contains(double x, double tol) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), x - tol);
  return it != values_.end() && *it <= x + tol;
}

double project_finite(const FiniteSet1D& s, double x, std::optional<double> tie_toward) {
  if (s.empty()) throw ContractViolation("projection onto an empty set");
  const auto& v = s.values();
  if (x <= v.front()) return v.front();
  if (x >= v.back()) return v.back();
  // v[i-1] < x <= v[i]
  const auto i = static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  const double lo = v[i - 1];
  const double hi = v[i];
  const double d_lo = x - lo;
  const double d_hi = hi - x;
  if (std::abs(d_lo - d_hi) > kPointTol) return d_lo < d_hi ? lo : hi;
  if (tie_toward) {
    const double t_lo = std::abs(*tie_toward - lo);
    const double t_hi = std::abs(*tie_toward - hi);
    if (std::abs(t_lo - t_hi) > kPointTol) return t_lo < t_hi ? lo : hi;
  }
  return hi;
}

double max_stepsize(const FiniteSet1D& s) {
  double best = 0.0;
  const auto& v = s.values();
  for (std::size_t i = 1; i < v.size(); ++i) best = std::max(best, v[i] - v[i - 1]);
  return best;
}

double max_stepsize(std::span<const FiniteSet1D> sets) {
  if (sets.empty()) throw ContractViolation("empty collection");
  double best = 0.0;
  for (const auto& s : sets) best = std::max(best, max_stepsize(s));
  return best;
}

// ---------------------------------------------------------------------------

namespace {

// Left turn a -> b -> c beyond the relative sign tolerance.
bool strictly_left(Setpoint a, Setpoint b, Setpoint c) {
  const Setpoint u = b - a;
  const Setpoint w = c - b;
  return cross(u, w) > kSignTol * norm(u) * norm(w) && norm(u) > kPointTol &&
         norm(w) > kPointTol;
}

Setpoint clamp_to_segment(Setpoint a, Setpoint b, Setpoint x) {
  const Setpoint d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(x - a, d) / len2, 0.0, 1.0);
  return a + t * d;
}

}  // namespace

ConvexPolygon convex_hull(std::span<const Setpoint> points) {
  if (points.empty()) throw ContractViolation("convex hull of an empty point set");
  std::vector<Setpoint> pts(points.begin(), points.end());
  for (const auto& p : pts)
    if (!std::isfinite(p.p) || !std::isfinite(p.q))
      throw ContractViolation("convex hull of non-finite points");
  std::sort(pts.begin(), pts.end(), [](Setpoint a, Setpoint b) {
    return a.p < b.p || (a.p == b.p && a.q < b.q);
  });

  // Andrew's monotone chain; collinear and coincident points are dropped.
  std::vector<Setpoint> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && !strictly_left(h[k - 2], h[k - 1], p)) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const auto& p = pts[i];
    while (k >= lower && !strictly_left(h[k - 2], h[k - 1], p)) --k;
    h[k++] = p;
  }
  h.resize(k > 1 ? k - 1 : 1);

  std::vector<Setpoint> out;
  for (const auto& p : h)
    if (out.empty() || !near(out.back(), p)) out.push_back(p);
  while (out.size() > 1 && near(out.front(), out.back())) out.pop_back();
  if (out.size() == 2 && near(out[0], out[1])) out.pop_back();
  // A near-degenerate chain can leave a spike; drop it to keep strict convexity.
  if (out.size() >= 3) {
    bool changed = true;
    while (changed && out.size() >= 3) {
      changed = false;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& a = out[(i + out.size() - 1) % out.size()];
        const auto& c = out[(i + 1) % out.size()];
        if (!strictly_left(a, out[i], c)) {
          out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
      }
    }
    if (out.size() == 2 && near(out[0], out[1])) out.pop_back();
  }
  return ConvexPolygon(std::move(out));
}

ConvexPolygon ConvexPolygon::point(Setpoint p) {
  return convex_hull(std::vector<Setpoint>{p});
}

ConvexPolygon ConvexPolygon::segment(Setpoint a, Setpoint b) {
  return convex_hull(std::vector<Setpoint>{a, b});
}

ConvexPolygon ConvexPolygon::box(double p_lo, double p_hi, double q_lo, double q_hi) {
  if (p_lo > p_hi || q_lo > q_hi) throw ContractViolation("box bounds are inverted");
  return convex_hull(std::vector<Setpoint>{{p_lo, q_lo}, {p_hi, q_lo}, {p_hi, q_hi}, {p_lo, q_hi}});
}

bool ConvexPolygon::contains(Setpoint x, double tol) const {
  if (v_.size() == 1) return distance(v_[0], x) <= tol;
  if (v_.size() == 2) return distance(clamp_to_segment(v_[0], v_[1], x), x) <= tol;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Setpoint e = vertex(i + 1) - v_[i];
    if (cross(e, x - v_[i]) < -tol * norm(e)) return false;
  }
  return true;
}

ConvexPolygon::Bounds ConvexPolygon::bounds() const {
  Bounds b{v_[0].p, v_[0].p, v_[0].q, v_[0].q};
  for (const auto& p : v_) {
    b.p_lo = std::min(b.p_lo, p.p);
    b.p_hi = std::max(b.p_hi, p.p);
    b.q_lo = std::min(b.q_lo, p.q);
    b.q_hi = std::max(b.q_hi, p.q);
  }
  return b;
}

ConvexPolygon ConvexPolygon::translated(Setpoint t) const {
  ConvexPolygon out = *this;
  for (auto& p : out.v_) p += t;
  return out;
}

namespace {

std::size_t lowest_vertex(const std::vector<Setpoint>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].q < v[best].q || (v[i].q == v[best].q && v[i].p < v[best].p)) best = i;
  return best;
}

double edge_angle(Setpoint d) {
  double a = std::atan2(d.q, d.p);
  if (a < 0) a += 2 * std::numbers::pi;
  return a;
}

// Edges in CCW order starting at the lowest vertex. Empty for a point.
std::vector<Setpoint> edges_from_lowest(const ConvexPolygon& poly, Setpoint& start) {
  const auto& v = poly.vertices();
  const std::size_t s = lowest_vertex(v);
  start = v[s];
  std::vector<Setpoint> e;
  if (v.size() == 1) return e;
  for (std::size_t i = 0; i < v.size(); ++i) e.push_back(v[(s + i + 1) % v.size()] - v[(s + i) % v.size()]);
  return e;
}

}  // namespace

ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b) {
  Setpoint sa, sb;
  const auto ea = edges_from_lowest(a, sa);
  const auto eb = edges_from_lowest(b, sb);
  std::vector<Setpoint> out{sa + sb};
  std::size_t i = 0, j = 0;
  Setpoint cur = sa + sb;
  while (i < ea.size() || j < eb.size()) {
    bool take_a;
    if (i == ea.size())
      take_a = false;
    else if (j == eb.size())
      take_a = true;
    else
      take_a = edge_angle(ea[i]) <= edge_angle(eb[j]);
    cur += take_a ? ea[i++] : eb[j++];
    out.push_back(cur);
  }
  return convex_hull(out);
}

double diameter(const ConvexPolygon& poly) {
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  if (n == 1) return 0.0;
  if (n <= 3) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, distance(v[i], v[j]));
    return best;
  }
  // Rotating calipers over antipodal vertex pairs.
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ni = (i + 1) % n;
    const Setpoint e = v[ni] - v[i];
    while (std::abs(cross(e, v[(j + 1) % n] - v[i])) > std::abs(cross(e, v[j] - v[i])))
      j = (j + 1) % n;
    best = std::max({best, distance(v[i], v[j]), distance(v[ni], v[j])});
  }
  return best;
}

ConvexPolygon Interval::polygon() const {
  if (!(lo <= hi)) throw ContractViolation("interval bounds are inverted");
  return ConvexPolygon::segment({lo, 0.0}, {hi, 0.0});
}

ConvexPolygon TriangleSet::polygon() const {
  if (!(x >= 0.0)) throw ContractViolation("triangle extent must be non-negative");
  if (!(phi >= 0.0 && phi < std::numbers::pi / 2))
    throw ContractViolation("triangle angle must lie in [0, pi/2)");
  const double h = x * std::tan(phi);
  return convex_hull(std::vector<Setpoint>{{0.0, 0.0}, {x, -h}, {x, h}});
}

ConvexPolygon to_polygon(const ConvexSet& s) {
  return std::visit([](const auto& set) -> ConvexPolygon {
    if constexpr (std::is_same_v<std::decay_t<decltype(set)>, ConvexPolygon>)
      return set;
    else
      return set.polygon();
  }, s);
}

Setpoint project_convex(const ConvexPolygon& poly, Setpoint x) {
  const auto& v = poly.vertices();
  if (v.size() == 1) return v[0];
  if (v.size() == 2) return clamp_to_segment(v[0], v[1], x);
  if (poly.contains(x, 0.0)) return x;
  Setpoint best = v[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Setpoint c = clamp_to_segment(v[i], poly.vertex(i + 1), x);
    const double d = distance(c, x);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Setpoint project_convex(const Interval& s, Setpoint x) {
  if (!(s.lo <= s.hi)) throw ContractViolation("interval bounds are inverted");
  return {std::clamp(x.p, s.lo, s.hi), 0.0};
}

Setpoint project_convex(const TriangleSet& s, Setpoint x) {
  return project_convex(s.polygon(), x);
}

Setpoint project_convex(const ConvexSet& s, Setpoint x) {
  return std::visit([&](const auto& set) { return project_convex(set, x); }, s);
}

bool Cone::contains(Setpoint x) const {
  const double nx = norm(x);
  if (nx == 0.0) return true;
  const double vw = cross(v, w);
  const double a = cross(v, x) / (norm(v) * nx);
  const double b = cross(x, w) / (norm(w) * nx);
  if (std::abs(vw) <= kSignTol * norm(v) * norm(w)) {
    // Degenerate (flat or zero) corner: x must lie on the ray of v or w.
    return (std::abs(a) <= kSignTol && dot(x, v) >= 0) ||
           (std::abs(b) <= kSignTol && dot(x, w) >= 0);
  }
  if (vw > 0) return a >= -kSignTol && b >= -kSignTol;
  return a <= kSignTol && b <= kSignTol;
}

bool Cone::polar_contains(Setpoint y) const {
  const double ny = norm(y);
  if (ny == 0.0) return true;
  return dot(y, v) <= kSignTol * ny * norm(v) && dot(y, w) <= kSignTol * ny * norm(w);
}

Cone corner_cone(const ConvexPolygon& poly, std::size_t i) {
  const std::size_t n = poly.size();
  if (n < 3) throw ContractViolation("corner cone needs a polygon with at least 3 vertices");
  if (i >= n) throw ContractViolation("vertex index out of range");
  const Setpoint vi = poly.vertex(i);
  return Cone{poly.vertex(i + 1) - vi, poly.vertex(i + n - 1) - vi};
}

std::vector<Setpoint> clip_halfplane(const std::vector<Setpoint>& poly, Setpoint n, double b) {
  std::vector<Setpoint> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Setpoint cur = poly[i];
    const Setpoint nxt = poly[(i + 1) % m];
    const double fc = dot(n, cur) - b;
    const double fn = dot(n, nxt) - b;
    if (fc <= 0) out.push_back(cur);
    if ((fc <= 0) != (fn <= 0)) {
      const double t = fc / (fc - fn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  return out;
}

}  // namespace diffuse
