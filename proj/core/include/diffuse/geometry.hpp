#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace diffuse {

// Raised when a caller breaks a documented precondition. The CLI maps it to
// exit status 1.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised for malformed input files and configuration. CLI exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPointTol = 1e-9;
inline constexpr double kSignTol = 1e-12;

// Active/reactive power pair (P, Q) in watts / var. Also used as a plain 2-D
// vector for translations and edge directions.
struct Setpoint {
  double p = 0.0;
  double q = 0.0;

  friend Setpoint operator+(Setpoint a, Setpoint b) { return {a.p + b.p, a.q + b.q}; }
  friend Setpoint operator-(Setpoint a, Setpoint b) { return {a.p - b.p, a.q - b.q}; }
  friend Setpoint operator-(Setpoint a) { return {-a.p, -a.q}; }
  friend Setpoint operator*(double s, Setpoint a) { return {s * a.p, s * a.q}; }
  friend Setpoint operator*(Setpoint a, double s) { return {s * a.p, s * a.q}; }
  Setpoint& operator+=(Setpoint b) {
    p += b.p;
    q += b.q;
    return *this;
  }
  Setpoint& operator-=(Setpoint b) {
    p -= b.p;
    q -= b.q;
    return *this;
  }
  friend bool operator==(Setpoint, Setpoint) = default;
};

inline double dot(Setpoint a, Setpoint b) { return a.p * b.p + a.q * b.q; }
inline double cross(Setpoint a, Setpoint b) { return a.p * b.q - a.q * b.p; }
inline double norm(Setpoint a) { return std::hypot(a.p, a.q); }
inline double distance(Setpoint a, Setpoint b) { return norm(a - b); }
inline bool near(Setpoint a, Setpoint b, double tol = kPointTol) {
  return distance(a, b) <= tol;
}

// Sorted, duplicate-free codebook of real-power values.
class FiniteSet1D {
 public:
  FiniteSet1D() = default;
  // Requires strictly increasing finite values.
  explicit FiniteSet1D(std::vector<double> values);
  // Sorts and drops exact duplicates first.
  static FiniteSet1D from_unsorted(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  bool contains(double x, double tol = kPointTol) const;

 private:
  std::vector<double> values_;
};

// Nearest element of s. A distance tie (within kPointTol) resolves toward
// tie_toward when it is one of the tied candidates, otherwise to the larger.
double project_finite(const FiniteSet1D& s, double x,
                      std::optional<double> tie_toward = std::nullopt);

// Largest gap between consecutive elements; 0 for a singleton.
double max_stepsize(const FiniteSet1D& s);
// Max over a non-empty collection.
double max_stepsize(std::span<const FiniteSet1D> sets);

// Convex polygon with strictly convex counter-clockwise vertices. One vertex
// is a point, two a segment. Only convex_hull and the named factories build
// one, so the invariant holds for every instance.
class ConvexPolygon {
 public:
  static ConvexPolygon point(Setpoint p);
  static ConvexPolygon segment(Setpoint a, Setpoint b);
  static ConvexPolygon box(double p_lo, double p_hi, double q_lo, double q_hi);

  const std::vector<Setpoint>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  const Setpoint& vertex(std::size_t i) const { return v_[i % v_.size()]; }
  bool is_point() const { return v_.size() == 1; }
  bool is_segment() const { return v_.size() == 2; }

  bool contains(Setpoint x, double tol = kPointTol) const;

  // Axis-aligned bounds {p_lo, p_hi, q_lo, q_hi}.
  struct Bounds {
    double p_lo, p_hi, q_lo, q_hi;
  };
  Bounds bounds() const;

  ConvexPolygon translated(Setpoint t) const;

 private:
  friend ConvexPolygon convex_hull(std::span<const Setpoint> points);
  explicit ConvexPolygon(std::vector<Setpoint> ccw) : v_(std::move(ccw)) {}
  std::vector<Setpoint> v_;
};

ConvexPolygon convex_hull(std::span<const Setpoint> points);
inline ConvexPolygon convex_hull(const std::vector<Setpoint>& points) {
  return convex_hull(std::span<const Setpoint>(points));
}
ConvexPolygon minkowski_sum(const ConvexPolygon& a, const ConvexPolygon& b);
double diameter(const ConvexPolygon& poly);

// Closed interval of real power with zero reactive power.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  ConvexPolygon polygon() const;
};

// T(x) = {0 <= P <= x, |Q| <= P tan(phi)}, the inverter feasible set.
struct TriangleSet {
  double x = 0.0;
  double phi = 0.0;
  ConvexPolygon polygon() const;
};

using ConvexSet = std::variant<Interval, TriangleSet, ConvexPolygon>;

ConvexPolygon to_polygon(const ConvexSet& s);

// Euclidean projection. For a polygon x is clamped onto every edge and the
// nearest candidate wins; the first edge in CCW order from vertex 0 wins ties.
Setpoint project_convex(const ConvexPolygon& poly, Setpoint x);
Setpoint project_convex(const Interval& s, Setpoint x);
Setpoint project_convex(const TriangleSet& s, Setpoint x);
Setpoint project_convex(const ConvexSet& s, Setpoint x);

// Closed cone {a*v + b*w : a, b >= 0} spanned by the edges leaving a corner.
struct Cone {
  Setpoint v;
  Setpoint w;

  bool contains(Setpoint x) const;
  // Polar cone: y . v <= 0 and y . w <= 0.
  bool polar_contains(Setpoint y) const;
  bool contains_negated(Setpoint x) const { return contains(-x); }
};

// Cone at vertex i spanned by v_{i+1} - v_i and v_{i-1} - v_i. Requires a
// polygon with at least three vertices.
Cone corner_cone(const ConvexPolygon& poly, std::size_t i);

// Intersection of poly with the half-plane {x : n . x <= b}. May be empty.
std::vector<Setpoint> clip_halfplane(const std::vector<Setpoint>& poly,
                                     Setpoint n, double b);

}  // namespace diffuse
