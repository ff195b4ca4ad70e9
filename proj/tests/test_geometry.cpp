#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "diffuse/geometry.hpp"

using namespace diffuse;

namespace {

std::mt19937_64 rng_for(const char* name) { return std::mt19937_64(std::hash<std::string>{}(name)); }

double uni(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<Setpoint> disk_points(std::mt19937_64& rng, int n, double radius = 1.0) {
  std::vector<Setpoint> pts;
  while (static_cast<int>(pts.size()) < n) {
    Setpoint p{uni(rng, -radius, radius), uni(rng, -radius, radius)};
    if (norm(p) <= radius) pts.push_back(p);
  }
  return pts;
}

// O(n^3): (a, b) is a hull edge iff every other point lies strictly left of a->b.
std::vector<Setpoint> brute_hull_vertices(const std::vector<Setpoint>& pts) {
  std::vector<Setpoint> out;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < pts.size(); ++b) {
      if (a == b) continue;
      bool edge = true;
      for (std::size_t c = 0; c < pts.size() && edge; ++c)
        if (c != a && c != b && cross(pts[b] - pts[a], pts[c] - pts[a]) <= 0.0) edge = false;
      if (edge) out.push_back(pts[a]);
    }
  return out;
}

bool same_vertex_set(std::vector<Setpoint> a, std::vector<Setpoint> b) {
  if (a.size() != b.size()) return false;
  auto lt = [](Setpoint x, Setpoint y) { return x.p < y.p || (x.p == y.p && x.q < y.q); };
  std::sort(a.begin(), a.end(), lt);
  std::sort(b.begin(), b.end(), lt);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!near(a[i], b[i], 1e-12)) return false;
  return true;
}

void expect_strictly_convex_ccw(const ConvexPolygon& poly) {
  const auto n = poly.size();
  if (n < 3) return;
  for (std::size_t i = 0; i < n; ++i)
    EXPECT_GT(cross(poly.vertex(i + 1) - poly.vertex(i), poly.vertex(i + 2) - poly.vertex(i + 1)), 0.0);
}

std::vector<Setpoint> pairwise_sums(const ConvexPolygon& a, const ConvexPolygon& b) {
  std::vector<Setpoint> out;
  for (const auto& u : a.vertices())
    for (const auto& v : b.vertices()) out.push_back(u + v);
  return out;
}

double brute_diameter(const std::vector<Setpoint>& pts) {
  double d = 0.0;
  for (const auto& a : pts)
    for (const auto& b : pts) d = std::max(d, distance(a, b));
  return d;
}

// Variational characterisation: p = proj_S(x) iff p in S and (x - p).(s - p) <= 0
// for every s in S; checking the vertices suffices for a polygon.
void expect_is_projection(const ConvexPolygon& s, Setpoint x, Setpoint p) {
  EXPECT_TRUE(s.contains(p, 1e-9));
  const double scale = std::max(1.0, norm(x - p));
  for (const auto& v : s.vertices()) EXPECT_LE(dot(x - p, v - p), 1e-9 * scale * std::max(1.0, norm(v - p)));
}

// Solve a v + b w = x by Cramer's rule.
bool cramer_in_cone(Setpoint v, Setpoint w, Setpoint x) {
  const double det = cross(v, w);
  const double a = cross(x, w) / det;
  const double b = cross(v, x) / det;
  return a >= 0.0 && b >= 0.0;
}

}  // namespace

TEST(ProjectFinite, MidpointTieGoesToLargerValue) {
  EXPECT_EQ(project_finite(FiniteSet1D({-15000, 0}), -7500), 0.0);
}

TEST(ProjectFinite, TieBreaksTowardRequestWhenTied) {
  EXPECT_EQ(project_finite(FiniteSet1D({0, 1}), 0.5, 1.0), 1.0);
  EXPECT_EQ(project_finite(FiniteSet1D({0, 1}), 0.5, 0.0), 0.0);
  // tie_toward not among the tied candidates: fall back to the larger one.
  EXPECT_EQ(project_finite(FiniteSet1D({0, 1}), 0.5, 7.0), 1.0);
}

TEST(ProjectFinite, NearestElement) {
  EXPECT_EQ(project_finite(FiniteSet1D({2, 5, 9}), 6), 5.0);
  EXPECT_EQ(project_finite(FiniteSet1D({2, 5, 9}), -100), 2.0);
  EXPECT_EQ(project_finite(FiniteSet1D({2, 5, 9}), 100), 9.0);
}

TEST(ProjectFinite, MatchesBruteForceAndHalfStepBound) {
  auto rng = rng_for("ProjectFinite.brute");
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> v;
    const int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) v.push_back(uni(rng, -1e5, 1e5));
    const auto s = FiniteSet1D::from_unsorted(v);
    const double x = uni(rng, s.min(), s.max());
    const double p = project_finite(s, x);
    double best = INFINITY;
    for (double c : s.values()) best = std::min(best, std::abs(c - x));
    EXPECT_TRUE(s.contains(p));
    EXPECT_NEAR(std::abs(p - x), best, 1e-9);
    EXPECT_LE(std::abs(p - x), 0.5 * max_stepsize(s) + 1e-9);
  }
}

TEST(FiniteSet, RejectsUnsortedAndEmpty) {
  EXPECT_THROW(FiniteSet1D({1, 0}), ContractViolation);
  EXPECT_THROW(FiniteSet1D({1, 1}), ContractViolation);
  EXPECT_THROW(FiniteSet1D(std::vector<double>{}), ContractViolation);
  EXPECT_THROW(FiniteSet1D({0, NAN}), ContractViolation);
}

TEST(MaxStepsize, Examples) {
  EXPECT_EQ(max_stepsize(FiniteSet1D({7})), 0.0);
  EXPECT_EQ(max_stepsize(FiniteSet1D({-15000, 0})), 15000.0);
  const std::vector<FiniteSet1D> ss{FiniteSet1D({0, 2, 10}), FiniteSet1D({1, 4})};
  EXPECT_EQ(max_stepsize(ss), 8.0);
  EXPECT_THROW(max_stepsize(std::span<const FiniteSet1D>{}), ContractViolation);
}

TEST(ConvexHull, DegenerateInputs) {
  const std::vector<Setpoint> one{{0, 0}};
  const auto p = convex_hull(one);
  EXPECT_TRUE(p.is_point());
  EXPECT_EQ(p.vertex(0), (Setpoint{0, 0}));

  const std::vector<Setpoint> two{{-15000, 0}, {0, 0}};
  const auto s = convex_hull(two);
  ASSERT_TRUE(s.is_segment());
  EXPECT_TRUE(same_vertex_set(s.vertices(), two));

  const std::vector<Setpoint> collinear{{0, 0}, {1, 1}, {2, 2}, {0.5, 0.5}};
  EXPECT_TRUE(convex_hull(collinear).is_segment());
  const std::vector<Setpoint> dup{{1, 1}, {1, 1}, {1, 1 + 1e-12}};
  EXPECT_TRUE(convex_hull(dup).is_point());
  EXPECT_THROW(convex_hull(std::vector<Setpoint>{}), ContractViolation);
}

TEST(ConvexHull, MatchesBruteForceOnDiskSamples) {
  auto rng = rng_for("ConvexHull.disk");
  for (int n : {3, 5, 8, 12, 12, 12, 100}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto pts = disk_points(rng, n);
      const auto h = convex_hull(pts);
      EXPECT_TRUE(same_vertex_set(h.vertices(), brute_hull_vertices(pts))) << "n=" << n;
      expect_strictly_convex_ccw(h);
    }
  }
}

TEST(Minkowski, TranslationBySinglePoint) {
  const auto s = minkowski_sum(ConvexPolygon::segment({-1, 0}, {1, 0}), ConvexPolygon::point({0, 2}));
  ASSERT_TRUE(s.is_segment());
  EXPECT_TRUE(same_vertex_set(s.vertices(), {{-1, 2}, {1, 2}}));
}

TEST(Minkowski, UnitSquaresGiveSideTwo) {
  const auto u = ConvexPolygon::box(0, 1, 0, 1);
  const auto s = minkowski_sum(u, u);
  EXPECT_TRUE(same_vertex_set(s.vertices(), {{0, 0}, {2, 0}, {2, 2}, {0, 2}}));
}

TEST(Minkowski, MatchesHullOfPairwiseSums) {
  const auto t = TriangleSet{1.0, std::numbers::pi / 4}.polygon();
  const auto seg = ConvexPolygon::segment({-0.5, 0}, {0.5, 0});
  EXPECT_TRUE(same_vertex_set(minkowski_sum(t, seg).vertices(), convex_hull(pairwise_sums(t, seg)).vertices()));

  auto rng = rng_for("Minkowski.random");
  for (int rep = 0; rep < 300; ++rep) {
    const auto a = convex_hull(disk_points(rng, 1 + static_cast<int>(rng() % 10), 5.0));
    const auto b = convex_hull(disk_points(rng, 1 + static_cast<int>(rng() % 10), 2.0));
    const auto ab = minkowski_sum(a, b);
    EXPECT_TRUE(same_vertex_set(ab.vertices(), convex_hull(pairwise_sums(a, b)).vertices()));
    expect_strictly_convex_ccw(ab);
    EXPECT_TRUE(same_vertex_set(ab.vertices(), minkowski_sum(b, a).vertices()));
    EXPECT_LE(diameter(ab), diameter(a) + diameter(b) + 1e-9);
  }
}

TEST(Minkowski, Associative) {
  auto rng = rng_for("Minkowski.assoc");
  for (int rep = 0; rep < 100; ++rep) {
    const auto a = convex_hull(disk_points(rng, 6));
    const auto b = convex_hull(disk_points(rng, 4));
    const auto c = convex_hull(disk_points(rng, 5));
    const auto l = minkowski_sum(minkowski_sum(a, b), c).vertices();
    const auto r = minkowski_sum(a, minkowski_sum(b, c)).vertices();
    ASSERT_EQ(l.size(), r.size());
    for (const auto& v : l) {
      double best = INFINITY;
      for (const auto& w : r) best = std::min(best, distance(v, w));
      EXPECT_LE(best, 1e-9);
    }
  }
}

TEST(Diameter, PointAndTriangleFamily) {
  EXPECT_EQ(diameter(ConvexPolygon::point({3, 4})), 0.0);
  const double pmax = 1e4;
  for (double phi : {0.0, 0.2, std::numbers::pi / 6, std::numbers::pi / 4, 1.2}) {
    const double expected = phi <= std::numbers::pi / 6 ? pmax / std::cos(phi) : 2 * pmax * std::tan(phi);
    EXPECT_NEAR(diameter(TriangleSet{pmax, phi}.polygon()), expected, 1e-9 * expected) << phi;
  }
}

TEST(Diameter, MatchesBruteForceOverInputPoints) {
  auto rng = rng_for("Diameter.brute");
  for (int rep = 0; rep < 500; ++rep) {
    const auto pts = disk_points(rng, 1 + static_cast<int>(rng() % 30), 100.0);
    EXPECT_NEAR(diameter(convex_hull(pts)), brute_diameter(pts), 1e-9);
  }
}

TEST(ProjectConvex, InsidePointIsFixed) {
  const auto sq = ConvexPolygon::box(0, 2, 0, 2);
  EXPECT_EQ(project_convex(sq, {1, 1}), (Setpoint{1, 1}));
  EXPECT_EQ(project_convex(Interval{0, 5}, {3, 0}), (Setpoint{3, 0}));
}

TEST(ProjectConvex, TriangleApexAxis) {
  const TriangleSet t{10, std::numbers::pi / 4};
  const auto p = project_convex(t, {20, 0});
  EXPECT_NEAR(p.p, 10, 1e-12);
  EXPECT_NEAR(p.q, 0, 1e-12);

  // Dense-grid oracle over the triangle.
  double best = INFINITY;
  Setpoint arg;
  for (int i = 0; i <= 400; ++i)
    for (int j = -400; j <= 400; ++j) {
      const Setpoint s{10.0 * i / 400, 10.0 * j / 400};
      if (std::abs(s.q) > s.p * std::tan(t.phi) + 1e-12) continue;
      if (distance(s, {20, 0}) < best) best = distance(s, {20, 0}), arg = s;
    }
  EXPECT_LE(distance(p, arg), 0.05);
}

TEST(ProjectConvex, IntervalClamp) {
  EXPECT_EQ(project_convex(Interval{0, 5}.polygon(), {7, 0}), (Setpoint{5, 0}));
  EXPECT_EQ(project_convex(Interval{0, 5}, {7, 3}), (Setpoint{5, 0}));
}

TEST(ProjectConvex, SatisfiesVariationalInequality) {
  auto rng = rng_for("ProjectConvex.vi");
  for (int rep = 0; rep < 1000; ++rep) {
    const auto s = convex_hull(disk_points(rng, 1 + static_cast<int>(rng() % 9), 3.0));
    const Setpoint x{uni(rng, -6, 6), uni(rng, -6, 6)};
    expect_is_projection(s, x, project_convex(s, x));
  }
}

TEST(ProjectConvex, IdempotentAndNonExpansive) {
  auto rng = rng_for("ProjectConvex.nonexp");
  const auto s = convex_hull(disk_points(rng, 7, 2.0));
  const TriangleSet t{3.0, 0.6};
  for (int rep = 0; rep < 1000; ++rep) {
    const Setpoint x{uni(rng, -5, 5), uni(rng, -5, 5)};
    const Setpoint y{uni(rng, -5, 5), uni(rng, -5, 5)};
    const auto px = project_convex(s, x);
    EXPECT_LE(distance(project_convex(s, px), px), 1e-12);
    EXPECT_LE(distance(px, project_convex(s, y)), distance(x, y) + 1e-12);
    const auto tx = project_convex(t, x);
    EXPECT_LE(distance(project_convex(t, tx), tx), 1e-12);
    EXPECT_LE(distance(tx, project_convex(t, y)), distance(x, y) + 1e-12);
  }
}

TEST(Cone, UnitSquareCorner) {
  const auto sq = ConvexPolygon::box(0, 1, 0, 1);
  std::size_t origin = 0;
  for (std::size_t i = 0; i < sq.size(); ++i)
    if (sq.vertex(i) == Setpoint{0, 0}) origin = i;
  const Cone c = corner_cone(sq, origin);
  EXPECT_TRUE(c.contains({1, 0}));
  EXPECT_TRUE(c.contains({0.3, 0.7}));
  EXPECT_TRUE(c.contains_negated({-1, -1}));
  EXPECT_TRUE(c.polar_contains({-1, -1}));
  EXPECT_FALSE(c.polar_contains({1, 1}));
  EXPECT_FALSE(c.contains({-0.1, 1}));
}

TEST(Cone, AgreesWithCramerOracle) {
  auto rng = rng_for("Cone.cramer");
  for (int rep = 0; rep < 20; ++rep) {
    const auto tri = convex_hull(disk_points(rng, 3));
    ASSERT_EQ(tri.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      const Cone c = corner_cone(tri, i);
      EXPECT_EQ(c.v, tri.vertex(i + 1) - tri.vertex(i));
      EXPECT_EQ(c.w, tri.vertex(i + 2) - tri.vertex(i));
      for (int k = 0; k < 1000; ++k) {
        const Setpoint x{uni(rng, -1, 1), uni(rng, -1, 1)};
        // Skip points within the sign tolerance of a boundary ray.
        if (std::abs(cross(c.v, x)) < 1e-9 || std::abs(cross(c.w, x)) < 1e-9) continue;
        EXPECT_EQ(c.contains(x), cramer_in_cone(c.v, c.w, x));
        EXPECT_EQ(c.polar_contains(x), dot(x, c.v) <= 0 && dot(x, c.w) <= 0);
      }
    }
  }
}

TEST(Cone, RejectsDegenerateAndOutOfRange) {
  EXPECT_THROW(corner_cone(ConvexPolygon::segment({0, 0}, {1, 0}), 0), ContractViolation);
  EXPECT_THROW(corner_cone(ConvexPolygon::box(0, 1, 0, 1), 4), ContractViolation);
}

TEST(ClipHalfplane, KeepsFeasibleSide) {
  const auto sq = ConvexPolygon::box(0, 2, 0, 2).vertices();
  const auto cut = clip_halfplane(sq, {1, 0}, 1.0);
  EXPECT_TRUE(same_vertex_set(convex_hull(cut).vertices(), {{0, 0}, {1, 0}, {1, 2}, {0, 2}}));
  EXPECT_TRUE(clip_halfplane(sq, {1, 0}, -1.0).empty());
  EXPECT_EQ(clip_halfplane(sq, {1, 0}, 5.0).size(), 4u);
}

TEST(Polygon, ContainsAndBounds) {
  const auto t = TriangleSet{10, std::numbers::pi / 4}.polygon();
  EXPECT_TRUE(t.contains({5, 5}));
  EXPECT_FALSE(t.contains({5, 5.001}));
  EXPECT_TRUE(t.contains({5, 5 + 1e-10}));
  const auto b = t.bounds();
  EXPECT_DOUBLE_EQ(b.p_lo, 0);
  EXPECT_DOUBLE_EQ(b.p_hi, 10);
  EXPECT_NEAR(b.q_hi, 10, 1e-12);
  EXPECT_TRUE(ConvexPolygon::segment({0, 0}, {2, 2}).contains({1, 1}));
  EXPECT_FALSE(ConvexPolygon::segment({0, 0}, {2, 2}).contains({1, 1.1}));
  EXPECT_TRUE((TriangleSet{0, 0.5}.polygon().is_point()));
}
