#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "diffuse/uncertain_agents.hpp"

using namespace diffuse;

namespace {

constexpr double kPi = std::numbers::pi;

bool same_polygon(const ConvexPolygon& a, const ConvexPolygon& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& v : a.vertices()) {
    double best = INFINITY;
    for (const auto& w : b.vertices()) best = std::min(best, distance(v, w));
    if (best > tol) return false;
  }
  return true;
}

// Brute-force PTI check on a grid of v in D and all vertices u of I.
bool grid_pti(const ConvexPolygon& i, const ConvexPolygon& d, int n) {
  const auto b = d.bounds();
  for (int a = 0; a <= n; ++a)
    for (int c = 0; c <= n; ++c) {
      const Setpoint v{b.p_lo + (b.p_hi - b.p_lo) * a / n, b.q_lo + (b.q_hi - b.q_lo) * c / n};
      if (!d.contains(v)) continue;
      const Setpoint t = v - project_convex(i, v);
      for (const auto& u : i.vertices())
        if (!d.contains(u + t, 1e-9 * std::max(1.0, norm(u + t)))) return false;
    }
  return true;
}

}  // namespace

TEST(PvFeasibleSet, Examples) {
  const PvParams pv{10, kPi / 6, std::nullopt};
  EXPECT_TRUE(pv_feasible_set(pv, 0).polygon().is_point());
  EXPECT_DOUBLE_EQ(pv_feasible_set(pv, 25).x, 10);
  EXPECT_DOUBLE_EQ(pv_feasible_set(pv, 10).x, 10);
  const auto seg = pv_feasible_set({10, 0, std::nullopt}, 3).polygon();
  ASSERT_TRUE(seg.is_segment());
  EXPECT_TRUE(seg.contains({0, 0}));
  EXPECT_TRUE(seg.contains({3, 0}));
  EXPECT_FALSE(seg.contains({3.1, 0}));
  EXPECT_THROW(pv_feasible_set(pv, -1), ContractViolation);
}

TEST(PvErrorBound, MatchesDiameter) {
  for (double phi : {0.0, kPi / 6, kPi / 4, 1.2}) {
    const PvParams pv{1e4, phi, std::nullopt};
    EXPECT_NEAR(pv_error_bound(pv), diameter(TriangleSet{1e4, phi}.polygon()), 1e-9 * 1e4);
  }
  EXPECT_NEAR(pv_error_bound({1e4, kPi / 4, std::nullopt}), 2e4, 1e-9);
  EXPECT_THROW(pv_error_bound({1e4, kPi / 3, 1e4}), ContractViolation);  // p_max > s_rated cos(phi)
}

TEST(IsPtiSubset, Examples) {
  EXPECT_TRUE(is_pti_subset(Interval{2, 5}, Interval{0, 10}.polygon(), 10000, 1).ok);

  const auto sq = ConvexPolygon::box(0, 1, 0, 1);
  const auto diag = ConvexPolygon::segment({0, 0}, {1, 1});
  const auto r = is_pti_subset(diag, sq, 1000, 2);
  ASSERT_FALSE(r.ok);
  ASSERT_TRUE(r.witness.has_value());
  const auto& w = *r.witness;
  EXPECT_TRUE(diag.contains(w.u));
  EXPECT_TRUE(sq.contains(w.v));
  EXPECT_FALSE(sq.contains(w.u + w.v - project_convex(diag, w.v)));
  // The hand-computed witness.
  EXPECT_FALSE(sq.contains(Setpoint{1, 1} + Setpoint{1, 0} - project_convex(diag, {1, 0})));

  const auto tri = TriangleSet{3, 0.5}.polygon();
  EXPECT_TRUE(is_pti_subset(tri, tri, 5000, 3).ok);
  EXPECT_THROW(is_pti_subset(Interval{0, 11}, Interval{0, 10}.polygon(), 10, 4), ContractViolation);
}

TEST(IsPtiSubset, NestedIntervalsAlwaysPass) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int t = 0; t < 1000; ++t) {
    double v[4] = {u(rng), u(rng), u(rng), u(rng)};
    std::sort(v, v + 4);
    const auto r = is_pti_subset(Interval{v[1], v[2]}, Interval{v[0], v[3]}.polygon(), 200, rng());
    EXPECT_TRUE(r.ok);
    EXPECT_FALSE(r.witness.has_value());
  }
}

TEST(IsPtiSubset, TriangleFamilyInsideLargestMember) {
  const double pmax = 1e4;
  for (double phi : {0.1, kPi / 6, kPi / 4, 1.2}) {
    const auto d = TriangleSet{pmax, phi}.polygon();
    for (double f : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
      const TriangleSet t{f * pmax, phi};
      EXPECT_TRUE(is_pti_subset(t, d, 4000, 5).ok) << phi << " " << f;
      if (f > 0) {
        EXPECT_TRUE(grid_pti(t.polygon(), d, 60));
      }
    }
  }
}

TEST(IsPtiSubset, AgreesWithGridOracleOnFailures) {
  // A rotated square inside a larger axis-aligned square is not PTI.
  const auto d = ConvexPolygon::box(-2, 2, -2, 2);
  const std::vector<Setpoint> diamond{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto i = convex_hull(diamond);
  EXPECT_FALSE(grid_pti(i, d, 80));
  EXPECT_FALSE(is_pti_subset(i, d, 500, 6).ok);
}

TEST(UncertainAgent, CorrectPredictionIsExact) {
  const TriangleSet t{100, 0.4};
  UncertainAgent a(t, t.polygon());
  const Setpoint req{50, 10};
  EXPECT_EQ(a.step(req, t), req);
  EXPECT_EQ(a.state().e(), (Setpoint{}));
}

TEST(UncertainAgent, RejectsRequestOutsideAdvertisement) {
  UncertainAgent a(Interval{0, 5});
  EXPECT_THROW(a.step({6, 0}, Interval{0, 5}), ContractViolation);
}

TEST(UncertainAgent, PvSquareWaveStaysWithinBound) {
  const PvParams pv{1e4, kPi / 4, std::nullopt};
  const auto d = TriangleSet{pv.p_max, pv.phi}.polygon();
  UncertainAgent a(pv_feasible_set(pv, 1e4), d, true);
  std::mt19937_64 rng(12);
  for (int k = 0; k < 2000; ++k) {
    const double avail = (k / 2) % 2 == 0 ? 1e4 : 0.0;
    const auto adv = to_polygon(a.advertisement());
    // Request a random vertex combination of the advertised triangle.
    const double s = std::uniform_real_distribution<double>(0, 1)(rng);
    const double w = std::uniform_real_distribution<double>(-1, 1)(rng);
    const auto b = adv.bounds();
    const Setpoint req{s * b.p_hi, w * s * b.p_hi * std::tan(pv.phi)};
    a.step(req, pv_feasible_set(pv, avail));
    EXPECT_LE(norm(a.state().e()), 2e4 + 1e-6);
  }
}

TEST(UncertainAgent, RealPowerOnlyBoundedByHullOfSets) {
  const PvParams pv{10, 0, std::nullopt};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  UncertainAgent a(pv_feasible_set(pv, 4));
  double hi = 4;
  for (int k = 0; k < 3000; ++k) {
    const double avail = 2 + 6 * u(rng);
    hi = std::max(hi, avail);
    const auto adv = std::get<TriangleSet>(a.advertisement());
    a.step({u(rng) * adv.x, 0}, pv_feasible_set(pv, avail));
    EXPECT_LE(norm(a.state().e()), hi + 1e-9);
  }
}

TEST(Construction, TriangleWithComplementaryTranslationGivesLargestTriangle) {
  const double pmax = 1e4;
  for (double phi : {kPi / 6, kPi / 4})
    for (double f : {0.2, 0.5, 0.8}) {
      ConstructionChoice c;
      c.g = TriangleSet{(1 - f) * pmax, phi}.polygon();
      c.verify_samples = 3000;
      const auto res = build_pti_construction(TriangleSet{f * pmax, phi}.polygon(), c);
      EXPECT_TRUE(same_polygon(res.d, TriangleSet{pmax, phi}.polygon(), 1e-6 * pmax)) << phi << " " << f;
      EXPECT_TRUE(res.verification.ok);
    }
}

TEST(Construction, RectangleInflatesCoordinatewise) {
  const auto i = ConvexPolygon::box(0, 4, 0, 2);
  ConstructionChoice c;
  c.g = ConvexPolygon::box(-1, 1, -0.5, 0.5);
  const auto d = construct_pti_superset(i, c);
  EXPECT_TRUE(same_polygon(d, ConvexPolygon::box(-1, 5, -0.5, 2.5), 1e-9));
  EXPECT_TRUE(grid_pti(i, d, 60));
}

TEST(Construction, RandomPolygonsVerify) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 30; ++t) {
    std::vector<Setpoint> pts;
    const int n = 3 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      const double a = 2 * kPi * (i + 0.8 * (u(rng) + 1) / 2) / n;
      pts.push_back({100 * std::cos(a), 60 * std::sin(a)});
    }
    const auto i = convex_hull(pts);
    ConstructionChoice c;
    c.seed = rng();
    c.verify_samples = 2000;
    const auto res = build_pti_construction(i, c);
    for (const auto& v : i.vertices()) EXPECT_TRUE(res.d.contains(v));
    EXPECT_TRUE(is_pti_subset(i, res.d, 4000, rng()).ok);
    EXPECT_TRUE(grid_pti(i, res.d, 40));
    EXPECT_EQ(res.offsets.size(), i.size());
  }
}

TEST(Construction, RejectsDegenerateInput) {
  EXPECT_THROW(construct_pti_superset(ConvexPolygon::segment({0, 0}, {1, 0})), ContractViolation);
  EXPECT_THROW(construct_pti_superset(ConvexPolygon::point({0, 0})), ContractViolation);
  ConstructionChoice bad;
  bad.offsets = {1, -1, 1, 1};
  EXPECT_THROW(construct_pti_superset(ConvexPolygon::box(0, 1, 0, 1), bad), ContractViolation);
}

TEST(MinimalSuperset, SingleSetEqualsConstruction) {
  const auto i = TriangleSet{5, 0.5}.polygon();
  ConstructionChoice c;
  c.verify_samples = 1000;
  c.seed = 3;
  const std::vector<ConvexPolygon> one{i};
  EXPECT_TRUE(same_polygon(minimal_superset(one, 1000, 3), construct_pti_superset(i, c), 1e-12));
}

TEST(MinimalSuperset, TriangleFamily) {
  const double pmax = 1e4;
  for (double phi : {kPi / 6, kPi / 4}) {
    std::vector<ConvexPolygon> fam;
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) fam.push_back(TriangleSet{f * pmax, phi}.polygon());
    const auto d = minimal_superset(fam, 2000, 1);
    EXPECT_LE(diameter(d), 1.1 * diameter(TriangleSet{pmax, phi}.polygon()));
    for (const auto& s : fam) EXPECT_TRUE(is_pti_subset(s, d, 4000, 2).ok);
  }
}

TEST(MinimalSuperset, NestedIntervalsGiveHullOfUnion) {
  const std::vector<ConvexPolygon> fam{Interval{2, 5}.polygon(), Interval{1, 3}.polygon(), Interval{4, 8}.polygon()};
  EXPECT_TRUE(same_polygon(minimal_superset(fam), Interval{1, 8}.polygon(), 1e-12));
}
