#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "qgeo/crofton.hpp"

using namespace qgeo;

namespace {
constexpr double kPi = 3.14159265358979323846;

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}
}  // namespace

TEST_CASE("analytic integral closed forms") {
  // Two circles: 8 pi r1 r2; frozen decimal for r = (1, 0.7).
  CHECK(analytic_q1_integral({make_circle(1.0), make_circle(0.7)}) ==
        doctest::Approx(17.59291886010284).epsilon(1e-13));
  CHECK(analytic_q1_integral({make_circle(2.0), make_circle(3.0)}) ==
        doctest::Approx(48.0 * kPi).epsilon(1e-13));
  // Three unit spheres: 8 pi^4.
  CHECK(analytic_q1_integral({make_sphere(1.0), make_sphere(1.0), make_sphere(1.0)}) ==
        doctest::Approx(779.2727282720193).epsilon(1e-13));
  // Radii scale with power d - 1 = 2 per sphere.
  CHECK(analytic_q1_integral({make_sphere(2.0), make_sphere(1.0), make_sphere(0.5)}) ==
        doctest::Approx(779.2727282720193).epsilon(1e-12));
  CHECK_THROWS_AS(analytic_q1_integral({make_circle(1.0), make_sphere(1.0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(analytic_q1_integral({make_circle(1.0)}), std::invalid_argument);
}

TEST_CASE("pairwise circle intersections") {
  auto circles = [](double r1, double r2) {
    return std::vector<AnalyticSurface>{make_circle(r1), make_circle(r2)};
  };

  // Unit circles one apart: two points at x = 1/2, y = +-sqrt(3)/2.
  IntersectionOutcome two =
      intersect_shifted(circles(1.0, 1.0), {v2(0.0, 0.0), v2(-1.0, 0.0)});
  REQUIRE(two.points.size() == 2);
  CHECK(two.tangencies == 0);
  for (const Vec& p : two.points) {
    CHECK(std::abs(p(0) - 0.5) < 1e-12);
    CHECK(std::abs(std::abs(p(1)) - std::sqrt(3.0) / 2.0) < 1e-12);
  }

  // External tangency: the double point reported twice.
  IntersectionOutcome tang =
      intersect_shifted(circles(1.0, 1.0), {v2(0.0, 0.0), v2(-2.0, 0.0)});
  REQUIRE(tang.points.size() == 2);
  CHECK(tang.tangencies == 1);
  CHECK((tang.points[0] - tang.points[1]).norm() < 1e-6);
  CHECK(std::abs(tang.points[0](0) - 1.0) < 1e-6);

  // Disjoint and nested-disjoint: empty.
  CHECK(intersect_shifted(circles(1.0, 1.0), {v2(0.0, 0.0), v2(-5.0, 0.0)}).points.empty());
  CHECK(intersect_shifted(circles(3.0, 1.0), {v2(0.0, 0.0), v2(-0.5, 0.0)}).points.empty());
  // Concentric distinct radii: empty, not an error.
  CHECK(intersect_shifted(circles(2.0, 1.0), {v2(0.0, 0.0), v2(0.0, 0.0)}).points.empty());
  // Coincident circles carry positive measure.
  CHECK_THROWS_AS(intersect_shifted(circles(1.0, 1.0), {v2(0.0, 0.0), v2(0.0, 0.0)}),
                  std::domain_error);
}

TEST_CASE("triple sphere intersections") {
  auto spheres = std::vector<AnalyticSurface>{make_sphere(1.0), make_sphere(1.0),
                                              make_sphere(1.0)};
  auto at = [](double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
  };

  // Centers at the vertices of a unit triangle: circumcenter lifts to two
  // symmetric points with |z| = sqrt(1 - 1/3).
  IntersectionOutcome two = intersect_shifted(
      spheres, {at(0.0, 0.0, 0.0), at(-1.0, 0.0, 0.0), at(-0.5, -std::sqrt(3.0) / 2.0, 0.0)});
  REQUIRE(two.points.size() == 2);
  double rc = 1.0 / std::sqrt(3.0);
  for (const Vec& p : two.points) {
    CHECK(std::abs(p(0) - 0.5) < 1e-12);
    CHECK(std::abs(p(1) - 0.5 * std::tan(kPi / 6.0)) < 1e-12);
    CHECK(std::abs(std::abs(p(2)) - std::sqrt(1.0 - rc * rc)) < 1e-12);
  }

  // Pull the third sphere away until it only grazes the pair circle.
  IntersectionOutcome none = intersect_shifted(
      spheres, {at(0.0, 0.0, 0.0), at(-1.0, 0.0, 0.0), at(-0.5, -5.0, 0.0)});
  CHECK(none.points.empty());

  // First two spheres tangent and the double point lies on sphere 3: the
  // pair intersection is a single point, reported once.
  IntersectionOutcome pairtang = intersect_shifted(
      spheres, {at(0.0, 0.0, 0.0), at(-2.0, 0.0, 0.0), at(-1.0, -1.0, 0.0)});
  CHECK(pairtang.tangencies == 1);
  REQUIRE(pairtang.points.size() == 1);
  CHECK((pairtang.points[0] - at(1.0, 0.0, 0.0)).norm() < 1e-6);

  CHECK_THROWS_AS(intersect_shifted(spheres, {at(0.0, 0.0, 0.0), at(0.0, 0.0, 0.0),
                                              at(-3.0, 0.0, 0.0)}),
                  std::domain_error);
}

TEST_CASE("translation invariance of the intersection count") {
  SplitMix64 rng(111);
  std::vector<AnalyticSurface> shapes = {make_circle(1.0, 0.2, -0.1),
                                         make_circle(0.7, -0.4, 0.5)};
  for (int trial = 0; trial < 200; ++trial) {
    Vec t = v2(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
    Vec o1 = v2(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
    Vec o2 = v2(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
    auto base = intersect_shifted(shapes, {o1, o2});
    auto moved = intersect_shifted(shapes, {o1 + t, o2 + t});
    // Shifting both surfaces together translates the intersection set.
    REQUIRE(moved.points.size() == base.points.size());
    if (base.points.size() == 2) {
      double d0 = (moved.points[0] + t - base.points[0]).norm();
      double d1 = (moved.points[1] + t - base.points[0]).norm();
      CHECK(std::min(d0, d1) < 1e-9);
    }
  }
}

TEST_CASE("crofton check on circles") {
  std::vector<AnalyticSurface> shapes = {make_circle(1.0), make_circle(0.7)};
  CroftonResult r = crofton_check(shapes, 400000, 2121);
  CHECK(r.dim == 2);
  CHECK(r.lhs == doctest::Approx(17.59291886010284).epsilon(1e-13));
  CHECK(r.pass);
  CHECK(r.forms_agree);
  CHECK(std::abs(r.rhs - r.lhs) <= r.rhs_ci);
  CHECK(std::abs(r.rhs_ball - r.lhs) <= r.rhs_ball_ci);
  CHECK(r.boundary_violations == 0);
  CHECK(r.samples == 400000);

  // Thread-count invariance of both estimates.
  CroftonResult a = crofton_check(shapes, 100000, 77, 1);
  CroftonResult b = crofton_check(shapes, 100000, 77, 3);
  CHECK(a.rhs == b.rhs);
  CHECK(a.rhs_ball == b.rhs_ball);

  // Off-center shapes only displace the reduced-form box, not the answer.
  std::vector<AnalyticSurface> moved = {make_circle(1.0, 3.0, -2.0),
                                        make_circle(0.7, -1.0, 4.0)};
  CroftonResult m = crofton_check(moved, 400000, 2122);
  CHECK(m.pass);
  CHECK(m.forms_agree);
}

TEST_CASE("crofton check on spheres") {
  std::vector<AnalyticSurface> shapes = {make_sphere(1.0), make_sphere(1.0),
                                         make_sphere(1.0)};
  CroftonResult r = crofton_check(shapes, 300000, 3131);
  CHECK(r.dim == 3);
  CHECK(r.lhs == doctest::Approx(779.2727282720193).epsilon(1e-13));
  CHECK(r.pass);
  CHECK(r.forms_agree);
  CHECK(r.boundary_violations == 0);
}

TEST_CASE("annulus area recovered from the positive-count fraction") {
  // For two circles the count is positive exactly when the center distance
  // lies in (|r1 - r2|, r1 + r2): an annulus of area pi((r1+r2)^2-(r1-r2)^2)
  // = 4 pi r1 r2.
  SplitMix64 rng(112);
  double r1 = 1.0, r2 = 0.7;
  std::vector<AnalyticSurface> shapes = {make_circle(r1), make_circle(r2)};
  double half = r1 + r2 + 0.5;
  std::int64_t hits = 0;
  const std::int64_t n = 200000;
  for (std::int64_t k = 0; k < n; ++k) {
    Vec off = v2(half * (2.0 * rng.next_double() - 1.0), half * (2.0 * rng.next_double() - 1.0));
    auto out = intersect_shifted(shapes, {v2(0.0, 0.0), off});
    if (!out.points.empty()) ++hits;
  }
  double box = 4.0 * half * half;
  double est = box * static_cast<double>(hits) / static_cast<double>(n);
  double want = 4.0 * kPi * r1 * r2;
  double p = want / box;
  double sigma3 = 3.0 * box * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  CHECK(std::abs(est - want) <= sigma3);
}
