#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "qgeo/bodies.hpp"

using namespace qgeo;

namespace {
constexpr double kPi = 3.14159265358979323846;

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}
}  // namespace

TEST_CASE("projection body support and volume of the axis fixture") {
  DiscreteSurface cube = oracle::cube_surface(2);
  Zonotope z = projection_body(cube);
  REQUIRE(z.generators.size() == 4);
  Vec e1 = Vec::Unit(2, 0);
  CHECK(zonotope_support(z, e1) == doctest::Approx(1.0).epsilon(1e-14));
  Vec diag(2);
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(zonotope_support(z, diag) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(zonotope_volume(z) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(zonotope_volume(z, 2), CapExceeded);
}

TEST_CASE("planar zonotope volume against the boundary-walk oracle") {
  SplitMix64 rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    DiscreteSurface s = oracle::random_surface(2, 2 + static_cast<int>(rng.next_u64() % 9), rng);
    Zonotope z = projection_body(s);
    std::vector<std::pair<double, double>> gens;
    for (const Vec& g : z.generators) gens.emplace_back(g(0), g(1));
    CHECK(close(zonotope_volume(z), oracle::polygon_zonotope_area(gens), 1e-10));
  }
}

TEST_CASE("mixed volumes of zonotopes and balls") {
  SplitMix64 rng(82);
  // Full-slot case reduces to the volume, zero-slot case to omega_d.
  for (int d = 2; d <= 4; ++d) {
    DiscreteSurface s = oracle::random_surface(d, 6, rng);
    Zonotope z = projection_body(s);
    std::vector<Zonotope> full(static_cast<std::size_t>(d), z);
    CHECK(close(mixed_volume_zb(full, 0), zonotope_volume(z), 1e-10));
    CHECK(close(mixed_volume_zb({}, d), unit_ball_volume(d), 1e-12));
  }
  // Planar Steiner formula: area(Z + tB) = vol + 2 t V(Z, B) + pi t^2, and
  // V(Z, B) = 2 sum |g_i| for a symmetric zonotope (half the perimeter).
  DiscreteSurface s2 = oracle::random_surface(2, 5, rng);
  Zonotope z2 = projection_body(s2);
  double glen = 0.0;
  for (const Vec& g : z2.generators) glen += g.norm();
  CHECK(close(mixed_volume_zb({z2}, 1), 2.0 * glen, 1e-12));
}

TEST_CASE("mixed volume of projection bodies encodes the q values") {
  SplitMix64 rng(83);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 3);
    int j = 1 + static_cast<int>(rng.next_u64() % d);
    std::vector<DiscreteSurface> tuple;
    std::vector<Zonotope> bodies;
    for (int k = 0; k < j; ++k) {
      tuple.push_back(oracle::random_surface(d, 2 + static_cast<int>(rng.next_u64() % 5), rng));
      bodies.push_back(projection_body(tuple.back()));
    }
    double q = q_exact(tuple, 1.0).value;
    double lhs = mixed_volume_zb(bodies, d - j);
    double rhs = std::pow(2.0, j) * std::exp(std::lgamma(d - j + 1.0) - std::lgamma(d + 1.0)) *
                 unit_ball_volume(d - j) * std::pow(q, j);
    CHECK(close(lhs, rhs, 1e-9));
  }
}

TEST_CASE("mixed volume of boxes") {
  // Identical axis-aligned boxes give the plain volume.
  Frame axes;
  axes.basis = Mat::Identity(3, 3);
  Vec len(3);
  len << 2.0, 3.0, 5.0;
  BoxSpec r{axes, len};
  CHECK(mixed_volume_boxes({r, r, r}) == doctest::Approx(30.0).epsilon(1e-12));

  // d = 2: V(R1, R2) = (a1 b2 + a2 b1) / 2 for axis-aligned rectangles.
  Frame ax2;
  ax2.basis = Mat::Identity(2, 2);
  Vec l1(2), l2(2);
  l1 << 2.0, 1.0;
  l2 << 4.0, 7.0;
  CHECK(mixed_volume_boxes({BoxSpec{ax2, l1}, BoxSpec{ax2, l2}}) ==
        doctest::Approx(0.5 * (2.0 * 7.0 + 4.0 * 1.0)).epsilon(1e-12));

  // Simultaneous rotation leaves every mixed volume unchanged.
  SplitMix64 rng(84);
  Frame rot = random_frame(3, 3, rng);
  BoxSpec rr{rot, len};
  CHECK(mixed_volume_boxes({rr, rr, rr}) == doctest::Approx(30.0).epsilon(1e-10));
}

TEST_CASE("mixed discriminant basic laws") {
  SplitMix64 rng(85);
  for (int d = 2; d <= 4; ++d) {
    Mat a = oracle::random_psd(d, rng);
    Mat b = oracle::random_psd(d, rng);
    std::vector<Mat> rest;
    for (int k = 0; k + 2 < d; ++k) rest.push_back(oracle::random_psd(d, rng));

    std::vector<Mat> all_a(static_cast<std::size_t>(d), a);
    CHECK(close(mixed_discriminant(all_a), a.determinant(), 1e-10));
    std::vector<Mat> eye(static_cast<std::size_t>(d), Mat::Identity(d, d));
    CHECK(close(mixed_discriminant(eye), 1.0, 1e-12));

    // Symmetry: swapping two slots changes nothing.
    std::vector<Mat> t1 = rest;
    t1.push_back(a);
    t1.push_back(b);
    std::vector<Mat> t2 = rest;
    t2.push_back(b);
    t2.push_back(a);
    CHECK(close(mixed_discriminant(t1), mixed_discriminant(t2), 1e-11));

    // Multilinearity in the first slot.
    Mat c = oracle::random_psd(d, rng);
    std::vector<Mat> base = t1;
    double alpha = 0.7, beta = 1.9;
    base[0] = alpha * a + beta * c;
    std::vector<Mat> ta = t1, tc = t1;
    ta[0] = a;
    tc[0] = c;
    CHECK(close(mixed_discriminant(base),
                alpha * mixed_discriminant(ta) + beta * mixed_discriminant(tc), 1e-10));

    // PSD arguments give a nonnegative value.
    CHECK(mixed_discriminant(t1) >= -1e-12);

    // Congruence: D(M A_i M^T) = det(M)^2 D(A_i).
    Mat m = Mat::Random(d, d);
    std::vector<Mat> tm = t1;
    for (Mat& x : tm) x = m * x * m.transpose();
    double detm = m.determinant();
    CHECK(close(mixed_discriminant(tm), detm * detm * mixed_discriminant(t1), 1e-9));

    // Aleksandrov: D(A,B,...)^2 >= D(A,A,...) D(B,B,...).
    std::vector<Mat> dab = rest, daa = rest, dbb = rest;
    dab.push_back(a);
    dab.push_back(b);
    daa.push_back(a);
    daa.push_back(a);
    dbb.push_back(b);
    dbb.push_back(b);
    double vab = mixed_discriminant(dab);
    CHECK(vab * vab >= mixed_discriminant(daa) * mixed_discriminant(dbb) - 1e-8);
  }

  // d = 2 closed form from the polarization.
  Mat a2(2, 2), b2(2, 2);
  a2 << 2.0, 0.3, 0.3, 1.0;
  b2 << 1.5, -0.2, -0.2, 4.0;
  double want = 0.5 * (a2(0, 0) * b2(1, 1) + a2(1, 1) * b2(0, 0) - a2(0, 1) * b2(1, 0) -
                       a2(1, 0) * b2(0, 1));
  CHECK(mixed_discriminant({a2, b2}) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("discriminant identity check over surface tuples") {
  SplitMix64 rng(86);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 3);
    std::vector<DiscreteSurface> tuple;
    for (int k = 0; k < d; ++k)
      tuple.push_back(oracle::random_surface(d, 2 + static_cast<int>(rng.next_u64() % 4), rng));
    IdentityCheck chk = mixed_discriminant_identity_check(tuple);
    CHECK(chk.pass);
    CHECK(close(chk.lhs, chk.rhs, 1e-8));
  }
}

TEST_CASE("directional and plane mass") {
  DiscreteSurface cube = oracle::cube_surface(2);
  Vec e1 = Vec::Unit(2, 0);
  CHECK(directional_mass(e1, cube) == doctest::Approx(1.0).epsilon(1e-14));
  Vec diag(2);
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(directional_mass(diag, cube) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  SplitMix64 rng(87);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 3);
    DiscreteSurface s = oracle::random_surface(d, 6, rng);
    // k = 1 plane mass is the directional mass of its spanning vector.
    Frame f1 = random_frame(d, 1, rng);
    CHECK(close(plane_mass(Plane{f1}, s), directional_mass(f1.basis.col(0), s), 1e-12));
    // k = d plane mass is Q_d^1(S)^d.
    Frame fd = random_frame(d, d, rng);
    CHECK(close(plane_mass(Plane{fd}, s), std::pow(q1_diagonal_subsets(s, d).value, d),
                1e-10));
  }
}

TEST_CASE("gauge of the unit balls") {
  DiscreteSurface cube = oracle::cube_surface(2);
  Vec y(2);
  y << 1.0, 0.0;
  CHECK(kp_norm(y, cube, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kp_norm(y, cube, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  y << 1.0, 1.0;
  CHECK(kp_norm(y, cube, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(kp_norm(y, cube, 3.0) == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(kp_norm(y, cube, 0.5), std::invalid_argument);

  // Fast p = 1 / p = 2 paths agree with the generic evaluator at p -> same.
  SplitMix64 rng(88);
  DiscreteSurface s = oracle::random_surface(3, 7, rng);
  Vec z(3);
  z << 0.3, -1.2, 0.8;
  double direct1 = 0.0, direct2 = 0.0;
  for (const Atom& a : s.atoms) {
    direct1 += a.weight * std::abs(z.dot(a.v));
    direct2 += a.weight * std::pow(z.dot(a.v), 2.0);
  }
  CHECK(close(kp_norm(z, s, 1.0), direct1, 1e-13));
  CHECK(close(kp_norm(z, s, 2.0), std::sqrt(direct2), 1e-13));
}

TEST_CASE("minimum volume enclosing ellipsoid") {
  // Cube vertices in R^3: the tight ball has radius sqrt(3).
  Mat pts(3, 8);
  int c = 0;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) {
        pts.col(c) << sx, sy, sz;
        ++c;
      }
  MveeResult mv = khachiyan_mvee(pts, 1e-9);
  Vec ax = mv.e.semiaxes();
  for (int i = 0; i < 3; ++i) CHECK(ax(i) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  CHECK(mv.excess <= 1e-8);

  // Linear images of sphere points recover the mapped ball.
  SplitMix64 rng(89);
  Mat m(2, 2);
  m << 2.0, 0.5, 0.0, 1.0;
  int n = 2000;
  Mat sp(2, n);
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * kPi * (i + 0.5) / n;
    Vec u(2);
    u << std::cos(t), std::sin(t);
    sp.col(i) = m * u;
  }
  MveeResult ell = khachiyan_mvee(sp, 1e-9);
  Mat want = (m * m.transpose()).inverse();
  CHECK((ell.e.shape - want).cwiseAbs().maxCoeff() < 1e-5);

  // Points confined to a plane do not span.
  Mat flat(3, 4);
  flat.setZero();
  flat(0, 0) = 1.0;
  flat(1, 1) = 1.0;
  flat(0, 2) = -1.0;
  flat(1, 3) = -1.0;
  CHECK_THROWS_AS(khachiyan_mvee(flat), std::invalid_argument);
}

TEST_CASE("john ellipsoid of the p = 1 body") {
  // K^1 of the axis fixture is the unit cross-polytope; its John ellipsoid is
  // the ball of radius 1/sqrt(d).
  for (int d = 2; d <= 4; ++d) {
    DiscreteSurface cube = oracle::cube_surface(d);
    JohnResult jr = john_ellipsoid_kp(cube, 1.0);
    Vec ax = jr.e.semiaxes();
    for (int i = 0; i < d; ++i)
      CHECK(std::abs(ax(i) - 1.0 / std::sqrt(static_cast<double>(d))) < 1e-3);
    CHECK_FALSE(jr.approximate);
  }
  // Ellipsoid volume never exceeds the body volume: vol(cross-polytope
  // John ball) = omega_d d^{-d/2} <= 2^d/d!.
  JohnResult j3 = john_ellipsoid_kp(oracle::cube_surface(3), 1.0);
  CHECK(j3.e.volume() <= 8.0 / 6.0 + 1e-12);
  CHECK(j3.e.volume() ==
        doctest::Approx(unit_ball_volume(3) * std::pow(3.0, -1.5)).epsilon(1e-3));
}

TEST_CASE("visibility sampling on solvable fixtures") {
  DiscreteSurface cube2 = oracle::cube_surface(2);
  VisibilityResult v1 = visibility(cube2, 1.0, 400000, 321);
  CHECK(std::abs(v1.volume - 2.0) <= v1.volume_ci);
  CHECK(std::abs(v1.vis - std::pow(2.0, -0.5)) <= v1.vis_ci);
  CHECK(v1.santalo_product >= v1.santalo_lower - 1e-9);
  CHECK(v1.santalo_product <= v1.santalo_upper + 1e-9);
  CHECK(v1.santalo_lower == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(v1.santalo_upper == doctest::Approx(kPi * kPi).epsilon(1e-12));

  // p = 2 turns the fixture body into the unit disc.
  VisibilityResult v2 = visibility(cube2, 2.0, 400000, 322);
  CHECK(std::abs(v2.volume - kPi) <= v2.volume_ci);
  CHECK(v2.approximate);

  // Determinism across thread counts.
  VisibilityResult a = visibility(cube2, 1.0, 100000, 77, 1);
  VisibilityResult b = visibility(cube2, 1.0, 100000, 77, 3);
  CHECK(a.volume == b.volume);
  CHECK(a.vis == b.vis);

  CHECK_THROWS_AS(visibility(oracle::cube_surface(2), 0.5, 1000, 1),
                  std::invalid_argument);
}

TEST_CASE("frame bounds dominate the visibility") {
  DiscreteSurface cube2 = oracle::cube_surface(2);
  std::vector<Vec> std_frame = {Vec::Unit(2, 0), Vec::Unit(2, 1)};
  CHECK(frame_bound_value(std_frame, cube2) == doctest::Approx(1.0).epsilon(1e-13));

  Vec d1(2), d2(2);
  d1 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  d2 << -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(frame_bound_value({d1, d2}, cube2) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

  VisibilityBounds vb = visibility_bounds(cube2, {}, 16, 99);
  CHECK(vb.john.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(vb.random_best.value >= vb.john.value - 1e-9);
  CHECK(vb.random_trials == 16);

  // Permutation-sum bound: equality on the axis fixture with standard frames.
  Frame id2;
  id2.basis = Mat::Identity(2, 2);
  double perm = offdiagonal_perm_bound({cube2, cube2}, {id2, id2});
  CHECK(perm == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(perm >= std::pow(q_exact({cube2, cube2}, 1.0).value, 2) - 1e-12);

  // The bound is a theorem when every slot carries the same orthonormal
  // frame: expanding each atom vector in that frame and applying the
  // triangle inequality keeps only injective index tuples.
  SplitMix64 rng(90);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 2);
    int j = 1 + static_cast<int>(rng.next_u64() % d);
    std::vector<DiscreteSurface> tuple;
    for (int k = 0; k < j; ++k) tuple.push_back(oracle::random_surface(d, 4, rng));
    Frame shared = random_frame(d, d, rng);
    std::vector<Frame> frames(static_cast<std::size_t>(d), shared);
    double bound = offdiagonal_perm_bound(tuple, frames);
    CHECK(bound >= std::pow(q_exact(tuple, 1.0).value, j) - 1e-10);
  }

  // With distinct frames per slot the sum is only a diagnostic; check the
  // evaluation itself against direct permutation enumeration.
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 2);
    int j = 1 + static_cast<int>(rng.next_u64() % d);
    std::vector<DiscreteSurface> tuple;
    for (int k = 0; k < j; ++k) tuple.push_back(oracle::random_surface(d, 4, rng));
    std::vector<Frame> frames;
    for (int k = 0; k < d; ++k) frames.push_back(random_frame(d, d, rng));
    std::vector<int> perm(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) perm[static_cast<std::size_t>(k)] = k;
    double want = 0.0;
    do {
      double term = 1.0;
      std::vector<std::vector<long double>> cols;
      for (int m = 0; m < d; ++m) {
        Vec e = frames[static_cast<std::size_t>(m)].basis.col(perm[static_cast<std::size_t>(m)]);
        if (m < j) {
          double sigma = 0.0;
          for (const auto& a : tuple[static_cast<std::size_t>(m)].atoms)
            sigma += a.weight * std::abs(e.dot(a.v));
          term *= sigma;
        }
        std::vector<long double> col(static_cast<std::size_t>(d));
        for (int r = 0; r < d; ++r) col[static_cast<std::size_t>(r)] = e(r);
        cols.push_back(std::move(col));
      }
      want += term * static_cast<double>(oracle::wedge(cols));
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(offdiagonal_perm_bound(tuple, frames) ==
          doctest::Approx(want).epsilon(1e-10));
  }
}
