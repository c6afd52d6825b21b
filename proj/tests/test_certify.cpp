#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qgeo/certify.hpp"

using namespace qgeo;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();
}  // namespace

TEST_CASE("certificate assembly and pass rule") {
  QEstimate lhs{1.0, "exact", 0.0, 0, std::nullopt};
  QEstimate rhs{1.0, "exact", 0.0, 0, std::nullopt};
  CertificateReport eq = make_certificate("eq", lhs, rhs);
  CHECK(eq.pass);
  CHECK(eq.margin == 0.0);

  rhs.value = 1.0 - 1e-12;
  CHECK(make_certificate("tiny", lhs, rhs).pass);  // inside the allowance
  rhs.value = 0.9;
  CertificateReport bad = make_certificate("bad", lhs, rhs);
  CHECK_FALSE(bad.pass);
  CHECK(bad.margin == doctest::Approx(-0.1));

  // Monte Carlo half-widths widen the allowance and surface in the report.
  QEstimate mc{1.05, "mc", 0.2, 1000, 42};
  CertificateReport wide = make_certificate("mc", mc, rhs);
  CHECK(wide.pass);
  CHECK(wide.lhs_method == "mc");
  CHECK(wide.seed.has_value());
  CHECK(wide.tolerance >= 0.2);
}

TEST_CASE("subadditivity certificates across covers and exponents") {
  SplitMix64 rng(101);
  const double ps[] = {0.5, 1.0, 2.0, kInf};
  for (int trial = 0; trial < 30; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 3);
    int j = 2 + static_cast<int>(rng.next_u64() % (d - 1));
    std::vector<DiscreteSurface> tuple;
    for (int k = 0; k < j; ++k)
      tuple.push_back(oracle::random_surface(d, 2 + static_cast<int>(rng.next_u64() % 4), rng));
    UniformCover cover = random_cover(j, rng);
    for (double p : ps) {
      CertificateReport c = certify_finner(tuple, cover, p);
      CHECK(c.pass);
      CHECK(c.lhs <= c.rhs + c.tolerance);
    }
  }

  // Equality case: one surface per axis and the singleton partition. Every
  // cross wedge is exactly 1, so both sides reduce to the mass product.
  DiscreteSurface s1 = validate_surface(
      2, {Atom{0.5, Vec::Unit(2, 0)}, Atom{0.5, -Vec::Unit(2, 0)}});
  DiscreteSurface s2 = validate_surface(
      2, {Atom{0.5, Vec::Unit(2, 1)}, Atom{0.5, -Vec::Unit(2, 1)}});
  CertificateReport c = certify_finner({s1, s2}, singleton_cover(2), 1.0);
  CHECK(c.pass);
  CHECK(c.lhs == 1.0);
  CHECK(c.rhs == 1.0);
  CHECK(c.margin == 0.0);
}

TEST_CASE("sphere ratio chain and equality witnesses") {
  SplitMix64 rng(102);
  for (int trial = 0; trial < 12; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 3);
    DiscreteSurface s = oracle::random_surface(d, 5, rng);
    for (double p : {1.0, 2.0, kInf}) {
      auto reports = certify_sphere_ratio(s, p);
      REQUIRE(static_cast<int>(reports.size()) == d - 1);
      for (const auto& r : reports) CHECK(r.pass);
    }
  }

  // Dense equal-angle sampling of the circle approaches equality.
  DiscreteSurface circ = oracle::equal_angle_circle(4000);
  auto near = certify_sphere_ratio(circ, 1.0);
  REQUIRE(near.size() == 1);
  CHECK(near[0].pass);
  CHECK(std::abs(near[0].margin) / near[0].rhs < 1e-4);
}

TEST_CASE("isoperimetric endpoint certificate") {
  SplitMix64 rng(103);
  for (int trial = 0; trial < 12; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 3);
    DiscreteSurface s = oracle::random_surface(d, 5, rng);
    CertificateReport c = certify_isoperimetric(s);
    CHECK(c.pass);
  }
  DiscreteSurface circ = oracle::equal_angle_circle(4000);
  CertificateReport c = certify_isoperimetric(circ);
  CHECK(c.pass);
  CHECK(std::abs(c.margin) / c.rhs < 1e-4);
}

TEST_CASE("diagonal monotonicity") {
  SplitMix64 rng(104);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 3);
    DiscreteSurface s = oracle::random_surface(d, 5, rng);
    for (double p : {0.0, 0.5, 1.0, 2.0, kInf}) {
      auto reports = certify_diagonal_monotone(s, p);
      REQUIRE(static_cast<int>(reports.size()) == d - 1);
      for (const auto& r : reports) CHECK(r.pass);
    }
  }
}

TEST_CASE("log concavity of the normalized profile") {
  SplitMix64 rng(105);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + static_cast<int>(rng.next_u64() % 3);
    DiscreteSurface s = oracle::random_surface(d, 6, rng);
    for (double p : {1.0, 2.0, kInf}) {
      LogConcavityReport rep = certify_log_concavity(s, p);
      CHECK(rep.all_pass);
      CHECK(rep.truncated_at == -1);
      CHECK(static_cast<int>(rep.steps.size()) == d - 1);
      CHECK(static_cast<int>(rep.chain.size()) == d - 1);
    }
  }

  // A surface spanning only after duplications: n = d atoms makes a_j > 0
  // for all j, but n < d collapses the top coefficients to zero and the
  // chain must truncate instead of dividing by zero.
  DiscreteSurface thin =
      validate_surface(3, {Atom{1.0, Vec::Unit(3, 0)}, Atom{1.0, Vec::Unit(3, 1)}});
  LogConcavityReport rep = certify_log_concavity(thin, 1.0);
  CHECK(rep.truncated_at == 3);
  CHECK(rep.all_pass);

  // Dense sphere sampling: every a_j close to 1.
  DiscreteSurface sph = make_sphere_surface(3, 2000, 2026);
  LogConcavityReport srep = certify_log_concavity(sph, 2.0);
  CHECK(srep.all_pass);
  for (std::size_t j = 1; j < srep.profile.a.size(); ++j)
    CHECK(std::abs(srep.profile.a[j] - 1.0) < 0.05);
}

TEST_CASE("sphere moments and mean wedge power") {
  CHECK(sphere_moment(3, 1, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sphere_moment(3, 1, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
  // Frozen closed forms: d = 3, j = 2, p = 1 gives pi/4; d = 2 gives 2/pi.
  CHECK(sphere_moment(3, 2, 1.0) == doctest::Approx(0.7853981633974484).epsilon(1e-13));
  CHECK(sphere_moment(2, 2, 1.0) == doctest::Approx(0.6366197723675814).epsilon(1e-13));
  // p = 2 closed form: E(W_j^2) = prod_{k<j} (1 - k/d) under the isotropy
  // normalization E(xi xi^T) = I/d.
  CHECK(sphere_moment(3, 2, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(sphere_moment(4, 3, 2.0) ==
        doctest::Approx((3.0 / 4.0) * (2.0 / 4.0)).epsilon(1e-13));
  CHECK_THROWS_AS(sphere_moment(3, 2, 1.5), std::invalid_argument);

  std::vector<AtomSampler> two(2, sphere_direction_sampler(3));
  MeanEstimate m = mean_wedge_power(two, 1.0, 200000, 51);
  CHECK(std::abs(m.value - kPi / 4.0) <= m.ci_halfwidth);
  MeanEstimate m3 = mean_wedge_power(two, 1.0, 200000, 51, 3);
  CHECK(m.value == m3.value);  // block reduction is thread-count invariant
}

TEST_CASE("random volume expectations against the sphere") {
  RandvolResult g = randvol_expectation(Distribution::gaussian, 3, 2, 2.0, true, 200000, 61);
  REQUIRE(g.corollary.has_value());
  CHECK(g.corollary->pass);
  CHECK(g.normalized);
  // p = 2 with a normalized isotropic measure is the equality case.
  CHECK(std::abs(g.expectation.value - g.sphere_value) <= g.expectation.ci_halfwidth);

  RandvolResult b = randvol_expectation(Distribution::uniform_ball, 3, 2, 1.0, true, 200000, 62);
  REQUIRE(b.corollary.has_value());
  CHECK(b.corollary->pass);
  CHECK(b.expectation.value < b.sphere_value + b.expectation.ci_halfwidth);

  RandvolResult raw = randvol_expectation(Distribution::uniform_ball, 3, 2, 1.0, false, 50000, 63);
  CHECK_FALSE(raw.corollary.has_value());
  CHECK(raw.scale == 1.0);
  // Unnormalized ball draws are shorter than unit vectors, so the raw
  // expectation sits well below the sphere value.
  CHECK(raw.expectation.value < raw.sphere_value);

  CHECK_THROWS_AS(
      randvol_expectation(Distribution::exponential_product, 3, 2, 1.0, true, 1000, 64),
      std::invalid_argument);
  RandvolResult e =
      randvol_expectation(Distribution::exponential_product, 3, 2, 1.0, false, 50000, 64);
  CHECK(e.expectation.value > 0.0);
}

TEST_CASE("vitale limit table") {
  auto rows = vitale_table(50);
  REQUIRE(rows.size() == 50);
  for (const auto& r : rows) CHECK(r.pass);
  CHECK(rows[0].d == 1);
  // d = 2: E(W_2... ) lhs = sphere_moment(2,2,1)^{1/2} = (2/pi)^{1/2},
  // rhs = (2!/2^2)^{1/4}.
  CHECK(rows[1].lhs == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
  CHECK(rows[1].rhs == doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-12));
  // Frozen distance-to-limit values at d = 50.
  CHECK(rows[49].gap_half == doctest::Approx(0.0177).epsilon(2e-2));
  CHECK(rows[49].gap_full == doctest::Approx(0.0218).epsilon(2e-2));
  CHECK(rows[49].gap_half < 0.05);
  CHECK(rows[49].gap_full < 0.05);
}

TEST_CASE("reverse holder comparisons") {
  ReverseHolderReport r2 = reverse_holder_report(3, 2, 2.0, Distribution::gaussian, 100000, 71);
  CHECK(r2.b_certificate.pass);  // closed forms on both sides
  CHECK(r2.b_certificate.lhs <= 1.0 + 1e-12);
  CHECK(r2.reference_bound ==
        doctest::Approx(4.0 * std::sqrt(4.0 / 5.0)).epsilon(1e-12));
  CHECK(r2.r_mu > 0.0);

  ReverseHolderReport r3 = reverse_holder_report(3, 2, 3.0, Distribution::uniform_ball, 150000, 72);
  CHECK(r3.b_certificate.pass);  // p = 3 side estimated, certificate uses its ci
  CHECK(r3.r_mu >= 1.0 - r3.r_mu_ci);  // power mean inequality for the same mu
}
