#include "qgeo/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "qgeo/accumulate.hpp"
#include "qgeo/rng.hpp"

namespace qgeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_p(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", p);
  return buf;
}

double log_sphere_area(int d) { return std::log(static_cast<double>(d)) + log_unit_ball_volume(d); }

}  // namespace

CertificateReport make_certificate(std::string claim, const QEstimate& lhs, const QEstimate& rhs,
                                   double rel_tol) {
  CertificateReport r;
  r.claim = std::move(claim);
  r.lhs = lhs.value;
  r.rhs = rhs.value;
  r.margin = rhs.value - lhs.value;
  r.lhs_method = lhs.method;
  r.rhs_method = rhs.method;
  r.lhs_ci = lhs.ci_halfwidth;
  r.rhs_ci = rhs.ci_halfwidth;
  double scale = std::max({1.0, std::abs(lhs.value), std::abs(rhs.value)});
  r.tolerance = rel_tol * scale + std::hypot(lhs.ci_halfwidth, rhs.ci_halfwidth);
  r.pass = lhs.value <= rhs.value + r.tolerance;
  if (lhs.seed)
    r.seed = lhs.seed;
  else if (rhs.seed)
    r.seed = rhs.seed;
  return r;
}

CertificateReport certify_finner(const std::vector<DiscreteSurface>& tuple,
                                 const UniformCover& cover, double p, double rel_tol,
                                 std::int64_t cap) {
  int j = static_cast<int>(tuple.size());
  if (cover.j != j) throw std::invalid_argument("cover size does not match tuple length");
  validate_cover(cover);

  QEstimate lhs = q_exact(tuple, p, cap);

  double log_rhs = 0.0;
  bool zero = false;
  for (std::size_t i = 0; i < cover.sets.size(); ++i) {
    if (cover.alphas[i] == 0.0) continue;
    std::vector<DiscreteSurface> sub;
    sub.reserve(cover.sets[i].size());
    for (int idx : cover.sets[i]) sub.push_back(tuple[static_cast<std::size_t>(idx - 1)]);
    double k = static_cast<double>(sub.size());
    double q = q_exact(sub, p, cap).value;
    if (q <= 0.0) {
      zero = true;
      break;
    }
    log_rhs += cover.alphas[i] * k / static_cast<double>(j) * std::log(q);
  }
  QEstimate rhs;
  rhs.value = zero ? 0.0 : std::exp(log_rhs);

  std::string claim = "finner j=" + std::to_string(j) + " p=" + fmt_p(p);
  return make_certificate(claim, lhs, rhs, rel_tol);
}

std::vector<CertificateReport> certify_sphere_ratio(const DiscreteSurface& s, double p,
                                                    double rel_tol, std::int64_t subset_cap) {
  QProfile prof = q_profile(s, p, kDefaultTupleCap, subset_cap);
  int d = s.dim;
  std::vector<CertificateReport> out;
  out.reserve(static_cast<std::size_t>(std::max(0, d - 1)));
  for (int j = 1; j + 1 <= d; ++j) {
    double ratio = sphere_reference(d, j + 1, p) / sphere_reference(d, j, p);
    QEstimate lhs;
    lhs.value = prof.q[static_cast<std::size_t>(j + 1)];
    lhs.method = prof.method[static_cast<std::size_t>(j + 1)];
    QEstimate rhs;
    rhs.value = ratio * prof.q[static_cast<std::size_t>(j)];
    rhs.method = prof.method[static_cast<std::size_t>(j)];
    std::string claim =
        "sphere_ratio j=" + std::to_string(j + 1) + "|" + std::to_string(j) + " p=" + fmt_p(p);
    out.push_back(make_certificate(claim, lhs, rhs, rel_tol));
  }
  return out;
}

CertificateReport certify_isoperimetric(const DiscreteSurface& s, double rel_tol,
                                        std::int64_t subset_cap) {
  int d = s.dim;
  double q1 = q1_diagonal_subsets(s, 1, subset_cap).value;
  double qd = q1_diagonal_subsets(s, d, subset_cap).value;
  if (q1 <= 0.0) throw std::invalid_argument("surface has zero first moment");

  // vol(Pi S) = (2^d / d!) Q_d^1(S)^d, so the shape functional is
  // vol(Pi S)^{1/d} / Q_1^1(S).
  QEstimate lhs;
  if (qd > 0.0)
    lhs.value = std::exp(std::log(2.0) - std::lgamma(d + 1.0) / d + std::log(qd) - std::log(q1));
  double log_rhs = std::log(2.0) + log_unit_ball_volume(d - 1) +
                   log_unit_ball_volume(d) / d - log_sphere_area(d);
  QEstimate rhs;
  rhs.value = std::exp(log_rhs);
  return make_certificate("isoperimetric d=" + std::to_string(d), lhs, rhs, rel_tol);
}

std::vector<CertificateReport> certify_diagonal_monotone(const DiscreteSurface& s, double p,
                                                         double rel_tol, std::int64_t tuple_cap,
                                                         std::int64_t subset_cap) {
  QProfile prof = q_profile(s, p, tuple_cap, subset_cap);
  int d = s.dim;
  std::vector<CertificateReport> out;
  for (int j = 1; j + 1 <= d; ++j) {
    QEstimate lhs;
    lhs.value = prof.q[static_cast<std::size_t>(j + 1)];
    lhs.method = prof.method[static_cast<std::size_t>(j + 1)];
    QEstimate rhs;
    rhs.value = prof.q[static_cast<std::size_t>(j)];
    rhs.method = prof.method[static_cast<std::size_t>(j)];
    std::string claim =
        "diagonal_monotone j=" + std::to_string(j + 1) + "|" + std::to_string(j) + " p=" + fmt_p(p);
    out.push_back(make_certificate(claim, lhs, rhs, rel_tol));
  }
  return out;
}

LogConcavityReport certify_log_concavity(const DiscreteSurface& s, double p, double rel_tol,
                                         std::int64_t subset_cap) {
  LogConcavityReport rep;
  rep.profile = q_profile(s, p, kDefaultTupleCap, subset_cap);
  if (rep.profile.a.empty())
    throw std::invalid_argument("normalized profile needs p in {1, 2, inf}");
  int d = s.dim;
  const std::vector<double>& a = rep.profile.a;

  int first_zero = d + 1;
  for (int j = 1; j <= d; ++j) {
    if (a[static_cast<std::size_t>(j)] == 0.0) {
      first_zero = j;
      break;
    }
  }
  rep.truncated_at = first_zero <= d ? first_zero : -1;

  int last = std::min(d - 1, first_zero - 2);
  for (int j = 1; j <= last; ++j) {
    QEstimate lhs;
    lhs.value = a[static_cast<std::size_t>(j - 1)] * a[static_cast<std::size_t>(j + 1)];
    QEstimate rhs;
    rhs.value = a[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(j)];
    std::string claim = "log_concavity j=" + std::to_string(j) + " p=" + fmt_p(rep.profile.p);
    rep.steps.push_back(make_certificate(claim, lhs, rhs, rel_tol));

    QEstimate clhs;
    clhs.value = std::pow(a[static_cast<std::size_t>(j + 1)], 1.0 / (j + 1));
    QEstimate crhs;
    crhs.value = std::pow(a[static_cast<std::size_t>(j)], 1.0 / j);
    std::string cclaim = "normalized_chain j=" + std::to_string(j + 1) + "|" + std::to_string(j) +
                         " p=" + fmt_p(rep.profile.p);
    rep.chain.push_back(make_certificate(cclaim, clhs, crhs, rel_tol));
  }
  for (const auto& c : rep.steps) rep.all_pass = rep.all_pass && c.pass;
  for (const auto& c : rep.chain) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

MeanEstimate mean_wedge_power(const std::vector<AtomSampler>& samplers, double p,
                              std::int64_t samples, std::uint64_t seed, int threads) {
  if (samplers.empty()) throw std::invalid_argument("need at least one sampler");
  if (!(p > 0.0) || std::isinf(p)) throw std::invalid_argument("p must be finite and positive");
  if (samples <= 0) throw std::invalid_argument("samples must be positive");
  int d = samplers[0].dim;
  int j = static_cast<int>(samplers.size());
  for (const auto& s : samplers)
    if (s.dim != d) throw std::invalid_argument("sampler dimensions differ");
  if (j > d) throw std::invalid_argument("tuple longer than dimension");

  struct Acc {
    KahanSum s1, s2;
  };
  SplitMix64 root(seed);
  Acc total = reduce_blocks(
      samples, 65536, threads, Acc{},
      [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        Acc acc;
        SplitMix64 rng = root.split(static_cast<std::uint64_t>(b));
        Mat vs(d, j);
        for (std::int64_t i = lo; i < hi; ++i) {
          for (int k = 0; k < j; ++k) vs.col(k) = samplers[static_cast<std::size_t>(k)].draw(rng);
          double w = wedge_norm(vs);
          double t = p == 1.0 ? w : (p == 2.0 ? w * w : std::pow(w, p));
          acc.s1.add(t);
          acc.s2.add(t * t);
        }
        return acc;
      },
      [](Acc a, const Acc& b) {
        a.s1.merge(b.s1);
        a.s2.merge(b.s2);
        return a;
      });

  double n = static_cast<double>(samples);
  double mean = total.s1.value() / n;
  double var = std::max(0.0, total.s2.value() / n - mean * mean);
  if (samples > 1) var *= n / (n - 1.0);
  double mass = 1.0;
  for (const auto& s : samplers) mass *= s.total_mass;

  MeanEstimate est;
  est.value = mass * mean;
  est.ci_halfwidth = 3.0 * mass * std::sqrt(var / n);
  est.samples = samples;
  return est;
}

double sphere_moment(int d, int j, double p) {
  if (d < 1 || j < 1 || j > d) throw std::invalid_argument("need 1 <= j <= d");
  if (p != 1.0 && p != 2.0)
    throw std::invalid_argument("closed-form sphere moment needs p in {1, 2}");
  double log_ref = std::log(sphere_reference(d, j, p));
  return std::exp(j * p * log_ref - j * log_sphere_area(d));
}

RandvolResult randvol_expectation(Distribution dist, int d, int j, double p, bool normalize,
                                  std::int64_t samples, std::uint64_t seed, int threads) {
  if (d < 1 || j < 1 || j > d) throw std::invalid_argument("need 1 <= j <= d");
  if (!(p > 0.0) || std::isinf(p)) throw std::invalid_argument("p must be finite and positive");

  RandvolResult res;
  res.dist = dist;
  res.dim = d;
  res.j = j;
  res.p = p;
  res.normalized = normalize;

  double scale = 1.0;
  if (normalize) {
    switch (dist) {
      case Distribution::uniform_sphere:
        scale = 1.0;
        break;
      case Distribution::uniform_ball:
        // E|xi|^p = d/(d+p) for the unit ball.
        scale = std::pow((d + p) / static_cast<double>(d), 1.0 / p);
        break;
      case Distribution::gaussian:
        // E|xi|^p = 2^{p/2} Gamma((d+p)/2) / Gamma(d/2).
        scale = std::exp(-(0.5 * p * std::log(2.0) + std::lgamma(0.5 * (d + p)) -
                           std::lgamma(0.5 * d)) /
                         p);
        break;
      case Distribution::exponential_product:
        throw std::invalid_argument("no closed-form normalization for the exponential product");
    }
  }
  res.scale = scale;

  AtomSampler base;
  switch (dist) {
    case Distribution::uniform_sphere:
      base = sphere_direction_sampler(d);
      break;
    case Distribution::uniform_ball:
      base = ball_sampler(d, scale);
      break;
    case Distribution::gaussian:
      base = gaussian_sampler(d, scale);
      break;
    case Distribution::exponential_product:
      base = exponential_product_sampler(d);
      break;
  }
  std::vector<AtomSampler> samplers(static_cast<std::size_t>(j), base);
  res.expectation = mean_wedge_power(samplers, p, samples, seed, threads);

  bool sphere_exact = p == 1.0 || p == 2.0;
  if (sphere_exact) {
    res.sphere_value = sphere_moment(d, j, p);
    res.sphere_ci = 0.0;
  } else {
    std::vector<AtomSampler> sph(static_cast<std::size_t>(j), sphere_direction_sampler(d));
    MeanEstimate m = mean_wedge_power(sph, p, samples, seed ^ 0xa5a5a5a5a5a5a5a5ULL, threads);
    res.sphere_value = m.value;
    res.sphere_ci = m.ci_halfwidth;
  }

  if (normalize) {
    QEstimate lhs;
    lhs.value = res.expectation.value;
    lhs.method = "mc";
    lhs.ci_halfwidth = res.expectation.ci_halfwidth;
    lhs.samples = res.expectation.samples;
    lhs.seed = seed;
    QEstimate rhs;
    rhs.value = res.sphere_value;
    rhs.method = sphere_exact ? "exact" : "mc";
    rhs.ci_halfwidth = res.sphere_ci;
    const char* name = dist == Distribution::uniform_sphere  ? "uniform-sphere"
                       : dist == Distribution::uniform_ball  ? "uniform-ball"
                       : dist == Distribution::gaussian      ? "gaussian"
                                                             : "exp-product";
    std::string claim = std::string("randvol dist=") + name + " d=" + std::to_string(d) +
                        " j=" + std::to_string(j) + " p=" + fmt_p(p);
    res.corollary = make_certificate(claim, lhs, rhs, 1e-9);
  }
  return res;
}

std::vector<VitaleRow> vitale_table(int d_max) {
  if (d_max < 1) throw std::invalid_argument("d_max must be positive");
  std::vector<VitaleRow> rows;
  rows.reserve(static_cast<std::size_t>(d_max));
  const double half_limit = std::exp(-0.5);
  const double full_limit = std::exp(-1.0);
  for (int d = 1; d <= d_max; ++d) {
    VitaleRow r;
    r.d = d;
    r.lhs = std::exp(std::log(sphere_reference(d, d, 1.0)) - log_sphere_area(d));
    double log_full = (std::lgamma(d + 1.0) - d * std::log(static_cast<double>(d))) / d;
    r.rhs = std::exp(0.5 * log_full);
    r.pass = r.lhs <= r.rhs + 1e-12 * std::max(1.0, r.rhs);
    r.gap_half = std::abs(r.rhs - half_limit);
    r.gap_full = std::abs(std::exp(log_full) - full_limit);
    rows.push_back(r);
  }
  return rows;
}

ReverseHolderReport reverse_holder_report(int d, int j, double p, Distribution mu,
                                          std::int64_t samples, std::uint64_t seed, int threads) {
  if (!(p >= 1.0) || std::isinf(p)) throw std::invalid_argument("p must be finite and >= 1");
  ReverseHolderReport rep;
  rep.dim = d;
  rep.j = j;
  rep.p = p;

  double e1 = sphere_moment(d, j, 1.0);
  QEstimate lhs;
  if (p == 1.0 || p == 2.0) {
    double ep = sphere_moment(d, j, p);
    lhs.value = std::exp(std::log(e1) / j - std::log(ep) / (p * j));
  } else {
    std::vector<AtomSampler> sph(static_cast<std::size_t>(j), sphere_direction_sampler(d));
    MeanEstimate ep = mean_wedge_power(sph, p, samples, seed, threads);
    lhs.value = std::exp(std::log(e1) / j - std::log(ep.value) / (p * j));
    lhs.method = "mc";
    lhs.ci_halfwidth = lhs.value * ep.ci_halfwidth / (p * j * ep.value);
    lhs.samples = samples;
    lhs.seed = seed;
  }
  QEstimate one;
  one.value = 1.0;
  rep.b_certificate = make_certificate(
      "reverse_holder_sphere d=" + std::to_string(d) + " j=" + std::to_string(j) +
          " p=" + fmt_p(p),
      lhs, one, 1e-9);

  RandvolResult rv1 = randvol_expectation(mu, d, j, 1.0, false, samples,
                                          seed ^ 0x1234567890abcdefULL, threads);
  RandvolResult rvp = randvol_expectation(mu, d, j, p, false, samples,
                                          seed ^ 0x0fedcba987654321ULL, threads);
  double ep_mu = rvp.expectation.value;
  double e1_mu = rv1.expectation.value;
  if (ep_mu > 0.0 && e1_mu > 0.0) {
    rep.r_mu = std::exp(std::log(ep_mu) / (p * j) - std::log(e1_mu) / j);
    double rel = std::hypot(rvp.expectation.ci_halfwidth / (p * j * ep_mu),
                            rv1.expectation.ci_halfwidth / (static_cast<double>(j) * e1_mu));
    rep.r_mu_ci = rep.r_mu * rel;
  } else {
    rep.r_mu = kInf;
  }
  rep.reference_bound = p * p * std::sqrt((d + 1.0) / (d + p));
  return rep;
}

}  // namespace qgeo
