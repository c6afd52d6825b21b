#include "qgeo/qvalues.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "qgeo/accumulate.hpp"

namespace qgeo {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

int common_dim(const std::vector<const DiscreteSurface*>& surfs) {
  if (surfs.empty()) throw std::invalid_argument("q: need at least one surface");
  int d = surfs.front()->dim;
  for (const auto* s : surfs)
    if (s->dim != d) throw std::invalid_argument("q: surfaces must share one dimension");
  int j = static_cast<int>(surfs.size());
  if (j > d) throw std::invalid_argument("q: tuple length j must satisfy j <= dim");
  return d;
}

enum class PKind { zero, finite, sup };

PKind classify_p(double p) {
  if (std::isinf(p)) return PKind::sup;
  if (p == 0.0) return PKind::zero;
  if (p > 0.0 && std::isfinite(p)) return PKind::finite;
  throw std::invalid_argument("q: p must lie in [0, inf]");
}

double pow_term(double wedge_sq, double p) {
  if (p == 1.0) return std::sqrt(wedge_sq);
  if (p == 2.0) return wedge_sq;
  return std::pow(wedge_sq, 0.5 * p);
}

QEstimate q_exact_ptrs(const std::vector<const DiscreteSurface*>& surfs, double p,
                       std::int64_t cap) {
  const int d = common_dim(surfs);
  const int j = static_cast<int>(surfs.size());
  const PKind kind = classify_p(p);

  double tuples = 1.0;
  for (const auto* s : surfs) tuples *= s->size();
  if (tuples > static_cast<double>(cap))
    throw CapExceeded("q_exact: " + std::to_string(tuples) +
                      " ordered tuples exceed the cap; use the Monte Carlo estimator "
                      "(method mc with a sample budget) instead");

  KahanSum sum;       // finite p
  KahanSum log_sum;   // p = 0
  double max_sq = 0.0;
  bool zero_wedge = false;

  Mat v(d, j);
  std::function<void(int, double)> rec = [&](int pos, double w_acc) {
    if (zero_wedge && kind == PKind::zero) return;
    const auto& atoms = surfs[static_cast<std::size_t>(pos)]->atoms;
    if (pos == j - 1) {
      for (const Atom& a : atoms) {
        v.col(pos) = a.v;
        double sq = wedge_norm_sq(v);
        double w = w_acc * a.weight;
        switch (kind) {
          case PKind::finite:
            sum.add(w * pow_term(sq, p));
            break;
          case PKind::zero:
            if (sq <= 0.0) {
              zero_wedge = true;
              return;
            }
            log_sum.add(w * 0.5 * std::log(sq));
            break;
          case PKind::sup:
            max_sq = std::max(max_sq, sq);
            break;
        }
      }
    } else {
      for (const Atom& a : atoms) {
        v.col(pos) = a.v;
        rec(pos + 1, w_acc * a.weight);
        if (zero_wedge && kind == PKind::zero) return;
      }
    }
  };
  rec(0, 1.0);

  QEstimate est;
  est.method = "exact";
  switch (kind) {
    case PKind::sup:
      est.value = std::pow(max_sq, 0.5 / j);
      break;
    case PKind::zero: {
      if (zero_wedge) {
        est.value = 0.0;
        break;
      }
      double mass = 1.0;
      for (const auto* s : surfs) mass *= s->total_mass();
      est.value = std::exp(log_sum.value() / mass / j);
      break;
    }
    case PKind::finite: {
      double total = sum.value();
      est.value = total <= 0.0 ? 0.0 : std::pow(total, 1.0 / (j * p));
      break;
    }
  }
  return est;
}

}  // namespace

QEstimate q_exact(const std::vector<DiscreteSurface>& tuple, double p, std::int64_t cap) {
  std::vector<const DiscreteSurface*> ptrs;
  ptrs.reserve(tuple.size());
  for (const auto& s : tuple) ptrs.push_back(&s);
  return q_exact_ptrs(ptrs, p, cap);
}

QEstimate q_exact_diagonal(const DiscreteSurface& s, int j, double p, std::int64_t cap) {
  if (j < 1) throw std::invalid_argument("q: j must be >= 1");
  std::vector<const DiscreteSurface*> ptrs(static_cast<std::size_t>(j), &s);
  return q_exact_ptrs(ptrs, p, cap);
}

QEstimate q1_diagonal_subsets(const DiscreteSurface& s, int j, std::int64_t cap) {
  const int d = s.dim;
  const int n = s.size();
  if (j < 1 || j > d) throw std::invalid_argument("q: need 1 <= j <= dim");
  if (binomial(n, j) > static_cast<double>(cap))
    throw CapExceeded("q1_diagonal_subsets: too many atom subsets; raise the cap or use mc");
  // Fewer atoms than slots: every tuple repeats an atom, so the value is 0.
  if (n < j) return QEstimate{0.0, "exact", 0.0, 0, std::nullopt};

  KahanSum sum;
  if (j == 1) {
    for (const Atom& a : s.atoms) sum.add(a.weight * a.v.norm());
    return QEstimate{sum.value(), "exact", 0.0, 0, std::nullopt};
  }

  if (j == 2) {
    std::vector<double> nsq(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) nsq[static_cast<std::size_t>(i)] = s.atoms[static_cast<std::size_t>(i)].v.squaredNorm();
    for (int i = 0; i < n; ++i) {
      const Atom& ai = s.atoms[static_cast<std::size_t>(i)];
      double block = 0.0;
      for (int k = i + 1; k < n; ++k) {
        const Atom& ak = s.atoms[static_cast<std::size_t>(k)];
        double dot = ai.v.dot(ak.v);
        double g = nsq[static_cast<std::size_t>(i)] * nsq[static_cast<std::size_t>(k)] - dot * dot;
        if (g > 0.0) block += ak.weight * std::sqrt(g);
      }
      sum.add(ai.weight * block);
    }
  } else if (j == 3 && d == 3) {
    // Flat layout keeps the innermost dot-product loop vectorizable.
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n)),
        z(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const Atom& a = s.atoms[static_cast<std::size_t>(i)];
      x[static_cast<std::size_t>(i)] = a.v(0);
      y[static_cast<std::size_t>(i)] = a.v(1);
      z[static_cast<std::size_t>(i)] = a.v(2);
      w[static_cast<std::size_t>(i)] = a.weight;
    }
    for (int i = 0; i < n; ++i) {
      for (int k = i + 1; k < n; ++k) {
        double cx = y[i] * z[k] - z[i] * y[k];
        double cy = z[i] * x[k] - x[i] * z[k];
        double cz = x[i] * y[k] - y[i] * x[k];
        double wik = w[i] * w[k];
        double block = 0.0;
        for (int l = k + 1; l < n; ++l)
          block += w[l] * std::abs(cx * x[l] + cy * y[l] + cz * z[l]);
        sum.add(wik * block);
      }
    }
  } else {
    std::vector<int> c(static_cast<std::size_t>(j));
    for (int i = 0; i < j; ++i) c[static_cast<std::size_t>(i)] = i;
    Mat v(d, j);
    for (;;) {
      double w = 1.0;
      for (int i = 0; i < j; ++i) {
        const Atom& a = s.atoms[static_cast<std::size_t>(c[static_cast<std::size_t>(i)])];
        v.col(i) = a.v;
        w *= a.weight;
      }
      sum.add(w * wedge_norm(v));
      int i = j - 1;
      while (i >= 0 && c[static_cast<std::size_t>(i)] == n - j + i) --i;
      if (i < 0) break;
      ++c[static_cast<std::size_t>(i)];
      for (int l = i + 1; l < j; ++l) c[static_cast<std::size_t>(l)] = c[static_cast<std::size_t>(l - 1)] + 1;
    }
  }

  double total = std::tgamma(j + 1.0) * sum.value();
  double value = total <= 0.0 ? 0.0 : std::pow(total, 1.0 / j);
  return QEstimate{value, "exact", 0.0, 0, std::nullopt};
}

QEstimate qsup_diagonal_subsets(const DiscreteSurface& s, int j, std::int64_t cap) {
  const int d = s.dim;
  const int n = s.size();
  if (j < 1 || j > d) throw std::invalid_argument("q: need 1 <= j <= dim");
  if (binomial(n, j) > static_cast<double>(cap))
    throw CapExceeded("qsup_diagonal_subsets: too many atom subsets; raise the cap");
  if (n < j) return QEstimate{0.0, "exact", 0.0, 0, std::nullopt};

  double max_sq = 0.0;
  if (j == 1) {
    for (const Atom& a : s.atoms) max_sq = std::max(max_sq, a.v.squaredNorm());
  } else {
    std::vector<int> c(static_cast<std::size_t>(j));
    for (int i = 0; i < j; ++i) c[static_cast<std::size_t>(i)] = i;
    Mat v(d, j);
    for (;;) {
      for (int i = 0; i < j; ++i) v.col(i) = s.atoms[static_cast<std::size_t>(c[static_cast<std::size_t>(i)])].v;
      max_sq = std::max(max_sq, wedge_norm_sq(v));
      int i = j - 1;
      while (i >= 0 && c[static_cast<std::size_t>(i)] == n - j + i) --i;
      if (i < 0) break;
      ++c[static_cast<std::size_t>(i)];
      for (int l = i + 1; l < j; ++l) c[static_cast<std::size_t>(l)] = c[static_cast<std::size_t>(l - 1)] + 1;
    }
  }
  return QEstimate{std::pow(max_sq, 0.5 / j), "exact", 0.0, 0, std::nullopt};
}

AtomSampler sampler_from_surface(const DiscreteSurface& s) {
  auto vectors = std::make_shared<std::vector<Vec>>();
  auto cumulative = std::make_shared<std::vector<double>>();
  vectors->reserve(s.atoms.size());
  cumulative->reserve(s.atoms.size());
  double running = 0.0;
  for (const Atom& a : s.atoms) {
    vectors->push_back(a.v);
    running += a.weight;
    cumulative->push_back(running);
  }
  double total = running;
  AtomSampler sampler;
  sampler.dim = s.dim;
  sampler.total_mass = s.total_mass();
  sampler.draw = [vectors, cumulative, total](SplitMix64& rng) -> Vec {
    double u = rng.next_double() * total;
    auto it = std::upper_bound(cumulative->begin(), cumulative->end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cumulative->begin());
    if (idx >= vectors->size()) idx = vectors->size() - 1;
    return (*vectors)[idx];
  };
  return sampler;
}

namespace {

Vec draw_sphere(int d, SplitMix64& rng) {
  Vec v(d);
  double norm = 0.0;
  do {
    for (int k = 0; k < d; ++k) v(k) = rng.next_gaussian();
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

}  // namespace

AtomSampler sphere_area_sampler(int d) {
  return AtomSampler{d, d * unit_ball_volume(d),
                     [d](SplitMix64& rng) { return draw_sphere(d, rng); }};
}

AtomSampler sphere_direction_sampler(int d) {
  return AtomSampler{d, 1.0, [d](SplitMix64& rng) { return draw_sphere(d, rng); }};
}

AtomSampler ball_sampler(int d, double scale) {
  return AtomSampler{d, 1.0, [d, scale](SplitMix64& rng) -> Vec {
                       double r = std::pow(rng.next_double(), 1.0 / d);
                       return (scale * r) * draw_sphere(d, rng);
                     }};
}

AtomSampler gaussian_sampler(int d, double scale) {
  return AtomSampler{d, 1.0, [d, scale](SplitMix64& rng) -> Vec {
                       Vec v(d);
                       for (int k = 0; k < d; ++k) v(k) = scale * rng.next_gaussian();
                       return v;
                     }};
}

AtomSampler exponential_product_sampler(int d) {
  return AtomSampler{d, 1.0, [d](SplitMix64& rng) -> Vec {
                       Vec v(d);
                       for (int k = 0; k < d; ++k) v(k) = rng.next_exponential();
                       return v;
                     }};
}

QEstimate q_mc(const std::vector<AtomSampler>& samplers, double p, std::int64_t samples,
               std::uint64_t seed, int threads) {
  if (samplers.empty()) throw std::invalid_argument("q_mc: need at least one sampler");
  if (!(p > 0.0) || std::isinf(p))
    throw std::invalid_argument("q_mc: Monte Carlo estimation requires 0 < p < inf");
  if (samples < 1) throw std::invalid_argument("q_mc: samples must be >= 1");
  const int j = static_cast<int>(samplers.size());
  const int d = samplers.front().dim;
  for (const auto& s : samplers)
    if (s.dim != d) throw std::invalid_argument("q_mc: samplers must share one dimension");
  if (j > d) throw std::invalid_argument("q_mc: tuple length j must satisfy j <= dim");

  struct Acc {
    KahanSum s1, s2;
  };
  SplitMix64 root(seed);
  const std::int64_t block = 1 << 16;
  Acc acc = reduce_blocks<Acc>(
      samples, block, threads, Acc{},
      [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        SplitMix64 rng = root.split(static_cast<std::uint64_t>(b));
        Acc a;
        Mat v(d, j);
        for (std::int64_t i = lo; i < hi; ++i) {
          for (int c = 0; c < j; ++c) v.col(c) = samplers[static_cast<std::size_t>(c)].draw(rng);
          double term = pow_term(wedge_norm_sq(v), p);
          a.s1.add(term);
          a.s2.add(term * term);
        }
        return a;
      },
      [](Acc lhs, const Acc& rhs) {
        lhs.s1.merge(rhs.s1);
        lhs.s2.merge(rhs.s2);
        return lhs;
      });

  const double n = static_cast<double>(samples);
  double mean = acc.s1.value() / n;
  QEstimate est;
  est.method = "mc";
  est.samples = samples;
  est.seed = seed;
  if (mean <= 0.0) {
    est.value = 0.0;
    return est;
  }
  double mass = 1.0;
  for (const auto& s : samplers) mass *= s.total_mass;
  est.value = std::pow(mass * mean, 1.0 / (j * p));
  double var = samples > 1 ? std::max(0.0, (acc.s2.value() - n * mean * mean) / (n - 1.0)) : 0.0;
  double se = std::sqrt(var / n);
  est.ci_halfwidth = 3.0 * se * est.value / (j * p * mean);
  return est;
}

QEstimate q2_spectral(const DiscreteSurface& s, int j) {
  if (j < 1 || j > s.dim) throw std::invalid_argument("q2_spectral: need 1 <= j <= dim");
  Mat t = covariance(s);
  Eigen::SelfAdjointEigenSolver<Mat> es(t, Eigen::EigenvaluesOnly);
  Vec lambda = es.eigenvalues().cwiseMax(0.0);
  // Rank tolerance: eigenvalues below dim * eps * lambda_max are noise of the
  // symmetric eigensolver; left in place they survive the 1/(2j) root as
  // spurious mass on rank-deficient surfaces.
  double floor = lambda.maxCoeff() * s.dim * std::numeric_limits<double>::epsilon();
  lambda = (lambda.array() < floor).select(0.0, lambda);
  // Elementary symmetric polynomials e_0..e_j of the spectrum.
  std::vector<double> e(static_cast<std::size_t>(j) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < s.dim; ++i)
    for (int k = std::min(j, i + 1); k >= 1; --k)
      e[static_cast<std::size_t>(k)] += lambda(i) * e[static_cast<std::size_t>(k - 1)];
  double power = std::tgamma(j + 1.0) * std::max(0.0, e[static_cast<std::size_t>(j)]);
  double value = power <= 0.0 ? 0.0 : std::pow(power, 1.0 / (2.0 * j));
  return QEstimate{value, "spectral", 0.0, 0, std::nullopt};
}

QEstimate sphere_reference_estimate(int d, int j, double p, std::int64_t samples,
                                    std::optional<std::uint64_t> seed, int threads) {
  if (std::isinf(p) || p == 1.0 || p == 2.0)
    return QEstimate{sphere_reference(d, j, p), "exact", 0.0, 0, std::nullopt};
  if (samples < 1 || !seed)
    throw std::invalid_argument(
        "sphere_reference: no closed form for this p; provide samples and seed for Monte Carlo");
  std::vector<AtomSampler> samplers(static_cast<std::size_t>(j), sphere_area_sampler(d));
  return q_mc(samplers, p, samples, *seed, threads);
}

QProfile q_profile(const DiscreteSurface& s, double p, std::int64_t tuple_cap,
                   std::int64_t subset_cap) {
  classify_p(p);
  const int d = s.dim;
  QProfile pr;
  pr.dim = d;
  pr.p = p;
  pr.q.assign(static_cast<std::size_t>(d) + 1, 0.0);
  pr.method.assign(static_cast<std::size_t>(d) + 1, "");
  pr.q[0] = 1.0;

  for (int j = 1; j <= d; ++j) {
    QEstimate est;
    if (p == 2.0) {
      est = q2_spectral(s, j);
    } else if (p == 1.0) {
      est = q1_diagonal_subsets(s, j, subset_cap);
      est.method = "subsets";
    } else if (std::isinf(p)) {
      est = qsup_diagonal_subsets(s, j, subset_cap);
      est.method = "subsets";
    } else {
      est = q_exact_diagonal(s, j, p, tuple_cap);
    }
    pr.q[static_cast<std::size_t>(j)] = est.value;
    pr.method[static_cast<std::size_t>(j)] = est.method;
  }

  if (p == 1.0 || p == 2.0 || std::isinf(p)) {
    pr.a.assign(static_cast<std::size_t>(d) + 1, 0.0);
    pr.a[0] = 1.0;
    for (int j = 1; j <= d; ++j) {
      double ref = sphere_reference(d, j, p);
      pr.a[static_cast<std::size_t>(j)] = std::pow(pr.q[static_cast<std::size_t>(j)] / ref, j);
    }
  }
  if (p == 1.0) {
    pr.b_proxy.assign(static_cast<std::size_t>(d) + 1, 0.0);
    pr.b_proxy[0] = unit_ball_volume(d);
    for (int j = 1; j <= d; ++j) {
      double log_factor = j * std::log(2.0) + std::lgamma(d - j + 1.0) +
                          log_unit_ball_volume(d - j) - std::lgamma(d + 1.0);
      pr.b_proxy[static_cast<std::size_t>(j)] =
          std::pow(pr.q[static_cast<std::size_t>(j)], j) * std::exp(log_factor);
    }
  }
  return pr;
}

}  // namespace qgeo
