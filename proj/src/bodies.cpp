#include "qgeo/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qgeo/accumulate.hpp"

namespace qgeo {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

// Iterate unordered k-subsets of {0..n-1}.
template <class Fn>
void for_each_subset(int n, int k, Fn fn) {
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int l = i + 1; l < k; ++l) c[static_cast<std::size_t>(l)] = c[static_cast<std::size_t>(l - 1)] + 1;
  }
}

template <class Fn>
void for_each_permutation(int d, Fn fn) {
  std::vector<int> tau(static_cast<std::size_t>(d));
  std::iota(tau.begin(), tau.end(), 0);
  do {
    fn(tau);
  } while (std::next_permutation(tau.begin(), tau.end()));
}

}  // namespace

Zonotope projection_body(const DiscreteSurface& s) {
  Zonotope z;
  z.dim = s.dim;
  z.generators.reserve(s.atoms.size());
  for (const Atom& a : s.atoms) z.generators.push_back(a.weight * a.v);
  return z;
}

double zonotope_support(const Zonotope& z, const Vec& y) {
  KahanSum acc;
  for (const Vec& g : z.generators) acc.add(std::abs(y.dot(g)));
  return acc.value();
}

double zonotope_volume(const Zonotope& z, std::int64_t cap) {
  const int d = z.dim;
  const int n = static_cast<int>(z.generators.size());
  if (d < 1) throw std::invalid_argument("zonotope_volume: dim must be >= 1");
  if (n < d) return 0.0;
  if (binomial(n, d) > static_cast<double>(cap))
    throw CapExceeded("zonotope_volume: too many generator subsets; raise the cap");

  KahanSum acc;
  Mat m(d, d);
  for_each_subset(n, d, [&](const std::vector<int>& c) {
    for (int i = 0; i < d; ++i) m.col(i) = z.generators[static_cast<std::size_t>(c[static_cast<std::size_t>(i)])];
    acc.add(std::abs(m.partialPivLu().determinant()));
  });
  return std::exp2(d) * acc.value();
}

double mixed_volume_zb(const std::vector<Zonotope>& zonotopes, int ball_copies,
                       std::int64_t cap) {
  const int j = static_cast<int>(zonotopes.size());
  if (ball_copies < 0) throw std::invalid_argument("mixed_volume_zb: ball_copies must be >= 0");
  const int d = j > 0 ? zonotopes.front().dim : ball_copies;
  if (j + ball_copies != d)
    throw std::invalid_argument("mixed_volume_zb: need #zonotopes + ball copies = dim");
  for (const auto& z : zonotopes)
    if (z.dim != d) throw std::invalid_argument("mixed_volume_zb: zonotopes must share one dimension");
  if (j == 0) return unit_ball_volume(d);

  double tuples = 1.0;
  for (const auto& z : zonotopes) tuples *= static_cast<double>(z.generators.size());
  if (tuples > static_cast<double>(cap))
    throw CapExceeded("mixed_volume_zb: too many generator tuples; raise the cap");

  KahanSum acc;
  Mat v(d, j);
  std::function<void(int)> rec = [&](int pos) {
    const auto& gens = zonotopes[static_cast<std::size_t>(pos)].generators;
    if (pos == j - 1) {
      for (const Vec& g : gens) {
        v.col(pos) = g;
        acc.add(wedge_norm(v));
      }
    } else {
      for (const Vec& g : gens) {
        v.col(pos) = g;
        rec(pos + 1);
      }
    }
  };
  rec(0);

  double log_factor = j * std::log(2.0) + std::lgamma(d - j + 1.0) - std::lgamma(d + 1.0) +
                      log_unit_ball_volume(d - j);
  return std::exp(log_factor) * acc.value();
}

double mixed_volume_boxes(const std::vector<BoxSpec>& boxes) {
  const int d = static_cast<int>(boxes.size());
  if (d < 1) throw std::invalid_argument("mixed_volume_boxes: need at least one box");
  if (d > 8) throw std::invalid_argument("mixed_volume_boxes: supported up to dimension 8");
  for (const auto& b : boxes) {
    if (b.frame.dim() != d || b.frame.count() != d)
      throw std::invalid_argument("mixed_volume_boxes: each box needs a full orthonormal frame");
    if (b.lengths.size() != d || (b.lengths.array() <= 0.0).any())
      throw std::invalid_argument("mixed_volume_boxes: edge lengths must be positive");
  }

  KahanSum acc;
  Mat v(d, d);
  for_each_permutation(d, [&](const std::vector<int>& tau) {
    double w = 1.0;
    for (int m = 0; m < d; ++m) {
      int t = tau[static_cast<std::size_t>(m)];
      w *= boxes[static_cast<std::size_t>(m)].lengths(t);
      v.col(m) = boxes[static_cast<std::size_t>(m)].frame.basis.col(t);
    }
    acc.add(w * wedge_norm(v));
  });
  return acc.value() / std::tgamma(d + 1.0);
}

double mixed_discriminant(const std::vector<Mat>& mats) {
  const int d = static_cast<int>(mats.size());
  if (d < 1) throw std::invalid_argument("mixed_discriminant: need at least one matrix");
  if (d > 12) throw std::invalid_argument("mixed_discriminant: supported up to dimension 12");
  for (const auto& m : mats)
    if (m.rows() != d || m.cols() != d)
      throw std::invalid_argument("mixed_discriminant: matrices must be d x d for d arguments");

  KahanSum acc;
  const std::uint32_t full = (std::uint32_t{1} << d) - 1;
  Mat sum(d, d);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    sum.setZero();
    int bits = 0;
    for (int i = 0; i < d; ++i) {
      if ((mask >> i) & 1) {
        sum += mats[static_cast<std::size_t>(i)];
        ++bits;
      }
    }
    double det = sum.partialPivLu().determinant();
    acc.add(((d - bits) % 2 == 0 ? 1.0 : -1.0) * det);
  }
  return acc.value() / std::tgamma(d + 1.0);
}

IdentityCheck mixed_discriminant_identity_check(const std::vector<DiscreteSurface>& surfaces,
                                                double rel_tol, std::int64_t cap) {
  const int d = static_cast<int>(surfaces.size());
  if (d < 1) throw std::invalid_argument("identity check: need d surfaces in dimension d");
  for (const auto& s : surfaces)
    if (s.dim != d)
      throw std::invalid_argument("identity check: need d surfaces in dimension d");

  std::vector<Mat> covs;
  covs.reserve(surfaces.size());
  for (const auto& s : surfaces) covs.push_back(covariance(s));
  double lhs = mixed_discriminant(covs);

  QEstimate q = q_exact(surfaces, 2.0, cap);
  double rhs = std::pow(q.value, 2.0 * d) / std::tgamma(d + 1.0);
  double tol = rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return IdentityCheck{lhs, rhs, std::abs(lhs - rhs) <= tol};
}

double directional_mass(const Vec& e, const DiscreteSurface& s) {
  if (e.size() != s.dim) throw std::invalid_argument("directional_mass: dimension mismatch");
  KahanSum acc;
  for (const Atom& a : s.atoms) acc.add(a.weight * std::abs(e.dot(a.v)));
  return acc.value();
}

double plane_mass(const Plane& e, const DiscreteSurface& s, std::int64_t cap) {
  if (e.dim() != s.dim) throw std::invalid_argument("plane_mass: dimension mismatch");
  const int k = e.k();
  const int n = s.size();
  if (binomial(n, k) > static_cast<double>(cap))
    throw CapExceeded("plane_mass: too many atom subsets; raise the cap");

  // Project the atoms onto E expressed in E's own coordinates (k-dim), then
  // sum wedges over subsets as in the diagonal p=1 route.
  std::vector<Atom> projected;
  projected.reserve(s.atoms.size());
  for (const Atom& a : s.atoms) projected.push_back(Atom{a.weight, e.basis.basis.transpose() * a.v});

  KahanSum acc;
  Mat v(k, k);
  for_each_subset(n, k, [&](const std::vector<int>& c) {
    double w = 1.0;
    for (int i = 0; i < k; ++i) {
      const Atom& a = projected[static_cast<std::size_t>(c[static_cast<std::size_t>(i)])];
      v.col(i) = a.v;
      w *= a.weight;
    }
    acc.add(w * wedge_norm(v));
  });
  return std::tgamma(k + 1.0) * acc.value();
}

double kp_norm(const Vec& y, const DiscreteSurface& s, double p) {
  if (y.size() != s.dim) throw std::invalid_argument("kp_norm: dimension mismatch");
  if (!(p >= 1.0)) throw std::invalid_argument("kp_norm: requires p >= 1");
  KahanSum acc;
  if (p == 1.0) {
    for (const Atom& a : s.atoms) acc.add(a.weight * std::abs(y.dot(a.v)));
    return acc.value();
  }
  if (p == 2.0) {
    for (const Atom& a : s.atoms) {
      double t = y.dot(a.v);
      acc.add(a.weight * t * t);
    }
    return std::sqrt(acc.value());
  }
  for (const Atom& a : s.atoms) acc.add(a.weight * std::pow(std::abs(y.dot(a.v)), p));
  return std::pow(acc.value(), 1.0 / p);
}

VisibilityResult visibility(const DiscreteSurface& s, double p, std::int64_t samples,
                            std::uint64_t seed, int threads) {
  if (!s.spans)
    throw std::invalid_argument("visibility: surface vectors must span the space (K^p unbounded)");
  if (samples < 1) throw std::invalid_argument("visibility: samples must be >= 1");
  const int d = s.dim;
  const double john_tol = 1e-7;

  JohnResult john = p == 1.0 ? john_ellipsoid_of_polar(projection_body(s), john_tol)
                             : john_ellipsoid_kp(s, p, 8192, seed ^ 0x9e3779b97f4a7c15ULL, john_tol);

  // Container: John ellipsoid scaled by sqrt(d (1+tol)); for symmetric bodies
  // K lies inside that blow-up of any inscribed ellipsoid obtained from the
  // polar Loewner ellipsoid. Slightly inflated further when the vertex set
  // was sampled rather than exact.
  double grow = std::sqrt(d * (1.0 + john_tol) * (1.0 + 10.0 * john_tol));
  if (john.approximate) grow *= 1.05;
  Eigen::SelfAdjointEigenSolver<Mat> es(john.e.shape);
  Mat axes = es.eigenvectors();
  Vec semi = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse() * grow;
  Mat map = axes * semi.asDiagonal();  // unit ball -> container
  double log_container_vol = log_unit_ball_volume(d) + semi.array().log().sum();

  SplitMix64 root(seed);
  const std::int64_t block = 1 << 16;
  std::int64_t hits = reduce_blocks<std::int64_t>(
      samples, block, threads, 0,
      [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        SplitMix64 rng = root.split(static_cast<std::uint64_t>(b));
        std::int64_t h = 0;
        Vec x(d);
        for (std::int64_t i = lo; i < hi; ++i) {
          double norm = 0.0;
          do {
            for (int k = 0; k < d; ++k) x(k) = rng.next_gaussian();
            norm = x.norm();
          } while (norm < 1e-12);
          double r = std::pow(rng.next_double(), 1.0 / d);
          Vec y = map * (x * (r / norm));
          if (kp_norm(y, s, p) <= 1.0) ++h;
        }
        return h;
      },
      [](std::int64_t a, std::int64_t b) { return a + b; });

  double n = static_cast<double>(samples);
  double rate = static_cast<double>(hits) / n;
  double container_vol = std::exp(log_container_vol);

  VisibilityResult res;
  res.samples = samples;
  res.seed = seed;
  res.approximate = john.approximate;
  res.john = john.e;
  res.mvee_iterations = john.mvee_iterations;
  res.volume = container_vol * rate;
  res.volume_ci = 3.0 * container_vol * std::sqrt(std::max(rate * (1.0 - rate), 0.0) / n);
  if (res.volume > 0.0) {
    res.vis = std::pow(res.volume, -1.0 / d);
    res.vis_ci = res.volume_ci * res.vis / (d * res.volume);
  }
  if (p == 1.0) {
    try {
      res.santalo_product = res.volume * zonotope_volume(projection_body(s));
      res.santalo_lower = std::exp(d * std::log(4.0) - 2.0 * std::lgamma(d + 1.0));
      res.santalo_upper = std::exp(2.0 * log_unit_ball_volume(d));
    } catch (const CapExceeded&) {
      // volume of Pi(S) out of reach for this many generators; skip the diagnostic
    }
  }
  return res;
}

double frame_bound_value(const std::vector<Vec>& unit_vectors, const DiscreteSurface& s) {
  const int d = s.dim;
  if (static_cast<int>(unit_vectors.size()) != d)
    throw std::invalid_argument("frame_bound_value: need d unit vectors");
  Mat m(d, d);
  double log_prod = 0.0;
  for (int i = 0; i < d; ++i) {
    m.col(i) = unit_vectors[static_cast<std::size_t>(i)];
    double mass = directional_mass(unit_vectors[static_cast<std::size_t>(i)], s);
    if (mass <= 0.0) return 0.0;
    log_prod += std::log(mass);
  }
  double wedge = wedge_norm(m);
  if (wedge <= 0.0) return std::numeric_limits<double>::infinity();
  return std::exp((log_prod - std::log(wedge)) / d);
}

double plane_bound_value(const std::vector<Plane>& planes, const DiscreteSurface& s,
                         std::int64_t cap) {
  const int d = s.dim;
  int total_k = 0;
  for (const auto& e : planes) total_k += e.k();
  if (total_k != d) throw std::invalid_argument("plane_bound_value: plane dimensions must sum to d");

  Mat joint(d, d);
  int col = 0;
  double log_prod = 0.0;
  for (const auto& e : planes) {
    double mass = plane_mass(e, s, cap);
    if (mass <= 0.0) return 0.0;
    log_prod += std::log(mass);
    for (int c = 0; c < e.k(); ++c) joint.col(col++) = e.basis.basis.col(c);
  }
  double wedge = wedge_norm(joint);
  if (wedge <= 0.0) return std::numeric_limits<double>::infinity();
  return std::exp((log_prod - std::log(wedge)) / d);
}

VisibilityBounds visibility_bounds(const DiscreteSurface& s,
                                   const std::vector<Frame>& user_frames, int random_trials,
                                   std::uint64_t seed) {
  if (!s.spans) throw std::invalid_argument("visibility_bounds: surface vectors must span");
  const int d = s.dim;
  VisibilityBounds out;
  out.random_trials = random_trials;

  JohnResult john = john_ellipsoid_of_polar(projection_body(s));
  Mat jaxes = john.e.axes();
  std::vector<Vec> frame(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) frame[static_cast<std::size_t>(i)] = jaxes.col(i);
  out.john = FrameBound{"john", frame_bound_value(frame, s)};

  SplitMix64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < random_trials; ++t) {
    Frame f = random_frame(d, d, rng);
    for (int i = 0; i < d; ++i) frame[static_cast<std::size_t>(i)] = f.basis.col(i);
    best = std::min(best, frame_bound_value(frame, s));
  }
  out.random_best = FrameBound{"random_min", best};

  for (std::size_t u = 0; u < user_frames.size(); ++u) {
    const Frame& f = user_frames[u];
    if (f.dim() != d || f.count() != d)
      throw std::invalid_argument("visibility_bounds: user frames must be full orthonormal frames");
    for (int i = 0; i < d; ++i) frame[static_cast<std::size_t>(i)] = f.basis.col(i);
    out.user.push_back(FrameBound{"user_" + std::to_string(u), frame_bound_value(frame, s)});
  }

  // John-axis plane splits [1..k | k+1..d].
  for (int k = 1; k < d; ++k) {
    Plane lo{Frame{jaxes.leftCols(k)}};
    Plane hi{Frame{jaxes.rightCols(d - k)}};
    double v = plane_bound_value({lo, hi}, s);
    out.plane_splits.push_back(FrameBound{"john_split_" + std::to_string(k), v});
  }
  return out;
}

double offdiagonal_perm_bound(const std::vector<DiscreteSurface>& surfaces,
                              const std::vector<Frame>& frames) {
  const int j = static_cast<int>(surfaces.size());
  if (j < 1) throw std::invalid_argument("offdiagonal_perm_bound: need at least one surface");
  const int d = surfaces.front().dim;
  if (d > 8) throw std::invalid_argument("offdiagonal_perm_bound: supported up to dimension 8");
  if (static_cast<int>(frames.size()) != d)
    throw std::invalid_argument("offdiagonal_perm_bound: need d frames");
  for (const auto& s : surfaces)
    if (s.dim != d) throw std::invalid_argument("offdiagonal_perm_bound: dimension mismatch");
  for (const auto& f : frames)
    if (f.dim() != d || f.count() != d)
      throw std::invalid_argument("offdiagonal_perm_bound: frames must be full orthonormal frames");

  KahanSum acc;
  Mat v(d, d);
  for_each_permutation(d, [&](const std::vector<int>& tau) {
    double w = 1.0;
    for (int m = 0; m < d && w > 0.0; ++m) {
      Vec e = frames[static_cast<std::size_t>(m)].basis.col(tau[static_cast<std::size_t>(m)]);
      v.col(m) = e;
      if (m < j) w *= directional_mass(e, surfaces[static_cast<std::size_t>(m)]);
    }
    if (w > 0.0) acc.add(w * wedge_norm(v));
  });
  return acc.value();
}

}  // namespace qgeo
