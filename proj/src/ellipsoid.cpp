#include "qgeo/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "qgeo/bodies.hpp"

namespace qgeo {

double Ellipsoid::volume() const {
  Eigen::LDLT<Mat> ldlt(shape);
  double logdet = 0.0;
  for (int i = 0; i < shape.rows(); ++i) {
    double d = ldlt.vectorD()(i);
    if (d <= 0.0) throw std::runtime_error("ellipsoid: shape matrix not positive definite");
    logdet += std::log(d);
  }
  return std::exp(log_unit_ball_volume(static_cast<int>(shape.rows())) - 0.5 * logdet);
}

Vec Ellipsoid::semiaxes() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(shape, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cwiseInverse();
}

Mat Ellipsoid::axes() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(shape);
  return es.eigenvectors();
}

Ellipsoid polar_ellipsoid(const Ellipsoid& e) {
  return Ellipsoid{e.shape.inverse().eval()};
}

MveeResult khachiyan_mvee(const Mat& points, double tol, int max_iter) {
  const int d = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  if (d < 1 || m < 1) throw std::invalid_argument("khachiyan_mvee: empty input");
  {
    Eigen::ColPivHouseholderQR<Mat> qr(points);
    if (qr.rank() < d)
      throw std::invalid_argument("khachiyan_mvee: point set does not span the space");
  }

  // Rescale for conditioning; undo on the output shape.
  double scale = points.cwiseAbs().maxCoeff();
  Mat x = points / scale;

  Vec u = Vec::Constant(m, 1.0 / m);
  Mat msum = Mat::Zero(d, d);
  for (int i = 0; i < m; ++i) msum.noalias() += u(i) * (x.col(i) * x.col(i).transpose());

  Vec kappa(m);
  int iter = 0;
  double kmax = 0.0;
  for (; iter < max_iter; ++iter) {
    Mat minv = msum.inverse();
    int imax = -1, imin = -1;
    kmax = -1.0;
    double kmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      kappa(i) = x.col(i).dot(minv * x.col(i));
      if (kappa(i) > kmax) {
        kmax = kappa(i);
        imax = i;
      }
      if (u(i) > 0.0 && kappa(i) < kmin) {
        kmin = kappa(i);
        imin = i;
      }
    }
    bool upper_ok = kmax <= d * (1.0 + tol);
    bool lower_ok = kmin >= d * (1.0 - tol);
    if (upper_ok && lower_ok) break;

    int i;
    double beta;
    if (kmax - d >= d - kmin) {
      i = imax;
      beta = (kmax - d) / (d * (kmax - 1.0));
    } else {
      // Away step: shift weight off the interior-most support point. The
      // stationary point of logdet along the step is (k-d)/(d(k-1)) only
      // when k > 1; for k <= 1 the objective is monotone and the step
      // clamps to the bound that zeroes the weight.
      i = imin;
      double lower = u(i) < 1.0 ? -u(i) / (1.0 - u(i)) : 0.0;
      beta = kmin > 1.0 ? (kmin - d) / (d * (kmin - 1.0)) : lower;
      beta = std::min(0.0, std::max(beta, lower));
    }
    u *= (1.0 - beta);
    u(i) += beta;
    u = u.cwiseMax(0.0);
    u /= u.sum();
    msum.setZero();
    for (int k = 0; k < m; ++k)
      if (u(k) > 0.0) msum.noalias() += u(k) * (x.col(k) * x.col(k).transpose());
  }
  if (iter >= max_iter)
    throw std::runtime_error("khachiyan_mvee: did not reach tolerance within the iteration cap");

  // Enclosing shape: every point satisfies x^T (M^{-1}/kmax) x <= 1.
  double denom = std::max(kmax, static_cast<double>(d));
  Mat shape = msum.inverse() / denom / (scale * scale);
  shape = (0.5 * (shape + shape.transpose())).eval();
  return MveeResult{Ellipsoid{shape}, iter, kmax / d - 1.0};
}

namespace {

Mat zonotope_vertex_samples(const Zonotope& z, std::uint64_t dir_seed, bool& exact) {
  const int d = z.dim;
  const int n = static_cast<int>(z.generators.size());
  if (n <= 16) {
    exact = true;
    // All sign patterns with the last sign fixed (vertices come in +- pairs).
    std::int64_t count = std::int64_t{1} << (n - 1);
    Mat pts(d, count);
    for (std::int64_t mask = 0; mask < count; ++mask) {
      Vec v = z.generators.back();
      for (int i = 0; i < n - 1; ++i) {
        if ((mask >> i) & 1)
          v += z.generators[static_cast<std::size_t>(i)];
        else
          v -= z.generators[static_cast<std::size_t>(i)];
      }
      pts.col(mask) = v;
    }
    return pts;
  }

  exact = false;
  // Support vertices in sampled directions: v(u) = sum_i sign(u . g_i) g_i.
  const int samples = 1 << 16;
  SplitMix64 rng(dir_seed);
  std::vector<Vec> verts;
  std::unordered_set<std::uint64_t> seen;
  verts.reserve(4096);
  auto add_direction = [&](const Vec& u) {
    Vec v = Vec::Zero(d);
    std::uint64_t pattern = 0;
    bool hashable = n <= 64;
    for (int i = 0; i < n; ++i) {
      double s = u.dot(z.generators[static_cast<std::size_t>(i)]);
      if (s >= 0.0) {
        v += z.generators[static_cast<std::size_t>(i)];
        if (hashable) pattern |= (std::uint64_t{1} << i);
      } else {
        v -= z.generators[static_cast<std::size_t>(i)];
      }
    }
    if (hashable) {
      // Canonical representative of the +- pair.
      std::uint64_t canon = (pattern & 1) ? pattern : ~pattern & ((n == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
      if (!seen.insert(canon).second) return;
    }
    verts.push_back(v);
  };
  for (int k = 0; k < d; ++k) add_direction(Vec::Unit(d, k));
  for (int s = 0; s < samples; ++s) {
    Vec u(d);
    double norm = 0.0;
    do {
      for (int k = 0; k < d; ++k) u(k) = rng.next_gaussian();
      norm = u.norm();
    } while (norm < 1e-12);
    add_direction(u / norm);
  }
  Mat pts(d, static_cast<Eigen::Index>(verts.size()));
  for (std::size_t i = 0; i < verts.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) = verts[i];
  return pts;
}

}  // namespace

JohnResult john_ellipsoid_of_polar(const Zonotope& z, double tol, std::uint64_t dir_seed) {
  if (z.generators.empty()) throw std::invalid_argument("john_ellipsoid: empty zonotope");
  bool exact = false;
  Mat pts = zonotope_vertex_samples(z, dir_seed, exact);
  MveeResult mvee = khachiyan_mvee(pts, tol);
  return JohnResult{polar_ellipsoid(mvee.e), !exact, mvee.iterations};
}

JohnResult john_ellipsoid_kp(const DiscreteSurface& s, double p, int dir_samples,
                             std::uint64_t seed, double tol) {
  if (!(p >= 1.0) || std::isinf(p))
    throw std::invalid_argument("john_ellipsoid_kp: requires 1 <= p < inf");
  if (!s.spans)
    throw std::invalid_argument("john_ellipsoid_kp: surface vectors must span the space");
  if (p == 1.0) return john_ellipsoid_of_polar(projection_body(s), tol, seed);

  const int d = s.dim;
  const int n = s.size();
  const double q = p / (p - 1.0);

  // The polar of K^p is A^T B_q^n with A's rows w_i^{1/p} v_i^T. Sample its
  // boundary by pushing unit q-norm coefficient vectors through A^T.
  Mat rows(n, d);
  for (int i = 0; i < n; ++i)
    rows.row(i) = std::pow(s.atoms[static_cast<std::size_t>(i)].weight, 1.0 / p) *
                  s.atoms[static_cast<std::size_t>(i)].v.transpose();
  SplitMix64 rng(seed);
  Mat pts(d, dir_samples);
  for (int c = 0; c < dir_samples; ++c) {
    Vec zc(n);
    double nrm = 0.0;
    do {
      for (int i = 0; i < n; ++i) zc(i) = rng.next_gaussian();
      nrm = zc.norm();
    } while (nrm < 1e-12);
    double qnorm = 0.0;
    for (int i = 0; i < n; ++i) qnorm += std::pow(std::abs(zc(i)), q);
    qnorm = std::pow(qnorm, 1.0 / q);
    pts.col(c) = rows.transpose() * (zc / qnorm);
  }
  MveeResult mvee = khachiyan_mvee(pts, tol);
  Ellipsoid e = polar_ellipsoid(mvee.e);

  // The sampled polar under-covers, so the polar of its MVEE may poke out of
  // K^p; shrink until sampled boundary directions sit inside.
  SplitMix64 dir_rng = rng.split(1);
  double worst = 1.0;
  for (int c = 0; c < dir_samples; ++c) {
    Vec t(d);
    double nrm = 0.0;
    do {
      for (int k = 0; k < d; ++k) t(k) = dir_rng.next_gaussian();
      nrm = t.norm();
    } while (nrm < 1e-12);
    t /= nrm;
    Vec boundary = t / std::sqrt(t.dot(e.shape * t));
    worst = std::max(worst, kp_norm(boundary, s, p));
  }
  e.shape *= worst * worst;
  return JohnResult{e, true, mvee.iterations};
}

}  // namespace qgeo
