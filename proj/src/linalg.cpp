#include "qgeo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qgeo {

namespace {

double gram_det_clamped(const Mat& g) {
  const int j = static_cast<int>(g.rows());
  switch (j) {
    case 1:
      return std::max(0.0, g(0, 0));
    case 2:
      return std::max(0.0, g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1));
    case 3: {
      double det = g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2)) -
                   g(0, 1) * (g(0, 1) * g(2, 2) - g(1, 2) * g(0, 2)) +
                   g(0, 2) * (g(0, 1) * g(1, 2) - g(1, 1) * g(0, 2));
      return std::max(0.0, det);
    }
    default:
      return 0.0;  // unreachable; j >= 4 goes through the long double path
  }
}

// Gram determinant in long double, straight from the vectors. The Gram det
// carries the squared condition number of the column set, so the double
// closed forms above are kept to j <= 3 where exact cancellation handles
// repeated columns; here the 64-bit mantissa keeps nearly dependent columns
// accurate and a relative pivot floor zeroes genuine rank deficiency.
double gram_det_longdouble(const Mat& vectors) {
  const int d = static_cast<int>(vectors.rows());
  const int j = static_cast<int>(vectors.cols());
  std::vector<std::vector<long double>> g(
      static_cast<std::size_t>(j), std::vector<long double>(static_cast<std::size_t>(j)));
  for (int a = 0; a < j; ++a)
    for (int b = a; b < j; ++b) {
      long double s = 0.0L;
      for (int r = 0; r < d; ++r)
        s += static_cast<long double>(vectors(r, a)) * static_cast<long double>(vectors(r, b));
      g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = s;
      g[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = s;
    }
  long double det = 1.0L;
  int sign = 1;
  long double piv_max = 0.0L;
  for (int c = 0; c < j; ++c) {
    int piv = c;
    for (int r = c + 1; r < j; ++r)
      if (fabsl(g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) >
          fabsl(g[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)]))
        piv = r;
    long double p = g[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)];
    if (fabsl(p) > piv_max) piv_max = fabsl(p);
    if (fabsl(p) <= piv_max * j * std::numeric_limits<long double>::epsilon()) return 0.0;
    if (piv != c) {
      std::swap(g[static_cast<std::size_t>(piv)], g[static_cast<std::size_t>(c)]);
      sign = -sign;
    }
    det *= p;
    for (int r = c + 1; r < j; ++r) {
      long double f = g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / p;
      for (int cc = c; cc < j; ++cc)
        g[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)] -=
            f * g[static_cast<std::size_t>(c)][static_cast<std::size_t>(cc)];
    }
  }
  det *= sign;
  return det <= 0.0L ? 0.0 : static_cast<double>(det);
}

}  // namespace

double wedge_norm_sq(const Mat& vectors) {
  const int d = static_cast<int>(vectors.rows());
  const int j = static_cast<int>(vectors.cols());
  if (j < 1 || j > d) throw std::invalid_argument("wedge_norm: need 1 <= j <= d");
  if (j >= 4) return gram_det_longdouble(vectors);
  Mat g = vectors.transpose() * vectors;
  return gram_det_clamped(g);
}

double wedge_norm(const Mat& vectors) { return std::sqrt(wedge_norm_sq(vectors)); }

double wedge_norm(const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw std::invalid_argument("wedge_norm: empty vector list");
  Mat m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  return wedge_norm(m);
}

bool is_orthonormal(const Mat& basis, double tol) {
  Mat g = basis.transpose() * basis;
  g -= Mat::Identity(basis.cols(), basis.cols());
  return g.cwiseAbs().maxCoeff() <= tol;
}

Frame make_frame(const Mat& candidate) {
  const int d = static_cast<int>(candidate.rows());
  const int k = static_cast<int>(candidate.cols());
  if (k < 1 || k > d) throw std::invalid_argument("make_frame: need 1 <= k <= d columns");
  if (is_orthonormal(candidate, 1e-12)) return Frame{candidate};

  // Modified Gram-Schmidt, twice for stability.
  Mat b = candidate;
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < k; ++i) {
      for (int l = 0; l < i; ++l) b.col(i) -= b.col(l).dot(b.col(i)) * b.col(l);
      double n = b.col(i).norm();
      if (n < 1e-12) throw std::invalid_argument("make_frame: columns are numerically dependent");
      b.col(i) /= n;
    }
  }
  return Frame{b};
}

Frame random_frame(int d, int k, SplitMix64& rng) {
  if (k < 1 || k > d) throw std::invalid_argument("random_frame: need 1 <= k <= d");
  Mat g(d, k);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < d; ++r) g(r, c) = rng.next_gaussian();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(d, k);
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int c = 0; c < k; ++c)
    if (r(c, c) < 0.0) q.col(c) = -q.col(c);
  return Frame{q};
}

Frame random_frame(int d, int k, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return random_frame(d, k, rng);
}

Mat orthogonal_complement(const Frame& frame) {
  const int d = frame.dim();
  const int k = frame.count();
  if (k == d) return Mat(d, 0);
  Eigen::HouseholderQR<Mat> qr(frame.basis);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  return q.rightCols(d - k);
}

CoverBoundResult check_wedge_cover_bound(const Mat& vectors, const UniformCover& cover,
                                         double rel_tol) {
  validate_cover(cover);
  const int j = static_cast<int>(vectors.cols());
  if (cover.j != j) throw std::invalid_argument("check_wedge_cover_bound: cover size mismatch");

  double lhs = wedge_norm(vectors);
  double log_rhs = 0.0;
  bool rhs_zero = false;
  for (std::size_t i = 0; i < cover.sets.size(); ++i) {
    if (cover.alphas[i] == 0.0) continue;
    Mat sub(vectors.rows(), static_cast<Eigen::Index>(cover.sets[i].size()));
    for (std::size_t c = 0; c < cover.sets[i].size(); ++c)
      sub.col(static_cast<Eigen::Index>(c)) = vectors.col(cover.sets[i][c] - 1);
    double w = wedge_norm(sub);
    if (w == 0.0) {
      rhs_zero = true;
      break;
    }
    log_rhs += cover.alphas[i] * std::log(w);
  }
  double rhs = rhs_zero ? 0.0 : std::exp(log_rhs);
  double tol = rel_tol * std::max({1.0, lhs, rhs});
  return CoverBoundResult{lhs, rhs, lhs <= rhs + tol};
}

Vec exterior_product(const Mat& cols) {
  const int d = static_cast<int>(cols.rows());
  if (cols.cols() != d - 1) throw std::invalid_argument("exterior_product: need d-1 columns");
  Vec y(d);
  if (d == 1) {
    y(0) = 1.0;  // empty product: det([x]) = x
    return y;
  }
  Mat minor(d - 1, d - 1);
  for (int k = 0; k < d; ++k) {
    int rr = 0;
    for (int r = 0; r < d; ++r) {
      if (r == k) continue;
      minor.row(rr++) = cols.row(r);
    }
    double det = (d == 2) ? minor(0, 0) : minor.partialPivLu().determinant();
    y(k) = ((k % 2) == 0 ? 1.0 : -1.0) * det;
  }
  return y;
}

BlockDeterminantResult block_determinant_check(const std::vector<Mat>& blocks, double rel_tol) {
  const int d = static_cast<int>(blocks.size());
  if (d < 2) throw std::invalid_argument("block_determinant_check: need d >= 2 blocks");
  for (const Mat& b : blocks)
    if (b.rows() != d || b.cols() != d - 1)
      throw std::invalid_argument("block_determinant_check: each block must be d x (d-1)");

  const int n = d * d;
  Mat a = Mat::Zero(n, n);
  for (int j = 0; j < d; ++j) {
    a.block(j * d, 0, d, d) = -Mat::Identity(d, d);
    a.block(j * d, d + j * (d - 1), d, d - 1) = blocks[static_cast<std::size_t>(j)];
  }
  Mat y(d, d);
  for (int j = 0; j < d; ++j) y.col(j) = exterior_product(blocks[static_cast<std::size_t>(j)]);

  double det_a = std::abs(a.partialPivLu().determinant());
  double det_y = std::abs(y.partialPivLu().determinant());
  bool pass = std::abs(det_a - det_y) <= rel_tol * std::max(1.0, det_y);
  return BlockDeterminantResult{det_a, det_y, pass};
}

}  // namespace qgeo
