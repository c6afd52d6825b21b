#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qgeo/covers.hpp"
#include "qgeo/rng.hpp"

namespace qgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// |v_1 ^ ... ^ v_j| for the columns of `vectors` (d x j, 1 <= j <= d):
// the j-volume of the parallelepiped they span, computed as the square root
// of the Gram determinant. Never negative; exactly 0 for dependent columns.
double wedge_norm(const Mat& vectors);
double wedge_norm(const std::vector<Vec>& vectors);

// Gram determinant det(V^T V), clamped at 0 before any square root is taken.
double wedge_norm_sq(const Mat& vectors);

// Orthonormal k-frame in R^d, columns of `basis`.
struct Frame {
  Mat basis;  // d x k, orthonormal columns
  int dim() const { return static_cast<int>(basis.rows()); }
  int count() const { return static_cast<int>(basis.cols()); }
};

bool is_orthonormal(const Mat& basis, double tol = 1e-12);

// Builds a frame from candidate columns; re-orthonormalizes (modified
// Gram-Schmidt) when the input is only approximately orthonormal. Throws
// std::invalid_argument if the columns are numerically dependent.
Frame make_frame(const Mat& candidate);

// Haar-distributed random orthonormal k-frame via QR of a Gaussian matrix
// with the sign convention diag(R) > 0. Deterministic given the seed.
Frame random_frame(int d, int k, SplitMix64& rng);
Frame random_frame(int d, int k, std::uint64_t seed);

// Linear span through the origin, given by an orthonormal basis.
struct Plane {
  Frame basis;
  int dim() const { return basis.dim(); }
  int k() const { return basis.count(); }
};

// Orthonormal basis of the orthogonal complement (d x (d-k)).
Mat orthogonal_complement(const Frame& frame);

// Wedge bound induced by a uniform cover: for vectors v_1..v_j and a cover
// {(A_i, alpha_i)} of {1..j},  |v_1^...^v_j| <= prod_i |wedge(v_l : l in A_i)|^alpha_i.
struct CoverBoundResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};
CoverBoundResult check_wedge_cover_bound(const Mat& vectors, const UniformCover& cover,
                                         double rel_tol = 1e-9);

// Exterior product of d-1 vectors in R^d (columns of `cols`): the vector y
// with y . x = det([x | cols]) for all x. Generalizes the cross product.
Vec exterior_product(const Mat& cols);

// Determinant identity for the d^2 x d^2 block matrix A whose j-th block row
// is [-I | 0 | ... | A_j | ... | 0] with A_j of size d x (d-1) in block
// column j: |det A| equals |det Y| where column j of Y is the exterior
// product of the columns of A_j. Returns both absolute determinants.
struct BlockDeterminantResult {
  double det_a = 0.0;
  double det_y = 0.0;
  bool pass = false;
};
BlockDeterminantResult block_determinant_check(const std::vector<Mat>& blocks,
                                               double rel_tol = 1e-8);

}  // namespace qgeo
