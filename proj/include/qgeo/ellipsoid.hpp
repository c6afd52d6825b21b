#pragma once

#include <cstdint>
#include <vector>

#include "qgeo/linalg.hpp"
#include "qgeo/surface.hpp"

namespace qgeo {

// Origin-centered ellipsoid {x : x^T shape x <= 1}, shape symmetric positive
// definite.
struct Ellipsoid {
  Mat shape;
  double volume() const;
  Vec semiaxes() const;   // descending
  Mat axes() const;       // orthonormal columns, matching semiaxes()
};

Ellipsoid polar_ellipsoid(const Ellipsoid& e);  // shape -> shape^{-1}

struct MveeResult {
  Ellipsoid e;
  int iterations = 0;
  double excess = 0.0;  // max_i x_i^T shape x_i - 1 at termination (<= ~tol)
};

// Minimum-volume origin-centered ellipsoid enclosing {+-x_i}: Khachiyan's
// coordinate-ascent on max log det M(u), M(u) = sum u_i x_i x_i^T, with
// Wolfe-Atwood away steps for linear convergence. Terminates when every
// point satisfies x^T M^{-1} x <= d(1+tol) and every support point satisfies
// x^T M^{-1} x >= d(1-tol). Throws std::runtime_error if the iteration cap
// is hit first, std::invalid_argument if the points do not span.
MveeResult khachiyan_mvee(const Mat& points, double tol = 1e-7, int max_iter = 100000);

struct Zonotope;  // bodies.hpp

struct JohnResult {
  Ellipsoid e;
  // True when the ellipsoid came from sampled boundary data rather than the
  // complete vertex set, so inscribed-ness holds only up to sampling error.
  bool approximate = false;
  int mvee_iterations = 0;
};

// Largest-volume ellipsoid inscribed in the polar of the zonotope's support
// function unit ball, i.e. in K = {y : sum_i |y . g_i| <= 1}: computed as
// the polar of the MVEE of the zonotope's vertices. Exact vertex set for
// n <= 16 generators; otherwise vertices realized by 2^16 sampled support
// directions (approximate).
JohnResult john_ellipsoid_of_polar(const Zonotope& z, double tol = 1e-7,
                                   std::uint64_t dir_seed = 0x6a8fULL);

// John ellipsoid of K^p(S) = {y : (sum w_i |y.v_i|^p)^{1/p} <= 1} for
// p >= 1. p = 1 uses the zonotope vertex route above. General p samples the
// boundary of the polar body A^T B_q (q conjugate to p), runs the MVEE, and
// then shrinks the polar until sampled directions certify containment in
// K^p; always flagged approximate.
JohnResult john_ellipsoid_kp(const DiscreteSurface& s, double p, int dir_samples = 8192,
                             std::uint64_t seed = 0x6a8fULL, double tol = 1e-7);

}  // namespace qgeo
