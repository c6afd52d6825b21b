#pragma once

#include <cstdint>
#include <vector>

#include "qgeo/linalg.hpp"

namespace qgeo {

// Weighted atom of a discretized generalized hypersurface: a point mass
// `weight` carrying the (not necessarily unit) normal-like vector `v`.
struct Atom {
  double weight = 0.0;
  Vec v;
};

struct DiscreteSurface {
  int dim = 0;
  std::vector<Atom> atoms;
  bool spans = false;  // do the atom vectors span R^dim?

  int size() const { return static_cast<int>(atoms.size()); }
  double total_mass() const;
  Mat vectors_matrix() const;  // dim x n, column i = atoms[i].v
};

// Checks dimensions, positivity and finiteness of weights, finiteness of
// vectors; computes the spanning flag. Non-spanning surfaces are accepted
// and only flagged; operations that genuinely need full-dimensionality
// (visibility, John ellipsoids) reject them at their own boundary.
DiscreteSurface validate_surface(int dim, std::vector<Atom> atoms);

// n atoms with unit vectors drawn uniformly (Haar) from S^{d-1}, each with
// weight d*omega_d / n, so the total mass matches the surface area of the
// unit sphere. Deterministic given the seed.
DiscreteSurface make_sphere_surface(int d, int n, std::uint64_t seed);

// Applies the linear map `m` to every atom vector (weights untouched).
DiscreteSurface transform_surface(const DiscreteSurface& s, const Mat& m);

// Second-moment matrix sum_i w_i v_i v_i^T (symmetrized).
Mat covariance(const DiscreteSurface& s);

// Volume omega_k of the unit ball in R^k, via log-gamma so that large k
// neither overflows nor loses accuracy. omega_0 = 1.
double unit_ball_volume(int k);
double log_unit_ball_volume(int k);

// Closed-form reference values Q_j^p(S^{d-1}) for p in {1, 2, infinity}:
//   p=1:   omega_{d-1} * (omega_d d! / (omega_{d-j} (d-j)!))^{1/j}
//   p=2:   (omega_d^j d!/(d-j)!)^{1/(2j)}
//   p=inf: 1
// Throws for other p; Monte Carlo estimation for general p lives with the
// q estimators.
double sphere_reference(int d, int j, double p);

struct SphereConstantRow {
  int j = 0;
  double p = 0.0;
  double value = 0.0;
};

struct SphereConstants {
  int dim = 0;
  std::vector<double> omega;  // omega_0 .. omega_d
  std::vector<SphereConstantRow> rows;
};

// Table of Q_j^p(S^{d-1}) for j = 1..d and p in {1, 2}.
SphereConstants sphere_constants(int d);

}  // namespace qgeo
