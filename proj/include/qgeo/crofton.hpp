#pragma once

#include <cstdint>
#include <vector>

#include "qgeo/linalg.hpp"

namespace qgeo {

// Round hypersurface with an exact intersection routine: a circle in R^2 or
// a sphere in R^3.
struct AnalyticSurface {
  enum class Kind { circle, sphere };
  Kind kind = Kind::circle;
  double radius = 1.0;
  Vec center;

  int dim() const { return kind == Kind::circle ? 2 : 3; }
};

AnalyticSurface make_circle(double radius, double cx = 0.0, double cy = 0.0);
AnalyticSurface make_sphere(double radius, double cx = 0.0, double cy = 0.0, double cz = 0.0);

// Integral of |n_1 ^ ... ^ n_d| over the product of the surfaces (unit
// normals, surface measure): prod_i r_i^{d-1} * Q_d^1(S^{d-1})^d.
// Two circles give 8 pi r_1 r_2; three unit spheres give 8 pi^4.
double analytic_q1_integral(const std::vector<AnalyticSurface>& shapes);

// Common transversal intersection of d round surfaces in R^d after shifting
// surface i by offsets[i] (the set shapes[i] - offsets[i]). Generic
// positions give finitely many points. Tangencies within the guard band are
// resolved to the transversal-side count (the double point is reported
// twice) and counted in `tangencies`. Coincident surfaces (a positive-
// measure intersection) throw std::domain_error.
struct IntersectionOutcome {
  std::vector<Vec> points;
  int tangencies = 0;
};

IntersectionOutcome intersect_shifted(const std::vector<AnalyticSurface>& shapes,
                                      const std::vector<Vec>& offsets, double guard = 1e-12);

struct CroftonResult {
  int dim = 0;
  double lhs = 0.0;       // analytic integral
  double rhs = 0.0;       // Monte Carlo, reduced form (d-1 free shifts)
  double rhs_ci = 0.0;    // 3 standard errors
  double rhs_ball = 0.0;  // Monte Carlo, unit-ball form divided by omega_d
  double rhs_ball_ci = 0.0;
  bool pass = false;         // |lhs - rhs| within ci + tolerance
  bool forms_agree = false;  // |rhs - rhs_ball| within combined ci + tolerance
  std::int64_t tangency_events = 0;
  int boundary_violations = 0;  // nonzero counts sampled on the support box boundary
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double box_volume = 0.0;  // reduced form
};

// Monte Carlo check of the translative intersection formula: the mean
// intersection count over uniform shifts, times the shift-box volume,
// equals the analytic integral. Shift boxes have half-side
// r_first + r_i + margin, which contains the support of the count. Also
// re-estimates the same integral in the unit-ball form (d free shifts,
// counting points inside B^d, divided by omega_d) and cross-checks the two.
CroftonResult crofton_check(const std::vector<AnalyticSurface>& shapes, std::int64_t samples,
                            std::uint64_t seed, int threads = 1, double margin = 0.5,
                            double rel_tol = 1e-9, double guard = 1e-12);

}  // namespace qgeo
