#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/ellipsoid.hpp"
#include "qgeo/linalg.hpp"
#include "qgeo/qvalues.hpp"
#include "qgeo/surface.hpp"

namespace qgeo {

inline constexpr std::int64_t kDefaultZonotopeCap = 10'000'000;

// Origin-symmetric zonotope sum_i [-g_i, g_i].
struct Zonotope {
  int dim = 0;
  std::vector<Vec> generators;
};

// Projection body Pi(S): the zonotope with generators w_i v_i, whose support
// function is h(y) = sum_i w_i |y . v_i|.
Zonotope projection_body(const DiscreteSurface& s);

double zonotope_support(const Zonotope& z, const Vec& y);

// vol = 2^d sum_{|I|=d} |det(g_I)| over unordered generator subsets.
double zonotope_volume(const Zonotope& z, std::int64_t cap = kDefaultZonotopeCap);

// Mixed volume V(Z_1, ..., Z_j, B^d [d-j]) of j zonotopes and d-j copies of
// the unit ball, by multilinear expansion into segments:
// each generator tuple contributes 2^j ((d-j)!/d!) omega_{d-j} |g_1^...^g_j|.
double mixed_volume_zb(const std::vector<Zonotope>& zonotopes, int ball_copies,
                       std::int64_t cap = kDefaultTupleCap);

// Rectangular box with edge lengths `lengths` along the orthonormal frame.
struct BoxSpec {
  Frame frame;
  Vec lengths;
};

// V(R_1, ..., R_d) = (1/d!) sum_{tau in S_d} prod_m a^m_{tau(m)}
//                    * |f^1_{tau(1)} ^ ... ^ f^d_{tau(d)}|.   Requires d <= 8.
double mixed_volume_boxes(const std::vector<BoxSpec>& boxes);

// Mixed discriminant by polarization of the determinant:
// D(A_1,...,A_d) = (1/d!) sum_{S subset [d], S nonempty} (-1)^{d-|S|}
//                  det(sum_{i in S} A_i).   Requires d <= 12.
double mixed_discriminant(const std::vector<Mat>& mats);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// D(T_{S_1}, ..., T_{S_d}) = (1/d!) Q_d^2(S_1,...,S_d)^{2d}, the left side
// through covariances and polarization, the right through tuple enumeration.
IdentityCheck mixed_discriminant_identity_check(const std::vector<DiscreteSurface>& surfaces,
                                                double rel_tol = 1e-8,
                                                std::int64_t cap = kDefaultTupleCap);

// Mass seen in direction e (unit vector): sigma(e, S) = sum_i w_i |e . v_i|.
double directional_mass(const Vec& e, const DiscreteSurface& s);

// Mass seen by a k-plane E: sum over unordered k-subsets, times k!, of
// prod w * |wedge of the projections of the v's onto E|. For E = R^d this
// is Q_d^1(S)^d.
double plane_mass(const Plane& e, const DiscreteSurface& s,
                  std::int64_t cap = kDefaultSubsetCap);

// Gauge of the K^p body: (sum_i w_i |y . v_i|^p)^{1/p}, p >= 1.
double kp_norm(const Vec& y, const DiscreteSurface& s, double p);

struct VisibilityResult {
  double volume = 0.0;      // vol(K^p)
  double volume_ci = 0.0;   // 3 standard errors
  double vis = 0.0;         // volume^{-1/d}
  double vis_ci = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  bool approximate = false;  // true when the sampling container is only
                             // approximately guaranteed to contain K^p
  Ellipsoid john;
  double santalo_product = 0.0;      // vol(K^1) * vol(Pi S), p = 1 only
  double santalo_lower = 0.0;        // 4^d / d!^2
  double santalo_upper = 0.0;        // omega_d^2
  int mvee_iterations = 0;
};

// vis^p(S) = vol(K^p)^{-1/d} by rejection sampling inside the John
// ellipsoid scaled by sqrt(d (1+tol)) (a rigorous container when the
// zonotope vertex set was exact, approximate otherwise).
VisibilityResult visibility(const DiscreteSurface& s, double p, std::int64_t samples,
                            std::uint64_t seed, int threads = 1);

// Frame bound (prod_i sigma(u_i, S) / |u_1 ^ ... ^ u_d|)^{1/d} evaluated at
// the John frame of Pi(S), at random frames, and at user frames. Upper
// bounds the visibility up to dimensional constants; reported as diagnostics.
struct FrameBound {
  std::string label;
  double value = 0.0;
};

struct VisibilityBounds {
  FrameBound john;
  FrameBound random_best;
  std::vector<FrameBound> user;
  std::vector<FrameBound> plane_splits;  // John-axis splits [k | d-k]
  int random_trials = 0;
};

VisibilityBounds visibility_bounds(const DiscreteSurface& s,
                                   const std::vector<Frame>& user_frames, int random_trials,
                                   std::uint64_t seed);

double frame_bound_value(const std::vector<Vec>& unit_vectors, const DiscreteSurface& s);
double plane_bound_value(const std::vector<Plane>& planes, const DiscreteSurface& s,
                         std::int64_t cap = kDefaultSubsetCap);

// Permutation-sum upper bound for an off-diagonal tuple: given frames
// e^1..e^d (orthonormal each) and surfaces S_1..S_j,
//   sum_{tau in S_d} prod_{m<=j} sigma(e^m_{tau(m)}, S_m)
//                    * |e^1_{tau(1)} ^ ... ^ e^d_{tau(d)}|
// compared against Q_j^1(S_1..S_j)^j. Requires d <= 8.
double offdiagonal_perm_bound(const std::vector<DiscreteSurface>& surfaces,
                              const std::vector<Frame>& frames);

}  // namespace qgeo
