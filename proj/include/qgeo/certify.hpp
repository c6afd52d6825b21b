#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/bodies.hpp"
#include "qgeo/covers.hpp"
#include "qgeo/qvalues.hpp"

namespace qgeo {

// One checked inequality lhs <= rhs. Exact sides pass at a relative
// tolerance; Monte Carlo sides carry 3-standard-error half-widths that are
// combined in quadrature and added to the allowance.
struct CertificateReport {
  std::string claim;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;     // rhs - lhs
  bool pass = false;
  std::string lhs_method = "exact";
  std::string rhs_method = "exact";
  double lhs_ci = 0.0;
  double rhs_ci = 0.0;
  double tolerance = 0.0;  // absolute allowance applied
  std::optional<std::uint64_t> seed;
};

CertificateReport make_certificate(std::string claim, const QEstimate& lhs, const QEstimate& rhs,
                                   double rel_tol = 1e-9);

// Subadditivity along a uniform cover:
//   Q_j^p(S_1..S_j) <= prod_i Q_{k_i}^p(tuple restricted to A_i)^{alpha_i k_i / j}.
CertificateReport certify_finner(const std::vector<DiscreteSurface>& tuple,
                                 const UniformCover& cover, double p, double rel_tol = 1e-9,
                                 std::int64_t cap = kDefaultTupleCap);

// Diagonal chain Q_{j+1}^p(S) <= (Q_{j+1}^p(S^{d-1})/Q_j^p(S^{d-1})) Q_j^p(S)
// for j = 1..d-1. Requires p in {1, 2, inf}.
std::vector<CertificateReport> certify_sphere_ratio(const DiscreteSurface& s, double p,
                                                    double rel_tol = 1e-9,
                                                    std::int64_t subset_cap = kDefaultSubsetCap);

// Endpoint comparison vol(Pi S)^{1/d} / Q_1^1(S) <= same quantity for the
// unit sphere (composition of the full sphere-ratio chain at p = 1).
CertificateReport certify_isoperimetric(const DiscreteSurface& s, double rel_tol = 1e-9,
                                        std::int64_t subset_cap = kDefaultSubsetCap);

// Q_{j+1}^p(S) <= Q_j^p(S) for j = 1..d-1, any p in [0, inf].
std::vector<CertificateReport> certify_diagonal_monotone(const DiscreteSurface& s, double p,
                                                         double rel_tol = 1e-9,
                                                         std::int64_t tuple_cap = kDefaultTupleCap,
                                                         std::int64_t subset_cap = kDefaultSubsetCap);

struct LogConcavityReport {
  QProfile profile;
  std::vector<CertificateReport> steps;  // a_{j-1} a_{j+1} <= a_j^2
  std::vector<CertificateReport> chain;  // a_{j+1}^{1/(j+1)} <= a_j^{1/j}
  int truncated_at = -1;                 // first j with a_j = 0, or -1
  bool all_pass = true;
};

// Log-concavity of a_j = (Q_j^p(S)/Q_j^p(S^{d-1}))^j with a_0 = 1, chain
// truncated at the first zero. Requires p in {1, 2, inf}.
LogConcavityReport certify_log_concavity(const DiscreteSurface& s, double p,
                                         double rel_tol = 1e-9,
                                         std::int64_t subset_cap = kDefaultSubsetCap);

enum class Distribution { uniform_sphere, uniform_ball, gaussian, exponential_product };

// Mean of wedge^p over j-tuples of iid draws; the building block behind the
// random-volume expectations. Returns {mean, 3 standard errors}.
struct MeanEstimate {
  double value = 0.0;
  double ci_halfwidth = 0.0;
  std::int64_t samples = 0;
};
MeanEstimate mean_wedge_power(const std::vector<AtomSampler>& samplers, double p,
                              std::int64_t samples, std::uint64_t seed, int threads = 1);

// Closed form E^sigma(W_j^p) for the uniform probability measure on
// S^{d-1}: p=1 and p=2 only.
double sphere_moment(int d, int j, double p);

struct RandvolResult {
  Distribution dist;
  int dim = 0;
  int j = 0;
  double p = 0.0;
  bool normalized = false;
  double scale = 1.0;               // applied so that E|xi|^p = 1
  MeanEstimate expectation;         // E^mu(V_j^p)
  double sphere_value = 0.0;        // E^sigma(W_j^p) (exact or mc)
  double sphere_ci = 0.0;
  std::optional<CertificateReport> corollary;  // E^mu <= E^sigma when normalized
};

// E^mu(V_j^p) for a built-in distribution, optionally rescaled so that
// E|xi|^p = 1 (closed-form scale; not available for exponential_product),
// with the sphere comparison certificate when normalized.
RandvolResult randvol_expectation(Distribution dist, int d, int j, double p, bool normalize,
                                  std::int64_t samples, std::uint64_t seed, int threads = 1);

struct VitaleRow {
  int d = 0;
  double lhs = 0.0;       // E^sigma(W_d^1)^{1/d}
  double rhs = 0.0;       // (d!/d^d)^{1/(2d)}
  bool pass = false;      // lhs <= rhs
  double gap_half = 0.0;  // |rhs - e^{-1/2}|
  double gap_full = 0.0;  // |(d!/d^d)^{1/d} - e^{-1}|
};

std::vector<VitaleRow> vitale_table(int d_max);

struct ReverseHolderReport {
  int dim = 0;
  int j = 0;
  double p = 0.0;
  CertificateReport b_certificate;  // B(j,d,p) = E(W^1)^{1/j} / E(W^p)^{1/(pj)} <= 1
  double r_mu = 0.0;                // E^mu(V_j^p)^{1/(pj)} / E^mu(V_j^1)^{1/j}
  double r_mu_ci = 0.0;
  double reference_bound = 0.0;     // p^2 sqrt((d+1)/(d+p)), reported only
};

ReverseHolderReport reverse_holder_report(int d, int j, double p, Distribution mu,
                                          std::int64_t samples, std::uint64_t seed,
                                          int threads = 1);

}  // namespace qgeo
