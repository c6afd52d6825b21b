#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgeo/surface.hpp"

namespace qgeo {

// Caps on exact work: ordered atom tuples for the general enumerator and
// unordered atom subsets for the diagonal p=1 / p=inf shortcuts.
inline constexpr std::int64_t kDefaultTupleCap = 100'000'000;
inline constexpr std::int64_t kDefaultSubsetCap = 2'000'000'000;

struct QEstimate {
  double value = 0.0;
  std::string method = "exact";  // "exact" | "spectral" | "mc"
  double ci_halfwidth = 0.0;     // 3 standard errors; 0 for non-mc methods
  std::int64_t samples = 0;
  std::optional<std::uint64_t> seed;
};

// Raised when an exact route would enumerate more work than its cap allows.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Q_j^p(S_1, ..., S_j) by full enumeration of ordered atom tuples
// (one atom from each surface, repeats included):
//   0 < p < inf : (sum prod(w) * wedge^p)^(1/(j p))
//   p = 0       : mass-normalized geometric mean, exp(sum prod(w) log wedge
//                 / prod(masses))^(1/j); 0 if any tuple has zero wedge
//   p = inf     : (max wedge over tuples)^(1/j)
// All surfaces must share one dimension d and j <= d.
QEstimate q_exact(const std::vector<DiscreteSurface>& tuple, double p,
                  std::int64_t cap = kDefaultTupleCap);

// Diagonal case: the same surface in all j slots.
QEstimate q_exact_diagonal(const DiscreteSurface& s, int j, double p,
                           std::int64_t cap = kDefaultTupleCap);

// Diagonal p = 1 via unordered subsets: tuples with a repeated atom have zero
// wedge, so Q_j^1(S)^j = j! * sum_{|I|=j} prod_{i in I} w_i * |wedge(v_I)|.
// Exact, and far cheaper than ordered enumeration for large n.
QEstimate q1_diagonal_subsets(const DiscreteSurface& s, int j,
                              std::int64_t cap = kDefaultSubsetCap);

// Diagonal p = inf via unordered subsets.
QEstimate qsup_diagonal_subsets(const DiscreteSurface& s, int j,
                                std::int64_t cap = kDefaultSubsetCap);

// A weighted vector distribution that can be sampled: draws follow the
// probability measure sigma/total_mass, and `total_mass` rescales estimates
// back to sigma. Discrete surfaces and the built-in continuous measures
// below share this interface.
struct AtomSampler {
  int dim = 0;
  double total_mass = 0.0;
  std::function<Vec(SplitMix64&)> draw;
};

AtomSampler sampler_from_surface(const DiscreteSurface& s);
AtomSampler sphere_area_sampler(int d);                          // mass d*omega_d
AtomSampler sphere_direction_sampler(int d);                     // probability
AtomSampler ball_sampler(int d, double scale = 1.0);             // probability
AtomSampler gaussian_sampler(int d, double scale = 1.0);         // probability
AtomSampler exponential_product_sampler(int d);                  // probability

// Monte Carlo estimate of Q_j^p for 0 < p < inf: sample one vector from each
// sampler, average wedge^p, rescale by the product of total masses. The
// reported interval is 3 standard errors (delta method through the root).
QEstimate q_mc(const std::vector<AtomSampler>& samplers, double p, std::int64_t samples,
               std::uint64_t seed, int threads = 1);

// Diagonal p = 2 through the second-moment matrix: with T = covariance(S)
// and eigenvalues lambda,  Q_j^2(S)^(2j) = j! * e_j(lambda), the j-th
// elementary symmetric polynomial of the spectrum.
QEstimate q2_spectral(const DiscreteSurface& s, int j);

// Q_j^p(S^{d-1}): closed form for p in {1, 2, inf}, Monte Carlo with a
// confidence interval otherwise (samples and seed then required).
QEstimate sphere_reference_estimate(int d, int j, double p, std::int64_t samples = 0,
                                    std::optional<std::uint64_t> seed = std::nullopt,
                                    int threads = 1);

struct QProfile {
  int dim = 0;
  double p = 0.0;
  // Indexed by j; slot 0 holds the conventional values q=1, a=1, b=omega_d.
  std::vector<double> q;
  std::vector<double> a;        // a_j = (Q_j(S)/Q_j(S^{d-1}))^j; empty unless p in {1,2,inf}
  std::vector<double> b_proxy;  // p=1 only: V(Pi S [j], B^d [d-j])
  std::vector<std::string> method;  // route used per j (slot 0 empty)
};

// Q_j for j = 1..d by the cheapest exact route: spectral for p=2, subset
// enumeration for p=1 and p=inf, ordered enumeration otherwise.
QProfile q_profile(const DiscreteSurface& s, double p,
                   std::int64_t tuple_cap = kDefaultTupleCap,
                   std::int64_t subset_cap = kDefaultSubsetCap);

}  // namespace qgeo
