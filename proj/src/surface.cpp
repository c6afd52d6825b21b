#include "qgeo/surface.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qgeo/accumulate.hpp"

namespace qgeo {

double DiscreteSurface::total_mass() const {
  KahanSum acc;
  for (const Atom& a : atoms) acc.add(a.weight);
  return acc.value();
}

Mat DiscreteSurface::vectors_matrix() const {
  Mat m(dim, static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t i = 0; i < atoms.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = atoms[i].v;
  return m;
}

DiscreteSurface validate_surface(int dim, std::vector<Atom> atoms) {
  if (dim < 1) throw std::invalid_argument("surface: dim must be >= 1");
  if (atoms.empty()) throw std::invalid_argument("surface: needs at least one atom");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (!std::isfinite(a.weight) || a.weight <= 0.0)
      throw std::invalid_argument("surface: atom " + std::to_string(i) +
                                  " has nonpositive or non-finite weight");
    if (a.v.size() != dim)
      throw std::invalid_argument("surface: atom " + std::to_string(i) + " has vector length " +
                                  std::to_string(a.v.size()) + ", expected " + std::to_string(dim));
    if (!a.v.allFinite())
      throw std::invalid_argument("surface: atom " + std::to_string(i) + " has non-finite vector");
  }
  DiscreteSurface s;
  s.dim = dim;
  s.atoms = std::move(atoms);
  Eigen::ColPivHouseholderQR<Mat> qr(s.vectors_matrix());
  s.spans = qr.rank() == dim;
  return s;
}

DiscreteSurface make_sphere_surface(int d, int n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw std::invalid_argument("make_sphere_surface: need d >= 1, n >= 1");
  SplitMix64 rng(seed);
  double w = d * unit_ball_volume(d) / n;
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec v(d);
    double norm = 0.0;
    do {
      for (int k = 0; k < d; ++k) v(k) = rng.next_gaussian();
      norm = v.norm();
    } while (norm < 1e-12);
    atoms.push_back(Atom{w, v / norm});
  }
  return validate_surface(d, std::move(atoms));
}

DiscreteSurface transform_surface(const DiscreteSurface& s, const Mat& m) {
  if (m.rows() != s.dim || m.cols() != s.dim)
    throw std::invalid_argument("transform_surface: map must be dim x dim");
  std::vector<Atom> atoms = s.atoms;
  for (Atom& a : atoms) a.v = m * a.v;
  return validate_surface(s.dim, std::move(atoms));
}

Mat covariance(const DiscreteSurface& s) {
  Mat t = Mat::Zero(s.dim, s.dim);
  for (const Atom& a : s.atoms) t.noalias() += a.weight * (a.v * a.v.transpose());
  return 0.5 * (t + t.transpose());
}

double log_unit_ball_volume(int k) {
  if (k < 0) throw std::invalid_argument("unit_ball_volume: k must be >= 0");
  return 0.5 * k * std::log(std::numbers::pi) - std::lgamma(0.5 * k + 1.0);
}

double unit_ball_volume(int k) { return std::exp(log_unit_ball_volume(k)); }

double sphere_reference(int d, int j, double p) {
  if (d < 1 || j < 1 || j > d) throw std::invalid_argument("sphere_reference: need 1 <= j <= d");
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) {
    double log_inner = log_unit_ball_volume(d) + std::lgamma(d + 1.0) -
                       log_unit_ball_volume(d - j) - std::lgamma(d - j + 1.0);
    return std::exp(log_unit_ball_volume(d - 1) + log_inner / j);
  }
  if (p == 2.0) {
    double log_q2j = j * log_unit_ball_volume(d) + std::lgamma(d + 1.0) - std::lgamma(d - j + 1.0);
    return std::exp(log_q2j / (2.0 * j));
  }
  throw std::invalid_argument(
      "sphere_reference: closed form only for p in {1, 2, inf}; use the Monte Carlo estimator for "
      "other p");
}

SphereConstants sphere_constants(int d) {
  if (d < 1) throw std::invalid_argument("sphere_constants: d must be >= 1");
  SphereConstants table;
  table.dim = d;
  for (int k = 0; k <= d; ++k) table.omega.push_back(unit_ball_volume(k));
  for (int j = 1; j <= d; ++j)
    for (double p : {1.0, 2.0}) table.rows.push_back({j, p, sphere_reference(d, j, p)});
  return table;
}

}  // namespace qgeo
