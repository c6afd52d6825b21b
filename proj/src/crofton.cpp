#include "qgeo/crofton.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qgeo/accumulate.hpp"
#include "qgeo/rng.hpp"
#include "qgeo/surface.hpp"

namespace qgeo {

namespace {

// Relative position of two circles/spheres with radii r1, r2 at center
// distance dist, with a guard band g: -1 disjoint, 0 tangent, +1 transversal.
int contact_class(double dist, double r1, double r2, double g) {
  double sum = r1 + r2;
  double del = std::abs(r1 - r2);
  if (std::abs(dist - sum) <= g || std::abs(dist - del) <= g) return 0;
  if (dist > sum || dist < del) return -1;
  return 1;
}

IntersectionOutcome intersect_circles(const Vec& a, double r1, const Vec& b, double r2,
                                      double guard) {
  IntersectionOutcome out;
  Vec diff = b - a;
  double dist = diff.norm();
  double g = guard * std::max({1.0, r1, r2, dist});
  if (dist <= g) {
    if (std::abs(r1 - r2) <= g) throw std::domain_error("coincident circles");
    return out;  // concentric
  }
  int cls = contact_class(dist, r1, r2, g);
  if (cls < 0) return out;
  if (cls == 0) out.tangencies = 1;
  double h = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
  double t = std::sqrt(std::max(0.0, r1 * r1 - h * h));
  if (cls == 0) t = 0.0;
  Vec u = diff / dist;
  Vec uperp(2);
  uperp << -u(1), u(0);
  Vec m = a + h * u;
  out.points.push_back(m + t * uperp);
  out.points.push_back(m - t * uperp);
  return out;
}

Vec cross3(const Vec& x, const Vec& y) {
  Vec z(3);
  z << x(1) * y(2) - x(2) * y(1), x(2) * y(0) - x(0) * y(2), x(0) * y(1) - x(1) * y(0);
  return z;
}

IntersectionOutcome intersect_spheres3(const Vec& ca, double r1, const Vec& cb, double r2,
                                       const Vec& cc, double r3, double guard) {
  IntersectionOutcome out;

  // Circle of the first two spheres: center p, unit normal u, radius rho.
  Vec diff = cb - ca;
  double dist = diff.norm();
  double g1 = guard * std::max({1.0, r1, r2, dist});
  if (dist <= g1) {
    if (std::abs(r1 - r2) <= g1) throw std::domain_error("coincident spheres");
    return out;
  }
  int cls1 = contact_class(dist, r1, r2, g1);
  if (cls1 < 0) return out;
  if (cls1 == 0) out.tangencies += 1;
  double h = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
  double rho = cls1 == 0 ? 0.0 : std::sqrt(std::max(0.0, r1 * r1 - h * h));
  Vec u = diff / dist;
  Vec p = ca + h * u;

  // Third sphere cut by the plane of that circle: in-plane circle at cp.
  double delta = (cc - p).dot(u);
  double g2 = guard * std::max({1.0, r3, std::abs(delta)});
  if (std::abs(delta) > r3 + g2) return out;
  double rho3;
  if (std::abs(std::abs(delta) - r3) <= g2) {
    rho3 = 0.0;
    out.tangencies += 1;
  } else {
    rho3 = std::sqrt(std::max(0.0, r3 * r3 - delta * delta));
  }
  Vec cp = cc - delta * u;

  // Two coplanar circles (p, rho) and (cp, rho3).
  Vec e = cp - p;
  double dd = e.norm();
  double g3 = guard * std::max({1.0, rho, rho3, dd});
  if (dd <= g3 && std::abs(rho - rho3) <= g3) {
    if (rho <= g3) {
      out.points.push_back(p);  // both degenerate to the same point
      return out;
    }
    throw std::domain_error("coincident intersection circles");
  }
  if (rho <= g3) {  // point circle against a circle
    if (std::abs(dd - rho3) <= g3) out.points.push_back(p);
    return out;
  }
  if (rho3 <= g3) {
    if (std::abs(dd - rho) <= g3) out.points.push_back(cp);
    return out;
  }
  if (dd <= g3) return out;  // concentric, distinct radii
  int cls3 = contact_class(dd, rho, rho3, g3);
  if (cls3 < 0) return out;
  if (cls3 == 0) out.tangencies += 1;
  double h3 = (dd * dd + rho * rho - rho3 * rho3) / (2.0 * dd);
  double t = cls3 == 0 ? 0.0 : std::sqrt(std::max(0.0, rho * rho - h3 * h3));
  Vec w1 = e / dd;
  Vec w2 = cross3(u, w1);
  Vec m = p + h3 * w1;
  out.points.push_back(m + t * w2);
  out.points.push_back(m - t * w2);
  return out;
}

void check_family(const std::vector<AnalyticSurface>& shapes) {
  if (shapes.empty()) throw std::invalid_argument("no surfaces given");
  int d = shapes[0].dim();
  for (const auto& s : shapes) {
    if (s.dim() != d) throw std::invalid_argument("mixed surface kinds");
    if (!(s.radius > 0.0)) throw std::invalid_argument("radius must be positive");
    if (s.center.size() != d) throw std::invalid_argument("center has the wrong dimension");
  }
  if (static_cast<int>(shapes.size()) != d)
    throw std::invalid_argument("need exactly d surfaces in R^d");
}

}  // namespace

AnalyticSurface make_circle(double radius, double cx, double cy) {
  AnalyticSurface s;
  s.kind = AnalyticSurface::Kind::circle;
  s.radius = radius;
  s.center = Vec(2);
  s.center << cx, cy;
  return s;
}

AnalyticSurface make_sphere(double radius, double cx, double cy, double cz) {
  AnalyticSurface s;
  s.kind = AnalyticSurface::Kind::sphere;
  s.radius = radius;
  s.center = Vec(3);
  s.center << cx, cy, cz;
  return s;
}

double analytic_q1_integral(const std::vector<AnalyticSurface>& shapes) {
  check_family(shapes);
  int d = shapes[0].dim();
  double ref = sphere_reference(d, d, 1.0);
  double value = std::pow(ref, d);
  for (const auto& s : shapes) value *= std::pow(s.radius, d - 1);
  return value;
}

IntersectionOutcome intersect_shifted(const std::vector<AnalyticSurface>& shapes,
                                      const std::vector<Vec>& offsets, double guard) {
  check_family(shapes);
  if (offsets.size() != shapes.size())
    throw std::invalid_argument("need one offset per surface");
  int d = shapes[0].dim();
  std::vector<Vec> centers(shapes.size());
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (offsets[i].size() != d) throw std::invalid_argument("offset has the wrong dimension");
    centers[i] = shapes[i].center - offsets[i];
  }
  if (d == 2)
    return intersect_circles(centers[0], shapes[0].radius, centers[1], shapes[1].radius, guard);
  return intersect_spheres3(centers[0], shapes[0].radius, centers[1], shapes[1].radius,
                            centers[2], shapes[2].radius, guard);
}

CroftonResult crofton_check(const std::vector<AnalyticSurface>& shapes, std::int64_t samples,
                            std::uint64_t seed, int threads, double margin, double rel_tol,
                            double guard) {
  check_family(shapes);
  if (samples <= 0) throw std::invalid_argument("samples must be positive");
  int d = shapes[0].dim();
  int m = static_cast<int>(shapes.size());

  CroftonResult res;
  res.dim = d;
  res.samples = samples;
  res.seed = seed;
  res.lhs = analytic_q1_integral(shapes);

  // Reduced form: the first surface stays fixed, shifts i = 1..m-1 range
  // over boxes centered at c_i - c_0 with half-side r_0 + r_i + margin.
  std::vector<Vec> red_center(static_cast<std::size_t>(m));
  std::vector<double> red_half(static_cast<std::size_t>(m), 0.0);
  double red_volume = 1.0;
  for (int i = 1; i < m; ++i) {
    red_center[static_cast<std::size_t>(i)] = shapes[static_cast<std::size_t>(i)].center -
                                              shapes[0].center;
    double h = shapes[0].radius + shapes[static_cast<std::size_t>(i)].radius + margin;
    red_half[static_cast<std::size_t>(i)] = h;
    red_volume *= std::pow(2.0 * h, d);
  }
  res.box_volume = red_volume;

  // Unit-ball form: every surface shifted, boxes centered at c_i with
  // half-side r_i + 1 + margin, points counted inside B^d.
  std::vector<double> ball_half(static_cast<std::size_t>(m), 0.0);
  double ball_volume = 1.0;
  for (int i = 0; i < m; ++i) {
    double h = shapes[static_cast<std::size_t>(i)].radius + 1.0 + margin;
    ball_half[static_cast<std::size_t>(i)] = h;
    ball_volume *= std::pow(2.0 * h, d);
  }
  double omega_d = unit_ball_volume(d);

  struct Acc {
    KahanSum red1, red2, ball1, ball2;
    std::int64_t tangencies = 0;
  };
  SplitMix64 root(seed);
  std::vector<Vec> offsets(static_cast<std::size_t>(m));
  for (auto& v : offsets) v = Vec::Zero(d);

  Acc total = reduce_blocks(
      samples, 65536, threads, Acc{},
      [&](std::int64_t b, std::int64_t lo, std::int64_t hi) {
        Acc acc;
        SplitMix64 rng = root.split(static_cast<std::uint64_t>(b));
        std::vector<Vec> off(static_cast<std::size_t>(m), Vec::Zero(d));
        for (std::int64_t i = lo; i < hi; ++i) {
          off[0].setZero();
          for (int k = 1; k < m; ++k)
            for (int c = 0; c < d; ++c)
              off[static_cast<std::size_t>(k)](c) =
                  red_center[static_cast<std::size_t>(k)](c) +
                  red_half[static_cast<std::size_t>(k)] * (2.0 * rng.next_double() - 1.0);
          IntersectionOutcome red = intersect_shifted(shapes, off, guard);
          acc.tangencies += red.tangencies;
          double n1 = static_cast<double>(red.points.size());
          acc.red1.add(n1);
          acc.red2.add(n1 * n1);

          for (int k = 0; k < m; ++k)
            for (int c = 0; c < d; ++c)
              off[static_cast<std::size_t>(k)](c) =
                  shapes[static_cast<std::size_t>(k)].center(c) +
                  ball_half[static_cast<std::size_t>(k)] * (2.0 * rng.next_double() - 1.0);
          IntersectionOutcome ball = intersect_shifted(shapes, off, guard);
          acc.tangencies += ball.tangencies;
          double n2 = 0.0;
          for (const Vec& x : ball.points)
            if (x.norm() <= 1.0) n2 += 1.0;
          acc.ball1.add(n2);
          acc.ball2.add(n2 * n2);
        }
        return acc;
      },
      [](Acc a, const Acc& b) {
        a.red1.merge(b.red1);
        a.red2.merge(b.red2);
        a.ball1.merge(b.ball1);
        a.ball2.merge(b.ball2);
        a.tangencies += b.tangencies;
        return a;
      });

  double n = static_cast<double>(samples);
  auto finish = [&](const KahanSum& s1, const KahanSum& s2, double scale, double& value,
                    double& ci) {
    double mean = s1.value() / n;
    double var = std::max(0.0, s2.value() / n - mean * mean);
    if (samples > 1) var *= n / (n - 1.0);
    value = scale * mean;
    ci = 3.0 * scale * std::sqrt(var / n);
  };
  finish(total.red1, total.red2, red_volume, res.rhs, res.rhs_ci);
  finish(total.ball1, total.ball2, ball_volume / omega_d, res.rhs_ball, res.rhs_ball_ci);
  res.tangency_events = total.tangencies;

  double tol_abs = rel_tol * std::max({1.0, std::abs(res.lhs), std::abs(res.rhs)});
  res.pass = std::abs(res.lhs - res.rhs) <= res.rhs_ci + tol_abs;
  res.forms_agree =
      std::abs(res.rhs - res.rhs_ball) <= std::hypot(res.rhs_ci, res.rhs_ball_ci) + tol_abs;

  // Counts sampled on the boundary of the reduced-form support boxes must
  // vanish: the box truncation loses none of the integral.
  SplitMix64 brng = root.split(0x8000000000000000ULL);
  std::vector<Vec> off(static_cast<std::size_t>(m), Vec::Zero(d));
  for (int k = 0; k < 10000; ++k) {
    off[0].setZero();
    for (int i = 1; i < m; ++i)
      for (int c = 0; c < d; ++c)
        off[static_cast<std::size_t>(i)](c) =
            red_center[static_cast<std::size_t>(i)](c) +
            red_half[static_cast<std::size_t>(i)] * (2.0 * brng.next_double() - 1.0);
    int pick = 1 + k % (m - 1);
    int face = static_cast<int>(brng.next_u64() % static_cast<std::uint64_t>(2 * d));
    double sign = face % 2 == 0 ? 1.0 : -1.0;
    off[static_cast<std::size_t>(pick)](face / 2) =
        red_center[static_cast<std::size_t>(pick)](face / 2) +
        sign * red_half[static_cast<std::size_t>(pick)];
    IntersectionOutcome edge = intersect_shifted(shapes, off, guard);
    if (!edge.points.empty()) res.boundary_violations += 1;
  }
  return res;
}

}  // namespace qgeo
