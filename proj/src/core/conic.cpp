#include "tfe10/core/conic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tfe10/errors.hpp"

namespace tfe10 {

namespace {

using Poly = std::vector<double>;  // lowest degree first

Poly mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly sub(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

double horner(const Poly& p, double x) {
  double v = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

double coefficient_scale(const Conic& c) {
  return std::max({std::abs(c.A), std::abs(c.B), std::abs(c.C), std::abs(c.D), std::abs(c.E),
                   std::abs(c.F0)});
}

Conic swap_xy(const Conic& c) { return {c.B, c.A, c.D, c.C, c.E, c.F0}; }

// Coefficients in the rotated frame x = cos t X - sin t Y, y = sin t X + cos t Y.
Conic rotate(const Conic& c, double t) {
  const double cs = std::cos(t), sn = std::sin(t);
  Conic r;
  r.A = c.A * cs * cs + c.B * sn * sn + c.E * cs * sn;
  r.B = c.A * sn * sn + c.B * cs * cs - c.E * cs * sn;
  r.E = -2.0 * c.A * cs * sn + 2.0 * c.B * cs * sn + c.E * (cs * cs - sn * sn);
  r.C = c.C * cs + c.D * sn;
  r.D = -c.C * sn + c.D * cs;
  r.F0 = c.F0;
  return r;
}

bool proportional(const Conic& a, const Conic& b) {
  const double va[6] = {a.A, a.B, a.C, a.D, a.E, a.F0};
  const double vb[6] = {b.A, b.B, b.C, b.D, b.E, b.F0};
  const double sa = coefficient_scale(a), sb = coefficient_scale(b);
  if (sa == 0.0 || sb == 0.0) return sa == sb;
  // Cross products of the normalized coefficient vectors must vanish.
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (std::abs(va[i] * vb[j] - va[j] * vb[i]) > 1e-12 * sa * sb) return false;
  return true;
}

bool newton_polish(const Conic& c1, const Conic& c2, Point2& p) {
  for (int it = 0; it < 60; ++it) {
    const double f1 = c1(p.x, p.y), f2 = c2(p.x, p.y);
    const double a = c1.dx(p.x, p.y), b = c1.dy(p.x, p.y);
    const double c = c2.dx(p.x, p.y), d = c2.dy(p.x, p.y);
    const double det = a * d - b * c;
    if (det == 0.0) break;
    const double dx = (d * f1 - b * f2) / det;
    const double dy = (-c * f1 + a * f2) / det;
    p.x -= dx;
    p.y -= dy;
    if (std::abs(dx) + std::abs(dy) < 1e-15 * (1.0 + std::abs(p.x) + std::abs(p.y))) break;
  }
  return std::isfinite(p.x) && std::isfinite(p.y);
}

std::vector<Point2> intersect_oriented(const Conic& c1, const Conic& c2) {
  const auto res = conic_resultant(c1, c2);
  double rscale = 0.0;
  for (double v : res) rscale = std::max(rscale, std::abs(v));
  const double s1 = coefficient_scale(c1), s2 = coefficient_scale(c2);
  if (rscale <= 1e-13 * std::pow(s1 * s2, 2)) {
    throw ResultantVanishesError("resultant of the two conics vanishes identically");
  }
  const auto xs = real_polynomial_roots({res.begin(), res.end()});

  std::vector<Point2> pts;
  for (double x : xs) {
    // Candidate y values from both quadratics in y.
    std::vector<double> ys;
    for (const Conic* c : {&c1, &c2}) {
      const double a = c->B, b = c->E * x + c->D, cc = c->A * x * x + c->C * x + c->F0;
      const auto r = real_polynomial_roots({cc, b, a});
      ys.insert(ys.end(), r.begin(), r.end());
      // Near-tangent case: vertex of the parabola in y is a candidate too.
      if (a != 0.0) ys.push_back(-b / (2.0 * a));
    }
    // Linear combination eliminating y^2.
    {
      const double lin = c2.B * (c1.E * x + c1.D) - c1.B * (c2.E * x + c2.D);
      const double con = c2.B * (c1.A * x * x + c1.C * x + c1.F0) -
                         c1.B * (c2.A * x * x + c2.C * x + c2.F0);
      if (lin != 0.0) ys.push_back(-con / lin);
    }
    for (double y : ys) {
      Point2 p{x, y};
      const double tol0 = 1e-4 * std::max(1.0, s1 + s2) * (1.0 + x * x + y * y);
      if (std::abs(c1(x, y)) > tol0 * s1 || std::abs(c2(x, y)) > tol0 * s2) continue;
      if (!newton_polish(c1, c2, p)) continue;
      const double sc = 1.0 + p.x * p.x + p.y * p.y;
      if (std::abs(c1(p.x, p.y)) <= 1e-9 * std::max(1.0, s1) * sc &&
          std::abs(c2(p.x, p.y)) <= 1e-9 * std::max(1.0, s2) * sc)
        pts.push_back(p);
    }
  }

  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Point2> unique;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : unique)
      if (std::hypot(p.x - q.x, p.y - q.y) < 1e-6 * (1.0 + std::hypot(p.x, p.y))) dup = true;
    if (!dup) unique.push_back(p);
  }
  return unique;
}

}  // namespace

bool Conic::quadratic_part_vanishes(double tol) const {
  return std::abs(A) <= tol && std::abs(B) <= tol && std::abs(E) <= tol;
}

std::array<double, 5> conic_resultant(const Conic& c1, const Conic& c2) {
  // Quadratics in y: a y^2 + b(x) y + c(x). The 4x4 Sylvester determinant
  // expands to (a1 c2 - a2 c1)^2 - (a1 b2 - a2 b1)(b1 c2 - b2 c1).
  const Poly a1{c1.B}, a2{c2.B};
  const Poly b1{c1.D, c1.E}, b2{c2.D, c2.E};
  const Poly cc1{c1.F0, c1.C, c1.A}, cc2{c2.F0, c2.C, c2.A};
  const Poly t1 = sub(mul(a1, cc2), mul(a2, cc1));
  const Poly t2 = sub(mul(a1, b2), mul(a2, b1));
  const Poly t3 = sub(mul(b1, cc2), mul(b2, cc1));
  const Poly r = sub(mul(t1, t1), mul(t2, t3));
  std::array<double, 5> out{};
  for (std::size_t i = 0; i < r.size() && i < 5; ++i) out[i] = r[i];
  return out;
}

double sylvester_determinant(const Conic& c1, const Conic& c2, double x) {
  const double a1 = c1.B, b1 = c1.E * x + c1.D, k1 = c1.A * x * x + c1.C * x + c1.F0;
  const double a2 = c2.B, b2 = c2.E * x + c2.D, k2 = c2.A * x * x + c2.C * x + c2.F0;
  Eigen::Matrix4d s;
  s << a1, b1, k1, 0.0,  //
      0.0, a1, b1, k1,   //
      a2, b2, k2, 0.0,   //
      0.0, a2, b2, k2;
  return Eigen::FullPivLU<Eigen::Matrix4d>(s).determinant();
}

std::vector<double> real_polynomial_roots(std::vector<double> p) {
  double pscale = 0.0;
  for (double v : p) pscale = std::max(pscale, std::abs(v));
  if (pscale == 0.0) return {};
  while (p.size() > 1 && std::abs(p.back()) <= 1e-14 * pscale) p.pop_back();
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-p[0] / p[1]};

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -p[i] / p[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const auto ev = es.eigenvalues();

  Poly dp(deg);
  for (std::size_t i = 1; i <= deg; ++i) dp[i - 1] = static_cast<double>(i) * p[i];

  std::vector<double> roots;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double re = ev(i).real(), im = ev(i).imag();
    // Double roots of a tangency split into a complex pair of size ~sqrt(eps).
    if (std::abs(im) > 1e-5 * (1.0 + std::abs(re))) continue;
    double x = re;
    for (int it = 0; it < 30; ++it) {
      const double d = horner(dp, x);
      if (d == 0.0) break;
      const double step = horner(p, x) / d;
      if (!std::isfinite(step)) break;
      x -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    if (std::abs(x - re) > 1e-3 * (1.0 + std::abs(re))) x = re;
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots)
    if (unique.empty() || std::abs(r - unique.back()) > 1e-9 * (1.0 + std::abs(r)))
      unique.push_back(r);
  return unique;
}

std::vector<Point2> conic_intersections(const Conic& c1, const Conic& c2) {
  if (proportional(c1, c2))
    throw InfiniteIntersectionError("identical conics intersect in infinitely many points");

  const double s1 = coefficient_scale(c1), s2 = coefficient_scale(c2);
  const double lead_tol = 1e-10;
  const bool y_ok = std::abs(c1.B) > lead_tol * s1 || std::abs(c2.B) > lead_tol * s2;
  const bool x_ok = std::abs(c1.A) > lead_tol * s1 || std::abs(c2.A) > lead_tol * s2;

  // Leading y^2 coefficients near zero lose resultant degree: swap variables,
  // and rotate the frame when neither square term is available.
  if (y_ok) return intersect_oriented(c1, c2);
  if (x_ok) {
    auto pts = intersect_oriented(swap_xy(c1), swap_xy(c2));
    for (auto& p : pts) std::swap(p.x, p.y);
    return pts;
  }
  const double t = 0.5;
  auto pts = intersect_oriented(rotate(c1, t), rotate(c2, t));
  const double cs = std::cos(t), sn = std::sin(t);
  for (auto& p : pts) {
    const double x = cs * p.x - sn * p.y;
    const double y = sn * p.x + cs * p.y;
    p = {x, y};
    newton_polish(c1, c2, p);
  }
  return pts;
}

}  // namespace tfe10
