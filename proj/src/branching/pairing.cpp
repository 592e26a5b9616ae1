#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tfe10/branching.hpp"
#include "tfe10/core/grid.hpp"
#include "tfe10/errors.hpp"

namespace tfe10::branching {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double sphere_area(int N) { return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N); }

}  // namespace

RadialTable::RadialTable(const spectral::Kernel& kernel, int nodes_per_panel)
    : dimension_(kernel.dimension()), nodes_(nodes_per_panel) {
  const Grid& grid = kernel.grid();
  if (grid.spacing() != Grid::Spacing::panel_composite)
    throw InvalidArgument("radial table needs a panel-composite Gauss-Legendre kernel grid");
  const auto n = static_cast<std::size_t>(nodes_);
  if (n < 2 || grid.size() % n != 0)
    throw InvalidArgument("kernel grid size is not a multiple of the panel node count");
  if (grid.front() < 0.0) throw InvalidArgument("radial table needs a grid on r >= 0");

  const auto& gl = gauss_legendre(nodes_);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return gl.nodes[a] < gl.nodes[b]; });
  for (std::size_t k = 0; k < n; ++k) {
    const double t = gl.nodes[order[k]];
    reference_.push_back(t);
    // Barycentric weights of Gauss-Legendre points: (-1)^k sqrt((1 - t^2) w_k).
    const double w = std::sqrt((1.0 - t * t) * gl.weights[order[k]]);
    barycentric_.push_back(k % 2 == 0 ? w : -w);
  }

  const auto pts = grid.points();
  const std::size_t panels = grid.size() / n;
  const double t0 = reference_.front(), t1 = reference_.back();
  for (std::size_t p = 0; p < panels; ++p) {
    const double x0 = pts[p * n], x1 = pts[p * n + n - 1];
    const double h = 2.0 * (x1 - x0) / (t1 - t0);
    const double a = x0 - 0.5 * h * (t0 + 1.0);
    if (p == 0) {
      breaks_.push_back(a);
    } else if (std::abs(a - breaks_.back()) > 1e-9 * std::max(1.0, std::abs(a))) {
      throw InvalidArgument("kernel grid panels are not contiguous");
    }
    breaks_.push_back(a + h);
  }
  if (std::abs(breaks_.front()) < 1e-12) breaks_.front() = 0.0;

  auto copy = [](std::span<const double> s) { return std::vector<double>(s.begin(), s.end()); };
  if (dimension_ == 1) {
    columns_[cF] = copy(kernel.derivative(0));
    columns_[cdF] = copy(kernel.derivative(1));
    columns_[cd2F] = copy(kernel.derivative(2));
    columns_[cG] = copy(kernel.derivative(8));
    columns_[cdG] = copy(kernel.derivative(9));
    columns_[cd2G] = copy(kernel.derivative(10));
  } else {
    columns_[cF] = copy(kernel.derivative(0));
    columns_[cdF] = copy(kernel.derivative(1));
    columns_[cd2F] = copy(kernel.derivative(2));
    columns_[cG] = copy(kernel.laplacian4(0));
    columns_[cdG] = copy(kernel.laplacian4(1));
    columns_[cd2G] = copy(kernel.laplacian4(2));
  }

  // Third derivatives: spectral differentiation within each panel, then
  // interpolated like the other columns (stable near the nodes).
  for (auto [src, dst] : {std::pair{cd2F, cd3F}, std::pair{cd2G, cd3G}}) {
    columns_[dst].assign(grid.size(), 0.0);
    for (std::size_t p = 0; p < panels; ++p) {
      const double scale = 2.0 / (breaks_[p + 1] - breaks_[p]);
      const double* f = columns_[src].data() + p * n;
      for (std::size_t k = 0; k < n; ++k) {
        double d = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != k) d += barycentric_[j] / barycentric_[k] * (f[j] - f[k]) / (reference_[k] - reference_[j]);
        columns_[dst][p * n + k] = scale * d;
      }
    }
  }

  const auto w = grid.weights();
  std::vector<double> terms(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    terms[i] = w[i] * columns_[cF][i] * std::pow(pts[i], dimension_ - 1);
  mass_ = sphere_area(dimension_) * pairwise_sum(terms);
}

std::size_t RadialTable::panel_of(double r) const {
  const double tol = 1e-12 * std::max(1.0, r_max());
  if (!(r >= r_min() - tol && r <= r_max() + tol))
    throw InvalidArgument("radius outside the radial table range");
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
  std::size_t p = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(p, breaks_.size() - 2);
}

double RadialTable::interpolate(Column c, std::size_t panel, double r) const {
  const double a = breaks_[panel], h = breaks_[panel + 1] - breaks_[panel];
  const double t = 2.0 * (r - a) / h - 1.0;
  const auto n = static_cast<std::size_t>(nodes_);
  const double* f = columns_[c].data() + panel * n;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dt = t - reference_[k];
    if (dt == 0.0) return f[k];
    const double q = barycentric_[k] / dt;
    num += q * f[k];
    den += q;
  }
  return num / den;
}

RadialTable::Values RadialTable::operator()(double r) const {
  const std::size_t p = panel_of(r);
  Values v;
  v.F = interpolate(cF, p, r);
  v.dF = interpolate(cdF, p, r);
  v.d2F = interpolate(cd2F, p, r);
  v.d3F = interpolate(cd3F, p, r);
  v.G = interpolate(cG, p, r);
  v.dG = interpolate(cdG, p, r);
  v.d2G = interpolate(cd2G, p, r);
  v.d3G = interpolate(cd3G, p, r);
  return v;
}

double RadialTable::F(double r) const { return interpolate(cF, panel_of(r), r); }
double RadialTable::dF(double r) const { return interpolate(cdF, panel_of(r), r); }

spectral::Kernel branching_kernel(int N, double r_max, double panel_width) {
  if (!(r_max > 0.0) || !(panel_width > 0.0)) throw InvalidArgument("branching kernel needs r_max, width > 0");
  const auto panels = static_cast<std::size_t>(std::ceil(r_max / panel_width));
  const Grid grid = Grid::from_rule(QuadratureRule::uniform(0.0, r_max, panels));
  return spectral::kernel_radial(N, grid);
}

std::vector<double> bracket_zeros(const std::function<double(double)>& f, double a, double b,
                                  double step) {
  if (!(b > a) || !(step > 0.0)) throw InvalidArgument("bracket_zeros needs a < b and step > 0");
  std::vector<double> zeros;
  const auto count = static_cast<std::size_t>(std::ceil((b - a) / step));
  double x0 = a, f0 = f(a);
  if (f0 == 0.0) zeros.push_back(a);
  for (std::size_t i = 1; i <= count; ++i) {
    const double x1 = i == count ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(count);
    const double f1 = f(x1);
    if (f1 == 0.0) {
      zeros.push_back(x1);
    } else if (f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0)) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 80 && hi - lo > 4e-16 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return zeros;
}

std::vector<MultiIndex> level_indices(int k) {
  if (k == 1) return {MultiIndex({1, 0}), MultiIndex({0, 1})};
  if (k == 2) return {MultiIndex({2, 0}), MultiIndex({1, 1}), MultiIndex({0, 2})};
  throw UnsupportedParameter("pairings are implemented for |beta| in {1, 2}");
}

namespace {

// One basis function of a |beta| = k eigenspace evaluated at (r, theta).
struct BasisValue {
  double psi = 0.0;
  double y_grad_psi = 0.0;
  double star = 0.0;
  std::array<double, 2> grad_star{};
  std::array<double, 2> grad_lap4{};  ///< grad Delta^4 psi
};

// Cartesian index pair of a second-order multi-index and its 1/sqrt(beta!).
struct Pair {
  int i, j;
  double s;
};

Pair pair_of(const MultiIndex& b) {
  const auto& c = b.components();
  if (c[0] == 2) return {0, 0, 1.0 / std::numbers::sqrt2};
  if (c[1] == 2) return {1, 1, 1.0 / std::numbers::sqrt2};
  return {0, 1, 1.0};
}

BasisValue basis_value(int k, int index, const RadialTable::Values& v, double r, double ux, double uy) {
  const double u[2] = {ux, uy};
  BasisValue b;
  if (k == 1) {
    const int i = index;
    b.psi = -v.dF * u[i];
    b.y_grad_psi = -r * v.d2F * u[i];
    b.star = r * u[i];
    b.grad_star = {i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0};
    for (int m = 0; m < 2; ++m) {
      const double dm = m == i ? 1.0 : 0.0;
      b.grad_lap4[m] = -(v.d2G * u[m] * u[i] + v.dG / r * (dm - u[m] * u[i]));
    }
    return b;
  }
  const Pair p = pair_of(level_indices(2)[index]);
  const int i = p.i, j = p.j;
  const double dij = i == j ? 1.0 : 0.0;
  const double uu = u[i] * u[j];
  b.psi = p.s * (v.d2F * uu + v.dF / r * (dij - uu));
  b.y_grad_psi = p.s * r * (v.d3F * uu + (v.d2F / r - v.dF / (r * r)) * (dij - uu));
  b.star = p.s * r * r * uu;
  for (int m = 0; m < 2; ++m) {
    const double dim = m == i ? 1.0 : 0.0, djm = m == j ? 1.0 : 0.0;
    b.grad_star[m] = p.s * r * (dim * u[j] + djm * u[i]);
    b.grad_lap4[m] = p.s * (v.d3G * uu * u[m] +
                            (v.d2G / r - v.dG / (r * r)) * (dij * u[m] + dim * u[j] + djm * u[i] - 3.0 * uu * u[m]));
  }
  return b;
}

void check_table_2d(const RadialTable& t) {
  if (t.dimension() != 2) throw InvalidArgument("eigenspace pairings need the N = 2 kernel");
}

using Matrix = std::vector<std::vector<double>>;

// P[i][j] = <psi_i^*, y.grad psi_j> and Q[i][j] = <psi_i, y.grad psi_j>.
std::array<Matrix, 2> linear_matrix(const RadialTable& table, int k, std::size_t radial_panels,
                                    int angular_nodes) {
  const int m = k + 1;
  const auto rule = QuadratureRule::uniform(table.r_min(), table.r_max(), radial_panels);
  const auto rn = rule.nodes();
  const auto rw = rule.weights();
  std::vector<std::vector<std::vector<double>>> tp(m, std::vector<std::vector<double>>(m)), tq = tp;
  const double dtheta = two_pi / angular_nodes;
  std::vector<BasisValue> b(m);
  for (std::size_t a = 0; a < rn.size(); ++a) {
    const double r = rn[a];
    const auto v = table(r);
    for (int q = 0; q < angular_nodes; ++q) {
      const double th = q * dtheta;
      const double ux = std::cos(th), uy = std::sin(th);
      for (int i = 0; i < m; ++i) b[i] = basis_value(k, i, v, r, ux, uy);
      const double w = rw[a] * dtheta * r;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          tp[i][j].push_back(w * b[i].star * b[j].y_grad_psi);
          tq[i][j].push_back(w * b[i].psi * b[j].y_grad_psi);
        }
    }
  }
  std::array<Matrix, 2> out{Matrix(m, std::vector<double>(m)), Matrix(m, std::vector<double>(m))};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out[0][i][j] = pairwise_sum(tp[i][j]);
      out[1][i][j] = pairwise_sum(tq[i][j]);
    }
  return out;
}

}  // namespace

LinearPairings linear_pairings(const RadialTable& table, int k) {
  check_table_2d(table);
  level_indices(k);
  const auto panels = static_cast<std::size_t>(std::ceil((table.r_max() - table.r_min()) / 1.0));
  LinearPairings out;
  out.k = k;
  auto coarse = linear_matrix(table, k, panels, 16);
  out.P = std::move(coarse[0]);
  out.Q = std::move(coarse[1]);
  const auto fine = linear_matrix(table, k, 2 * panels, 32)[0];
  const double target = -(2.0 + k);
  for (std::size_t i = 0; i < out.P.size(); ++i)
    for (std::size_t j = 0; j < out.P.size(); ++j) {
      out.refinement_delta = std::max(out.refinement_delta, std::abs(out.P[i][j] - fine[i][j]));
      out.identity_error = std::max(out.identity_error, std::abs(out.P[i][j] - (i == j ? target : 0.0)));
    }
  if (out.refinement_delta > 1e-6) {
    std::ostringstream msg;
    msg << "linear pairings not converged under refinement (delta " << out.refinement_delta << ")";
    throw EvaluationError(msg.str());
  }
  return out;
}

namespace {

LogPairings log_pairings_once(const RadialTable& table, int k, std::span<const double> c,
                              const LogPairingOptions& o) {
  const int m = k + 1;
  const double r_lo = table.r_min();
  const double r_hi = o.r_max > 0.0 ? std::min(o.r_max, table.r_max()) : table.r_max();
  const auto idx = level_indices(k);

  // Psi = a1(theta) R1(r) + a2(theta) R2(r).
  auto angular = [&](double th) {
    const double u[2] = {std::cos(th), std::sin(th)};
    std::array<double, 2> a{0.0, 0.0};
    for (int b = 0; b < m; ++b) {
      if (k == 1) {
        a[0] -= c[b] * u[b];
      } else {
        const Pair p = pair_of(idx[b]);
        const double uu = u[p.i] * u[p.j];
        a[0] += c[b] * p.s * uu;
        a[1] += c[b] * p.s * ((p.i == p.j ? 1.0 : 0.0) - uu);
      }
    }
    return a;
  };

  std::vector<double> singular_angles;
  for (int t = 0; t < (k == 1 ? 1 : 2); ++t) {
    const auto z = bracket_zeros([&](double th) { return angular(th)[t]; }, 0.0, two_pi, two_pi / 720.0);
    singular_angles.insert(singular_angles.end(), z.begin(), z.end());
  }
  // The angular interval is periodic: a nodal direction on the seam is singular at both ends.
  for (std::size_t i = 0, n = singular_angles.size(); i < n; ++i) {
    if (singular_angles[i] < 1e-9) singular_angles.push_back(two_pi);
    if (singular_angles[i] > two_pi - 1e-9) singular_angles.push_back(0.0);
  }
  std::sort(singular_angles.begin(), singular_angles.end());
  singular_angles.erase(std::unique(singular_angles.begin(), singular_angles.end(),
                                    [](double x, double y) { return std::abs(x - y) < 1e-9; }),
                        singular_angles.end());
  const auto arule = QuadratureRule::graded(0.0, two_pi, singular_angles, o.angular_levels,
                                            two_pi / o.angular_panels);
  const auto an = arule.nodes();
  const auto aw = arule.weights();

  // Scan samples of R1 = F'' (or F'), R2 = F'/r for locating zeros along rays.
  const double scan_step = 0.05;
  const auto scan_count = static_cast<std::size_t>(std::ceil((r_hi - r_lo) / scan_step));
  std::vector<double> scan_r(scan_count + 1), R1(scan_count + 1), R2(scan_count + 1);
  for (std::size_t i = 0; i <= scan_count; ++i) {
    const double r = std::max(r_lo + (r_hi - r_lo) * static_cast<double>(i) / static_cast<double>(scan_count), 1e-8);
    const auto v = table(r);
    scan_r[i] = r;
    R1[i] = k == 1 ? v.dF : v.d2F;
    R2[i] = v.dF / r;
  }

  auto ray_zeros = [&](const std::array<double, 2>& a) {
    std::vector<double> z{r_lo};
    auto psi_at = [&](double r) {
      const auto v = table(r);
      return k == 1 ? a[0] * v.dF : a[0] * v.d2F + a[1] * v.dF / r;
    };
    for (std::size_t i = 0; i < scan_count; ++i) {
      const double f0 = a[0] * R1[i] + a[1] * R2[i];
      const double f1 = a[0] * R1[i + 1] + a[1] * R2[i + 1];
      if ((f0 < 0.0) != (f1 < 0.0) && f0 != 0.0 && f1 != 0.0) {
        const auto zz = bracket_zeros(psi_at, scan_r[i], scan_r[i + 1], scan_r[i + 1] - scan_r[i]);
        z.insert(z.end(), zz.begin(), zz.end());
      }
    }
    return z;
  };

  std::vector<std::vector<std::vector<double>>> terms(m, std::vector<std::vector<double>>(m));
  // For k = 1 every ray has the zeros of F', so one radial rule serves all rays.
  std::optional<QuadratureRule> shared_rule;
  std::vector<RadialTable::Values> shared_values;
  for (std::size_t q = 0; q < an.size(); ++q) {
    const double th = an[q];
    const double ux = std::cos(th), uy = std::sin(th);
    const auto a = angular(th);
    const QuadratureRule* rule = nullptr;
    std::optional<QuadratureRule> local;
    std::vector<RadialTable::Values> local_values;
    const std::vector<RadialTable::Values>* values = nullptr;
    if (k == 1) {
      if (!shared_rule) {
        shared_rule = QuadratureRule::graded(r_lo, r_hi, ray_zeros({1.0, 0.0}), o.levels, o.max_panel);
        for (double r : shared_rule->nodes()) shared_values.push_back(table(r));
      }
      rule = &*shared_rule;
      values = &shared_values;
    } else {
      local = QuadratureRule::graded(r_lo, r_hi, ray_zeros(a), o.levels, o.max_panel);
      for (double r : local->nodes()) local_values.push_back(table(r));
      rule = &*local;
      values = &local_values;
    }
    const auto rn = rule->nodes();
    const auto rw = rule->weights();
    std::vector<std::vector<double>> ray(m, std::vector<double>(m, 0.0));
    std::vector<BasisValue> b(m);
    for (std::size_t s = 0; s < rn.size(); ++s) {
      const double r = rn[s];
      double psi = 0.0;
      for (int i = 0; i < m; ++i) {
        b[i] = basis_value(k, i, (*values)[s], r, ux, uy);
        psi += c[i] * b[i].psi;
      }
      if (psi == 0.0) continue;
      const double lw = rw[s] * r * std::log(std::abs(psi));
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          ray[i][j] += lw * (b[i].grad_star[0] * b[j].grad_lap4[0] + b[i].grad_star[1] * b[j].grad_lap4[1]);
    }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) terms[i][j].push_back(aw[q] * ray[i][j]);
  }

  LogPairings out;
  out.M.assign(m, std::vector<double>(m));
  out.L.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      out.M[i][j] = pairwise_sum(terms[i][j]);
      out.L[i] += c[j] * out.M[i][j];
    }
  }
  return out;
}

}  // namespace

LogPairings log_pairings(const RadialTable& table, int k, std::span<const double> c,
                         const LogPairingOptions& options) {
  check_table_2d(table);
  if (static_cast<int>(c.size()) != k + 1) throw InvalidArgument("log pairings need one coefficient per eigenfunction");
  bool any = false;
  for (double v : c) {
    if (!std::isfinite(v)) throw InvalidArgument("log pairing coefficients must be finite");
    any = any || v != 0.0;
  }
  if (!any) throw InvalidArgument("log pairings need a nonzero eigenfunction combination");
  auto out = log_pairings_once(table, k, c, options);
  if (options.check_refinement) {
    LogPairingOptions fine = options;
    fine.levels += 6;
    fine.angular_levels += 6;
    fine.angular_panels *= 2;
    fine.max_panel *= 0.5;
    const auto f = log_pairings_once(table, k, c, fine);
    for (std::size_t i = 0; i < out.M.size(); ++i)
      for (std::size_t j = 0; j < out.M.size(); ++j)
        out.refinement_delta = std::max(out.refinement_delta, std::abs(out.M[i][j] - f.M[i][j]));
  }
  return out;
}

}  // namespace tfe10::branching
