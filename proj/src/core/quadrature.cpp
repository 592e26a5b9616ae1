#include "tfe10/core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "tfe10/core/grid.hpp"
#include "tfe10/errors.hpp"

namespace tfe10 {

namespace {

GaussLegendre compute_gauss_legendre(int order) {
  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[order - 1 - i] = x;
    gl.weights[i] = gl.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) gl.nodes[order / 2] = 0.0;
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

QuadratureRule::QuadratureRule(std::vector<double> breaks, int nodes_per_panel)
    : breaks_(std::move(breaks)), nodes_per_panel_(nodes_per_panel) {
  if (breaks_.size() < 2) throw InvalidArgument("quadrature rule needs at least one panel");
  if (nodes_per_panel_ < 1) throw InvalidArgument("nodes per panel must be positive");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i] > breaks_[i - 1]))
      throw InvalidArgument("panel breaks must be strictly increasing");
}

QuadratureRule QuadratureRule::uniform(double a, double b, std::size_t panels, int nodes) {
  if (panels == 0) throw InvalidArgument("panel count must be positive");
  std::vector<double> br(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i)
    br[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
  br.back() = b;
  return QuadratureRule(std::move(br), nodes);
}

QuadratureRule QuadratureRule::graded(double a, double b, std::span<const double> singular_points,
                                      int levels, double max_width, int nodes) {
  std::vector<double> sing;
  for (double s : singular_points)
    if (s >= a && s <= b) sing.push_back(s);
  std::sort(sing.begin(), sing.end());

  std::vector<double> br{a, b};
  br.insert(br.end(), sing.begin(), sing.end());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());

  // Geometric refinement toward each singular point, limited by its neighbours.
  std::vector<double> extra;
  for (std::size_t i = 0; i < sing.size(); ++i) {
    const double s = sing[i];
    auto pos = std::lower_bound(br.begin(), br.end(), s);
    const double left = pos == br.begin() ? s : *(pos - 1);
    const double right = (pos + 1) == br.end() ? s : *(pos + 1);
    double hl = 0.5 * (s - left);
    double hr = 0.5 * (right - s);
    for (int l = 0; l < levels; ++l) {
      if (hl > 0.0) extra.push_back(s - hl);
      if (hr > 0.0) extra.push_back(s + hr);
      hl *= 0.5;
      hr *= 0.5;
    }
  }
  br.insert(br.end(), extra.begin(), extra.end());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());

  std::vector<double> out;
  out.reserve(br.size() * 2);
  out.push_back(br.front());
  for (std::size_t i = 1; i < br.size(); ++i) {
    const double w = br[i] - br[i - 1];
    const auto pieces = static_cast<std::size_t>(std::ceil(w / max_width));
    for (std::size_t p = 1; p < pieces; ++p)
      out.push_back(br[i - 1] + w * static_cast<double>(p) / static_cast<double>(pieces));
    out.push_back(br[i]);
  }
  return QuadratureRule(std::move(out), nodes);
}

QuadratureRule QuadratureRule::refined() const {
  std::vector<double> br;
  br.reserve(2 * breaks_.size());
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    br.push_back(breaks_[i]);
    br.push_back(0.5 * (breaks_[i] + breaks_[i + 1]));
  }
  br.push_back(breaks_.back());
  return QuadratureRule(std::move(br), nodes_per_panel_);
}

std::vector<double> QuadratureRule::nodes() const {
  const auto& gl = gauss_legendre(nodes_per_panel_);
  std::vector<double> out;
  out.reserve(panel_count() * nodes_per_panel_);
  for (std::size_t p = 0; p < panel_count(); ++p) {
    const double mid = 0.5 * (breaks_[p] + breaks_[p + 1]);
    const double half = 0.5 * (breaks_[p + 1] - breaks_[p]);
    for (double x : gl.nodes) out.push_back(mid + half * x);
  }
  return out;
}

std::vector<double> QuadratureRule::weights() const {
  const auto& gl = gauss_legendre(nodes_per_panel_);
  std::vector<double> out;
  out.reserve(panel_count() * nodes_per_panel_);
  for (std::size_t p = 0; p < panel_count(); ++p) {
    const double half = 0.5 * (breaks_[p + 1] - breaks_[p]);
    for (double w : gl.weights) out.push_back(half * w);
  }
  return out;
}

double integrate(const std::function<double(double)>& f, const QuadratureRule& rule) {
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  std::vector<double> terms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = f(nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "non-finite integrand value at node y = " << nodes[i];
      throw EvaluationError(msg.str());
    }
    terms[i] = v * weights[i];
  }
  return pairwise_sum(terms);
}

QuadratureResult quadrature(const std::function<double(double)>& f, const QuadratureRule& rule) {
  const double coarse = integrate(f, rule);
  const double fine = integrate(f, rule.refined());
  return {fine, std::abs(fine - coarse)};
}

QuadratureResult quadrature(const std::function<double(double)>& f, double a, double b,
                            std::size_t panels, int nodes_per_panel) {
  return quadrature(f, QuadratureRule::uniform(a, b, panels, nodes_per_panel));
}

}  // namespace tfe10
