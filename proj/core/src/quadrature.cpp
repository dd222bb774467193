#include "davies/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "davies/errors.hpp"

namespace davies {
namespace {

GaussRule compute_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1]; store in increasing order.
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

void build_nodes(int depth, int n, double start, double length, double weight, int base_order,
                 bool reduced, std::vector<double>& points, std::vector<SimplexNode>& out) {
  if (depth > n) {
    out.push_back({points, weight});
    return;
  }
  const int order = reduced ? reduced_order(base_order, depth) : tapered_order(base_order, depth);
  const GaussRule& rule = gauss_legendre(order);
  const double span = length - start;
  for (int i = 0; i < order; ++i) {
    const double r = start + span * rule.nodes[i];
    points[depth - 1] = r;
    build_nodes(depth + 1, n, r, length, weight * span * rule.weights[i], base_order, reduced,
                points, out);
  }
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule>(compute_rule(order));
  return *slot;
}

int tapered_order(int base_order, int depth) {
  if (depth <= 1) return base_order;
  return std::max(std::min(kMinTaperedOrder, base_order), (base_order + depth - 1) / depth);
}

int reduced_order(int base_order, int depth) {
  return std::max(2, tapered_order(base_order, depth) - 2);
}

std::vector<SimplexNode> ordered_simplex_rule(int n, double length, int base_order,
                                              bool reduced) {
  if (n < 0) throw DomainError("ordered_simplex_rule: negative dimension");
  std::vector<SimplexNode> out;
  std::vector<double> points(n);
  build_nodes(1, n, 0.0, length, 1.0, base_order, reduced, points, out);
  return out;
}

double poisson_upper_tail(double mean, int n) {
  if (mean <= 0.0) return 0.0;
  if (n < 0) return 1.0;
  return boost::math::gamma_p(static_cast<double>(n) + 1.0, mean);
}

}  // namespace davies
