#pragma once

#include <vector>

namespace davies {

// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rules are computed once per order and cached; safe to call concurrently.
const GaussRule& gauss_legendre(int order);

// Order used at nesting depth k >= 1 of an iterated ordered-simplex rule.
// Inner integrals run over shrinking intervals and carry factors of t^k / k!,
// so the order tapers as max(kMinTaperedOrder, ceil(base / k)).
inline constexpr int kMinTaperedOrder = 6;
int tapered_order(int base_order, int depth);
// Lower-order companion used for a posteriori error estimates.
int reduced_order(int base_order, int depth);

// One node of an iterated rule on {0 <= r_1 < ... < r_n < length}.
struct SimplexNode {
  std::vector<double> points;
  double weight = 1.0;
};

// Iterated (conical) Gauss-Legendre rule: r_1 in [0, L], r_k in [r_{k-1}, L],
// with tapered orders per depth. n == 0 yields a single empty node of weight 1.
std::vector<SimplexNode> ordered_simplex_rule(int n, double length, int base_order,
                                              bool reduced = false);

// P[N > n] for N ~ Poisson(mean).
double poisson_upper_tail(double mean, int n);

}  // namespace davies
