#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace davies {

// P[K > lambda] for the limiting Kolmogorov distribution.
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  // Asymptotic p-value from sqrt(n_eff) * statistic.
  double pvalue = 1.0;
  std::size_t n = 0;
};

// One-sample test from a sorted sample and the hypothesized CDF at each point.
KsResult ks_test_sorted(const std::vector<double>& sorted, const std::vector<double>& cdf_values);
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double pvalue = 1.0;
};

// Pearson test of row/column independence for a contingency table of counts.
// Rows or columns with zero margin are dropped from the degrees of freedom.
ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& counts);

// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, double dof);

}  // namespace davies
