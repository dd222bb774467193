#include "davies/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "davies/errors.hpp"

namespace davies {

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.0) {
    // Jacobi-transformed series, fast for small lambda.
    const double pi = std::numbers::pi;
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double a = (2.0 * k - 1.0) * pi / lambda;
      const double term = std::exp(-a * a / 8.0);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test_sorted(const std::vector<double>& sorted, const std::vector<double>& cdf_values) {
  if (sorted.size() != cdf_values.size())
    throw ValidationError("sample and CDF values differ in length");
  KsResult r;
  r.n = sorted.size();
  if (r.n == 0) return r;
  const double n = static_cast<double>(r.n);
  double d = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) {
    const double f = cdf_values[i];
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  r.statistic = d;
  r.pvalue = kolmogorov_survival(std::sqrt(n) * d);
  return r;
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  std::vector<double> f(sample.size());
  std::transform(sample.begin(), sample.end(), f.begin(), cdf);
  return ks_test_sorted(sample, f);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  KsResult r;
  r.n = std::min(a.size(), b.size());
  if (a.empty() || b.empty()) return r;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  r.statistic = d;
  r.pvalue = kolmogorov_survival(std::sqrt(na * nb / (na + nb)) * d);
  return r;
}

double chi_square_survival(double statistic, double dof) {
  if (!(dof > 0.0)) return 1.0;
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(statistic, 0.0)));
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<double>>& counts) {
  ChiSquareResult r;
  if (counts.empty()) return r;
  const std::size_t rows = counts.size();
  const std::size_t cols = counts.front().size();
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (counts[i].size() != cols) throw ValidationError("contingency table must be rectangular");
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += counts[i][j];
      col_sum[j] += counts[i][j];
      total += counts[i][j];
    }
  }
  if (total <= 0.0) return r;
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_sum[i] == 0.0) continue;
    for (std::size_t j = 0; j < cols; ++j) {
      if (col_sum[j] == 0.0) continue;
      const double expected = row_sum[i] * col_sum[j] / total;
      const double diff = counts[i][j] - expected;
      r.statistic += diff * diff / expected;
    }
  }
  const auto live_rows = std::count_if(row_sum.begin(), row_sum.end(), [](double s) { return s > 0; });
  const auto live_cols = std::count_if(col_sum.begin(), col_sum.end(), [](double s) { return s > 0; });
  r.dof = static_cast<double>((live_rows - 1) * (live_cols - 1));
  r.pvalue = chi_square_survival(r.statistic, r.dof);
  return r;
}

}  // namespace davies
