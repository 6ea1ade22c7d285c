#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "bibscore/errors.hpp"

namespace bibscore::stats {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw input_error("mean of empty vector");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation (n-1 denominator); 0 for a single value.
inline double sample_sd(const std::vector<double>& v) {
  if (v.empty()) throw input_error("sd of empty vector");
  if (v.size() == 1) return 0.0;
  double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw input_error("median of empty vector");
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Sample skewness g1 = m3 / m2^(3/2) with population moments.
inline double skewness(const std::vector<double>& v) {
  double m = mean(v), m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(v.size());
  m3 /= static_cast<double>(v.size());
  if (m2 == 0.0) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

// Excess kurtosis g2 = m4 / m2^2 - 3 with population moments.
inline double kurtosis_excess(const std::vector<double>& v) {
  double m = mean(v), m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    double d = x - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(v.size());
  m4 /= static_cast<double>(v.size());
  if (m2 == 0.0) return 0.0;
  return m4 / (m2 * m2) - 3.0;
}

// Nearest-rank empirical percentile: smallest element whose cumulative
// frequency reaches p percent. Input must be sorted ascending. The 1e-9
// slack absorbs binary floating error in p*n/100 (e.g. 0.95*200).
inline double nearest_rank_percentile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw input_error("percentile of empty vector");
  double n = static_cast<double>(sorted.size());
  auto idx = static_cast<long long>(std::ceil(p * n / 100.0 - 1e-9)) - 1;
  idx = std::clamp<long long>(idx, 0, static_cast<long long>(sorted.size()) - 1);
  return sorted[static_cast<std::size_t>(idx)];
}

// Average ranks (1-based); ties share the mean of their rank block.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw input_error("spearman: length mismatch");
  if (a.size() < 2) throw input_error("spearman: need at least 2 observations");
  auto ra = average_ranks(a);
  auto rb = average_ranks(b);
  double ma = mean(ra), mb = mean(rb);
  double num = 0.0, da = 0.0, db = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  if (da == 0.0 || db == 0.0)
    throw undefined_correlation_error("spearman: constant input has no rank variance");
  return num / std::sqrt(da * db);
}

// ---- special functions --------------------------------------------------

// Lanczos approximation, g=7, 9 coefficients; |error| < 1e-13 for x > 0.
inline double ln_gamma(double x) {
  static const double c[9] = {
      0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
      771.32342877765313,   -176.61502916214059, 12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection formula
    return std::log(M_PI / std::sin(M_PI * x)) - ln_gamma(1.0 - x);
  }
  x -= 1.0;
  double a = c[0];
  double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (x + static_cast<double>(i));
  return 0.5 * std::log(2.0 * M_PI) + (x + 0.5) * std::log(t) - t + std::log(a);
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_cf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double eps = 1e-15;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw numeric_error("incomplete beta continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double inc_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw input_error("inc_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) +
                    a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * detail::beta_cf(a, b, x) / a;
  return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

// CDF of the F distribution with (d1, d2) degrees of freedom.
inline double f_cdf(double x, double d1, double d2) {
  if (d1 <= 0.0 || d2 <= 0.0) throw input_error("f_cdf: degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  return inc_beta(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2));
}

// Quantile of the F distribution, inverted from the CDF by bisection.
inline double f_quantile(double p, double d1, double d2) {
  if (p <= 0.0 || p >= 1.0) throw input_error("f_quantile: p must be in (0, 1)");
  double lo = 0.0, hi = 1.0;
  int expand = 0;
  while (f_cdf(hi, d1, d2) < p) {
    hi *= 2.0;
    if (++expand > 400) throw numeric_error("f_quantile: bracket expansion failed");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (f_cdf(mid, d1, d2) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Standard normal CDF via the complementary error function.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Standard normal quantile, inverted from the CDF by bisection.
inline double normal_quantile(double p) {
  if (p <= 0.0 || p >= 1.0) throw input_error("normal_quantile: p must be in (0, 1)");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace bibscore::stats
