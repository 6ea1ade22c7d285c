#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "bibscore/errors.hpp"
#include "bibscore/records.hpp"
#include "bibscore/rng.hpp"
#include "bibscore/stats.hpp"

namespace bibscore {

struct SynthOptions {
  // share of variance each indicator's latent takes from the common
  // researcher-ability factor; drives the cross-indicator rank correlation
  double rank_coupling = 0.75;
  std::string id_prefix = "S_";
};

namespace synth_detail {

inline double frac(double x) { return x - std::floor(x); }

// Standard-normal mid-quantile grid g_k = Phi^-1((k + 0.5) / n).
inline std::vector<double> normal_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k)
    g[k] = stats::normal_quantile((static_cast<double>(k) + 0.5) / static_cast<double>(n));
  return g;
}

// Zero-inflated truncated-lognormal value grid for a continuous indicator.
// X = exp(mu + sigma Z) 1{Z > q} matches the target mean and sd exactly in
// expectation; the grid realizes X at the mid-quantiles of Z, clipped at
// the observed maximum.
inline std::vector<double> continuous_grid(double m, double s, double mn, double mx,
                                           std::size_t n) {
  if (s <= 0.0) return std::vector<double>(n, m);
  double q = mn <= 0.0 ? stats::normal_quantile(0.05)
                       : -std::numeric_limits<double>::infinity();
  double target_ratio = (s * s + m * m) / (m * m);
  auto ratio = [&](double sigma) {
    double pz = std::isinf(q) ? 1.0 : stats::normal_cdf(sigma - q);
    double pz2 = std::isinf(q) ? 1.0 : stats::normal_cdf(2.0 * sigma - q);
    return std::exp(sigma * sigma) * pz2 / (pz * pz);
  };
  double lo = 1e-9, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (ratio(mid) < target_ratio) lo = mid;
    else hi = mid;
  }
  double sigma = 0.5 * (lo + hi);
  double pz = std::isinf(q) ? 1.0 : stats::normal_cdf(sigma - q);
  double mu = std::log(m / pz) - 0.5 * sigma * sigma;
  std::vector<double> values;
  values.reserve(n);
  for (double g : normal_grid(n))
    values.push_back(g <= q ? 0.0 : std::min(std::exp(mu + sigma * g), mx));
  return values;
}

// Integer count grid: lognormal intensities at the mid-quantiles, rounded
// by a golden-ratio stratified offset so the rounding error averages out,
// then sorted. Small means produce the zero mass that Table-1-style count
// columns show.
inline std::vector<double> count_grid(double m, double s, double mx, std::size_t n) {
  if (s <= 0.0) return std::vector<double>(n, std::round(m));
  double v = std::max(s * s - 0.15, 0.05 * m * m + 1e-6);
  double sigma2 = std::log(1.0 + v / (m * m));
  double mu = std::log(m) - 0.5 * sigma2;
  double sigma = std::sqrt(sigma2);
  auto cap = std::floor(mx + 1e-9);
  std::vector<double> values;
  values.reserve(n);
  std::size_t k = 0;
  for (double g : normal_grid(n)) {
    double lambda = std::min(std::exp(mu + sigma * g), mx);
    double offset = frac((static_cast<double>(k) + 0.5) * 0.6180339887498949);
    values.push_back(std::min(std::floor(lambda + offset), cap));
    ++k;
  }
  std::sort(values.begin(), values.end());
  return values;
}

inline std::vector<std::size_t> ranks_of(const std::vector<double>& y) {
  std::vector<std::size_t> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
  std::vector<std::size_t> rank(y.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;
  return rank;
}

}  // namespace synth_detail

// Deterministic synthetic population: per-indicator value grids pinned to
// the target statistics, paired across indicators by ranking one-factor
// Gaussian latents. Column margins are seed-invariant; only the pairing
// varies with the seed. hca1 and hca5 share one latent and their grids are
// aligned so hca5 >= hca1 holds row by row.
inline std::vector<IndicatorVector> synthesize_population(const PopulationStats& stats,
                                                          std::size_t n, std::uint64_t seed,
                                                          const std::string& field_code,
                                                          const SynthOptions& options = {}) {
  if (n < 2) throw input_error("synthesize_population: need n >= 2");
  stats.validate();
  for (std::size_t j = 0; j < kNumIndicators; ++j) {
    const std::string& name = indicator_names()[j];
    if (stats.mean[j] < 0.0)
      throw input_error("synthesize_population: negative mean for " + name);
    if (stats.mean[j] == 0.0 && stats.sd[j] > 0.0)
      throw input_error("synthesize_population: " + name +
                        " has mean 0 but positive sd; infeasible for a non-negative indicator");
  }
  if (!(options.rank_coupling >= 0.0 && options.rank_coupling <= 1.0))
    throw input_error("synthesize_population: rank_coupling must be in [0, 1]");

  std::array<std::vector<double>, kNumIndicators> grids;
  grids[0] = synth_detail::continuous_grid(stats.mean[0], stats.sd[0], stats.min[0],
                                           stats.max[0], n);
  for (std::size_t j = 1; j < kNumIndicators; ++j)
    grids[j] = synth_detail::count_grid(stats.mean[j], stats.sd[j], stats.max[j], n);
  for (std::size_t k = 0; k < n; ++k)
    grids[2][k] = std::max(grids[2][k], grids[1][k]);

  // latent per researcher: one shared ability factor plus one noise term
  // per indicator, with hca1/hca5 sharing a single noise draw
  Rng rng(seed);
  double w0 = std::sqrt(options.rank_coupling);
  double w1 = std::sqrt(1.0 - options.rank_coupling);
  constexpr std::size_t kLatents = 4;  // fss, hca pair, first_a, last_a
  std::array<std::vector<double>, kLatents> latents;
  for (auto& l : latents) l.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z0 = rng.normal();
    for (std::size_t c = 0; c < kLatents; ++c)
      latents[c][i] = w0 * z0 + w1 * rng.normal();
  }
  std::array<std::vector<std::size_t>, kNumIndicators> ranks;
  ranks[0] = synth_detail::ranks_of(latents[0]);
  ranks[1] = synth_detail::ranks_of(latents[1]);
  ranks[2] = ranks[1];
  ranks[3] = synth_detail::ranks_of(latents[2]);
  ranks[4] = synth_detail::ranks_of(latents[3]);

  int width = static_cast<int>(std::to_string(n).size());
  std::vector<IndicatorVector> population(n);
  for (std::size_t i = 0; i < n; ++i) {
    IndicatorVector& vec = population[i];
    std::string number = std::to_string(i + 1);
    vec.researcher_id =
        options.id_prefix + std::string(static_cast<std::size_t>(width) - number.size(), '0') +
        number;
    vec.field_code = field_code;
    for (std::size_t j = 0; j < kNumIndicators; ++j)
      vec.values[j] = grids[j][ranks[j][i]];
    vec.validate(0);
  }
  return population;
}

}  // namespace bibscore
