#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bibscore/errors.hpp"
#include "bibscore/records.hpp"
#include "bibscore/stats.hpp"

namespace bibscore {

using stats::spearman;

struct ScoredResearcher {
  std::string researcher_id;
  std::array<double, kNumIndicators> indicators{};
  double bcs = 0.0;
  double squared_distance = 0.0;
  double translated_log = 0.0;
  bool accepted = false;
};

struct RankRow : ScoredResearcher {
  int bcs_rank = 0;
  int simca_rank = 0;
  std::string simca_band;  // "Best 10".."Best 50", empty beyond
};

struct RankTable {
  std::vector<RankRow> rows;  // sorted by bcs_rank ascending
};

// Ordinal ranks 1..n; `better` orders best-first, ties fall back to
// ascending researcher_id so reports are deterministic.
template <typename Better>
inline std::vector<int> ordinal_ranks(const std::vector<ScoredResearcher>& entries,
                                      Better better) {
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (better(entries[a], entries[b])) return true;
    if (better(entries[b], entries[a])) return false;
    return entries[a].researcher_id < entries[b].researcher_id;
  });
  std::vector<int> ranks(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    ranks[order[i]] = static_cast<int>(i) + 1;
  return ranks;
}

inline std::string simca_band_label(int simca_rank, int bands_k = 10, int band_limit = 50) {
  if (simca_rank < 1 || simca_rank > band_limit) return "";
  int band = ((simca_rank + bands_k - 1) / bands_k) * bands_k;
  return "Best " + std::to_string(band);
}

inline RankTable rank_report(const std::vector<ScoredResearcher>& entries,
                             int bands_k = 10, int band_limit = 50) {
  if (entries.empty()) throw input_error("rank_report: empty input");
  auto bcs_ranks = ordinal_ranks(entries, [](const ScoredResearcher& a,
                                             const ScoredResearcher& b) {
    return a.bcs > b.bcs;  // BCS descending
  });
  auto simca_ranks = ordinal_ranks(entries, [](const ScoredResearcher& a,
                                               const ScoredResearcher& b) {
    return a.translated_log < b.translated_log;  // distance ascending
  });
  RankTable table;
  table.rows.resize(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    RankRow& row = table.rows[i];
    static_cast<ScoredResearcher&>(row) = entries[i];
    row.bcs_rank = bcs_ranks[i];
    row.simca_rank = simca_ranks[i];
    row.simca_band = simca_band_label(row.simca_rank, bands_k, band_limit);
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const RankRow& a, const RankRow& b) { return a.bcs_rank < b.bcs_rank; });
  return table;
}

inline int top_k_overlap(const std::vector<int>& rank_a, const std::vector<int>& rank_b,
                         int k) {
  if (rank_a.size() != rank_b.size()) throw input_error("top_k_overlap: length mismatch");
  if (k > static_cast<int>(rank_a.size()))
    throw input_error("top_k_overlap: k exceeds population size");
  int count = 0;
  for (std::size_t i = 0; i < rank_a.size(); ++i)
    if (rank_a[i] <= k && rank_b[i] <= k) ++count;
  return count;
}

struct StandardizationFit {
  std::array<double, kNumIndicators> positive_means{};
  double residual_rms = 0.0;
};

// Recovers the positive means behind published BCS values: least squares on
// the reciprocals beta_k = 1/mu+_k in bcs = sum_k w_k x_k beta_k.
inline StandardizationFit fit_standardization_oracle(
    const std::vector<std::array<double, kNumIndicators>>& indicators,
    const std::vector<double>& bcs_values,
    const std::array<double, kNumIndicators>& weights = {0.50, 0.20, 0.10, 0.10, 0.10}) {
  if (indicators.size() != bcs_values.size())
    throw input_error("fit_standardization_oracle: length mismatch");
  if (indicators.size() < kNumIndicators)
    throw input_error("fit_standardization_oracle: need at least 5 rows");
  auto n = static_cast<Eigen::Index>(indicators.size());
  Eigen::MatrixXd design(n, kNumIndicators);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kNumIndicators; ++k)
      design(i, static_cast<Eigen::Index>(k)) =
          weights[k] * indicators[static_cast<std::size_t>(i)][k];
    y(i) = bcs_values[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(kNumIndicators))
    throw rank_deficiency_error("fit_standardization_oracle: design matrix is rank " +
                                std::to_string(qr.rank()) + " of " +
                                std::to_string(kNumIndicators));
  Eigen::VectorXd beta = qr.solve(y);
  StandardizationFit fit;
  for (std::size_t k = 0; k < kNumIndicators; ++k)
    fit.positive_means[k] = 1.0 / beta(static_cast<Eigen::Index>(k));
  fit.residual_rms = std::sqrt((design * beta - y).squaredNorm() / static_cast<double>(n));
  return fit;
}

struct HistogramBins {
  std::vector<double> edges;  // n_bins + 1 edges, fixed width
};

inline HistogramBins histogram_bins(double min_value, double max_value, double bin_width) {
  if (!(bin_width > 0.0)) throw input_error("histogram: bin_width must be positive");
  if (max_value < min_value) throw input_error("histogram: max below min");
  auto n_bins = static_cast<std::size_t>(
      std::max(1.0, std::ceil((max_value - min_value) / bin_width - 1e-9)));
  HistogramBins bins;
  bins.edges.reserve(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    bins.edges.push_back(min_value + bin_width * static_cast<double>(i));
  return bins;
}

// Half-open bins [left, right), final bin closed on the right.
inline std::vector<std::size_t> histogram_counts(const HistogramBins& bins,
                                                 const std::vector<double>& scores) {
  std::size_t n_bins = bins.edges.size() - 1;
  std::vector<std::size_t> counts(n_bins, 0);
  double width = bins.edges[1] - bins.edges[0];
  for (double s : scores) {
    if (s < bins.edges.front() || s > bins.edges.back()) continue;
    auto idx = static_cast<std::size_t>((s - bins.edges.front()) / width);
    if (idx >= n_bins) idx = n_bins - 1;
    counts[idx] += 1;
  }
  return counts;
}

struct GroupedHistogram {
  HistogramBins bins;
  std::map<std::string, std::vector<std::size_t>> counts;  // per group label
};

// Common bins over the union of all groups' scores, then per-group counts.
inline GroupedHistogram histogram_data(
    const std::map<std::string, std::vector<double>>& groups, double bin_width) {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& [label, scores] : groups)
    for (double s : scores) {
      if (!any) {
        lo = hi = s;
        any = true;
      }
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  if (!any) throw input_error("histogram_data: no scores");
  GroupedHistogram out;
  out.bins = histogram_bins(lo, hi, bin_width);
  for (const auto& [label, scores] : groups)
    out.counts[label] = histogram_counts(out.bins, scores);
  return out;
}

}  // namespace bibscore
