#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bibscore/errors.hpp"
#include "bibscore/records.hpp"

namespace bibscore {

struct BcsConfig {
  // weight order follows indicator_names(): fss, hca1, hca5, first_a, last_a
  std::array<double, kNumIndicators> weights = {0.50, 0.20, 0.10, 0.10, 0.10};

  void validate() const {
    double sum = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw config_error("bcs weights must be non-negative");
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
      throw config_error("bcs weights must sum to 1");
  }
};

struct StandardizationContext {
  std::array<double, kNumIndicators> positive_means{};  // valid where present
  std::array<bool, kNumIndicators> present{};

  double positive_mean(std::size_t k) const {
    if (k >= kNumIndicators) throw input_error("indicator index out of range");
    if (!present[k])
      throw absent_mean_error("indicator '" + indicator_names()[k] +
                              "' has no positive values; positive mean undefined");
    return positive_means[k];
  }
};

struct StandardizedColumn {
  std::vector<double> values;
  double positive_mean = 0.0;
};

inline StandardizedColumn positive_mean_standardize(const std::vector<double>& column,
                                                    const std::string& name = "") {
  if (column.empty()) throw input_error("positive_mean_standardize: empty column");
  double sum = 0.0;
  std::size_t count = 0;
  for (double x : column) {
    if (x < 0.0) throw input_error("positive_mean_standardize: negative entry");
    if (x > 0.0) {
      sum += x;
      ++count;
    }
  }
  if (count == 0)
    throw absent_mean_error("indicator " + (name.empty() ? "column" : "'" + name + "'") +
                            " is all zero; positive mean undefined");
  StandardizedColumn out;
  out.positive_mean = sum / static_cast<double>(count);
  out.values.reserve(column.size());
  for (double x : column) out.values.push_back(x / out.positive_mean);
  return out;
}

inline StandardizationContext build_standardization_context(
    const std::vector<IndicatorVector>& population) {
  if (population.empty())
    throw input_error("build_standardization_context: empty population");
  StandardizationContext ctx;
  for (std::size_t k = 0; k < kNumIndicators; ++k) {
    std::vector<double> column;
    column.reserve(population.size());
    for (const auto& v : population) column.push_back(v.values[k]);
    StandardizedColumn s = positive_mean_standardize(column, indicator_names()[k]);
    ctx.positive_means[k] = s.positive_mean;
    ctx.present[k] = true;
  }
  return ctx;
}

inline double bcs(const std::array<double, kNumIndicators>& standardized,
                  const BcsConfig& config = {}) {
  config.validate();
  double total = 0.0;
  for (std::size_t k = 0; k < kNumIndicators; ++k)
    total += config.weights[k] * standardized[k];
  return total;
}

inline double bcs_from_raw(const IndicatorVector& vec, const StandardizationContext& ctx,
                           const BcsConfig& config = {}) {
  std::array<double, kNumIndicators> standardized{};
  for (std::size_t k = 0; k < kNumIndicators; ++k)
    standardized[k] = vec.values[k] == 0.0 ? 0.0 : vec.values[k] / ctx.positive_mean(k);
  return bcs(standardized, config);
}

}  // namespace bibscore
