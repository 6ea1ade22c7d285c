#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bibscore/errors.hpp"
#include "bibscore/pca.hpp"
#include "bibscore/records.hpp"
#include "bibscore/stats.hpp"

namespace bibscore {

inline constexpr int kDesignLevels = 4;
inline constexpr double kDistanceEpsilon = 1e-12;

struct ExcellenceDesign {
  // levels[j] = (p95, p97.5, max, inflated max) for indicator j
  std::array<std::array<double, kDesignLevels>, kNumIndicators> levels{};
  Eigen::MatrixXd design_matrix;  // 4^5 x 5 full factorial
};

inline ExcellenceDesign build_excellence_class(const std::vector<IndicatorVector>& population,
                                               double p_lo = 95.0, double p_hi = 97.5,
                                               double max_inflation = 1.05) {
  if (population.empty())
    throw input_error("build_excellence_class: population is empty");
  ExcellenceDesign design;
  for (std::size_t j = 0; j < kNumIndicators; ++j) {
    std::vector<double> column;
    column.reserve(population.size());
    for (const auto& v : population) column.push_back(v.values[j]);
    std::sort(column.begin(), column.end());
    double mx = column.back();
    design.levels[j] = {stats::nearest_rank_percentile(column, p_lo),
                        stats::nearest_rank_percentile(column, p_hi), mx,
                        max_inflation * mx};
  }
  const int n_rows = 1024;  // 4^5
  design.design_matrix.resize(n_rows, kNumIndicators);
  for (int i = 0; i < n_rows; ++i) {
    int code = i;
    // indicator 1 varies slowest, indicator 5 fastest
    for (int j = static_cast<int>(kNumIndicators) - 1; j >= 0; --j) {
      design.design_matrix(i, j) =
          design.levels[static_cast<std::size_t>(j)][static_cast<std::size_t>(code % 4)];
      code /= 4;
    }
  }
  return design;
}

struct KennardStoneSplit {
  std::vector<Eigen::Index> train;  // in selection order
  std::vector<Eigen::Index> test;   // ascending
};

inline KennardStoneSplit kennard_stone_split(const Eigen::MatrixXd& data,
                                             double train_fraction) {
  auto n = data.rows();
  if (n < 2) throw input_error("kennard_stone_split: need at least 2 rows");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw input_error("kennard_stone_split: train_fraction must be in (0, 1)");
  auto k = static_cast<Eigen::Index>(
      std::floor(train_fraction * static_cast<double>(n) + 1e-9));
  if (k < 1 || k >= n)
    throw input_error("kennard_stone_split: fraction leaves an empty train or test set");

  KennardStoneSplit split;
  std::vector<bool> selected(static_cast<std::size_t>(n), false);
  auto pick = [&](Eigen::Index i) {
    selected[static_cast<std::size_t>(i)] = true;
    split.train.push_back(i);
  };

  Eigen::Index si = 0, sj = 1;
  double best = -1.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double d = (data.row(i) - data.row(j)).squaredNorm();
      if (d > best) {
        best = d;
        si = i;
        sj = j;
      }
    }
  pick(si);
  if (k >= 2) pick(sj);

  // min squared distance from each row to the selected set
  std::vector<double> min_dist(static_cast<std::size_t>(n),
                               std::numeric_limits<double>::infinity());
  auto absorb = [&](Eigen::Index r) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double d = (data.row(i) - data.row(r)).squaredNorm();
      if (d < min_dist[static_cast<std::size_t>(i)])
        min_dist[static_cast<std::size_t>(i)] = d;
    }
  };
  for (Eigen::Index r : split.train) absorb(r);

  while (static_cast<Eigen::Index>(split.train.size()) < k) {
    Eigen::Index next = -1;
    double far = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (selected[static_cast<std::size_t>(i)]) continue;
      if (min_dist[static_cast<std::size_t>(i)] > far) {
        far = min_dist[static_cast<std::size_t>(i)];
        next = i;
      }
    }
    pick(next);
    absorb(next);
  }
  for (Eigen::Index i = 0; i < n; ++i)
    if (!selected[static_cast<std::size_t>(i)]) split.test.push_back(i);
  return split;
}

struct SimcaClassModel {
  Eigen::VectorXd center;          // training autoscale center
  Eigen::VectorXd scale;           // training autoscale scale
  PcaModel pca;
  double class_rsd = 0.0;          // s0
  double confidence = 0.95;
  double critical_squared_distance = 0.0;
  double translated_log_critical = 0.0;
  Eigen::MatrixXd score_box;       // A x 2: [min - 0.5 sd, max + 0.5 sd]
  Eigen::VectorXd modeling_power;  // length p
  double log_base = 10.0;
  double log_translation = 1.0;
  bool use_score_box = true;
  Eigen::Index n_train = 0;

  double translated_log(double squared_distance) const {
    return std::log(std::max(squared_distance, kDistanceEpsilon)) / std::log(log_base) +
           log_translation;
  }
};

struct SimcaScore {
  double squared_distance = 0.0;
  double translated_log = 0.0;
  bool distance_accepted = false;
  bool box_accepted = false;
  bool accepted = false;
};

struct SimcaFitOptions {
  double confidence = 0.95;
  int n_components = 2;       // ignored when auto_components is set
  bool auto_components = false;
  double log_base = 10.0;
  double log_translation = 1.0;
  bool use_score_box = true;
};

inline SimcaClassModel fit_class_model(const Eigen::MatrixXd& train,
                                       const SimcaFitOptions& options = {}) {
  if (!(options.confidence > 0.0 && options.confidence < 1.0))
    throw input_error("fit_class_model: confidence must be in (0, 1)");
  auto n = train.rows();
  auto p = train.cols();
  int a = options.auto_components
              ? select_components_cv(train, static_cast<int>(p) - 1)
              : options.n_components;
  if (a >= p)
    throw input_error("fit_class_model: n_components must be below the variable count");
  if (n <= a + 1)
    throw insufficient_data_error("fit_class_model: need more rows than A + 1");

  auto [pca, scaled] = fit_pca(train, a);
  SimcaClassModel model;
  model.center = scaled.center;
  model.scale = scaled.scale;
  model.pca = std::move(pca);
  model.confidence = options.confidence;
  model.log_base = options.log_base;
  model.log_translation = options.log_translation;
  model.use_score_box = options.use_score_box;
  model.n_train = n;
  model.class_rsd = class_rsd(model.pca, scaled.rows);

  double df1 = static_cast<double>(p - a);
  double df2 = static_cast<double>((p - a) * (n - a - 1));
  model.critical_squared_distance =
      model.class_rsd * model.class_rsd * stats::f_quantile(options.confidence, df1, df2);
  model.translated_log_critical = model.translated_log(model.critical_squared_distance);

  model.score_box.resize(a, 2);
  for (int k = 0; k < a; ++k) {
    model.score_box(k, 0) = model.pca.score_range(k, 0) - 0.5 * model.pca.score_sd(k);
    model.score_box(k, 1) = model.pca.score_range(k, 1) + 0.5 * model.pca.score_sd(k);
  }
  model.modeling_power = bibscore::modeling_power(model.pca, scaled.rows);
  return model;
}

inline SimcaScore score(const SimcaClassModel& model, const Eigen::VectorXd& raw) {
  if (raw.size() != model.center.size())
    throw input_error("score: expected " + std::to_string(model.center.size()) +
                      " variables, got " + std::to_string(raw.size()));
  Eigen::VectorXd scaled = (raw - model.center).cwiseQuotient(model.scale);
  Projection proj = project_and_residual(model.pca, scaled);
  SimcaScore s;
  s.squared_distance = proj.squared_distance;
  s.translated_log = model.translated_log(s.squared_distance);
  s.distance_accepted = s.squared_distance <= model.critical_squared_distance;
  s.box_accepted = true;
  for (int k = 0; k < model.pca.n_components; ++k)
    if (proj.scores(k) < model.score_box(k, 0) || proj.scores(k) > model.score_box(k, 1))
      s.box_accepted = false;
  s.accepted = s.distance_accepted && (!model.use_score_box || s.box_accepted);
  return s;
}

inline SimcaScore score(const SimcaClassModel& model, const IndicatorVector& vec) {
  Eigen::VectorXd raw(kNumIndicators);
  for (std::size_t j = 0; j < kNumIndicators; ++j)
    raw(static_cast<Eigen::Index>(j)) = vec.values[j];
  return score(model, raw);
}

inline double sensitivity(const SimcaClassModel& model, const Eigen::MatrixXd& members) {
  if (members.rows() == 0) throw input_error("sensitivity: empty member set");
  Eigen::Index accepted = 0;
  for (Eigen::Index i = 0; i < members.rows(); ++i)
    if (score(model, Eigen::VectorXd(members.row(i).transpose())).accepted) ++accepted;
  return static_cast<double>(accepted) / static_cast<double>(members.rows());
}

}  // namespace bibscore
