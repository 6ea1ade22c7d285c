#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bibscore/errors.hpp"

namespace bibscore {

struct ScaledMatrix {
  Eigen::MatrixXd rows;     // n x p, centered and scaled
  Eigen::VectorXd center;   // length p
  Eigen::VectorXd scale;    // length p, all > 0

  Eigen::VectorXd scale_row(const Eigen::VectorXd& raw) const {
    if (raw.size() != center.size())
      throw input_error("scale_row: expected " + std::to_string(center.size()) +
                        " variables, got " + std::to_string(raw.size()));
    return (raw - center).cwiseQuotient(scale);
  }

  Eigen::VectorXd unscale_row(const Eigen::VectorXd& scaled) const {
    if (scaled.size() != center.size())
      throw input_error("unscale_row: expected " + std::to_string(center.size()) +
                        " variables, got " + std::to_string(scaled.size()));
    return scaled.cwiseProduct(scale) + center;
  }
};

struct PcaModel {
  Eigen::MatrixXd loadings;              // p x A, orthonormal columns
  int n_components = 0;                  // A
  Eigen::VectorXd explained_variance;    // length A, non-increasing
  Eigen::VectorXd score_sd;              // length A, training-score sd
  Eigen::MatrixXd score_range;           // A x 2: (min, max) of training scores
};

inline ScaledMatrix autoscale(const Eigen::MatrixXd& data, bool allow_constant = false) {
  auto n = data.rows();
  auto p = data.cols();
  if (n < 2) throw input_error("autoscale: need at least 2 rows");
  if (p < 1) throw input_error("autoscale: need at least 1 column");
  ScaledMatrix out;
  out.center = data.colwise().mean();
  out.scale.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double ss = (data.col(j).array() - out.center(j)).square().sum();
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd <= 0.0) {
      if (!allow_constant)
        throw degenerate_input_error("autoscale: column " + std::to_string(j) +
                                     " is constant");
      sd = 1.0;
    }
    out.scale(j) = sd;
  }
  out.rows = (data.rowwise() - out.center.transpose()).array().rowwise() /
             out.scale.transpose().array();
  return out;
}

namespace detail {

// Fixes each loading column so its largest-magnitude entry is positive,
// making the factorization deterministic across runs.
inline void fix_loading_signs(Eigen::MatrixXd& loadings) {
  for (Eigen::Index k = 0; k < loadings.cols(); ++k) {
    Eigen::Index imax = 0;
    loadings.col(k).cwiseAbs().maxCoeff(&imax);
    if (loadings(imax, k) < 0.0) loadings.col(k) = -loadings.col(k);
  }
}

inline PcaModel pca_from_scaled(const Eigen::MatrixXd& scaled, int n_components) {
  auto n = scaled.rows();
  auto p = scaled.cols();
  int max_a = static_cast<int>(std::min<Eigen::Index>(n - 1, p));
  if (n_components < 1 || n_components > max_a)
    throw input_error("fit_pca: n_components must be in 1.." + std::to_string(max_a) +
                      ", got " + std::to_string(n_components));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeThinV);
  PcaModel model;
  model.n_components = n_components;
  model.loadings = svd.matrixV().leftCols(n_components);
  fix_loading_signs(model.loadings);
  model.explained_variance =
      svd.singularValues().head(n_components).array().square() /
      static_cast<double>(n - 1);
  Eigen::MatrixXd scores = scaled * model.loadings;
  model.score_sd.resize(n_components);
  model.score_range.resize(n_components, 2);
  for (int k = 0; k < n_components; ++k) {
    double m = scores.col(k).mean();
    double ss = (scores.col(k).array() - m).square().sum();
    model.score_sd(k) = std::sqrt(ss / static_cast<double>(n - 1));
    model.score_range(k, 0) = scores.col(k).minCoeff();
    model.score_range(k, 1) = scores.col(k).maxCoeff();
  }
  return model;
}

}  // namespace detail

inline std::pair<PcaModel, ScaledMatrix> fit_pca(const Eigen::MatrixXd& data,
                                                 int n_components,
                                                 bool allow_constant = false) {
  ScaledMatrix scaled = autoscale(data, allow_constant);
  PcaModel model = detail::pca_from_scaled(scaled.rows, n_components);
  return {std::move(model), std::move(scaled)};
}

struct Projection {
  Eigen::VectorXd scores;           // length A
  double squared_distance = 0.0;    // sum of squared residuals / (p - A)
  Eigen::VectorXd residuals;        // length p
};

inline Projection project_and_residual(const PcaModel& model,
                                       const Eigen::VectorXd& scaled_row) {
  auto p = model.loadings.rows();
  if (scaled_row.size() != p)
    throw input_error("project_and_residual: expected " + std::to_string(p) +
                      " variables, got " + std::to_string(scaled_row.size()));
  if (model.n_components >= p)
    throw input_error("project_and_residual: no residual degrees of freedom (A = p)");
  Projection out;
  out.scores = model.loadings.transpose() * scaled_row;
  out.residuals = scaled_row - model.loadings * out.scores;
  out.squared_distance =
      out.residuals.squaredNorm() / static_cast<double>(p - model.n_components);
  return out;
}

inline double class_rsd(const PcaModel& model, const Eigen::MatrixXd& scaled_training) {
  auto n = scaled_training.rows();
  auto p = scaled_training.cols();
  int a = model.n_components;
  if (n <= a + 1)
    throw insufficient_data_error("class_rsd: need n > A + 1, got n = " +
                                  std::to_string(n) + ", A = " + std::to_string(a));
  Eigen::MatrixXd resid =
      scaled_training - scaled_training * model.loadings * model.loadings.transpose();
  double ss = resid.array().square().sum();
  return std::sqrt(ss / (static_cast<double>(n - a - 1) * static_cast<double>(p - a)));
}

// Per-variable modeling power: 1 - residual sd / raw sd, with the SIMCA
// degrees of freedom (n - A - 1 for residuals, n - 1 for raw columns).
inline Eigen::VectorXd modeling_power(const PcaModel& model,
                                      const Eigen::MatrixXd& scaled_training) {
  auto n = scaled_training.rows();
  auto p = scaled_training.cols();
  int a = model.n_components;
  if (n <= a + 1)
    throw insufficient_data_error("modeling_power: need n > A + 1");
  Eigen::MatrixXd resid =
      scaled_training - scaled_training * model.loadings * model.loadings.transpose();
  Eigen::VectorXd mp(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double m = scaled_training.col(j).mean();
    double raw_ss = (scaled_training.col(j).array() - m).square().sum();
    double raw_sd = std::sqrt(raw_ss / static_cast<double>(n - 1));
    if (raw_sd <= 0.0)
      throw degenerate_input_error("modeling_power: column " + std::to_string(j) +
                                   " has zero variance");
    double res_sd =
        std::sqrt(resid.col(j).squaredNorm() / static_cast<double>(n - a - 1));
    mp(j) = 1.0 - res_sd / raw_sd;
  }
  return mp;
}

// Venetian-blind cross-validation (7 segments by row index modulo 7):
// for each held-out row and variable j, predicts x_j from the other
// variables under the fold's PCA and accumulates squared prediction error.
inline int select_components_cv(const Eigen::MatrixXd& data, int max_a,
                                int n_segments = 7) {
  auto n = data.rows();
  auto p = data.cols();
  if (n < 3) throw input_error("select_components_cv: need at least 3 rows");
  int cap = static_cast<int>(std::min<Eigen::Index>(n - 2, p - 1));
  max_a = std::min(max_a, cap);
  if (max_a < 1) throw input_error("select_components_cv: no admissible component count");
  n_segments = std::min<int>(n_segments, static_cast<int>(n));
  std::vector<double> press(static_cast<std::size_t>(max_a) + 1, 0.0);
  for (int seg = 0; seg < n_segments; ++seg) {
    std::vector<Eigen::Index> train_idx, test_idx;
    for (Eigen::Index i = 0; i < n; ++i)
      (i % n_segments == seg ? test_idx : train_idx).push_back(i);
    if (test_idx.empty() || train_idx.size() < 2) continue;
    Eigen::MatrixXd train(train_idx.size(), p);
    for (std::size_t i = 0; i < train_idx.size(); ++i)
      train.row(static_cast<Eigen::Index>(i)) = data.row(train_idx[i]);
    ScaledMatrix scaled = autoscale(train, true);
    int fold_max = std::min<int>(max_a, static_cast<int>(train.rows()) - 1);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled.rows, Eigen::ComputeThinV);
    Eigen::MatrixXd all_loadings = svd.matrixV().leftCols(fold_max);
    detail::fix_loading_signs(all_loadings);
    for (Eigen::Index t : test_idx) {
      Eigen::VectorXd x = scaled.scale_row(data.row(t).transpose());
      for (int a = 1; a <= fold_max; ++a) {
        Eigen::MatrixXd loads = all_loadings.leftCols(a);
        for (Eigen::Index j = 0; j < p; ++j) {
          Eigen::RowVectorXd lj = loads.row(j);
          Eigen::MatrixXd m =
              Eigen::MatrixXd::Identity(a, a) - lj.transpose() * lj;
          Eigen::VectorXd rhs = loads.transpose() * x - lj.transpose() * x(j);
          Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
          Eigen::VectorXd scores =
              lu.isInvertible() ? lu.solve(rhs).eval()
                                : (loads.transpose() * x).eval();
          double pred = lj * scores;
          double err = pred - x(j);
          press[static_cast<std::size_t>(a)] += err * err;
        }
      }
    }
  }
  int best = 1;
  for (int a = 2; a <= max_a; ++a)
    if (press[static_cast<std::size_t>(a)] <
        press[static_cast<std::size_t>(best)] - 1e-15)
      best = a;
  return best;
}

}  // namespace bibscore
