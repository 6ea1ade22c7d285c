#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bibscore/bcs.hpp"
#include "bibscore/config.hpp"
#include "bibscore/errors.hpp"
#include "bibscore/evaluation.hpp"
#include "bibscore/indicators.hpp"
#include "bibscore/io.hpp"
#include "bibscore/model_io.hpp"
#include "bibscore/records.hpp"
#include "bibscore/simca.hpp"
#include "bibscore/synth.hpp"
#include "bibscore/version.hpp"

namespace bibscore {

// Where the pipeline's population comes from; exactly one source is used,
// preferring precomputed indicators, then raw records, then synthesis.
struct PipelineInput {
  std::string indicators_path;
  RawDataPaths raw;
  std::string stats_path;
};

struct PipelineResult {
  std::vector<IndicatorVector> population;
  std::vector<std::string> load_warnings;
  ExcellenceDesign design;
  KennardStoneSplit split;
  SimcaClassModel model;
  double sensitivity_train = 0.0;
  double sensitivity_test = 0.0;
  std::vector<double> train_scores;  // translated logs of artificial rows
  std::vector<double> test_scores;
  RankTable table;
  double acceptance_real = 0.0;
  std::size_t accepted_count = 0;
  double spearman_full = 0.0;
  bool spearman_top_defined = false;
  double spearman_top = 0.0;
  int top_k = 0;
};

namespace pipeline_detail {

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const stage_error&) {
    throw;
  } catch (const input_error& e) {
    throw stage_error(name, e.what(), true);
  } catch (const error& e) {
    throw stage_error(name, e.what(), false);
  } catch (const std::exception& e) {
    throw stage_error(name, e.what(), false);
  }
}

inline Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m,
                                 const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  return out;
}

}  // namespace pipeline_detail

inline Eigen::MatrixXd population_matrix(const std::vector<IndicatorVector>& population) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(population.size()), kNumIndicators);
  for (std::size_t i = 0; i < population.size(); ++i)
    for (std::size_t j = 0; j < kNumIndicators; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          population[i].values[j];
  return m;
}

// End-to-end computation with no filesystem access: excellence design,
// Kennard-Stone split, SIMCA fit, artificial-set sensitivity, real-set
// scoring, BCS, and the comparison table.
inline PipelineResult run_pipeline_core(const PipelineConfig& config,
                                        std::vector<IndicatorVector> population) {
  using pipeline_detail::stage;
  using pipeline_detail::take_rows;
  config.validate();

  PipelineResult result;
  result.population = std::move(population);
  if (result.population.empty())
    throw stage_error("load", "no researchers", true);

  result.design = stage("excellence_design", [&] {
    return build_excellence_class(result.population, config.percentile_low,
                                  config.percentile_high, config.max_inflation);
  });

  result.split = stage("kennard_stone", [&] {
    // distances measured on the design autoscaled over all 1024 rows
    ScaledMatrix scaled = autoscale(result.design.design_matrix);
    return kennard_stone_split(scaled.rows, config.train_fraction);
  });

  Eigen::MatrixXd train_raw = take_rows(result.design.design_matrix, result.split.train);
  Eigen::MatrixXd test_raw = take_rows(result.design.design_matrix, result.split.test);

  result.model = stage("simca_fit", [&] {
    SimcaFitOptions opts;
    opts.confidence = config.confidence;
    opts.n_components = config.n_components;
    opts.auto_components = config.auto_components;
    opts.log_base = config.log_base;
    opts.log_translation = config.log_translation;
    opts.use_score_box = config.score_box;
    return fit_class_model(train_raw, opts);
  });

  stage("sensitivity", [&] {
    result.sensitivity_train = sensitivity(result.model, train_raw);
    result.sensitivity_test = sensitivity(result.model, test_raw);
    for (Eigen::Index i = 0; i < train_raw.rows(); ++i)
      result.train_scores.push_back(
          score(result.model, Eigen::VectorXd(train_raw.row(i).transpose())).translated_log);
    for (Eigen::Index i = 0; i < test_raw.rows(); ++i)
      result.test_scores.push_back(
          score(result.model, Eigen::VectorXd(test_raw.row(i).transpose())).translated_log);
    return 0;
  });

  std::vector<ScoredResearcher> scored = stage("score", [&] {
    std::vector<ScoredResearcher> rows;
    rows.reserve(result.population.size());
    for (const auto& vec : result.population) {
      SimcaScore s = score(result.model, vec);
      ScoredResearcher r;
      r.researcher_id = vec.researcher_id;
      r.indicators = vec.values;
      r.squared_distance = s.squared_distance;
      r.translated_log = s.translated_log;
      r.accepted = s.accepted;
      rows.push_back(std::move(r));
    }
    return rows;
  });

  stage("bcs", [&] {
    StandardizationContext ctx = build_standardization_context(result.population);
    for (std::size_t i = 0; i < scored.size(); ++i)
      scored[i].bcs = bcs_from_raw(result.population[i], ctx, config.bcs);
    return 0;
  });

  stage("report", [&] {
    result.table = rank_report(scored, config.bands_k, config.band_limit);
    result.accepted_count = 0;
    for (const auto& r : result.table.rows)
      if (r.accepted) ++result.accepted_count;
    result.acceptance_real =
        static_cast<double>(result.accepted_count) / static_cast<double>(scored.size());
    if (scored.size() >= 2) {
      std::vector<double> b, neg_tl;
      for (const auto& r : scored) {
        b.push_back(r.bcs);
        neg_tl.push_back(-r.translated_log);
      }
      result.spearman_full = spearman(b, neg_tl);
      result.top_k = std::min<int>(config.band_limit,
                                   static_cast<int>(result.table.rows.size()));
      std::vector<double> tb, tn;
      for (const auto& r : result.table.rows)
        if (r.bcs_rank <= result.top_k) {
          tb.push_back(r.bcs);
          tn.push_back(-r.translated_log);
        }
      try {
        result.spearman_top = spearman(tb, tn);
        result.spearman_top_defined = true;
      } catch (const undefined_correlation_error&) {
        result.spearman_top_defined = false;
      }
    } else {
      throw insufficient_data_error("rank correlation needs at least 2 researchers");
    }
    return 0;
  });

  return result;
}

inline std::vector<IndicatorVector> load_pipeline_population(
    const PipelineConfig& config, const PipelineInput& input,
    std::vector<std::string>* warnings = nullptr) {
  using pipeline_detail::stage;
  return stage("load", [&]() -> std::vector<IndicatorVector> {
    std::vector<IndicatorVector> population;
    if (!input.indicators_path.empty()) {
      population = load_indicator_table(input.indicators_path, warnings);
    } else if (!input.raw.publications.empty()) {
      RawDataset data = load_raw_dataset(input.raw, config.window_start, config.window_end);
      for (const auto& profile : data.profiles)
        population.push_back(
            compute_indicators(profile, data.baseline, config.counting_mode));
    } else if (!input.stats_path.empty()) {
      PopulationStats stats = load_population_stats(input.stats_path);
      SynthOptions opts;
      opts.rank_coupling = config.synth_rank_coupling;
      population = synthesize_population(stats, config.synth_n, config.seed,
                                         config.field_code, opts);
    } else {
      throw input_error("no population source: give indicators, raw records, or stats");
    }
    std::vector<IndicatorVector> selected;
    for (auto& vec : population)
      if (vec.field_code == config.field_code) selected.push_back(std::move(vec));
    if (selected.empty())
      throw input_error("no researchers in field '" + config.field_code + "'");
    return selected;
  });
}

// Writes the full report bundle; on any stage failure every file already
// written by this run is removed before the error propagates.
inline PipelineResult run_pipeline(const PipelineConfig& config, const PipelineInput& input,
                                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory '" + out_dir + "'");

  std::vector<std::string> written;
  auto target = [&](const std::string& name) {
    std::string path = (fs::path(out_dir) / name).string();
    written.push_back(path);
    return path;
  };
  try {
    PipelineResult result;
    result.load_warnings.clear();
    std::vector<IndicatorVector> population =
        load_pipeline_population(config, input, &result.load_warnings);
    auto warnings = std::move(result.load_warnings);
    result = run_pipeline_core(config, std::move(population));
    result.load_warnings = std::move(warnings);

    pipeline_detail::stage("write_reports", [&] {
      write_indicator_table(target("indicators.csv"), result.population);
      save_model(result.model, target("model.txt"));

      std::vector<ScoredResearcher> flat(result.table.rows.begin(),
                                         result.table.rows.end());
      write_scores_csv(target("scores.csv"), flat);
      write_bcs_csv(target("bcs.csv"), result.table);
      write_rank_table_csv(target("rank_table.csv"), result.table);
      write_scatter_csv(target("scatter.csv"), result.table);

      std::map<std::string, std::vector<double>> groups;
      groups["Artif75%"] = result.train_scores;
      groups["Artif25%"] = result.test_scores;
      for (const auto& r : result.table.rows)
        (r.simca_rank <= config.band_limit ? groups["Best50"] : groups["Other"])
            .push_back(r.translated_log);
      write_histogram_csv(target("histogram.csv"),
                          histogram_data(groups, config.histogram_bin_width));

      std::ofstream manifest(target("manifest.txt"));
      if (!manifest) throw io_error("cannot open manifest for writing");
      manifest << "tool_version " << kVersion << '\n';
      manifest << "model_format_version " << kModelFormatVersion << '\n';
      for (const auto& [key, value] : config_key_values(config))
        manifest << "config." << key << ' ' << value << '\n';
      manifest << "n_researchers " << result.population.size() << '\n';
      manifest << "n_artificial " << result.design.design_matrix.rows() << '\n';
      manifest << "n_train " << result.split.train.size() << '\n';
      manifest << "n_test " << result.split.test.size() << '\n';
      manifest << "n_components " << result.model.pca.n_components << '\n';
      manifest << "class_rsd " << csv::format_double(result.model.class_rsd) << '\n';
      manifest << "critical_squared_distance "
               << csv::format_double(result.model.critical_squared_distance) << '\n';
      manifest << "translated_log_critical "
               << csv::format_double(result.model.translated_log_critical) << '\n';
      manifest << "modeling_power";
      for (Eigen::Index j = 0; j < result.model.modeling_power.size(); ++j)
        manifest << ' ' << csv::format_double(result.model.modeling_power(j));
      manifest << '\n';
      manifest << "sensitivity_train " << csv::format_double(result.sensitivity_train)
               << '\n';
      manifest << "sensitivity_test " << csv::format_double(result.sensitivity_test) << '\n';
      manifest << "accepted_count " << result.accepted_count << '\n';
      manifest << "acceptance_real " << csv::format_double(result.acceptance_real) << '\n';
      manifest << "spearman_bcs_vs_simca " << csv::format_double(result.spearman_full)
               << '\n';
      manifest << "spearman_top" << result.top_k << ' '
               << (result.spearman_top_defined ? csv::format_double(result.spearman_top)
                                               : "undefined")
               << '\n';
      for (const auto& w : result.load_warnings) manifest << "warning " << w << '\n';
      if (!manifest) throw io_error("failed writing manifest");
      return 0;
    });
    return result;
  } catch (...) {
    for (const auto& path : written) std::remove(path.c_str());
    throw;
  }
}

}  // namespace bibscore
