#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bibscore/bibscore.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitComputation = 2;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  long long seed = -1;  // -1 = keep the config value
};

bibscore::PipelineConfig load_config_or_default(const CommonArgs& args) {
  bibscore::PipelineConfig cfg;
  if (!args.config_path.empty()) cfg = bibscore::load_config(args.config_path);
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--out-dir", args.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", args.seed, "override the config seed");
}

std::string joined(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw bibscore::io_error("cannot create output directory '" + dir + "'");
}

int run_indicators(const CommonArgs& args, const bibscore::RawDataPaths& paths) {
  auto cfg = load_config_or_default(args);
  ensure_out_dir(args.out_dir);
  bibscore::RawDataset data =
      bibscore::load_raw_dataset(paths, cfg.window_start, cfg.window_end);
  std::vector<bibscore::IndicatorVector> population;
  for (const auto& profile : data.profiles)
    population.push_back(
        bibscore::compute_indicators(profile, data.baseline, cfg.counting_mode));
  bibscore::write_indicator_table(joined(args.out_dir, "indicators.csv"), population);
  std::cout << "wrote indicators for " << population.size() << " researchers\n";
  return kExitOk;
}

int run_simca_fit(const CommonArgs& args, const std::string& indicators_path) {
  auto cfg = load_config_or_default(args);
  ensure_out_dir(args.out_dir);
  std::vector<std::string> warnings;
  auto population = bibscore::load_indicator_table(indicators_path, &warnings);
  print_warnings(warnings);
  auto design = bibscore::build_excellence_class(population, cfg.percentile_low,
                                                 cfg.percentile_high, cfg.max_inflation);
  auto scaled = bibscore::autoscale(design.design_matrix);
  auto split = bibscore::kennard_stone_split(scaled.rows, cfg.train_fraction);
  Eigen::MatrixXd train(static_cast<Eigen::Index>(split.train.size()),
                        design.design_matrix.cols());
  for (std::size_t i = 0; i < split.train.size(); ++i)
    train.row(static_cast<Eigen::Index>(i)) = design.design_matrix.row(split.train[i]);
  bibscore::SimcaFitOptions opts;
  opts.confidence = cfg.confidence;
  opts.n_components = cfg.n_components;
  opts.auto_components = cfg.auto_components;
  opts.log_base = cfg.log_base;
  opts.log_translation = cfg.log_translation;
  opts.use_score_box = cfg.score_box;
  auto model = bibscore::fit_class_model(train, opts);
  bibscore::save_model(model, joined(args.out_dir, "model.txt"));
  std::cout << "fitted SIMCA model: A=" << model.pca.n_components
            << " s0=" << model.class_rsd
            << " critical_d2=" << model.critical_squared_distance
            << " critical_tl=" << model.translated_log_critical << '\n';
  return kExitOk;
}

int run_simca_score(const CommonArgs& args, const std::string& model_path,
                    const std::string& indicators_path) {
  ensure_out_dir(args.out_dir);
  auto model = bibscore::load_model(model_path);
  std::vector<std::string> warnings;
  auto population = bibscore::load_indicator_table(indicators_path, &warnings);
  print_warnings(warnings);
  std::vector<bibscore::ScoredResearcher> rows;
  for (const auto& vec : population) {
    auto s = bibscore::score(model, vec);
    bibscore::ScoredResearcher r;
    r.researcher_id = vec.researcher_id;
    r.indicators = vec.values;
    r.squared_distance = s.squared_distance;
    r.translated_log = s.translated_log;
    r.accepted = s.accepted;
    rows.push_back(std::move(r));
  }
  bibscore::write_scores_csv(joined(args.out_dir, "scores.csv"), rows);
  std::cout << "scored " << rows.size() << " researchers\n";
  return kExitOk;
}

int run_bcs(const CommonArgs& args, const std::string& indicators_path) {
  auto cfg = load_config_or_default(args);
  ensure_out_dir(args.out_dir);
  std::vector<std::string> warnings;
  auto population = bibscore::load_indicator_table(indicators_path, &warnings);
  print_warnings(warnings);
  auto ctx = bibscore::build_standardization_context(population);
  std::vector<bibscore::ScoredResearcher> rows;
  for (const auto& vec : population) {
    bibscore::ScoredResearcher r;
    r.researcher_id = vec.researcher_id;
    r.indicators = vec.values;
    r.bcs = bibscore::bcs_from_raw(vec, ctx, cfg.bcs);
    rows.push_back(std::move(r));
  }
  auto table = bibscore::rank_report(rows, cfg.bands_k, cfg.band_limit);
  bibscore::write_bcs_csv(joined(args.out_dir, "bcs.csv"), table);
  std::cout << "wrote BCS for " << rows.size() << " researchers\n";
  return kExitOk;
}

int run_compare(const CommonArgs& args, const std::string& model_path,
                const std::string& indicators_path) {
  auto cfg = load_config_or_default(args);
  ensure_out_dir(args.out_dir);
  auto model = bibscore::load_model(model_path);
  std::vector<std::string> warnings;
  auto population = bibscore::load_indicator_table(indicators_path, &warnings);
  print_warnings(warnings);
  auto ctx = bibscore::build_standardization_context(population);
  std::vector<bibscore::ScoredResearcher> rows;
  for (const auto& vec : population) {
    auto s = bibscore::score(model, vec);
    bibscore::ScoredResearcher r;
    r.researcher_id = vec.researcher_id;
    r.indicators = vec.values;
    r.bcs = bibscore::bcs_from_raw(vec, ctx, cfg.bcs);
    r.squared_distance = s.squared_distance;
    r.translated_log = s.translated_log;
    r.accepted = s.accepted;
    rows.push_back(std::move(r));
  }
  auto table = bibscore::rank_report(rows, cfg.bands_k, cfg.band_limit);
  bibscore::write_rank_table_csv(joined(args.out_dir, "rank_table.csv"), table);
  bibscore::write_bcs_csv(joined(args.out_dir, "bcs.csv"), table);
  std::vector<bibscore::ScoredResearcher> flat(table.rows.begin(), table.rows.end());
  bibscore::write_scores_csv(joined(args.out_dir, "scores.csv"), flat);
  bibscore::write_scatter_csv(joined(args.out_dir, "scatter.csv"), table);
  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : table.rows)
    (r.simca_rank <= cfg.band_limit ? groups["Best50"] : groups["Other"])
        .push_back(r.translated_log);
  bibscore::write_histogram_csv(joined(args.out_dir, "histogram.csv"),
                                bibscore::histogram_data(groups, cfg.histogram_bin_width));
  if (rows.size() >= 2) {
    std::vector<double> b, neg;
    for (const auto& r : rows) {
      b.push_back(r.bcs);
      neg.push_back(-r.translated_log);
    }
    std::cout << "spearman(bcs, -translated_log) = " << bibscore::spearman(b, neg) << '\n';
  }
  return kExitOk;
}

int run_synth(const CommonArgs& args, const std::string& stats_path) {
  auto cfg = load_config_or_default(args);
  ensure_out_dir(args.out_dir);
  auto stats = bibscore::load_population_stats(stats_path);
  bibscore::SynthOptions opts;
  opts.rank_coupling = cfg.synth_rank_coupling;
  auto population =
      bibscore::synthesize_population(stats, cfg.synth_n, cfg.seed, cfg.field_code, opts);
  bibscore::write_indicator_table(joined(args.out_dir, "indicators.csv"), population);
  std::cout << "synthesized " << population.size() << " researchers (seed " << cfg.seed
            << ")\n";
  return kExitOk;
}

int run_full_pipeline(const CommonArgs& args, const bibscore::PipelineInput& input) {
  auto cfg = load_config_or_default(args);
  auto result = bibscore::run_pipeline(cfg, input, args.out_dir);
  print_warnings(result.load_warnings);
  std::cout << "pipeline complete: " << result.population.size() << " researchers, A="
            << result.model.pca.n_components
            << ", critical_tl=" << result.model.translated_log_critical
            << ", sensitivity=" << result.sensitivity_train << "/"
            << result.sensitivity_test << ", acceptance=" << result.acceptance_real
            << ", spearman=" << result.spearman_full << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Researcher scoring toolkit: SIMCA class modeling vs. a weighted composite"};
  app.require_subcommand(1);

  CommonArgs common;
  bibscore::RawDataPaths raw;
  bibscore::PipelineInput input;
  std::string indicators_path, model_path, stats_path;

  auto* c_ind = app.add_subcommand("indicators", "compute indicators from raw records");
  add_common(c_ind, common);
  c_ind->add_option("--publications", raw.publications)->required();
  c_ind->add_option("--authorships", raw.authorships)->required();
  c_ind->add_option("--researchers", raw.researchers)->required();
  c_ind->add_option("--baseline", raw.baseline, "precomputed baseline cells");
  c_ind->add_option("--corpus", raw.reference_corpus, "reference corpus of citation counts");

  auto* c_fit = app.add_subcommand("simca-fit", "fit the excellence-class SIMCA model");
  add_common(c_fit, common);
  c_fit->add_option("--indicators", indicators_path)->required();

  auto* c_score = app.add_subcommand("simca-score", "score researchers against a model");
  add_common(c_score, common);
  c_score->add_option("--model", model_path)->required();
  c_score->add_option("--indicators", indicators_path)->required();

  auto* c_bcs = app.add_subcommand("bcs", "compute the weighted composite score");
  add_common(c_bcs, common);
  c_bcs->add_option("--indicators", indicators_path)->required();

  auto* c_cmp = app.add_subcommand("compare", "rank table, histogram, and scatter reports");
  add_common(c_cmp, common);
  c_cmp->add_option("--model", model_path)->required();
  c_cmp->add_option("--indicators", indicators_path)->required();

  auto* c_syn = app.add_subcommand("synth", "synthesize a population from summary stats");
  add_common(c_syn, common);
  c_syn->add_option("--stats", stats_path)->required();

  auto* c_pipe = app.add_subcommand("pipeline", "run the full end-to-end pipeline");
  add_common(c_pipe, common);
  c_pipe->add_option("--indicators", input.indicators_path, "precomputed indicator table");
  c_pipe->add_option("--stats", input.stats_path, "summary stats for synthesis");
  c_pipe->add_option("--publications", input.raw.publications);
  c_pipe->add_option("--authorships", input.raw.authorships);
  c_pipe->add_option("--researchers", input.raw.researchers);
  c_pipe->add_option("--baseline", input.raw.baseline);
  c_pipe->add_option("--corpus", input.raw.reference_corpus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // clamp CLI11's per-error codes to the documented contract
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (c_ind->parsed()) {
      if (raw.baseline.empty() && raw.reference_corpus.empty())
        throw bibscore::input_error("give --baseline or --corpus");
      return run_indicators(common, raw);
    }
    if (c_fit->parsed()) return run_simca_fit(common, indicators_path);
    if (c_score->parsed()) return run_simca_score(common, model_path, indicators_path);
    if (c_bcs->parsed()) return run_bcs(common, indicators_path);
    if (c_cmp->parsed()) return run_compare(common, model_path, indicators_path);
    if (c_syn->parsed()) return run_synth(common, stats_path);
    if (c_pipe->parsed()) return run_full_pipeline(common, input);
    std::cerr << "error: no subcommand\n";
    return kExitInput;
  } catch (const bibscore::stage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.input_cause() ? kExitInput : kExitComputation;
  } catch (const bibscore::input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const bibscore::io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const bibscore::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputation;
  }
}
