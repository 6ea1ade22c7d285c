#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bibscore/bcs.hpp"
#include "bibscore/csv.hpp"
#include "bibscore/errors.hpp"
#include "bibscore/indicators.hpp"
#include "bibscore/records.hpp"

namespace bibscore {

struct PipelineConfig {
  int window_start = 2006;
  int window_end = 2010;
  std::string field_code = "BIO/14";
  CountingMode counting_mode = CountingMode::kBylineWeighted;
  double percentile_low = 95.0;
  double percentile_high = 97.5;
  double max_inflation = 1.05;
  double confidence = 0.95;
  bool auto_components = false;
  int n_components = 2;
  double train_fraction = 0.75;
  double log_base = 10.0;
  double log_translation = 1.0;
  BcsConfig bcs;
  bool score_box = true;
  std::uint64_t seed = 1;
  std::size_t synth_n = 506;
  double synth_rank_coupling = 0.75;
  int bands_k = 10;
  int band_limit = 50;
  double histogram_bin_width = 0.25;

  void validate() const {
    if (window_start > window_end)
      throw config_error("observation window start exceeds end");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw config_error("train_fraction must be in (0, 1)");
    if (!(confidence > 0.0 && confidence < 1.0))
      throw config_error("confidence must be in (0, 1)");
    if (!(percentile_low > 0.0 && percentile_low <= 100.0) ||
        !(percentile_high > 0.0 && percentile_high <= 100.0) ||
        percentile_low > percentile_high)
      throw config_error("percentile levels must satisfy 0 < low <= high <= 100");
    if (!(max_inflation >= 1.0)) throw config_error("max_inflation must be >= 1");
    if (!(log_base > 1.0)) throw config_error("log_base must exceed 1");
    if (!auto_components && n_components < 1)
      throw config_error("n_components must be >= 1 or auto");
    if (bands_k < 1 || band_limit < bands_k)
      throw config_error("band settings must satisfy 1 <= bands_k <= band_limit");
    if (!(histogram_bin_width > 0.0))
      throw config_error("histogram_bin_width must be positive");
    if (synth_n < 2) throw config_error("synth_n must be >= 2");
    if (!(synth_rank_coupling >= 0.0 && synth_rank_coupling <= 1.0))
      throw config_error("synth_rank_coupling must be in [0, 1]");
    bcs.validate();
  }
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw config_error("key '" + key + "': expected true/false, got '" + value + "'");
}

inline double parse_double(const std::string& key, const std::string& value) {
  auto v = csv::to_double(value);
  if (!v) throw config_error("key '" + key + "': invalid number '" + value + "'");
  return *v;
}

inline long long parse_int(const std::string& key, const std::string& value) {
  auto v = csv::to_int(value);
  if (!v) throw config_error("key '" + key + "': invalid integer '" + value + "'");
  return *v;
}

}  // namespace config_detail

inline PipelineConfig parse_config_text(const std::string& text) {
  using namespace config_detail;
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(line_no) +
                         ": expected key=value, got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "window_start") cfg.window_start = static_cast<int>(parse_int(key, value));
    else if (key == "window_end") cfg.window_end = static_cast<int>(parse_int(key, value));
    else if (key == "field_code") cfg.field_code = value;
    else if (key == "counting_mode") cfg.counting_mode = parse_counting_mode(value);
    else if (key == "percentile_low") cfg.percentile_low = parse_double(key, value);
    else if (key == "percentile_high") cfg.percentile_high = parse_double(key, value);
    else if (key == "max_inflation") cfg.max_inflation = parse_double(key, value);
    else if (key == "confidence") cfg.confidence = parse_double(key, value);
    else if (key == "n_components") {
      if (value == "auto") {
        cfg.auto_components = true;
      } else {
        cfg.auto_components = false;
        cfg.n_components = static_cast<int>(parse_int(key, value));
      }
    } else if (key == "train_fraction") cfg.train_fraction = parse_double(key, value);
    else if (key == "log_base") cfg.log_base = parse_double(key, value);
    else if (key == "log_translation") cfg.log_translation = parse_double(key, value);
    else if (key == "bcs_weights") {
      auto parts = csv::split_record(value);
      if (parts.size() != kNumIndicators)
        throw config_error("bcs_weights: expected 5 comma-separated values");
      for (std::size_t k = 0; k < kNumIndicators; ++k)
        cfg.bcs.weights[k] = parse_double(key, trim(parts[k]));
    } else if (key == "score_box") cfg.score_box = parse_bool(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "synth_n") cfg.synth_n = static_cast<std::size_t>(parse_int(key, value));
    else if (key == "synth_rank_coupling") cfg.synth_rank_coupling = parse_double(key, value);
    else if (key == "bands_k") cfg.bands_k = static_cast<int>(parse_int(key, value));
    else if (key == "band_limit") cfg.band_limit = static_cast<int>(parse_int(key, value));
    else if (key == "histogram_bin_width") cfg.histogram_bin_width = parse_double(key, value);
    else throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

// Canonical key=value echo, used by the run manifest and round-trip tests.
inline std::vector<std::pair<std::string, std::string>> config_key_values(
    const PipelineConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("window_start", std::to_string(cfg.window_start));
  kv.emplace_back("window_end", std::to_string(cfg.window_end));
  kv.emplace_back("field_code", cfg.field_code);
  kv.emplace_back("counting_mode", to_string(cfg.counting_mode));
  kv.emplace_back("percentile_low", csv::format_double(cfg.percentile_low));
  kv.emplace_back("percentile_high", csv::format_double(cfg.percentile_high));
  kv.emplace_back("max_inflation", csv::format_double(cfg.max_inflation));
  kv.emplace_back("confidence", csv::format_double(cfg.confidence));
  kv.emplace_back("n_components",
                  cfg.auto_components ? "auto" : std::to_string(cfg.n_components));
  kv.emplace_back("train_fraction", csv::format_double(cfg.train_fraction));
  kv.emplace_back("log_base", csv::format_double(cfg.log_base));
  kv.emplace_back("log_translation", csv::format_double(cfg.log_translation));
  std::string weights;
  for (std::size_t k = 0; k < kNumIndicators; ++k) {
    if (k) weights += ",";
    weights += csv::format_double(cfg.bcs.weights[k]);
  }
  kv.emplace_back("bcs_weights", weights);
  kv.emplace_back("score_box", cfg.score_box ? "true" : "false");
  kv.emplace_back("seed", std::to_string(cfg.seed));
  kv.emplace_back("synth_n", std::to_string(cfg.synth_n));
  kv.emplace_back("synth_rank_coupling", csv::format_double(cfg.synth_rank_coupling));
  kv.emplace_back("bands_k", std::to_string(cfg.bands_k));
  kv.emplace_back("band_limit", std::to_string(cfg.band_limit));
  kv.emplace_back("histogram_bin_width", csv::format_double(cfg.histogram_bin_width));
  return kv;
}

}  // namespace bibscore
