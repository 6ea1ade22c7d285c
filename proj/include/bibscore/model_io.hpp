#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bibscore/csv.hpp"
#include "bibscore/errors.hpp"
#include "bibscore/records.hpp"
#include "bibscore/simca.hpp"

namespace bibscore {

inline constexpr const char* kModelMagic = "bibscore-simca-model";
inline constexpr int kModelVersion = 1;

namespace model_io_detail {

inline void write_vector(std::ostream& out, const std::string& key,
                         const Eigen::VectorXd& v) {
  out << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << csv::format_double(v(i));
  out << '\n';
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace model_io_detail

inline void save_model(const SimcaClassModel& model, std::ostream& out) {
  using model_io_detail::write_vector;
  auto p = model.center.size();
  int a = model.pca.n_components;
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "variables " << p;
  for (Eigen::Index j = 0; j < p; ++j)
    out << ' '
        << (static_cast<std::size_t>(j) < kNumIndicators
                ? indicator_names()[static_cast<std::size_t>(j)]
                : "x" + std::to_string(j));
  out << '\n';
  out << "n_components " << a << '\n';
  out << "n_train " << model.n_train << '\n';
  out << "confidence " << csv::format_double(model.confidence) << '\n';
  out << "class_rsd " << csv::format_double(model.class_rsd) << '\n';
  out << "critical_squared_distance "
      << csv::format_double(model.critical_squared_distance) << '\n';
  out << "translated_log_critical "
      << csv::format_double(model.translated_log_critical) << '\n';
  out << "log_base " << csv::format_double(model.log_base) << '\n';
  out << "log_translation " << csv::format_double(model.log_translation) << '\n';
  out << "use_score_box " << (model.use_score_box ? "true" : "false") << '\n';
  write_vector(out, "center", model.center);
  write_vector(out, "scale", model.scale);
  write_vector(out, "explained_variance", model.pca.explained_variance);
  write_vector(out, "score_sd", model.pca.score_sd);
  write_vector(out, "score_range_min", model.pca.score_range.col(0));
  write_vector(out, "score_range_max", model.pca.score_range.col(1));
  write_vector(out, "score_box_min", model.score_box.col(0));
  write_vector(out, "score_box_max", model.score_box.col(1));
  write_vector(out, "modeling_power", model.modeling_power);
  out << "loadings " << p << ' ' << a << '\n';
  for (Eigen::Index j = 0; j < p; ++j) {
    for (int k = 0; k < a; ++k) {
      if (k) out << ' ';
      out << csv::format_double(model.pca.loadings(j, k));
    }
    out << '\n';
  }
}

inline void save_model(const SimcaClassModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  save_model(model, out);
  if (!out) throw io_error("failed writing model to '" + path + "'");
}

inline SimcaClassModel load_model(std::istream& in, const std::string& origin) {
  using model_io_detail::tokens;
  auto fail = [&](const std::string& why) -> void {
    throw parse_error({origin + ": " + why});
  };
  auto need_double = [&](const std::string& tok, const std::string& what) {
    auto v = csv::to_double(tok);
    if (!v) fail("invalid number for " + what + ": '" + tok + "'");
    return *v;
  };

  std::string line;
  if (!std::getline(in, line)) fail("empty model file");
  auto head = tokens(line);
  if (head.size() != 2 || head[0] != kModelMagic)
    fail("not a model file (bad magic)");
  if (head[1] != std::to_string(kModelVersion))
    fail("unsupported model version '" + head[1] + "'");

  SimcaClassModel model;
  Eigen::Index p = 0;
  int a = 0;
  auto read_vector = [&](const std::string& key, Eigen::Index expect) {
    if (!std::getline(in, line)) fail("unexpected end of file before '" + key + "'");
    auto toks = tokens(line);
    if (toks.empty() || toks[0] != key) fail("expected '" + key + "' line");
    if (static_cast<Eigen::Index>(toks.size()) != expect + 1)
      fail("'" + key + "' expects " + std::to_string(expect) + " values");
    Eigen::VectorXd v(expect);
    for (Eigen::Index i = 0; i < expect; ++i)
      v(i) = need_double(toks[static_cast<std::size_t>(i) + 1], key);
    return v;
  };
  auto read_scalar_line = [&](const std::string& key) {
    if (!std::getline(in, line)) fail("unexpected end of file before '" + key + "'");
    auto toks = tokens(line);
    if (toks.size() != 2 || toks[0] != key) fail("expected '" + key + " <value>' line");
    return toks[1];
  };

  {
    if (!std::getline(in, line)) fail("missing variables line");
    auto toks = tokens(line);
    if (toks.size() < 2 || toks[0] != "variables") fail("expected 'variables' line");
    auto count = csv::to_int(toks[1]);
    if (!count || *count < 1) fail("invalid variable count");
    p = static_cast<Eigen::Index>(*count);
    if (static_cast<Eigen::Index>(toks.size()) != p + 2)
      fail("variables line must list every variable name");
  }
  {
    auto v = csv::to_int(read_scalar_line("n_components"));
    if (!v || *v < 1) fail("invalid n_components");
    a = static_cast<int>(*v);
    if (a >= p) fail("n_components must be below the variable count");
  }
  {
    auto v = csv::to_int(read_scalar_line("n_train"));
    if (!v || *v < 2) fail("invalid n_train");
    model.n_train = static_cast<Eigen::Index>(*v);
  }
  model.confidence = need_double(read_scalar_line("confidence"), "confidence");
  model.class_rsd = need_double(read_scalar_line("class_rsd"), "class_rsd");
  model.critical_squared_distance = need_double(
      read_scalar_line("critical_squared_distance"), "critical_squared_distance");
  model.translated_log_critical = need_double(read_scalar_line("translated_log_critical"),
                                              "translated_log_critical");
  model.log_base = need_double(read_scalar_line("log_base"), "log_base");
  model.log_translation = need_double(read_scalar_line("log_translation"), "log_translation");
  {
    std::string v = read_scalar_line("use_score_box");
    if (v != "true" && v != "false") fail("use_score_box must be true or false");
    model.use_score_box = v == "true";
  }
  model.center = read_vector("center", p);
  model.scale = read_vector("scale", p);
  for (Eigen::Index j = 0; j < p; ++j)
    if (!(model.scale(j) > 0.0)) fail("scale entries must be positive");
  model.pca.n_components = a;
  model.pca.explained_variance = read_vector("explained_variance", a);
  model.pca.score_sd = read_vector("score_sd", a);
  Eigen::VectorXd range_min = read_vector("score_range_min", a);
  Eigen::VectorXd range_max = read_vector("score_range_max", a);
  model.pca.score_range.resize(a, 2);
  model.pca.score_range.col(0) = range_min;
  model.pca.score_range.col(1) = range_max;
  Eigen::VectorXd box_min = read_vector("score_box_min", a);
  Eigen::VectorXd box_max = read_vector("score_box_max", a);
  model.score_box.resize(a, 2);
  model.score_box.col(0) = box_min;
  model.score_box.col(1) = box_max;
  model.modeling_power = read_vector("modeling_power", p);
  {
    if (!std::getline(in, line)) fail("missing loadings header");
    auto toks = tokens(line);
    if (toks.size() != 3 || toks[0] != "loadings") fail("expected 'loadings <p> <A>' line");
    if (toks[1] != std::to_string(p) || toks[2] != std::to_string(a))
      fail("loadings dimensions disagree with header");
  }
  model.pca.loadings.resize(p, a);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!std::getline(in, line)) fail("truncated loadings block");
    auto toks = tokens(line);
    if (static_cast<int>(toks.size()) != a) fail("loadings row has wrong arity");
    for (int k = 0; k < a; ++k)
      model.pca.loadings(j, k) = need_double(toks[static_cast<std::size_t>(k)], "loadings");
  }
  if (!(model.critical_squared_distance > 0.0))
    fail("critical_squared_distance must be positive");
  return model;
}

inline SimcaClassModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open model file '" + path + "'");
  return load_model(in, path);
}

}  // namespace bibscore
