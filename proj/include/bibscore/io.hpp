#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bibscore/bcs.hpp"
#include "bibscore/csv.hpp"
#include "bibscore/errors.hpp"
#include "bibscore/evaluation.hpp"
#include "bibscore/indicators.hpp"
#include "bibscore/records.hpp"
#include "bibscore/stats.hpp"

namespace bibscore {

namespace io_detail {

inline std::string at(const std::string& path, std::size_t row_index) {
  // +2: header is line 1, first data row is line 2
  return path + " line " + std::to_string(row_index + 2);
}

inline double get_double(const csv::Table& t, std::size_t row, std::size_t col,
                         const std::string& what, std::vector<std::string>& problems) {
  const auto& field = t.rows[row][col];
  auto v = csv::to_double(field);
  if (!v) {
    problems.push_back(at(t.path, row) + ": invalid " + what + " '" + field + "'");
    return 0.0;
  }
  return *v;
}

inline long long get_int(const csv::Table& t, std::size_t row, std::size_t col,
                         const std::string& what, std::vector<std::string>& problems) {
  const auto& field = t.rows[row][col];
  auto v = csv::to_int(field);
  if (!v) {
    problems.push_back(at(t.path, row) + ": invalid " + what + " '" + field + "'");
    return 0;
  }
  return *v;
}

inline void check_arity(const csv::Table& t, std::vector<std::string>& problems) {
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.rows[i].size() != t.header.size())
      problems.push_back(at(t.path, i) + ": expected " + std::to_string(t.header.size()) +
                         " fields, got " + std::to_string(t.rows[i].size()));
}

}  // namespace io_detail

// ---- indicator tables ----------------------------------------------------

// Reads indicators.csv. Transcribed published tables can carry hca5 < hca1
// rows; those are reported through `warnings` instead of failing the load.
inline std::vector<IndicatorVector> load_indicator_table(
    const std::string& path, std::vector<std::string>* warnings = nullptr) {
  csv::Table t = csv::read_file(path);
  std::vector<std::string> problems;
  io_detail::check_arity(t, problems);
  if (!problems.empty()) throw parse_error(std::move(problems));

  std::size_t c_id = t.column("researcher_id");
  std::size_t c_field = t.column("field_code");
  std::array<std::size_t, kNumIndicators> c_val{};
  for (std::size_t j = 0; j < kNumIndicators; ++j) c_val[j] = t.column(indicator_names()[j]);

  std::vector<IndicatorVector> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    IndicatorVector vec;
    vec.researcher_id = t.rows[i][c_id];
    vec.field_code = t.rows[i][c_field];
    if (vec.researcher_id.empty())
      problems.push_back(io_detail::at(path, i) + ": empty researcher_id");
    else if (!seen.insert(vec.researcher_id).second)
      problems.push_back(io_detail::at(path, i) + ": duplicate researcher_id '" +
                         vec.researcher_id + "'");
    for (std::size_t j = 0; j < kNumIndicators; ++j) {
      vec.values[j] =
          io_detail::get_double(t, i, c_val[j], indicator_names()[j], problems);
      if (vec.values[j] < 0.0)
        problems.push_back(io_detail::at(path, i) + ": negative " + indicator_names()[j]);
    }
    if (vec.values[2] < vec.values[1]) {
      std::string note = io_detail::at(path, i) + ": researcher " + vec.researcher_id +
                         " has hca5 < hca1 (kept as transcribed)";
      if (warnings) warnings->push_back(note);
    }
    out.push_back(std::move(vec));
  }
  if (!problems.empty()) throw parse_error(std::move(problems));
  if (out.empty()) throw parse_error({path + ": no researchers"});
  return out;
}

inline void write_indicator_table(const std::string& path,
                                  const std::vector<IndicatorVector>& population) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  std::vector<std::string> header = {"researcher_id", "field_code"};
  for (const auto& name : indicator_names()) header.push_back(name);
  csv::write_record(out, header);
  for (const auto& vec : population) {
    std::vector<std::string> row = {vec.researcher_id, vec.field_code};
    for (double v : vec.values) row.push_back(csv::format_double(v));
    csv::write_record(out, row);
  }
  if (!out) throw io_error("failed writing '" + path + "'");
}

// ---- raw publication data ------------------------------------------------

struct RawDataset {
  std::vector<ResearcherProfile> profiles;
  ReferenceBaseline baseline;
};

struct RawDataPaths {
  std::string publications;
  std::string authorships;
  std::string researchers;
  std::string baseline;         // precomputed cells; exclusive with corpus
  std::string reference_corpus; // raw per-publication counts
};

inline ReferenceBaseline load_baseline_cells(const std::string& path) {
  csv::Table t = csv::read_file(path);
  std::vector<std::string> problems;
  io_detail::check_arity(t, problems);
  if (!problems.empty()) throw parse_error(std::move(problems));
  std::size_t c_year = t.column("year");
  std::size_t c_cat = t.column("category");
  std::size_t c_mean = t.column("cited_mean");
  std::size_t c_p95 = t.column("p95_threshold");
  std::size_t c_p99 = t.column("p99_threshold");
  ReferenceBaseline baseline;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    int year = static_cast<int>(io_detail::get_int(t, i, c_year, "year", problems));
    BaselineCell cell;
    cell.cited_mean = io_detail::get_double(t, i, c_mean, "cited_mean", problems);
    cell.thresholds[95.0] = io_detail::get_double(t, i, c_p95, "p95_threshold", problems);
    cell.thresholds[99.0] = io_detail::get_double(t, i, c_p99, "p99_threshold", problems);
    if (!problems.empty()) continue;
    try {
      baseline.add_cell(year, t.rows[i][c_cat], std::move(cell));
    } catch (const input_error& e) {
      problems.push_back(io_detail::at(path, i) + ": " + e.what());
    }
  }
  if (!problems.empty()) throw parse_error(std::move(problems));
  return baseline;
}

inline ReferenceBaseline load_reference_corpus(const std::string& path) {
  csv::Table t = csv::read_file(path);
  std::vector<std::string> problems;
  io_detail::check_arity(t, problems);
  if (!problems.empty()) throw parse_error(std::move(problems));
  std::size_t c_year = t.column("year");
  std::size_t c_cat = t.column("category");
  std::size_t c_cites = t.column("citations");
  std::vector<std::tuple<int, std::string, double>> entries;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    int year = static_cast<int>(io_detail::get_int(t, i, c_year, "year", problems));
    double cites = io_detail::get_double(t, i, c_cites, "citations", problems);
    if (cites < 0) problems.push_back(io_detail::at(path, i) + ": negative citations");
    entries.emplace_back(year, t.rows[i][c_cat], cites);
  }
  if (!problems.empty()) throw parse_error(std::move(problems));
  try {
    return ReferenceBaseline::from_corpus(entries);
  } catch (const input_error& e) {
    throw parse_error({path + ": " + e.what()});
  }
}

// Loads and cross-validates publications + authorships + researchers,
// reporting every violation found rather than stopping at the first.
inline RawDataset load_raw_dataset(const RawDataPaths& paths, int window_start,
                                   int window_end) {
  std::vector<std::string> problems;

  csv::Table pubs = csv::read_file(paths.publications);
  csv::Table auths = csv::read_file(paths.authorships);
  csv::Table res = csv::read_file(paths.researchers);
  io_detail::check_arity(pubs, problems);
  io_detail::check_arity(auths, problems);
  io_detail::check_arity(res, problems);
  if (!problems.empty()) throw parse_error(std::move(problems));

  std::map<std::string, PublicationRecord> records;
  {
    std::size_t c_id = pubs.column("pub_id");
    std::size_t c_year = pubs.column("year");
    std::size_t c_cats = pubs.column("categories");
    std::size_t c_cites = pubs.column("citations");
    for (std::size_t i = 0; i < pubs.rows.size(); ++i) {
      PublicationRecord rec;
      rec.pub_id = pubs.rows[i][c_id];
      rec.year = static_cast<int>(io_detail::get_int(pubs, i, c_year, "year", problems));
      long long cites = io_detail::get_int(pubs, i, c_cites, "citations", problems);
      if (cites < 0)
        problems.push_back(io_detail::at(paths.publications, i) + ": negative citations");
      rec.citations = static_cast<double>(cites);
      std::string cats = pubs.rows[i][c_cats];
      std::size_t start = 0;
      while (start <= cats.size()) {
        auto bar = cats.find('|', start);
        std::string cat = cats.substr(start, bar == std::string::npos ? bar : bar - start);
        if (!cat.empty()) rec.subject_categories.push_back(cat);
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
      if (rec.subject_categories.empty())
        problems.push_back(io_detail::at(paths.publications, i) + ": no subject category");
      if (rec.year < window_start || rec.year > window_end)
        problems.push_back(io_detail::at(paths.publications, i) + ": publication " +
                           rec.pub_id + " year " + std::to_string(rec.year) +
                           " outside observation window " + std::to_string(window_start) +
                           "-" + std::to_string(window_end));
      if (rec.pub_id.empty())
        problems.push_back(io_detail::at(paths.publications, i) + ": empty pub_id");
      else if (records.count(rec.pub_id))
        problems.push_back(io_detail::at(paths.publications, i) + ": duplicate pub_id '" +
                           rec.pub_id + "'");
      else
        records.emplace(rec.pub_id, std::move(rec));
    }
  }
  {
    std::size_t c_pub = auths.column("pub_id");
    std::size_t c_pos = auths.column("position");
    std::size_t c_aff = auths.column("affiliation_id");
    std::size_t c_res = auths.column("researcher_id");
    for (std::size_t i = 0; i < auths.rows.size(); ++i) {
      Authorship a;
      a.pub_id = auths.rows[i][c_pub];
      a.position = static_cast<int>(io_detail::get_int(auths, i, c_pos, "position", problems));
      a.affiliation_id = auths.rows[i][c_aff];
      a.researcher_id = auths.rows[i][c_res];
      auto it = records.find(a.pub_id);
      if (it == records.end()) {
        problems.push_back(io_detail::at(paths.authorships, i) +
                           ": authorship references missing publication '" + a.pub_id + "'");
        continue;
      }
      it->second.byline.push_back(std::move(a));
    }
  }
  for (auto& [pub_id, rec] : records) {
    try {
      validate_byline(rec.byline);
    } catch (const input_error& e) {
      problems.push_back(paths.authorships + ": publication " + pub_id + ": " + e.what());
    }
    std::sort(rec.byline.begin(), rec.byline.end(),
              [](const Authorship& a, const Authorship& b) { return a.position < b.position; });
  }

  RawDataset out;
  std::map<std::string, std::size_t> profile_index;
  {
    std::size_t c_id = res.column("researcher_id");
    std::size_t c_field = res.column("field_code");
    std::size_t c_years = res.column("years_active");
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
      ResearcherProfile p;
      p.researcher_id = res.rows[i][c_id];
      p.field_code = res.rows[i][c_field];
      p.years_active = io_detail::get_double(res, i, c_years, "years_active", problems);
      if (p.years_active < 1.0)
        problems.push_back(io_detail::at(paths.researchers, i) + ": years_active must be >= 1");
      if (p.researcher_id.empty())
        problems.push_back(io_detail::at(paths.researchers, i) + ": empty researcher_id");
      else if (profile_index.count(p.researcher_id))
        problems.push_back(io_detail::at(paths.researchers, i) +
                           ": duplicate researcher_id '" + p.researcher_id + "'");
      else {
        profile_index[p.researcher_id] = out.profiles.size();
        out.profiles.push_back(std::move(p));
      }
    }
  }
  for (const auto& [pub_id, rec] : records) {
    std::set<std::string> in_byline;
    for (const auto& a : rec.byline) {
      if (a.researcher_id.empty()) continue;
      auto it = profile_index.find(a.researcher_id);
      if (it == profile_index.end()) {
        problems.push_back(paths.authorships + ": publication " + pub_id +
                           " names unknown researcher '" + a.researcher_id + "'");
        continue;
      }
      if (!in_byline.insert(a.researcher_id).second) {
        problems.push_back(paths.authorships + ": publication " + pub_id +
                           " lists researcher '" + a.researcher_id + "' twice");
        continue;
      }
      out.profiles[it->second].contributions.push_back({rec, a.position});
    }
  }
  if (out.profiles.empty()) problems.push_back(paths.researchers + ": no researchers");
  if (!problems.empty()) throw parse_error(std::move(problems));

  if (!paths.baseline.empty()) out.baseline = load_baseline_cells(paths.baseline);
  else if (!paths.reference_corpus.empty())
    out.baseline = load_reference_corpus(paths.reference_corpus);
  else
    throw input_error("either baseline.csv or reference_corpus.csv must be supplied");
  return out;
}

// ---- population statistics ------------------------------------------------

inline PopulationStats compute_population_stats(
    const std::vector<IndicatorVector>& population) {
  if (population.empty()) throw input_error("compute_population_stats: empty population");
  PopulationStats s;
  for (std::size_t j = 0; j < kNumIndicators; ++j) {
    std::vector<double> col;
    col.reserve(population.size());
    for (const auto& v : population) col.push_back(v.values[j]);
    s.mean[j] = stats::mean(col);
    s.median[j] = stats::median(col);
    s.min[j] = *std::min_element(col.begin(), col.end());
    s.max[j] = *std::max_element(col.begin(), col.end());
    s.sd[j] = stats::sample_sd(col);
  }
  s.validate();
  return s;
}

// Reads a Table-1-style descriptive statistics file keyed by indicator name.
inline PopulationStats load_population_stats(const std::string& path) {
  csv::Table t = csv::read_file(path);
  std::vector<std::string> problems;
  io_detail::check_arity(t, problems);
  if (!problems.empty()) throw parse_error(std::move(problems));
  std::size_t c_ind = t.column("indicator");
  std::size_t c_mean = t.column("mean");
  std::size_t c_median = t.column("median");
  std::size_t c_min = t.column("min");
  std::size_t c_max = t.column("max");
  std::size_t c_sd = t.column("sd");
  PopulationStats s;
  std::array<bool, kNumIndicators> found{};
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string& name = t.rows[i][c_ind];
    auto it = std::find(indicator_names().begin(), indicator_names().end(), name);
    if (it == indicator_names().end()) {
      problems.push_back(io_detail::at(path, i) + ": unknown indicator '" + name + "'");
      continue;
    }
    auto j = static_cast<std::size_t>(it - indicator_names().begin());
    found[j] = true;
    s.mean[j] = io_detail::get_double(t, i, c_mean, "mean", problems);
    s.median[j] = io_detail::get_double(t, i, c_median, "median", problems);
    s.min[j] = io_detail::get_double(t, i, c_min, "min", problems);
    s.max[j] = io_detail::get_double(t, i, c_max, "max", problems);
    s.sd[j] = io_detail::get_double(t, i, c_sd, "sd", problems);
  }
  for (std::size_t j = 0; j < kNumIndicators; ++j)
    if (!found[j])
      problems.push_back(path + ": missing row for indicator '" + indicator_names()[j] + "'");
  if (!problems.empty()) throw parse_error(std::move(problems));
  s.validate();
  return s;
}

// ---- published rank-table fixtures ----------------------------------------

struct RankFixtureRow {
  std::string researcher_id;
  std::array<double, kNumIndicators> values{};
  double bcs = 0.0;
  double simca_score = 0.0;  // published translated log
  std::string band;
};

inline std::vector<RankFixtureRow> load_rank_fixture(const std::string& path) {
  csv::Table t = csv::read_file(path);
  std::vector<std::string> problems;
  io_detail::check_arity(t, problems);
  if (!problems.empty()) throw parse_error(std::move(problems));
  std::size_t c_id = t.column("researcher_id");
  std::array<std::size_t, kNumIndicators> c_val{};
  for (std::size_t j = 0; j < kNumIndicators; ++j) c_val[j] = t.column(indicator_names()[j]);
  std::size_t c_bcs = t.column("bcs");
  std::size_t c_simca = t.column("simca_score");
  std::size_t c_band = t.column("band");
  std::vector<RankFixtureRow> rows;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    RankFixtureRow row;
    row.researcher_id = t.rows[i][c_id];
    for (std::size_t j = 0; j < kNumIndicators; ++j)
      row.values[j] = io_detail::get_double(t, i, c_val[j], indicator_names()[j], problems);
    row.bcs = io_detail::get_double(t, i, c_bcs, "bcs", problems);
    row.simca_score = io_detail::get_double(t, i, c_simca, "simca_score", problems);
    row.band = t.rows[i][c_band];
    rows.push_back(std::move(row));
  }
  if (!problems.empty()) throw parse_error(std::move(problems));
  if (rows.empty()) throw parse_error({path + ": no rows"});
  return rows;
}

// ---- report writers --------------------------------------------------------

inline void write_scores_csv(const std::string& path,
                             const std::vector<ScoredResearcher>& rows) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  csv::write_record(out, {"researcher_id", "squared_distance", "translated_log", "accepted"});
  for (const auto& r : rows)
    csv::write_record(out, {r.researcher_id, csv::format_double(r.squared_distance),
                            csv::format_double(r.translated_log),
                            r.accepted ? "true" : "false"});
  if (!out) throw io_error("failed writing '" + path + "'");
}

inline void write_bcs_csv(const std::string& path, const RankTable& table) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  csv::write_record(out, {"researcher_id", "bcs", "bcs_rank"});
  for (const auto& r : table.rows)
    csv::write_record(out, {r.researcher_id, csv::format_double(r.bcs),
                            std::to_string(r.bcs_rank)});
  if (!out) throw io_error("failed writing '" + path + "'");
}

inline void write_rank_table_csv(const std::string& path, const RankTable& table) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  std::vector<std::string> header = {"researcher_id"};
  for (const auto& name : indicator_names()) header.push_back(name);
  for (const char* col : {"bcs", "bcs_rank", "translated_log", "simca_rank", "accepted",
                          "simca_band"})
    header.push_back(col);
  csv::write_record(out, header);
  for (const auto& r : table.rows) {
    std::vector<std::string> row = {r.researcher_id};
    for (double v : r.indicators) row.push_back(csv::format_double(v));
    row.push_back(csv::format_double(r.bcs));
    row.push_back(std::to_string(r.bcs_rank));
    row.push_back(csv::format_double(r.translated_log));
    row.push_back(std::to_string(r.simca_rank));
    row.push_back(r.accepted ? "true" : "false");
    row.push_back(r.simca_band);
    csv::write_record(out, row);
  }
  if (!out) throw io_error("failed writing '" + path + "'");
}

inline void write_histogram_csv(const std::string& path, const GroupedHistogram& hist) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  csv::write_record(out, {"group", "bin_left", "bin_right", "count"});
  for (const auto& [group, counts] : hist.counts)
    for (std::size_t b = 0; b < counts.size(); ++b)
      csv::write_record(out, {group, csv::format_double(hist.bins.edges[b]),
                              csv::format_double(hist.bins.edges[b + 1]),
                              std::to_string(counts[b])});
  if (!out) throw io_error("failed writing '" + path + "'");
}

inline void write_scatter_csv(const std::string& path, const RankTable& table) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  csv::write_record(out, {"researcher_id", "bcs_rank", "simca_rank"});
  for (const auto& r : table.rows)
    csv::write_record(out, {r.researcher_id, std::to_string(r.bcs_rank),
                            std::to_string(r.simca_rank)});
  if (!out) throw io_error("failed writing '" + path + "'");
}

}  // namespace bibscore
