#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bibscore/errors.hpp"
#include "bibscore/records.hpp"
#include "bibscore/stats.hpp"

namespace bibscore {

enum class CountingMode { kBylineWeighted, kUniform };

inline CountingMode parse_counting_mode(const std::string& s) {
  if (s == "byline-weighted" || s == "byline_weighted") return CountingMode::kBylineWeighted;
  if (s == "uniform") return CountingMode::kUniform;
  throw config_error("unknown counting mode '" + s + "'");
}

inline std::string to_string(CountingMode m) {
  return m == CountingMode::kUniform ? "uniform" : "byline-weighted";
}

// Position weights for byline-weighted counting. Role weights follow the
// two published splits; the affiliation test on (first, last) selects one.
struct CountingWeights {
  // first/last share an affiliation
  double shared_first = 0.40;
  double shared_last = 0.40;
  double shared_middle_pool = 0.20;
  // first/last at different institutions
  double split_first = 0.30;
  double split_last = 0.30;
  double split_second = 0.15;
  double split_penultimate = 0.15;
  double split_middle_pool = 0.10;
};

inline void validate_byline(const std::vector<Authorship>& byline) {
  if (byline.empty()) throw input_error("byline is empty");
  std::vector<bool> seen(byline.size(), false);
  for (const auto& a : byline) {
    if (a.position < 1 || a.position > static_cast<int>(byline.size()))
      throw input_error("byline position " + std::to_string(a.position) +
                        " outside 1.." + std::to_string(byline.size()));
    if (seen[static_cast<std::size_t>(a.position - 1)])
      throw input_error("duplicate byline position " + std::to_string(a.position));
    seen[static_cast<std::size_t>(a.position - 1)] = true;
  }
}

namespace detail {

inline const Authorship& at_position(const std::vector<Authorship>& byline, int pos) {
  for (const auto& a : byline)
    if (a.position == pos) return a;
  throw input_error("byline has no position " + std::to_string(pos));
}

// Raw per-position weights for one publication; renormalized so they always
// sum to exactly 1 (short bylines under the split rule sum to less).
inline std::vector<double> byline_weights(const std::vector<Authorship>& byline,
                                          const CountingWeights& w) {
  std::size_t n = byline.size();
  std::vector<double> raw(n, 0.0);
  if (n == 1) return {1.0};
  if (n == 2) return {0.5, 0.5};
  const auto& first = at_position(byline, 1);
  const auto& last = at_position(byline, static_cast<int>(n));
  bool shared = first.affiliation_id == last.affiliation_id;
  if (shared) {
    raw[0] = w.shared_first;
    raw[n - 1] = w.shared_last;
    for (std::size_t i = 1; i + 1 < n; ++i)
      raw[i] = w.shared_middle_pool / static_cast<double>(n - 2);
  } else {
    // One role per position, precedence first > last > second > penultimate.
    raw[0] = w.split_first;
    raw[n - 1] = w.split_last;
    raw[1] = w.split_second;
    if (n >= 4) raw[n - 2] = w.split_penultimate;
    for (std::size_t i = 2; i + 2 < n; ++i)
      raw[i] = w.split_middle_pool / static_cast<double>(n - 4);
  }
  double total = 0.0;
  for (double x : raw) total += x;
  for (double& x : raw) x /= total;
  return raw;
}

}  // namespace detail

inline double fractional_contribution(int position, const std::vector<Authorship>& byline,
                                      CountingMode mode,
                                      const CountingWeights& weights = {}) {
  validate_byline(byline);
  if (position < 1 || position > static_cast<int>(byline.size()))
    throw input_error("position " + std::to_string(position) + " outside byline of " +
                      std::to_string(byline.size()));
  if (mode == CountingMode::kUniform)
    return 1.0 / static_cast<double>(byline.size());
  // ranks positions in byline order regardless of input order
  return detail::byline_weights(byline, weights)[static_cast<std::size_t>(position - 1)];
}

struct BaselineCell {
  double cited_mean = 0.0;                 // mean citations over cited pubs
  std::map<double, double> thresholds;     // percentile level -> min citations
  std::vector<double> corpus;              // sorted raw counts when available
};

class ReferenceBaseline {
 public:
  using Key = std::pair<int, std::string>;

  void add_cell(int year, const std::string& category, BaselineCell cell) {
    if (!(cell.cited_mean > 0.0))
      throw input_error("baseline cell (" + std::to_string(year) + ", " + category +
                        "): cited_mean must be positive");
    double prev = -1.0;
    for (const auto& [level, value] : cell.thresholds) {
      if (value < prev)
        throw input_error("baseline cell (" + std::to_string(year) + ", " + category +
                          "): thresholds must be non-decreasing in level");
      prev = value;
    }
    std::sort(cell.corpus.begin(), cell.corpus.end());
    cells_[{year, category}] = std::move(cell);
  }

  static ReferenceBaseline from_corpus(
      const std::vector<std::tuple<int, std::string, double>>& entries,
      const std::vector<double>& levels = {95.0, 99.0}) {
    std::map<Key, std::vector<double>> grouped;
    for (const auto& [year, cat, cites] : entries) {
      if (cites < 0)
        throw input_error("reference corpus: negative citation count for (" +
                          std::to_string(year) + ", " + cat + ")");
      grouped[{year, cat}].push_back(cites);
    }
    ReferenceBaseline b;
    for (auto& [key, counts] : grouped) {
      std::sort(counts.begin(), counts.end());
      double sum = 0.0;
      std::size_t cited = 0;
      for (double c : counts)
        if (c > 0) {
          sum += c;
          ++cited;
        }
      if (cited == 0)
        throw input_error("reference corpus cell (" + std::to_string(key.first) + ", " +
                          key.second + ") has no cited publications");
      BaselineCell cell;
      cell.cited_mean = sum / static_cast<double>(cited);
      for (double level : levels)
        cell.thresholds[level] = stats::nearest_rank_percentile(counts, level);
      cell.corpus = counts;
      b.cells_[key] = std::move(cell);
    }
    return b;
  }

  bool has_cell(int year, const std::string& category) const {
    return cells_.count({year, category}) > 0;
  }

  const BaselineCell& cell(int year, const std::string& category) const {
    auto it = cells_.find({year, category});
    if (it == cells_.end())
      throw missing_baseline_error("no baseline cell for (" + std::to_string(year) +
                                   ", " + category + ")");
    return it->second;
  }

  double threshold(int year, const std::string& category, double level) const {
    const auto& c = cell(year, category);
    auto it = c.thresholds.find(level);
    if (it == c.thresholds.end())
      throw missing_baseline_error("baseline cell (" + std::to_string(year) + ", " +
                                   category + ") lacks the " + std::to_string(level) +
                                   " percentile threshold");
    return it->second;
  }

  // Percentile rank of a citation count within its cell: share of the cell's
  // distribution at or below the count. Cells without raw corpus data fall
  // back to a coarse ladder on the stored thresholds.
  double percentile_rank(int year, const std::string& category, double citations) const {
    const auto& c = cell(year, category);
    if (!c.corpus.empty()) {
      auto upper = std::upper_bound(c.corpus.begin(), c.corpus.end(), citations);
      return 100.0 * static_cast<double>(upper - c.corpus.begin()) /
             static_cast<double>(c.corpus.size());
    }
    auto t99 = c.thresholds.find(99.0);
    auto t95 = c.thresholds.find(95.0);
    if (t99 != c.thresholds.end() && citations >= t99->second) return 99.0;
    if (t95 != c.thresholds.end() && citations >= t95->second) return 95.0;
    return std::min(citations / c.cited_mean, 94.0);
  }

  const std::map<Key, BaselineCell>& cells() const { return cells_; }

 private:
  std::map<Key, BaselineCell> cells_;
};

inline std::string assign_subject_category(const PublicationRecord& pub,
                                           const ReferenceBaseline& baseline) {
  if (pub.subject_categories.empty())
    throw input_error("publication " + pub.pub_id + " lists no subject category");
  if (pub.subject_categories.size() == 1) {
    baseline.cell(pub.year, pub.subject_categories.front());
    return pub.subject_categories.front();
  }
  std::string best;
  double best_rank = -1.0;
  for (const auto& cat : pub.subject_categories) {
    double rank = baseline.percentile_rank(pub.year, cat, pub.citations);
    if (rank > best_rank || (rank == best_rank && cat < best)) {
      best = cat;
      best_rank = rank;
    }
  }
  return best;
}

inline double normalized_impact(const PublicationRecord& pub,
                                const ReferenceBaseline& baseline,
                                const std::string& category) {
  if (pub.citations == 0.0) return 0.0;
  return pub.citations / baseline.cell(pub.year, category).cited_mean;
}

inline std::pair<bool, bool> hca_flags(const PublicationRecord& pub,
                                       const ReferenceBaseline& baseline,
                                       const std::string& category) {
  bool top1 = pub.citations >= baseline.threshold(pub.year, category, 99.0);
  bool top5 = pub.citations >= baseline.threshold(pub.year, category, 95.0);
  return {top1, top5 || top1};
}

inline IndicatorVector compute_indicators(const ResearcherProfile& profile,
                                          const ReferenceBaseline& baseline,
                                          CountingMode mode,
                                          const CountingWeights& weights = {}) {
  if (profile.years_active < 1.0)
    throw input_error("researcher " + profile.researcher_id + ": years_active must be >= 1");
  IndicatorVector out;
  out.researcher_id = profile.researcher_id;
  out.field_code = profile.field_code;
  double fss_sum = 0.0;
  std::vector<std::string> problems;
  for (const auto& contrib : profile.contributions) {
    const auto& pub = contrib.publication;
    try {
      validate_byline(pub.byline);
      if (detail::at_position(pub.byline, contrib.own_position).researcher_id !=
          profile.researcher_id)
        throw input_error("position " + std::to_string(contrib.own_position) +
                          " is not held by " + profile.researcher_id);
      std::string category = assign_subject_category(pub, baseline);
      double f = fractional_contribution(contrib.own_position, pub.byline, mode, weights);
      fss_sum += normalized_impact(pub, baseline, category) * f;
      auto [top1, top5] = hca_flags(pub, baseline, category);
      if (top1) out.values[1] += 1.0;
      if (top5) out.values[2] += 1.0;
      if (contrib.own_position == 1) out.values[3] += 1.0;
      if (contrib.own_position == static_cast<int>(pub.byline.size())) out.values[4] += 1.0;
    } catch (const input_error& e) {
      problems.push_back("publication " + pub.pub_id + ": " + e.what());
    }
  }
  if (!problems.empty()) throw parse_error(std::move(problems));
  out.values[0] = fss_sum / profile.years_active;
  out.validate(profile.contributions.size());
  return out;
}

}  // namespace bibscore
