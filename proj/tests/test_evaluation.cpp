#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bibscore/evaluation.hpp"
#include "bibscore/io.hpp"

using namespace bibscore;

namespace {

ScoredResearcher entry(const std::string& id, double bcs_value, double tl) {
  ScoredResearcher e;
  e.researcher_id = id;
  e.bcs = bcs_value;
  e.translated_log = tl;
  return e;
}

std::vector<ScoredResearcher> fixture_entries(const std::string& path) {
  std::vector<ScoredResearcher> out;
  for (const auto& r : load_rank_fixture(path)) {
    ScoredResearcher e;
    e.researcher_id = r.researcher_id;
    e.indicators = r.values;
    e.bcs = r.bcs;
    e.translated_log = r.simca_score;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

TEST_CASE("ordinal ranks break ties by researcher id") {
  std::vector<ScoredResearcher> entries = {entry("C", 2.0, 0), entry("A", 5.0, 0),
                                           entry("B", 2.0, 0)};
  auto ranks = ordinal_ranks(entries, [](const ScoredResearcher& a,
                                         const ScoredResearcher& b) { return a.bcs > b.bcs; });
  CHECK(ranks == std::vector<int>{3, 1, 2});  // B precedes C on the tie
}

TEST_CASE("band labels") {
  CHECK(simca_band_label(1) == "Best 10");
  CHECK(simca_band_label(10) == "Best 10");
  CHECK(simca_band_label(11) == "Best 20");
  CHECK(simca_band_label(49) == "Best 50");
  CHECK(simca_band_label(50) == "Best 50");
  CHECK(simca_band_label(51) == "");
  CHECK(simca_band_label(0) == "");
  CHECK(simca_band_label(7, 5, 20) == "Best 10");
  CHECK(simca_band_label(21, 5, 20) == "");
}

TEST_CASE("rank report: single researcher") {
  auto table = rank_report({entry("R", 3.0, 0.5)});
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].bcs_rank == 1);
  CHECK(table.rows[0].simca_rank == 1);
  CHECK(table.rows[0].simca_band == "Best 10");
  CHECK_THROWS_AS(rank_report({}), input_error);
}

TEST_CASE("rank report preserves the published inversion") {
  auto entries = fixture_entries(std::string(BIBSCORE_DATA_DIR) + "/table2.csv");
  auto table = rank_report(entries);
  const RankRow* r139 = nullptr;
  const RankRow* r300 = nullptr;
  for (const auto& row : table.rows) {
    if (row.researcher_id == "R_139") r139 = &row;
    if (row.researcher_id == "R_300") r300 = &row;
  }
  REQUIRE(r139 != nullptr);
  REQUIRE(r300 != nullptr);
  // R_139 dominates on the composite but sits behind R_300 on class distance
  CHECK(r139->bcs > r300->bcs);
  CHECK(r139->bcs_rank < r300->bcs_rank);
  CHECK(r139->translated_log > r300->translated_log);
  CHECK(r139->simca_rank > r300->simca_rank);

  // rows come back sorted by bcs_rank 1..n
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    CHECK(table.rows[i].bcs_rank == static_cast<int>(i) + 1);

  // within the top 50 every band holds exactly ten ranks
  std::map<std::string, int> band_sizes;
  for (const auto& row : table.rows)
    if (row.simca_rank <= 50) band_sizes[row.simca_band] += 1;
  CHECK(band_sizes == std::map<std::string, int>{{"Best 10", 10},
                                                 {"Best 20", 10},
                                                 {"Best 30", 10},
                                                 {"Best 40", 10},
                                                 {"Best 50", 10}});
}

TEST_CASE("top-k overlap") {
  std::vector<int> a = {1, 2, 3, 4, 5};
  std::vector<int> b = {5, 4, 3, 2, 1};
  CHECK(top_k_overlap(a, b, 3) == 1);  // only the middle element is in both top-3
  CHECK(top_k_overlap(a, a, 2) == 2);
  CHECK(top_k_overlap(a, b, 5) == 5);
  CHECK_THROWS_AS(top_k_overlap(a, {1, 2}, 1), input_error);
  CHECK_THROWS_AS(top_k_overlap(a, b, 6), input_error);
}

TEST_CASE("standardization oracle recovers exact means") {
  std::mt19937 gen(37);
  std::uniform_real_distribution<double> unif(0.0, 20.0);
  const std::array<double, kNumIndicators> truth = {3.2, 2.8, 2.6, 2.5, 4.9};
  std::vector<std::array<double, kNumIndicators>> indicators(40);
  std::vector<double> values(40);
  const std::array<double, kNumIndicators> w = {0.50, 0.20, 0.10, 0.10, 0.10};
  for (std::size_t i = 0; i < indicators.size(); ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < kNumIndicators; ++k) {
      indicators[i][k] = unif(gen);
      total += w[k] * indicators[i][k] / truth[k];
    }
    values[i] = total;
  }
  auto fit = fit_standardization_oracle(indicators, values);
  for (std::size_t k = 0; k < kNumIndicators; ++k)
    CHECK(fit.positive_means[k] == Catch::Approx(truth[k]).epsilon(1e-9));
  CHECK(fit.residual_rms < 1e-10);

  // a proportional pair of columns defeats the fit
  auto degenerate = indicators;
  for (auto& row : degenerate) row[2] = 2.0 * row[1];
  std::vector<double> dv(values.size(), 1.0);
  CHECK_THROWS_AS(fit_standardization_oracle(degenerate, dv), rank_deficiency_error);

  CHECK_THROWS_AS(fit_standardization_oracle(indicators, {1.0}), input_error);
  indicators.resize(4);
  values.resize(4);
  CHECK_THROWS_AS(fit_standardization_oracle(indicators, values), input_error);
}

TEST_CASE("histogram bins and counts") {
  auto bins = histogram_bins(0.0, 1.0, 0.1);
  REQUIRE(bins.edges.size() == 11);
  CHECK(bins.edges.front() == 0.0);
  CHECK(bins.edges.back() == Catch::Approx(1.0));

  // a degenerate range still produces one bin
  auto single = histogram_bins(2.0, 2.0, 0.25);
  CHECK(single.edges.size() == 2);
  CHECK(histogram_counts(single, {2.0}) == std::vector<std::size_t>{1});

  std::vector<double> uniform;
  for (int i = 0; i < 100; ++i) uniform.push_back(0.005 + 0.01 * static_cast<double>(i));
  auto counts = histogram_counts(bins, uniform);
  REQUIRE(counts.size() == 10);
  for (std::size_t b = 0; b < counts.size(); ++b) CHECK(counts[b] == 10);

  // interior edges are half-open, the global maximum lands in the last bin
  CHECK(histogram_counts(bins, {0.1})[1] == 1);
  CHECK(histogram_counts(bins, {1.0})[9] == 1);
  CHECK(histogram_counts(bins, {-0.2, 1.2}) == std::vector<std::size_t>(10, 0));

  CHECK_THROWS_AS(histogram_bins(0.0, 1.0, 0.0), input_error);
  CHECK_THROWS_AS(histogram_bins(1.0, 0.0, 0.5), input_error);
}

TEST_CASE("grouped histogram shares one set of bins") {
  std::map<std::string, std::vector<double>> groups;
  groups["a"] = {0.0, 0.5, 0.9};
  groups["b"] = {2.0};
  auto hist = histogram_data(groups, 0.5);
  CHECK(hist.bins.edges.front() == 0.0);
  CHECK(hist.bins.edges.back() == Catch::Approx(2.0));
  REQUIRE(hist.counts.count("a") == 1);
  REQUIRE(hist.counts.count("b") == 1);
  std::size_t total_a = 0, total_b = 0;
  for (auto c : hist.counts["a"]) total_a += c;
  for (auto c : hist.counts["b"]) total_b += c;
  CHECK(total_a == 3);
  CHECK(total_b == 1);
  CHECK_THROWS_AS(histogram_data({}, 0.5), input_error);
}

TEST_CASE("published tables: band tallies and rank agreement") {
  struct Golden {
    const char* file;
    int banded;
    double rho;
  };
  const Golden goldens[] = {{"/table2.csv", 42, 0.8208797550763515},
                            {"/table3.csv", 43, 0.8081928673882254}};
  for (const auto& g : goldens) {
    auto rows = load_rank_fixture(std::string(BIBSCORE_DATA_DIR) + g.file);
    REQUIRE(rows.size() == 50);
    int banded = 0;
    std::vector<double> bcs_col, neg_tl;
    for (const auto& r : rows) {
      if (!r.band.empty()) ++banded;
      bcs_col.push_back(r.bcs);
      neg_tl.push_back(-r.simca_score);
    }
    CHECK(banded == g.banded);
    CHECK(stats::spearman(bcs_col, neg_tl) == Catch::Approx(g.rho).margin(1e-12));
  }
}
