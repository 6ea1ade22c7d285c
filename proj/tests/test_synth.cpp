#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "bibscore/io.hpp"
#include "bibscore/synth.hpp"

using namespace bibscore;

namespace {

PopulationStats fixture_stats(const std::string& name) {
  return load_population_stats(std::string(BIBSCORE_DATA_DIR) + "/" + name);
}

std::vector<double> column(const std::vector<IndicatorVector>& pop, std::size_t j) {
  std::vector<double> out;
  out.reserve(pop.size());
  for (const auto& v : pop) out.push_back(v.values[j]);
  return out;
}

}  // namespace

TEST_CASE("synthesis is deterministic for a fixed seed") {
  auto stats = fixture_stats("table1_bio14.csv");
  auto a = synthesize_population(stats, 120, 42, "BIO/14");
  auto b = synthesize_population(stats, 120, 42, "BIO/14");
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].researcher_id == b[i].researcher_id);
    CHECK(a[i].field_code == "BIO/14");
    for (std::size_t j = 0; j < kNumIndicators; ++j)
      CHECK(a[i].values[j] == b[i].values[j]);
  }
}

TEST_CASE("seed changes the pairing, never the column margins") {
  auto stats = fixture_stats("table1_bio14.csv");
  auto a = synthesize_population(stats, 200, 1, "BIO/14");
  auto b = synthesize_population(stats, 200, 2, "BIO/14");
  bool any_difference = false;
  for (std::size_t j = 0; j < kNumIndicators; ++j) {
    auto ca = column(a, j);
    auto cb = column(b, j);
    if (ca != cb) any_difference = true;
    std::sort(ca.begin(), ca.end());
    std::sort(cb.begin(), cb.end());
    CHECK(ca == cb);  // identical multisets
  }
  CHECK(any_difference);
}

TEST_CASE("synthetic moments track the target statistics") {
  for (const char* name : {"table1_bio14.csv", "table1_med04.csv"}) {
    auto target = fixture_stats(name);
    auto pop = synthesize_population(target, 506, 7, "F");
    REQUIRE(pop.size() == 506);
    for (std::size_t j = 0; j < kNumIndicators; ++j) {
      auto col = column(pop, j);
      double m = stats::mean(col);
      double s = stats::sample_sd(col);
      INFO(name << " indicator " << indicator_names()[j]);
      CHECK(std::abs(m - target.mean[j]) <= 0.15 * target.mean[j]);
      CHECK(std::abs(s - target.sd[j]) <= 0.30 * target.sd[j]);
      CHECK(*std::min_element(col.begin(), col.end()) >= 0.0);
    }
    // fss never exceeds the observed maximum; counts respect their caps
    auto fss = column(pop, 0);
    auto hca1 = column(pop, 1);
    CHECK(*std::max_element(fss.begin(), fss.end()) <= target.max[0]);
    CHECK(*std::max_element(hca1.begin(), hca1.end()) <= std::floor(target.max[1]));
  }
}

TEST_CASE("hca5 dominates hca1 row by row") {
  auto stats = fixture_stats("table1_bio14.csv");
  for (std::uint64_t seed : {3u, 11u, 99u}) {
    auto pop = synthesize_population(stats, 300, seed, "BIO/14");
    for (const auto& v : pop) CHECK(v.values[2] >= v.values[1]);
  }
}

TEST_CASE("count columns are integers with a zero mass") {
  auto stats = fixture_stats("table1_bio14.csv");
  auto pop = synthesize_population(stats, 506, 5, "BIO/14");
  for (std::size_t j = 1; j < kNumIndicators; ++j)
    for (double v : column(pop, j)) CHECK(v == std::floor(v));
  // min = 0 switches on the 5% zero inflation of the continuous grid
  auto fss = column(pop, 0);
  auto zeros = static_cast<int>(std::count(fss.begin(), fss.end(), 0.0));
  CHECK(zeros >= 20);
  CHECK(zeros <= 30);
}

TEST_CASE("zero spread collapses a column to a constant") {
  auto stats = fixture_stats("table1_bio14.csv");
  stats.sd[0] = 0.0;
  stats.sd[3] = 0.0;
  auto pop = synthesize_population(stats, 50, 9, "BIO/14");
  for (const auto& v : pop) {
    CHECK(v.values[0] == stats.mean[0]);
    CHECK(v.values[3] == std::round(stats.mean[3]));
  }
}

TEST_CASE("identifiers are zero-padded and ordered") {
  auto stats = fixture_stats("table1_bio14.csv");
  auto pop = synthesize_population(stats, 506, 13, "BIO/14");
  CHECK(pop.front().researcher_id == "S_001");
  CHECK(pop.back().researcher_id == "S_506");
  SynthOptions options;
  options.id_prefix = "X";
  auto other = synthesize_population(stats, 12, 13, "BIO/14", options);
  CHECK(other.front().researcher_id == "X01");
}

TEST_CASE("infeasible targets are rejected") {
  auto stats = fixture_stats("table1_bio14.csv");
  auto bad = stats;
  bad.median[1] = bad.max[1] + 1.0;
  CHECK_THROWS_AS(synthesize_population(bad, 50, 1, "F"), input_error);

  bad = stats;
  bad.mean[2] = 0.0;
  bad.median[2] = 0.0;
  bad.min[2] = 0.0;
  bad.sd[2] = 1.0;
  CHECK_THROWS_AS(synthesize_population(bad, 50, 1, "F"), input_error);

  CHECK_THROWS_AS(synthesize_population(stats, 1, 1, "F"), input_error);
  SynthOptions options;
  options.rank_coupling = 1.5;
  CHECK_THROWS_AS(synthesize_population(stats, 50, 1, "F", options), input_error);
}

TEST_CASE("rank coupling drives cross-indicator agreement") {
  auto stats = fixture_stats("table1_bio14.csv");
  SynthOptions tight;
  tight.rank_coupling = 1.0;
  auto pop = synthesize_population(stats, 400, 21, "BIO/14", tight);
  // with a single shared factor, fss and first_a order researchers identically
  auto fss = column(pop, 0);
  auto first_a = column(pop, 3);
  double rho_tight = stats::spearman(fss, first_a);

  SynthOptions loose;
  loose.rank_coupling = 0.0;
  auto pop2 = synthesize_population(stats, 400, 21, "BIO/14", loose);
  double rho_loose = stats::spearman(column(pop2, 0), column(pop2, 3));
  CHECK(rho_tight > 0.95);
  CHECK(std::abs(rho_loose) < 0.25);
}
