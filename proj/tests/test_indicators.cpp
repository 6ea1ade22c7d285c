#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <string>
#include <vector>

#include "bibscore/indicators.hpp"
#include "bibscore/io.hpp"

using namespace bibscore;

namespace {

std::vector<Authorship> byline(const std::vector<std::string>& affiliations,
                               const std::string& pub = "P1") {
  std::vector<Authorship> out;
  for (std::size_t i = 0; i < affiliations.size(); ++i)
    out.push_back({pub, static_cast<int>(i) + 1, affiliations[i], ""});
  return out;
}

ReferenceBaseline simple_baseline(int year, const std::string& cat, double cited_mean,
                                  double t95, double t99) {
  ReferenceBaseline b;
  BaselineCell cell;
  cell.cited_mean = cited_mean;
  cell.thresholds[95.0] = t95;
  cell.thresholds[99.0] = t99;
  b.add_cell(year, cat, std::move(cell));
  return b;
}

}  // namespace

TEST_CASE("fractional contribution, published splits") {
  auto mode = CountingMode::kBylineWeighted;

  // first and last share an affiliation: 40/20/40
  auto three_shared = byline({"U1", "U2", "U1"});
  CHECK(fractional_contribution(1, three_shared, mode) == Catch::Approx(0.40));
  CHECK(fractional_contribution(2, three_shared, mode) == Catch::Approx(0.20));
  CHECK(fractional_contribution(3, three_shared, mode) == Catch::Approx(0.40));

  // six authors, all different: 30/15/5/5/15/30
  auto six = byline({"U1", "U2", "U3", "U4", "U5", "U6"});
  CHECK(fractional_contribution(1, six, mode) == Catch::Approx(0.30));
  CHECK(fractional_contribution(2, six, mode) == Catch::Approx(0.15));
  CHECK(fractional_contribution(3, six, mode) == Catch::Approx(0.05));
  CHECK(fractional_contribution(4, six, mode) == Catch::Approx(0.05));
  CHECK(fractional_contribution(5, six, mode) == Catch::Approx(0.15));
  CHECK(fractional_contribution(6, six, mode) == Catch::Approx(0.30));

  CHECK(fractional_contribution(1, byline({"U1"}), mode) == 1.0);
  CHECK(fractional_contribution(1, byline({"U1"}), CountingMode::kUniform) == 1.0);
  CHECK(fractional_contribution(1, byline({"U1", "U2"}), mode) == 0.5);
  CHECK(fractional_contribution(2, byline({"U1", "U2"}), mode) == 0.5);

  for (int pos = 1; pos <= 4; ++pos)
    CHECK(fractional_contribution(pos, byline({"A", "B", "C", "D"}),
                                  CountingMode::kUniform) == Catch::Approx(0.25));
}

TEST_CASE("fractional contribution, short split bylines renormalize") {
  auto mode = CountingMode::kBylineWeighted;
  // three authors, first/last differ: raw 0.30/0.15/0.30 renormalized
  auto three = byline({"U1", "U2", "U3"});
  CHECK(fractional_contribution(1, three, mode) == Catch::Approx(0.40));
  CHECK(fractional_contribution(2, three, mode) == Catch::Approx(0.20));
  CHECK(fractional_contribution(3, three, mode) == Catch::Approx(0.40));

  // four authors, first/last differ: raw 0.30/0.15/0.15/0.30 renormalized
  auto four = byline({"U1", "U2", "U3", "U4"});
  CHECK(fractional_contribution(1, four, mode) == Catch::Approx(1.0 / 3.0));
  CHECK(fractional_contribution(2, four, mode) == Catch::Approx(1.0 / 6.0));
  CHECK(fractional_contribution(3, four, mode) == Catch::Approx(1.0 / 6.0));
  CHECK(fractional_contribution(4, four, mode) == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("fractional contribution errors and sum property") {
  auto b3 = byline({"U1", "U2", "U1"});
  CHECK_THROWS_AS(fractional_contribution(0, b3, CountingMode::kUniform), input_error);
  CHECK_THROWS_AS(fractional_contribution(4, b3, CountingMode::kUniform), input_error);
  CHECK_THROWS_AS(fractional_contribution(1, {}, CountingMode::kUniform), input_error);

  std::mt19937 gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + gen() % 50;
    std::vector<std::string> affs(n);
    for (auto& a : affs) a = "U" + std::to_string(gen() % 5);
    auto bl = byline(affs);
    for (auto mode : {CountingMode::kBylineWeighted, CountingMode::kUniform}) {
      double sum = 0.0;
      for (std::size_t pos = 1; pos <= n; ++pos)
        sum += fractional_contribution(static_cast<int>(pos), bl, mode);
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("byline validation") {
  std::vector<Authorship> dup = {{"P", 1, "U1", ""}, {"P", 1, "U2", ""}};
  CHECK_THROWS_AS(validate_byline(dup), input_error);
  std::vector<Authorship> gap = {{"P", 1, "U1", ""}, {"P", 3, "U2", ""}};
  CHECK_THROWS_AS(validate_byline(gap), input_error);
  CHECK_NOTHROW(validate_byline(byline({"U1", "U2"})));
}

TEST_CASE("normalized impact") {
  auto b = simple_baseline(2008, "X", 5.0, 10, 20);
  PublicationRecord pub{"P1", 2008, {"X"}, 10.0, byline({"U1"})};
  CHECK(normalized_impact(pub, b, "X") == Catch::Approx(2.0));

  pub.citations = 0.0;
  CHECK(normalized_impact(pub, b, "X") == 0.0);

  // zeros excluded from the cited mean: {0, 0, 4, 8} -> mean 6
  ReferenceBaseline corpus = ReferenceBaseline::from_corpus(
      {{2008, "X", 0}, {2008, "X", 0}, {2008, "X", 4}, {2008, "X", 8}});
  CHECK(corpus.cell(2008, "X").cited_mean == Catch::Approx(6.0));
  pub.citations = 6.0;
  CHECK(normalized_impact(pub, corpus, "X") == Catch::Approx(1.0));

  pub.year = 2009;
  CHECK_THROWS_AS(normalized_impact(pub, b, "X"), missing_baseline_error);
  try {
    normalized_impact(pub, b, "X");
    FAIL("expected missing_baseline_error");
  } catch (const missing_baseline_error& e) {
    CHECK(std::string(e.what()).find("2009") != std::string::npos);
    CHECK(std::string(e.what()).find("X") != std::string::npos);
  }
}

TEST_CASE("subject category assignment") {
  std::vector<std::tuple<int, std::string, double>> entries;
  for (int c = 1; c <= 100; ++c) entries.emplace_back(2008, "X", c);
  for (int c = 1; c <= 100; ++c) entries.emplace_back(2008, "Y", 10.0 * c);
  auto b = ReferenceBaseline::from_corpus(entries);

  PublicationRecord single{"P1", 2008, {"Y"}, 3.0, byline({"U1"})};
  CHECK(assign_subject_category(single, b) == "Y");

  // 90 citations: 90th percentile in X, 9th in Y
  PublicationRecord multi{"P2", 2008, {"Y", "X"}, 90.0, byline({"U1"})};
  CHECK(assign_subject_category(multi, b) == "X");

  // identical cells tie; lexicographically smallest wins whatever the order
  std::vector<std::tuple<int, std::string, double>> tied;
  for (int c = 1; c <= 10; ++c) {
    tied.emplace_back(2008, "B", c);
    tied.emplace_back(2008, "A", c);
  }
  auto tb = ReferenceBaseline::from_corpus(tied);
  PublicationRecord t1{"P3", 2008, {"B", "A"}, 5.0, byline({"U1"})};
  PublicationRecord t2{"P3", 2008, {"A", "B"}, 5.0, byline({"U1"})};
  CHECK(assign_subject_category(t1, tb) == "A");
  CHECK(assign_subject_category(t2, tb) == "A");

  PublicationRecord missing{"P4", 2008, {"Z"}, 5.0, byline({"U1"})};
  CHECK_THROWS_AS(assign_subject_category(missing, tb), missing_baseline_error);
}

TEST_CASE("hca flags") {
  std::vector<std::tuple<int, std::string, double>> entries;
  for (int c = 1; c <= 200; ++c) entries.emplace_back(2008, "X", c);
  auto b = ReferenceBaseline::from_corpus(entries);
  CHECK(b.threshold(2008, "X", 95.0) == 190.0);
  CHECK(b.threshold(2008, "X", 99.0) == 198.0);

  PublicationRecord pub{"P1", 2008, {"X"}, 199.0, byline({"U1"})};
  auto [top1, top5] = hca_flags(pub, b, "X");
  CHECK(top1);
  CHECK(top5);

  pub.citations = 50.0;  // below the median
  auto [low1, low5] = hca_flags(pub, b, "X");
  CHECK_FALSE(low1);
  CHECK_FALSE(low5);

  for (double c : {0.0, 100.0, 189.0, 190.0, 197.0, 198.0, 200.0}) {
    pub.citations = c;
    auto [f1, f5] = hca_flags(pub, b, "X");
    if (f1) CHECK(f5);  // top 1% nests inside top 5%
  }

  auto thin = simple_baseline(2008, "X", 5.0, 10, 20);
  PublicationRecord p2{"P2", 2008, {"X"}, 15.0, byline({"U1"})};
  auto [m1, m5] = hca_flags(p2, thin, "X");
  CHECK_FALSE(m1);
  CHECK(m5);
}

TEST_CASE("compute indicators") {
  // t=5, one contribution with c/cbar = 2, shared-affiliation 3-byline,
  // own position 1 -> f = 0.4 -> fss = (1/5) * 2 * 0.4 = 0.16
  auto b = simple_baseline(2008, "X", 5.0, 100, 200);
  ResearcherProfile profile;
  profile.researcher_id = "R1";
  profile.field_code = "BIO/14";
  profile.years_active = 5.0;
  PublicationRecord pub{"P1", 2008, {"X"}, 10.0, byline({"U1", "U2", "U1"})};
  pub.byline[0].researcher_id = "R1";
  profile.contributions.push_back({pub, 1});

  auto vec = compute_indicators(profile, b, CountingMode::kBylineWeighted);
  CHECK(vec.fss() == Catch::Approx(0.16));
  CHECK(vec.first_a() == 1.0);
  CHECK(vec.last_a() == 0.0);
  CHECK(vec.hca1() == 0.0);
  CHECK(vec.hca5() == 0.0);

  ResearcherProfile empty;
  empty.researcher_id = "R2";
  empty.years_active = 3.0;
  auto zero = compute_indicators(empty, b, CountingMode::kBylineWeighted);
  for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("compute indicators: permutation invariance and homogeneity") {
  std::mt19937 gen(5);
  ReferenceBaseline base = simple_baseline(2008, "X", 4.0, 50, 90);
  ReferenceBaseline half = simple_baseline(2008, "X", 2.0, 50, 90);

  ResearcherProfile profile;
  profile.researcher_id = "R1";
  profile.years_active = 4.0;
  for (int k = 0; k < 6; ++k) {
    std::vector<std::string> affs(2 + gen() % 5);
    for (auto& a : affs) a = "U" + std::to_string(gen() % 3);
    PublicationRecord pub{"P" + std::to_string(k), 2008, {"X"},
                          static_cast<double>(gen() % 60), byline(affs)};
    int pos = 1 + static_cast<int>(gen() % affs.size());
    pub.byline[static_cast<std::size_t>(pos - 1)].researcher_id = "R1";
    profile.contributions.push_back({pub, pos});
  }

  auto v1 = compute_indicators(profile, base, CountingMode::kBylineWeighted);
  auto shuffled = profile;
  std::reverse(shuffled.contributions.begin(), shuffled.contributions.end());
  auto v2 = compute_indicators(shuffled, base, CountingMode::kBylineWeighted);
  for (std::size_t j = 0; j < kNumIndicators; ++j)
    CHECK(v1.values[j] == Catch::Approx(v2.values[j]).epsilon(1e-12));

  // halving the cited mean doubles every c/cbar, hence doubles fss
  auto vh = compute_indicators(profile, half, CountingMode::kBylineWeighted);
  CHECK(vh.fss() == Catch::Approx(2.0 * v1.fss()).epsilon(1e-12));
  CHECK(v1.hca5() >= v1.hca1());
}

TEST_CASE("compute indicators aggregates missing-baseline problems") {
  auto b = simple_baseline(2008, "X", 5.0, 100, 200);
  ResearcherProfile profile;
  profile.researcher_id = "R1";
  profile.years_active = 2.0;
  for (int k = 0; k < 3; ++k) {
    PublicationRecord pub{"P" + std::to_string(k), 2009, {"X"}, 3.0, byline({"U1"})};
    pub.byline[0].researcher_id = "R1";
    profile.contributions.push_back({pub, 1});
  }
  try {
    compute_indicators(profile, b, CountingMode::kBylineWeighted);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.problems().size() == 3);
    for (int k = 0; k < 3; ++k)
      CHECK(std::string(e.what()).find("P" + std::to_string(k)) != std::string::npos);
  }

  profile.years_active = 0.5;
  CHECK_THROWS_AS(compute_indicators(profile, b, CountingMode::kBylineWeighted),
                  input_error);
}

TEST_CASE("Table 2 row R_139 carries the published indicator order") {
  auto rows = load_rank_fixture(std::string(BIBSCORE_DATA_DIR) + "/table2.csv");
  auto it = std::find_if(rows.begin(), rows.end(),
                         [](const RankFixtureRow& r) { return r.researcher_id == "R_139"; });
  REQUIRE(it != rows.end());
  CHECK(it->values[0] == Catch::Approx(46.228));
  CHECK(it->values[1] == 23.0);
  CHECK(it->values[2] == 94.0);
  CHECK(it->values[3] == 1.0);
  CHECK(it->values[4] == 8.0);
  CHECK(it->bcs == Catch::Approx(11.412));
  CHECK(it->simca_score == Catch::Approx(1.071));
}
