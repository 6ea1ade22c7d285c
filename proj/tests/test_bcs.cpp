#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <string>
#include <vector>

#include "bibscore/bcs.hpp"
#include "bibscore/evaluation.hpp"
#include "bibscore/io.hpp"

using namespace bibscore;

namespace {

std::vector<IndicatorVector> random_population(std::mt19937& gen, int n) {
  std::uniform_real_distribution<double> unif(0.0, 10.0);
  std::vector<IndicatorVector> pop(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    pop[static_cast<std::size_t>(i)].researcher_id = "R" + std::to_string(i);
    for (auto& v : pop[static_cast<std::size_t>(i)].values)
      v = gen() % 4 == 0 ? 0.0 : unif(gen);
  }
  return pop;
}

std::vector<int> bcs_order(const std::vector<IndicatorVector>& pop) {
  auto ctx = build_standardization_context(pop);
  std::vector<double> scores;
  for (const auto& v : pop) scores.push_back(bcs_from_raw(v, ctx));
  std::vector<int> order(pop.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  return order;
}

}  // namespace

TEST_CASE("positive-mean standardization excludes zeros") {
  auto s = positive_mean_standardize({0.0, 2.0, 4.0});
  CHECK(s.positive_mean == Catch::Approx(3.0));
  CHECK(s.values[0] == 0.0);
  CHECK(s.values[1] == Catch::Approx(2.0 / 3.0));
  CHECK(s.values[2] == Catch::Approx(4.0 / 3.0));

  CHECK_THROWS_AS(positive_mean_standardize({}), input_error);
  CHECK_THROWS_AS(positive_mean_standardize({1.0, -0.5}), input_error);
  try {
    positive_mean_standardize({0.0, 0.0}, "hca1");
    FAIL("expected absent_mean_error");
  } catch (const absent_mean_error& e) {
    CHECK(std::string(e.what()).find("hca1") != std::string::npos);
  }
}

TEST_CASE("standardization context from a population") {
  std::vector<IndicatorVector> pop(3);
  for (std::size_t i = 0; i < 3; ++i) {
    pop[i].researcher_id = "R" + std::to_string(i);
    for (std::size_t k = 0; k < kNumIndicators; ++k)
      pop[i].values[k] = static_cast<double>((i + 1) * (k + 1));
  }
  auto ctx = build_standardization_context(pop);
  for (std::size_t k = 0; k < kNumIndicators; ++k) {
    CHECK(ctx.present[k]);
    CHECK(ctx.positive_mean(k) == Catch::Approx(2.0 * static_cast<double>(k + 1)));
  }

  for (auto& v : pop) v.values[2] = 0.0;  // hca5 all zero
  CHECK_THROWS_AS(build_standardization_context(pop), absent_mean_error);
  CHECK_THROWS_AS(build_standardization_context({}), input_error);

  StandardizationContext empty;
  CHECK_THROWS_AS(empty.positive_mean(0), absent_mean_error);
  CHECK_THROWS_AS(empty.positive_mean(99), input_error);
}

TEST_CASE("composite score arithmetic") {
  CHECK(bcs({2.0, 0.0, 0.0, 0.0, 0.0}) == Catch::Approx(1.0));
  CHECK(bcs({1.0, 1.0, 1.0, 1.0, 1.0}) == Catch::Approx(1.0));
  CHECK(bcs({0.0, 0.0, 0.0, 0.0, 0.0}) == 0.0);

  BcsConfig bad;
  bad.weights = {0.5, 0.5, 0.5, 0.0, 0.0};
  CHECK_THROWS_AS(bcs({1, 1, 1, 1, 1}, bad), config_error);
  bad.weights = {1.2, -0.2, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(bcs({1, 1, 1, 1, 1}, bad), config_error);

  BcsConfig fss_only;
  fss_only.weights = {1.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(bcs({3.5, 9.0, 9.0, 9.0, 9.0}, fss_only) == Catch::Approx(3.5));
}

TEST_CASE("a researcher at the positive means scores 1") {
  std::mt19937 gen(17);
  auto pop = random_population(gen, 40);
  auto ctx = build_standardization_context(pop);
  IndicatorVector at_mean;
  at_mean.researcher_id = "M";
  for (std::size_t k = 0; k < kNumIndicators; ++k)
    at_mean.values[k] = ctx.positive_mean(k);
  CHECK(bcs_from_raw(at_mean, ctx) == Catch::Approx(1.0).epsilon(1e-14));

  // an all-ones population standardizes to 1 everywhere
  std::vector<IndicatorVector> ones(6);
  for (std::size_t i = 0; i < 6; ++i) {
    ones[i].researcher_id = "R" + std::to_string(i);
    ones[i].values.fill(1.0);
  }
  auto ones_ctx = build_standardization_context(ones);
  for (const auto& v : ones)
    CHECK(bcs_from_raw(v, ones_ctx) == Catch::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("zero stays zero even with a defined positive mean") {
  std::vector<IndicatorVector> pop(2);
  pop[0].researcher_id = "A";
  pop[0].values = {4.0, 2.0, 2.0, 1.0, 1.0};
  pop[1].researcher_id = "B";
  pop[1].values = {0.0, 2.0, 2.0, 1.0, 1.0};
  auto ctx = build_standardization_context(pop);
  // B's fss term contributes nothing; remaining terms all standardize to 1
  CHECK(bcs_from_raw(pop[1], ctx) == Catch::Approx(0.5));
  CHECK(bcs_from_raw(pop[0], ctx) == Catch::Approx(0.5 + 0.5));
}

TEST_CASE("ranking is invariant to per-indicator rescaling") {
  std::mt19937 gen(23);
  auto pop = random_population(gen, 30);
  auto base_order = bcs_order(pop);
  auto scaled = pop;
  const double factors[kNumIndicators] = {7.3, 0.04, 11.0, 2.5, 390.0};
  for (auto& v : scaled)
    for (std::size_t k = 0; k < kNumIndicators; ++k) v.values[k] *= factors[k];
  CHECK(bcs_order(scaled) == base_order);
}

TEST_CASE("composite is strictly monotone in each indicator") {
  std::mt19937 gen(29);
  auto pop = random_population(gen, 25);
  auto ctx = build_standardization_context(pop);
  IndicatorVector probe = pop[0];
  double before = bcs_from_raw(probe, ctx);
  for (std::size_t k = 0; k < kNumIndicators; ++k) {
    IndicatorVector bumped = probe;
    bumped.values[k] += 1.0;
    CHECK(bcs_from_raw(bumped, ctx) > before);
  }
}

TEST_CASE("published BCS is reproduced once the means are recovered") {
  auto rows = load_rank_fixture(std::string(BIBSCORE_DATA_DIR) + "/table2.csv");
  std::vector<std::array<double, kNumIndicators>> indicators;
  std::vector<double> published;
  for (const auto& r : rows) {
    indicators.push_back(r.values);
    published.push_back(r.bcs);
  }
  auto fit = fit_standardization_oracle(indicators, published);
  StandardizationContext ctx;
  for (std::size_t k = 0; k < kNumIndicators; ++k) {
    ctx.positive_means[k] = fit.positive_means[k];
    ctx.present[k] = true;
  }
  auto it = std::find_if(rows.begin(), rows.end(),
                         [](const RankFixtureRow& r) { return r.researcher_id == "R_139"; });
  REQUIRE(it != rows.end());
  IndicatorVector vec;
  vec.researcher_id = it->researcher_id;
  vec.values = it->values;
  // published inputs carry 3 decimals, so the top row reconstructs to ~1%
  CHECK(bcs_from_raw(vec, ctx) == Catch::Approx(11.412).margin(0.1));
}
