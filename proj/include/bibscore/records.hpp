#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "bibscore/errors.hpp"

namespace bibscore {

inline constexpr std::size_t kNumIndicators = 5;

// Canonical indicator order used everywhere: columns of matrices, weight
// vectors, CSV layouts and model files all follow this order.
inline const std::array<std::string, kNumIndicators>& indicator_names() {
  static const std::array<std::string, kNumIndicators> names = {
      "fss", "hca1", "hca5", "first_a", "last_a"};
  return names;
}

struct Authorship {
  std::string pub_id;
  int position = 0;  // 1-based within the byline
  std::string affiliation_id;
  std::string researcher_id;  // empty when the author is external
};

struct PublicationRecord {
  std::string pub_id;
  int year = 0;
  std::vector<std::string> subject_categories;
  double citations = 0.0;
  std::vector<Authorship> byline;
};

struct Contribution {
  PublicationRecord publication;
  int own_position = 0;  // this researcher's 1-based byline position
};

struct ResearcherProfile {
  std::string researcher_id;
  std::string field_code;
  double years_active = 1.0;
  std::vector<Contribution> contributions;
};

struct IndicatorVector {
  std::string researcher_id;
  std::string field_code;
  std::array<double, kNumIndicators> values{};  // canonical order

  double fss() const { return values[0]; }
  double hca1() const { return values[1]; }
  double hca5() const { return values[2]; }
  double first_a() const { return values[3]; }
  double last_a() const { return values[4]; }

  void validate(std::size_t n_publications) const {
    if (values[2] < values[1])
      throw input_error("indicator vector for " + researcher_id +
                        ": hca5 < hca1");
    for (double v : values)
      if (!(v >= 0.0))
        throw input_error("indicator vector for " + researcher_id +
                          ": negative or non-finite value");
    if (n_publications > 0 &&
        values[3] + values[4] > 2.0 * static_cast<double>(n_publications))
      throw input_error("indicator vector for " + researcher_id +
                        ": first_a + last_a exceeds 2N");
  }
};

struct PopulationStats {
  std::array<double, kNumIndicators> mean{};
  std::array<double, kNumIndicators> median{};
  std::array<double, kNumIndicators> min{};
  std::array<double, kNumIndicators> max{};
  std::array<double, kNumIndicators> sd{};

  void validate() const {
    for (std::size_t j = 0; j < kNumIndicators; ++j) {
      const std::string& name = indicator_names()[j];
      if (!(min[j] <= median[j] && median[j] <= max[j]))
        throw input_error("population stats for " + name +
                          ": requires min <= median <= max");
      if (!(sd[j] >= 0.0))
        throw input_error("population stats for " + name + ": sd must be >= 0");
    }
  }
};

}  // namespace bibscore
