#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bibscore {

// Base class for every error thrown by the library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid caller-supplied arguments or domain preconditions.
class input_error : public error {
 public:
  using error::error;
};

// Malformed external data; carries every problem found, not just the first.
class parse_error : public input_error {
 public:
  explicit parse_error(std::vector<std::string> problems)
      : input_error(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& ps) {
    std::string out = std::to_string(ps.size()) + " input problem(s):";
    for (const auto& p : ps) out += "\n  " + p;
    return out;
  }
  std::vector<std::string> problems_;
};

// Bad configuration file or option combination.
class config_error : public input_error {
 public:
  using input_error::input_error;
};

// Filesystem-level failure (missing file, unwritable directory).
class io_error : public error {
 public:
  using error::error;
};

// Numerical failure during computation (non-convergence, degenerate data).
class numeric_error : public error {
 public:
  using error::error;
};

// A column is constant where variation is required.
class degenerate_input_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// Too few rows for the requested model complexity.
class insufficient_data_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// Normalization cell (year, category) absent from the baseline.
class missing_baseline_error : public input_error {
 public:
  using input_error::input_error;
};

// Positive-subset mean undefined because an indicator column is all zero.
class absent_mean_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// Rank correlation undefined because one input has zero rank variance.
class undefined_correlation_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// Least-squares system does not have full column rank.
class rank_deficiency_error : public numeric_error {
 public:
  using numeric_error::numeric_error;
};

// Pipeline stage failure wrapper: records which stage aborted the run.
class stage_error : public error {
 public:
  stage_error(const std::string& stage, const std::string& cause, bool input_cause = false)
      : error("stage '" + stage + "' failed: " + cause),
        stage_(stage),
        input_cause_(input_cause) {}
  const std::string& stage() const { return stage_; }
  bool input_cause() const { return input_cause_; }

 private:
  std::string stage_;
  bool input_cause_;
};

}  // namespace bibscore
