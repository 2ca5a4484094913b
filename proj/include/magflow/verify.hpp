#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "magflow/magnetic_flow.hpp"

namespace magflow::verify {

struct Options {
  /// Orientation handed to the numeric integrator; Flipped is the mutation check.
  Orientation orientation = Orientation::Standard;
  std::size_t mc_samples = 10'000'000;
  std::uint64_t seed = 20240917;
  /// Count exceeding a criterion's runtime budget as a failure.
  bool enforce_runtime = true;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  nlohmann::json measured;
  std::string error;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  /// Fills `measured` and returns whether the numeric thresholds hold.
  std::function<bool(const Options&, nlohmann::json& measured)> check;
};

/// Every acceptance criterion, numbered as in the README, followed by the
/// exact-vs-numeric flow oracle.
const std::vector<Criterion>& criteria();

CriterionResult run(const Criterion& c, const Options& opts);

/// Runs the criteria whose ids are listed (all when empty), calling `on_result` after each.
std::vector<CriterionResult> run_all(const Options& opts, const std::vector<int>& only = {},
                                     const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 03 distance-profile-derivatives  0.012 s  {...}".
std::string summary_line(const CriterionResult& r);

nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace magflow::verify
