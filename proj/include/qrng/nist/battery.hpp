#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qrng/bit_sequence.hpp"
#include "qrng/nist/tests.hpp"

namespace qrng::nist {

struct BatteryGroup {
  std::size_t sequence_count = 0;
  std::size_t sequence_length_bits = 0;
};

/// Battery layout: most tests run over the short group; the four tests that
/// need longer inputs (Overlapping Template, Linear Complexity and the two
/// excursion tests) run over the long group. Both groups are sliced from the
/// front of the same input pool.
struct BatteryConfig {
  double significance_level = 0.01;
  BatteryGroup short_group{160, 500'000};
  BatteryGroup long_group{80, 1'000'000};
  TestParams params;

  void validate() const;  // throws std::domain_error
};

/// Smallest acceptable number of passing sequences out of m at significance
/// level alpha: floor(m * (p - 3 sqrt(p(1-p)/m))) with p = 1 - alpha.
int proportion_threshold(int sequence_count, double alpha);

/// Uniformity of p-values: chi-square over ten equal bins, returning
/// igamc(9/2, chi2/2). The battery requires this to be >= 1e-4.
double p_value_uniformity(std::span<const double> p_values);

struct SubStatistic {
  std::string label;
  std::vector<double> p_values;  // one per tested sequence
  int proportion_passing = 0;
  double uniformity_p = 0.0;
};

struct TestOutcome {
  TestId id{};
  std::string test_name;
  std::vector<SubStatistic> substats;
  std::size_t sequences_tested = 0;  // after skips
  std::size_t sequences_skipped = 0;
  int threshold = 0;
  // Headline figures for tests with several sub-statistics: the lower-median
  // proportion row and the uniformity of the pooled p-values. Per-row detail
  // lives in `substats`.
  int proportion_passing = 0;
  double uniformity_p = 0.0;
  bool skipped = false;  // no sequence was applicable
  bool pass = false;
};

struct BatteryResult {
  std::vector<TestOutcome> outcomes;
  BatteryConfig config;
  bool all_pass = false;
};

/// Runs all fifteen tests over sequences sliced from the pool per config.
/// A test passes iff its headline proportion meets the threshold and the
/// pooled p-values pass the uniformity requirement. Per-sequence test errors
/// are recorded as skips, not aborts.
BatteryResult run_battery(const BitSequence& pool, const BatteryConfig& config);

std::string format_battery_text(const BatteryResult& result);
nlohmann::json battery_to_json(const BatteryResult& result);

}  // namespace qrng::nist
