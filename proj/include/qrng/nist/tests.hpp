#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qrng::nist {

/// Per-test parameters. Defaults follow the suite's recommended values for
/// the sequence lengths used here.
struct TestParams {
  int block_frequency_block_len = 128;
  int nonoverlapping_template_len = 9;
  int overlapping_template_len = 9;  // only 9 is supported (tabulated pi)
  int approximate_entropy_block_len = 10;
  int serial_block_len = 16;
  int linear_complexity_block_len = 500;
};

enum class TestId {
  Frequency,
  BlockFrequency,
  CumulativeSums,
  Runs,
  LongestRun,
  Rank,
  Fft,
  NonOverlappingTemplate,
  OverlappingTemplate,
  Universal,
  ApproximateEntropy,
  RandomExcursions,
  RandomExcursionsVariant,
  Serial,
  LinearComplexity,
};

inline constexpr int kTestCount = 15;

std::string_view test_name(TestId id);
TestId test_from_name(std::string_view name);

// Each test takes unpacked bits (one byte per bit, values 0/1) and returns
// one p-value per sub-statistic. Tests throw input_size_error when the input
// is below the test's minimum length, naming the violated minimum. The
// random-excursions family returns an empty vector when the walk has too few
// cycles (the sequence is skipped for that test, not failed).

std::vector<double> frequency_test(std::span<const std::uint8_t> bits);
std::vector<double> block_frequency_test(std::span<const std::uint8_t> bits,
                                         int block_len);
/// Two p-values: forward and backward maximal-excursion variants.
std::vector<double> cumulative_sums_test(std::span<const std::uint8_t> bits);
std::vector<double> runs_test(std::span<const std::uint8_t> bits);
std::vector<double> longest_run_test(std::span<const std::uint8_t> bits);
std::vector<double> rank_test(std::span<const std::uint8_t> bits);
std::vector<double> dft_test(std::span<const std::uint8_t> bits);
/// One p-value per aperiodic template (148 templates for length 9).
std::vector<double> nonoverlapping_template_test(
    std::span<const std::uint8_t> bits, int template_len);
std::vector<double> overlapping_template_test(
    std::span<const std::uint8_t> bits, int template_len);
std::vector<double> universal_test(std::span<const std::uint8_t> bits);
std::vector<double> approximate_entropy_test(std::span<const std::uint8_t> bits,
                                             int block_len);
/// Eight p-values (states -4..-1, +1..+4), or empty when skipped.
std::vector<double> random_excursions_test(std::span<const std::uint8_t> bits);
/// Eighteen p-values (states -9..-1, +1..+9), or empty when skipped.
std::vector<double> random_excursions_variant_test(
    std::span<const std::uint8_t> bits);
/// Two p-values (first and second difference statistics).
std::vector<double> serial_test(std::span<const std::uint8_t> bits,
                                int block_len);
std::vector<double> linear_complexity_test(std::span<const std::uint8_t> bits,
                                           int block_len);

/// Dispatcher used by the battery and the CLI.
std::vector<double> run_test(TestId id, std::span<const std::uint8_t> bits,
                             const TestParams& params);
std::vector<double> run_test(std::string_view name,
                             std::span<const std::uint8_t> bits,
                             const TestParams& params);

/// Labels for each sub-statistic of a test ("forward", "x=+1", ...). Size
/// matches the p-value vector the test returns when not skipped.
std::vector<std::string> substatistic_labels(TestId id, const TestParams& params);

/// All aperiodic (unbordered) templates of the given length, as MSB-first
/// integers. 148 templates exist for length 9.
std::vector<std::uint32_t> aperiodic_templates(int template_len);

/// Linear feedback shift register length of the sequence (Berlekamp-Massey).
int linear_complexity(std::span<const std::uint8_t> bits);

}  // namespace qrng::nist
