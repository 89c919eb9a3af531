#pragma once

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qrng/bit_sequence.hpp"

namespace testutil {

/// Relative difference |a - b| / |b|. Preferred over doctest::Approx for
/// quantities far from magnitude 1 (Approx's scale term makes its epsilon
/// effectively absolute there).
inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::abs(b);
}

/// One-sample Kolmogorov-Smirnov statistic against U(0,1).
inline double ks_statistic_uniform(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = samples[i];
    d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - cdf));
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
  }
  return d;
}

/// Asymptotic Kolmogorov p-value for an n-sample KS statistic d.
inline double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k)
    sum += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// Scratch directory under the system temp path, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("qrng_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

inline std::vector<std::uint8_t> unpack(const qrng::BitSequence& bits) {
  return bits.unpack();
}

}  // namespace testutil
