#include "qrng/nist/tests.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrng/errors.hpp"
#include "qrng/nist/special.hpp"

namespace qrng::nist {

namespace {

double clamp_p(double p) { return std::min(1.0, std::max(0.0, p)); }

void require_min(std::size_t n, std::size_t min, const char* test) {
  if (n < min)
    throw input_size_error(std::string(test) + ": need at least " +
                           std::to_string(min) + " bits, got " +
                           std::to_string(n));
}

}  // namespace

std::string_view test_name(TestId id) {
  switch (id) {
    case TestId::Frequency: return "Frequency";
    case TestId::BlockFrequency: return "Block Frequency";
    case TestId::CumulativeSums: return "Cumulative Sums";
    case TestId::Runs: return "Runs";
    case TestId::LongestRun: return "Longest Run";
    case TestId::Rank: return "Rank";
    case TestId::Fft: return "FFT";
    case TestId::NonOverlappingTemplate: return "Non Overlapping Template";
    case TestId::OverlappingTemplate: return "Overlapping Template";
    case TestId::Universal: return "Universal";
    case TestId::ApproximateEntropy: return "Approximate Entropy";
    case TestId::RandomExcursions: return "Random Excursions";
    case TestId::RandomExcursionsVariant: return "Random Excursions Variant";
    case TestId::Serial: return "Serial";
    case TestId::LinearComplexity: return "Linear Complexity";
  }
  throw std::invalid_argument("unknown test id");
}

TestId test_from_name(std::string_view name) {
  for (int i = 0; i < kTestCount; ++i) {
    const auto id = static_cast<TestId>(i);
    if (test_name(id) == name) return id;
  }
  throw std::invalid_argument("unknown test name: " + std::string(name));
}

// ---------------------------------------------------------------------------
// Frequency (monobit)
// ---------------------------------------------------------------------------
std::vector<double> frequency_test(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 100, "Frequency");
  long long sum = 0;
  for (std::uint8_t b : bits) sum += 2 * static_cast<int>(b) - 1;
  const double s_obs =
      std::abs(static_cast<double>(sum)) / std::sqrt(static_cast<double>(n));
  return {clamp_p(erfc(s_obs / std::numbers::sqrt2))};
}

// ---------------------------------------------------------------------------
// Frequency within a block
// ---------------------------------------------------------------------------
std::vector<double> block_frequency_test(std::span<const std::uint8_t> bits,
                                         int block_len) {
  const std::size_t n = bits.size();
  require_min(n, 100, "Block Frequency");
  if (block_len < 2) throw std::invalid_argument("block length must be >= 2");
  const std::size_t M = static_cast<std::size_t>(block_len);
  const std::size_t N = n / M;
  if (N == 0)
    throw input_size_error("Block Frequency: need at least one full block");
  double chi2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < M; ++j) ones += bits[i * M + j];
    const double pi = static_cast<double>(ones) / static_cast<double>(M);
    chi2 += (pi - 0.5) * (pi - 0.5);
  }
  chi2 *= 4.0 * static_cast<double>(M);
  return {clamp_p(igamc(static_cast<double>(N) / 2.0, chi2 / 2.0))};
}

// ---------------------------------------------------------------------------
// Cumulative sums (forward and backward)
// ---------------------------------------------------------------------------
namespace {
double cusum_p_value(long long n, long long z) {
  const double sq = std::sqrt(static_cast<double>(n));
  const double zd = static_cast<double>(z);
  double sum1 = 0.0;
  long long start = (-n / z + 1) / 4;
  long long finish = (n / z - 1) / 4;
  for (long long k = start; k <= finish; ++k)
    sum1 += normal_cdf((4.0 * k + 1) * zd / sq) - normal_cdf((4.0 * k - 1) * zd / sq);
  double sum2 = 0.0;
  start = (-n / z - 3) / 4;
  for (long long k = start; k <= finish; ++k)
    sum2 += normal_cdf((4.0 * k + 3) * zd / sq) - normal_cdf((4.0 * k + 1) * zd / sq);
  return clamp_p(1.0 - sum1 + sum2);
}
}  // namespace

std::vector<double> cumulative_sums_test(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 100, "Cumulative Sums");
  long long s = 0;
  long long z_fwd = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s += 2 * static_cast<int>(bits[i]) - 1;
    z_fwd = std::max(z_fwd, std::abs(s));
  }
  s = 0;
  long long z_rev = 0;
  for (std::size_t i = n; i-- > 0;) {
    s += 2 * static_cast<int>(bits[i]) - 1;
    z_rev = std::max(z_rev, std::abs(s));
  }
  const auto nn = static_cast<long long>(n);
  return {cusum_p_value(nn, z_fwd), cusum_p_value(nn, z_rev)};
}

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------
std::vector<double> runs_test(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 100, "Runs");
  std::size_t ones = 0;
  for (std::uint8_t b : bits) ones += b;
  const double pi = static_cast<double>(ones) / static_cast<double>(n);
  // prerequisite frequency check; a failing sequence scores p = 0
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(static_cast<double>(n)))
    return {0.0};
  std::size_t v_obs = 1;
  for (std::size_t i = 1; i < n; ++i) v_obs += bits[i] != bits[i - 1];
  const double product = pi * (1.0 - pi);
  const double num =
      std::abs(static_cast<double>(v_obs) - 2.0 * static_cast<double>(n) * product);
  const double den = 2.0 * std::sqrt(2.0 * static_cast<double>(n)) * product;
  return {clamp_p(erfc(num / den))};
}

// ---------------------------------------------------------------------------
// Longest run of ones in a block
// ---------------------------------------------------------------------------
std::vector<double> longest_run_test(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 128, "Longest Run");
  std::size_t M;
  int K;
  int lo;
  int hi;
  std::vector<double> pi;
  if (n < 6272) {
    M = 8; K = 3; lo = 1; hi = 4;
    pi = {0.21484375, 0.3671875, 0.23046875, 0.1875};
  } else if (n < 750000) {
    M = 128; K = 5; lo = 4; hi = 9;
    pi = {0.1174035788, 0.242955959, 0.249363483, 0.17517706, 0.102701071,
          0.112398847};
  } else {
    M = 10000; K = 6; lo = 10; hi = 16;
    pi = {0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727};
  }
  const std::size_t N = n / M;
  std::vector<std::size_t> nu(static_cast<std::size_t>(K) + 1, 0);
  for (std::size_t i = 0; i < N; ++i) {
    int longest = 0;
    int run = 0;
    for (std::size_t j = i * M; j < (i + 1) * M; ++j) {
      run = bits[j] ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    const int v = std::clamp(longest, lo, hi);
    ++nu[static_cast<std::size_t>(v - lo)];
  }
  double chi2 = 0.0;
  for (int i = 0; i <= K; ++i) {
    const double expect = static_cast<double>(N) * pi[static_cast<std::size_t>(i)];
    const double diff = static_cast<double>(nu[static_cast<std::size_t>(i)]) - expect;
    chi2 += diff * diff / expect;
  }
  return {clamp_p(igamc(K / 2.0, chi2 / 2.0))};
}

// ---------------------------------------------------------------------------
// Binary matrix rank (32x32)
// ---------------------------------------------------------------------------
namespace {
int gf2_rank_32(std::array<std::uint32_t, 32>& rows) {
  int rank = 0;
  for (int col = 0; col < 32 && rank < 32; ++col) {
    const std::uint32_t mask = 1U << (31 - col);
    int pivot = -1;
    for (int r = rank; r < 32; ++r)
      if (rows[static_cast<std::size_t>(r)] & mask) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[static_cast<std::size_t>(rank)], rows[static_cast<std::size_t>(pivot)]);
    for (int r = 0; r < 32; ++r)
      if (r != rank && (rows[static_cast<std::size_t>(r)] & mask))
        rows[static_cast<std::size_t>(r)] ^= rows[static_cast<std::size_t>(rank)];
    ++rank;
  }
  return rank;
}

double rank_probability(int r, int n = 32) {
  double prod = 1.0;
  for (int i = 0; i < r; ++i) {
    const double a = 1.0 - std::pow(2.0, i - n);
    prod *= a * a / (1.0 - std::pow(2.0, i - r));
  }
  return std::pow(2.0, static_cast<double>(r) * (2.0 * n - r) - n * n) * prod;
}
}  // namespace

std::vector<double> rank_test(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 38 * 1024, "Rank");
  const std::size_t N = n / 1024;
  std::size_t f32 = 0;
  std::size_t f31 = 0;
  for (std::size_t k = 0; k < N; ++k) {
    std::array<std::uint32_t, 32> rows{};
    for (int r = 0; r < 32; ++r) {
      std::uint32_t word = 0;
      const std::size_t base = k * 1024 + static_cast<std::size_t>(r) * 32;
      for (int c = 0; c < 32; ++c)
        word = (word << 1) | bits[base + static_cast<std::size_t>(c)];
      rows[static_cast<std::size_t>(r)] = word;
    }
    const int rank = gf2_rank_32(rows);
    if (rank == 32)
      ++f32;
    else if (rank == 31)
      ++f31;
  }
  const double p32 = rank_probability(32);
  const double p31 = rank_probability(31);
  const double p30 = 1.0 - p32 - p31;
  const double nd = static_cast<double>(N);
  const double f30 = nd - static_cast<double>(f32) - static_cast<double>(f31);
  double chi2 = (static_cast<double>(f32) - nd * p32) * (static_cast<double>(f32) - nd * p32) / (nd * p32);
  chi2 += (static_cast<double>(f31) - nd * p31) * (static_cast<double>(f31) - nd * p31) / (nd * p31);
  chi2 += (f30 - nd * p30) * (f30 - nd * p30) / (nd * p30);
  return {clamp_p(std::exp(-chi2 / 2.0))};
}

// ---------------------------------------------------------------------------
// Discrete Fourier transform (spectral)
// ---------------------------------------------------------------------------
std::vector<double> dft_test(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 1000, "FFT");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 2.0 * bits[i] - 1.0;
  std::vector<double> spectrum(2 * (n / 2 + 1));
  fftw_plan plan = fftw_plan_dft_r2c_1d(
      static_cast<int>(n), x.data(),
      reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const double threshold = std::sqrt(2.995732273553991 * static_cast<double>(n));
  const std::size_t half = n / 2;
  std::size_t below = 0;
  for (std::size_t k = 0; k < half; ++k) {
    const double re = spectrum[2 * k];
    const double im = spectrum[2 * k + 1];
    if (std::sqrt(re * re + im * im) < threshold) ++below;
  }
  const double n0 = 0.95 * static_cast<double>(n) / 2.0;
  const double d = (static_cast<double>(below) - n0) /
                   std::sqrt(static_cast<double>(n) / 4.0 * 0.95 * 0.05);
  return {clamp_p(erfc(std::abs(d) / std::numbers::sqrt2))};
}

// ---------------------------------------------------------------------------
// Non-overlapping template matching
// ---------------------------------------------------------------------------
std::vector<std::uint32_t> aperiodic_templates(int template_len) {
  if (template_len < 2 || template_len > 16)
    throw std::invalid_argument("template length must be in [2,16]");
  const int m = template_len;
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < (1U << m); ++v) {
    bool aperiodic = true;
    for (int k = 1; k < m && aperiodic; ++k) {
      // border of length m-k: prefix equals the suffix starting at shift k
      const std::uint32_t prefix = v >> k;
      const std::uint32_t suffix = v & ((1U << (m - k)) - 1U);
      if (prefix == suffix) aperiodic = false;
    }
    if (aperiodic) out.push_back(v);
  }
  return out;
}

std::vector<double> nonoverlapping_template_test(
    std::span<const std::uint8_t> bits, int template_len) {
  const std::size_t n = bits.size();
  const int m = template_len;
  if (m < 2 || m > 16)
    throw std::invalid_argument("template length must be in [2,16]");
  require_min(n, 8 * static_cast<std::size_t>(m) * 2, "Non Overlapping Template");
  constexpr std::size_t N = 8;
  const std::size_t M = n / N;
  const double lambda =
      static_cast<double>(M - static_cast<std::size_t>(m) + 1) / std::pow(2.0, m);
  const double var = static_cast<double>(M) *
                     (1.0 / std::pow(2.0, m) -
                      (2.0 * m - 1.0) / std::pow(2.0, 2.0 * m));
  const auto templates = aperiodic_templates(m);

  // One scan per block: bucket window positions by their m-bit value, then
  // walk each template's bucket with the skip-after-match rule.
  std::vector<std::vector<std::uint32_t>> positions(1U << m);
  std::vector<double> chi2(templates.size(), 0.0);
  for (std::size_t blk = 0; blk < N; ++blk) {
    for (auto& bucket : positions) bucket.clear();
    const std::size_t base = blk * M;
    std::uint32_t window = 0;
    const std::uint32_t mask = (1U << m) - 1U;
    for (std::size_t j = 0; j < M; ++j) {
      window = ((window << 1) | bits[base + j]) & mask;
      if (j + 1 >= static_cast<std::size_t>(m))
        positions[window].push_back(static_cast<std::uint32_t>(j + 1 - static_cast<std::size_t>(m)));
    }
    for (std::size_t t = 0; t < templates.size(); ++t) {
      std::uint32_t count = 0;
      std::uint32_t next_allowed = 0;
      for (std::uint32_t pos : positions[templates[t]]) {
        if (pos >= next_allowed) {
          ++count;
          next_allowed = pos + static_cast<std::uint32_t>(m);
        }
      }
      const double diff = static_cast<double>(count) - lambda;
      chi2[t] += diff * diff / var;
    }
  }
  std::vector<double> pvals(templates.size());
  for (std::size_t t = 0; t < templates.size(); ++t)
    pvals[t] = clamp_p(igamc(N / 2.0, chi2[t] / 2.0));
  return pvals;
}

// ---------------------------------------------------------------------------
// Overlapping template matching
// ---------------------------------------------------------------------------
std::vector<double> overlapping_template_test(
    std::span<const std::uint8_t> bits, int template_len) {
  if (template_len != 9)
    throw std::invalid_argument(
        "Overlapping Template: only template length 9 is supported (tabulated "
        "category probabilities)");
  const std::size_t n = bits.size();
  constexpr std::size_t M = 1032;
  require_min(n, M, "Overlapping Template");
  const std::size_t N = n / M;
  constexpr int K = 5;
  // category probabilities for m = 9, M = 1032
  static constexpr std::array<double, 6> pi = {0.364091, 0.185659, 0.139381,
                                               0.100571, 0.070432, 0.139865};
  std::array<std::size_t, 6> nu{};
  const std::size_t m = 9;
  for (std::size_t blk = 0; blk < N; ++blk) {
    const std::size_t base = blk * M;
    std::size_t hits = 0;
    int run = 0;
    for (std::size_t j = 0; j < M; ++j) {
      run = bits[base + j] ? run + 1 : 0;
      if (static_cast<std::size_t>(run) >= m) ++hits;  // overlapping windows
    }
    ++nu[std::min<std::size_t>(hits, 5)];
  }
  double chi2 = 0.0;
  for (int i = 0; i <= K; ++i) {
    const double expect = static_cast<double>(N) * pi[static_cast<std::size_t>(i)];
    const double diff = static_cast<double>(nu[static_cast<std::size_t>(i)]) - expect;
    chi2 += diff * diff / expect;
  }
  return {clamp_p(igamc(K / 2.0, chi2 / 2.0))};
}

// ---------------------------------------------------------------------------
// Maurer's universal statistical test
// ---------------------------------------------------------------------------
std::vector<double> universal_test(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 387840, "Universal");
  int L = 6;
  if (n >= 1059061760) L = 16;
  else if (n >= 496435200) L = 15;
  else if (n >= 231669760) L = 14;
  else if (n >= 107560960) L = 13;
  else if (n >= 49643520) L = 12;
  else if (n >= 22753280) L = 11;
  else if (n >= 10342400) L = 10;
  else if (n >= 4654080) L = 9;
  else if (n >= 2068480) L = 8;
  else if (n >= 904960) L = 7;
  static constexpr std::array<double, 17> expected = {
      0, 0, 0, 0, 0, 0, 5.2177052, 6.1962507, 7.1836656, 8.1764248,
      9.1723243, 10.170032, 11.168765, 12.168070, 13.167693, 14.167488,
      15.167379};
  static constexpr std::array<double, 17> variance = {
      0, 0, 0, 0, 0, 0, 2.954, 3.125, 3.238, 3.311, 3.356, 3.384, 3.401,
      3.410, 3.416, 3.419, 3.421};
  const std::size_t Q = 10ULL << L;
  const std::size_t K = n / static_cast<std::size_t>(L) - Q;
  const double c = 0.7 - 0.8 / L +
                   (4.0 + 32.0 / L) *
                       std::pow(static_cast<double>(K), -3.0 / L) / 15.0;
  const double sigma =
      c * std::sqrt(variance[static_cast<std::size_t>(L)] / static_cast<double>(K));
  std::vector<std::size_t> table(1ULL << L, 0);
  auto block_value = [&](std::size_t i) {  // i is 1-based block index
    std::size_t dec = 0;
    const std::size_t base = (i - 1) * static_cast<std::size_t>(L);
    for (int j = 0; j < L; ++j)
      dec = (dec << 1) | bits[base + static_cast<std::size_t>(j)];
    return dec;
  };
  for (std::size_t i = 1; i <= Q; ++i) table[block_value(i)] = i;
  double sum = 0.0;
  for (std::size_t i = Q + 1; i <= Q + K; ++i) {
    const std::size_t dec = block_value(i);
    sum += std::log2(static_cast<double>(i - table[dec]));
    table[dec] = i;
  }
  const double fn = sum / static_cast<double>(K);
  const double arg = std::abs(fn - expected[static_cast<std::size_t>(L)]) /
                     (std::numbers::sqrt2 * sigma);
  return {clamp_p(erfc(arg))};
}

// ---------------------------------------------------------------------------
// Approximate entropy
// ---------------------------------------------------------------------------
namespace {
/// Counts of overlapping circular m-bit windows.
std::vector<std::uint32_t> circular_window_counts(
    std::span<const std::uint8_t> bits, int m) {
  const std::size_t n = bits.size();
  std::vector<std::uint32_t> counts(1ULL << m, 0);
  std::uint32_t window = 0;
  const std::uint32_t mask = (1U << m) - 1U;
  for (int i = 0; i < m; ++i)
    window = (window << 1) | bits[static_cast<std::size_t>(i) % n];
  ++counts[window & mask];
  for (std::size_t i = 1; i < n; ++i) {
    window = ((window << 1) | bits[(i + static_cast<std::size_t>(m) - 1) % n]) & mask;
    ++counts[window];
  }
  return counts;
}

/// Folds m-bit window counts down to (m-1)-bit prefix counts.
std::vector<std::uint32_t> fold_counts(const std::vector<std::uint32_t>& counts) {
  std::vector<std::uint32_t> out(counts.size() / 2);
  for (std::size_t v = 0; v < out.size(); ++v)
    out[v] = counts[2 * v] + counts[2 * v + 1];
  return out;
}

double phi_statistic(const std::vector<std::uint32_t>& counts, std::size_t n) {
  double sum = 0.0;
  for (std::uint32_t c : counts) {
    if (c == 0) continue;
    const double cd = static_cast<double>(c);
    sum += cd * std::log(cd / static_cast<double>(n));
  }
  return sum / static_cast<double>(n);
}
}  // namespace

std::vector<double> approximate_entropy_test(std::span<const std::uint8_t> bits,
                                             int block_len) {
  const std::size_t n = bits.size();
  const int m = block_len;
  if (m < 1) throw std::invalid_argument("block length must be >= 1");
  if (static_cast<double>(m) >= std::log2(static_cast<double>(n)) - 5.0)
    throw input_size_error(
        "Approximate Entropy: need block length below log2(n) - 5");
  const auto counts_m1 = circular_window_counts(bits, m + 1);
  const auto counts_m = fold_counts(counts_m1);
  const double apen = phi_statistic(counts_m, n) - phi_statistic(counts_m1, n);
  const double chi2 = 2.0 * static_cast<double>(n) * (std::numbers::ln2 - apen);
  return {clamp_p(igamc(std::pow(2.0, m - 1), chi2 / 2.0))};
}

// ---------------------------------------------------------------------------
// Random excursions (and variant)
// ---------------------------------------------------------------------------
namespace {
double excursion_pi(int x, int k) {
  const double ax = std::abs(x);
  if (k == 0) return 1.0 - 1.0 / (2.0 * ax);
  if (k < 5)
    return (1.0 / (4.0 * ax * ax)) * std::pow(1.0 - 1.0 / (2.0 * ax), k - 1);
  return (1.0 / (2.0 * ax)) * std::pow(1.0 - 1.0 / (2.0 * ax), 4.0);
}

std::size_t cycle_constraint(std::size_t n) {
  return std::max<std::size_t>(
      static_cast<std::size_t>(0.005 * std::sqrt(static_cast<double>(n))), 500);
}
}  // namespace

std::vector<double> random_excursions_test(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 100, "Random Excursions");
  static constexpr std::array<int, 8> states = {-4, -3, -2, -1, 1, 2, 3, 4};
  // nu[k][state]: number of cycles with exactly k visits (k = 5 means >= 5)
  std::array<std::array<std::size_t, 8>, 6> nu{};
  std::array<std::size_t, 8> visits{};
  std::size_t cycles = 0;
  long long s = 0;
  auto close_cycle = [&] {
    ++cycles;
    for (std::size_t i = 0; i < 8; ++i) {
      ++nu[std::min<std::size_t>(visits[i], 5)][i];
      visits[i] = 0;
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    s += 2 * static_cast<int>(bits[i]) - 1;
    if (s == 0) {
      close_cycle();
    } else if (s >= -4 && s <= 4) {
      ++visits[static_cast<std::size_t>(s < 0 ? s + 4 : s + 3)];
    }
  }
  if (s != 0) close_cycle();
  if (cycles < cycle_constraint(n)) return {};  // skipped
  std::vector<double> pvals;
  pvals.reserve(8);
  const double J = static_cast<double>(cycles);
  for (std::size_t i = 0; i < 8; ++i) {
    double chi2 = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double expect = J * excursion_pi(states[i], k);
      const double diff = static_cast<double>(nu[static_cast<std::size_t>(k)][i]) - expect;
      chi2 += diff * diff / expect;
    }
    pvals.push_back(clamp_p(igamc(2.5, chi2 / 2.0)));
  }
  return pvals;
}

std::vector<double> random_excursions_variant_test(
    std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  require_min(n, 100, "Random Excursions Variant");
  std::array<std::size_t, 19> visits{};  // index x + 9 for x in [-9, 9]
  std::size_t zero_crossings = 0;
  long long s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s += 2 * static_cast<int>(bits[i]) - 1;
    if (s == 0)
      ++zero_crossings;
    else if (s >= -9 && s <= 9)
      ++visits[static_cast<std::size_t>(s + 9)];
  }
  const std::size_t J = zero_crossings + (s != 0 ? 1 : 0);
  if (J < cycle_constraint(n)) return {};  // skipped
  std::vector<double> pvals;
  pvals.reserve(18);
  for (int x = -9; x <= 9; ++x) {
    if (x == 0) continue;
    const double xi = static_cast<double>(visits[static_cast<std::size_t>(x + 9)]);
    const double denom =
        std::sqrt(2.0 * static_cast<double>(J) * (4.0 * std::abs(x) - 2.0));
    pvals.push_back(clamp_p(erfc(std::abs(xi - static_cast<double>(J)) / denom)));
  }
  return pvals;
}

// ---------------------------------------------------------------------------
// Serial
// ---------------------------------------------------------------------------
std::vector<double> serial_test(std::span<const std::uint8_t> bits,
                                int block_len) {
  const std::size_t n = bits.size();
  const int m = block_len;
  if (m < 3) throw std::invalid_argument("serial block length must be >= 3");
  if (static_cast<double>(m) >= std::log2(static_cast<double>(n)) - 2.0)
    throw input_size_error("Serial: need block length below log2(n) - 2");
  auto psi2 = [n](const std::vector<std::uint32_t>& counts) {
    double sum = 0.0;
    for (std::uint32_t c : counts)
      sum += static_cast<double>(c) * static_cast<double>(c);
    return sum * static_cast<double>(counts.size()) / static_cast<double>(n) -
           static_cast<double>(n);
  };
  const auto counts_m = circular_window_counts(bits, m);
  const auto counts_m1 = fold_counts(counts_m);
  const auto counts_m2 = fold_counts(counts_m1);
  const double psi_m = psi2(counts_m);
  const double psi_m1 = psi2(counts_m1);
  const double psi_m2 = psi2(counts_m2);
  const double del1 = psi_m - psi_m1;
  const double del2 = psi_m - 2.0 * psi_m1 + psi_m2;
  return {clamp_p(igamc(std::pow(2.0, m - 2), del1 / 2.0)),
          clamp_p(igamc(std::pow(2.0, m - 3), del2 / 2.0))};
}

// ---------------------------------------------------------------------------
// Linear complexity
// ---------------------------------------------------------------------------
namespace {
constexpr std::size_t kLcMaxWords = 80;  // supports block lengths to 5120

/// Left-shifts `words` (LSB-first bit order) by `shift` bits.
void shift_left(std::array<std::uint64_t, kLcMaxWords>& words, std::size_t nwords,
                std::size_t shift, std::array<std::uint64_t, kLcMaxWords>& out) {
  const std::size_t q = shift / 64;
  const std::size_t r = shift % 64;
  for (std::size_t j = nwords; j-- > 0;) {
    std::uint64_t v = 0;
    if (j >= q) {
      v = words[j - q] << r;
      if (r != 0 && j > q) v |= words[j - q - 1] >> (64 - r);
    }
    out[j] = v;
  }
}
}  // namespace

int linear_complexity(std::span<const std::uint8_t> bits) {
  const std::size_t n = bits.size();
  const std::size_t nwords = (n + 63) / 64;
  if (nwords > kLcMaxWords)
    throw std::invalid_argument("linear_complexity: block too long");
  // c, b: connection polynomials; rev: the sequence seen so far, reversed
  // (bit k of rev = s[i-k]), so the discrepancy is a masked AND-parity.
  std::array<std::uint64_t, kLcMaxWords> c{};
  std::array<std::uint64_t, kLcMaxWords> b{};
  std::array<std::uint64_t, kLcMaxWords> rev{};
  std::array<std::uint64_t, kLcMaxWords> scratch{};
  c[0] = 1;
  b[0] = 1;
  int L = 0;
  long long m = -1;
  for (std::size_t i = 0; i < n; ++i) {
    // rev <<= 1; rev[bit 0] = s[i]
    for (std::size_t j = nwords; j-- > 1;)
      rev[j] = (rev[j] << 1) | (rev[j - 1] >> 63);
    rev[0] = (rev[0] << 1) | bits[i];
    // d = parity of c AND rev (c has no set bits above degree L <= i)
    std::uint64_t acc = 0;
    const std::size_t active = static_cast<std::size_t>(L) / 64 + 1;
    for (std::size_t j = 0; j < active; ++j) acc ^= c[j] & rev[j];
    if (std::popcount(acc) % 2 == 0) continue;
    // discrepancy: c ^= b << (i - m), possibly promoting the register length
    const std::size_t shift = static_cast<std::size_t>(static_cast<long long>(i) - m);
    if (2 * L <= static_cast<int>(i)) {
      for (std::size_t j = 0; j < nwords; ++j) scratch[j] = c[j];
      shift_left(b, nwords, shift, c);
      for (std::size_t j = 0; j < nwords; ++j) c[j] ^= scratch[j];
      // previous c becomes the new b only on length promotion
      for (std::size_t j = 0; j < nwords; ++j) b[j] = scratch[j];
      L = static_cast<int>(i) + 1 - L;
      m = static_cast<long long>(i);
    } else {
      shift_left(b, nwords, shift, scratch);
      for (std::size_t j = 0; j < nwords; ++j) c[j] ^= scratch[j];
    }
  }
  return L;
}

std::vector<double> linear_complexity_test(std::span<const std::uint8_t> bits,
                                           int block_len) {
  const std::size_t n = bits.size();
  const std::size_t M = static_cast<std::size_t>(block_len);
  if (block_len < 500 || block_len > 5000)
    throw std::invalid_argument("Linear Complexity: block length in [500,5000]");
  require_min(n, 200 * M, "Linear Complexity");
  const std::size_t N = n / M;
  constexpr int K = 6;
  static constexpr std::array<double, 7> pi = {0.010417, 0.03125, 0.125, 0.5,
                                               0.25, 0.0625, 0.020833};
  const double Md = static_cast<double>(M);
  const double sign = (M % 2 == 0) ? 1.0 : -1.0;  // (-1)^M
  const double mu = Md / 2.0 + (9.0 - sign) / 36.0 -
                    (Md / 3.0 + 2.0 / 9.0) / std::pow(2.0, Md);
  std::array<std::size_t, 7> nu{};
  for (std::size_t i = 0; i < N; ++i) {
    const int L = linear_complexity(bits.subspan(i * M, M));
    const double T = sign * (static_cast<double>(L) - mu) + 2.0 / 9.0;
    int bin;
    if (T <= -2.5) bin = 0;
    else if (T <= -1.5) bin = 1;
    else if (T <= -0.5) bin = 2;
    else if (T <= 0.5) bin = 3;
    else if (T <= 1.5) bin = 4;
    else if (T <= 2.5) bin = 5;
    else bin = 6;
    ++nu[static_cast<std::size_t>(bin)];
  }
  double chi2 = 0.0;
  for (int i = 0; i <= K; ++i) {
    const double expect = static_cast<double>(N) * pi[static_cast<std::size_t>(i)];
    const double diff = static_cast<double>(nu[static_cast<std::size_t>(i)]) - expect;
    chi2 += diff * diff / expect;
  }
  return {clamp_p(igamc(K / 2.0, chi2 / 2.0))};
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------
std::vector<double> run_test(TestId id, std::span<const std::uint8_t> bits,
                             const TestParams& params) {
  switch (id) {
    case TestId::Frequency: return frequency_test(bits);
    case TestId::BlockFrequency:
      return block_frequency_test(bits, params.block_frequency_block_len);
    case TestId::CumulativeSums: return cumulative_sums_test(bits);
    case TestId::Runs: return runs_test(bits);
    case TestId::LongestRun: return longest_run_test(bits);
    case TestId::Rank: return rank_test(bits);
    case TestId::Fft: return dft_test(bits);
    case TestId::NonOverlappingTemplate:
      return nonoverlapping_template_test(bits, params.nonoverlapping_template_len);
    case TestId::OverlappingTemplate:
      return overlapping_template_test(bits, params.overlapping_template_len);
    case TestId::Universal: return universal_test(bits);
    case TestId::ApproximateEntropy:
      return approximate_entropy_test(bits, params.approximate_entropy_block_len);
    case TestId::RandomExcursions: return random_excursions_test(bits);
    case TestId::RandomExcursionsVariant:
      return random_excursions_variant_test(bits);
    case TestId::Serial: return serial_test(bits, params.serial_block_len);
    case TestId::LinearComplexity:
      return linear_complexity_test(bits, params.linear_complexity_block_len);
  }
  throw std::invalid_argument("unknown test id");
}

std::vector<double> run_test(std::string_view name,
                             std::span<const std::uint8_t> bits,
                             const TestParams& params) {
  return run_test(test_from_name(name), bits, params);
}

std::vector<std::string> substatistic_labels(TestId id,
                                             const TestParams& params) {
  switch (id) {
    case TestId::CumulativeSums: return {"forward", "backward"};
    case TestId::Serial: return {"del1", "del2"};
    case TestId::NonOverlappingTemplate: {
      const auto templates =
          aperiodic_templates(params.nonoverlapping_template_len);
      std::vector<std::string> labels;
      labels.reserve(templates.size());
      for (std::uint32_t t : templates) {
        std::string s;
        for (int j = params.nonoverlapping_template_len - 1; j >= 0; --j)
          s += ((t >> j) & 1U) ? '1' : '0';
        labels.push_back("template " + s);
      }
      return labels;
    }
    case TestId::RandomExcursions: {
      std::vector<std::string> labels;
      for (int x : {-4, -3, -2, -1, 1, 2, 3, 4})
        labels.push_back("x=" + std::to_string(x));
      return labels;
    }
    case TestId::RandomExcursionsVariant: {
      std::vector<std::string> labels;
      for (int x = -9; x <= 9; ++x)
        if (x != 0) labels.push_back("x=" + std::to_string(x));
      return labels;
    }
    default: return {"statistic"};
  }
}

}  // namespace qrng::nist
