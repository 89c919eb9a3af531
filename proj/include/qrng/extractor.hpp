#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qrng/bit_sequence.hpp"

namespace qrng::extract {

struct ExtractorConfig {
  int recursion_depth_limit = 16;
  std::uint64_t shuffle_seed = 0;
  std::size_t chunk_size_bits = 2'400'000;

  void validate() const;  // throws std::domain_error
};

/// Classic pair scheme over non-overlapping pairs, left to right:
/// 01 emits 0, 10 emits 1, 00 and 11 emit nothing. An odd trailing bit is
/// dropped. Removes bias from independent bits at a cost of most of the
/// length.
BitSequence von_neumann(const BitSequence& bits);

/// Recursive extension of the pair scheme. With input pairs (a_i, b_i):
///
///   output = von_neumann(bits)
///         ++ peres(u, depth-1)   where u_i = a_i xor b_i over all pairs
///         ++ peres(v, depth-1)   where v = the a_i of pairs with a_i == b_i
///
/// Recursion stops at depth 0 or input length < 2 (empty result). For i.i.d.
/// biased inputs the output is exactly unbiased at every depth, and the
/// output/input length ratio approaches the input entropy rate as depth
/// grows.
BitSequence peres(const BitSequence& bits, int depth);

/// Uniform permutation of bit positions (seeded Fisher-Yates over the
/// generator named in rng.hpp). Deterministic per seed.
BitSequence shuffle(const BitSequence& bits, std::uint64_t seed);

struct ChunkStats {
  std::size_t input_bits = 0;
  std::size_t output_bits = 0;
};

struct ExtractionReport {
  std::vector<ChunkStats> chunks;
  std::size_t total_input_bits = 0;
  std::size_t total_output_bits = 0;
  /// Mean output length over full-size chunks only (a trailing runt chunk
  /// would otherwise drag the mean).
  double mean_complete_chunk_output_bits = 0.0;
  std::size_t chunk_size_bits = 0;
  int recursion_depth_limit = 0;
  std::uint64_t shuffle_seed = 0;
};

/// Splits the input into chunks, applies shuffle then peres per chunk, and
/// concatenates the outputs in chunk order. Each chunk gets an independent
/// shuffle stream derived from (shuffle_seed, chunk index).
std::pair<BitSequence, ExtractionReport> extract_pipeline(
    const BitSequence& bits, const ExtractorConfig& config);

}  // namespace qrng::extract
