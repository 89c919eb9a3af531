#include "qrng/extractor.hpp"

#include <stdexcept>

#include "qrng/rng.hpp"

namespace qrng::extract {

void ExtractorConfig::validate() const {
  if (recursion_depth_limit < 1)
    throw std::domain_error("recursion depth limit must be >= 1");
  if (chunk_size_bits < 2)
    throw std::domain_error("chunk size must be >= 2 bits");
}

namespace {

void von_neumann_into(const std::vector<std::uint8_t>& bits,
                      std::vector<std::uint8_t>& out) {
  const std::size_t pairs = bits.size() / 2;
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::uint8_t a = bits[2 * i];
    const std::uint8_t b = bits[2 * i + 1];
    if (a != b) out.push_back(a);  // 01 -> 0, 10 -> 1
  }
}

void peres_into(const std::vector<std::uint8_t>& bits, int depth,
                std::vector<std::uint8_t>& out) {
  if (depth <= 0 || bits.size() < 2) return;
  von_neumann_into(bits, out);
  const std::size_t pairs = bits.size() / 2;
  std::vector<std::uint8_t> u;
  std::vector<std::uint8_t> v;
  u.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::uint8_t a = bits[2 * i];
    const std::uint8_t b = bits[2 * i + 1];
    u.push_back(a ^ b);
    if (a == b) v.push_back(a);
  }
  peres_into(u, depth - 1, out);
  peres_into(v, depth - 1, out);
}

}  // namespace

BitSequence von_neumann(const BitSequence& bits) {
  std::vector<std::uint8_t> out;
  out.reserve(bits.size() / 4 + 8);
  von_neumann_into(bits.unpack(), out);
  return BitSequence::from_bits(out);
}

BitSequence peres(const BitSequence& bits, int depth) {
  if (depth < 1) throw std::domain_error("peres: depth must be >= 1");
  std::vector<std::uint8_t> out;
  out.reserve(bits.size() + 8);
  peres_into(bits.unpack(), depth, out);
  return BitSequence::from_bits(out);
}

BitSequence shuffle(const BitSequence& bits, std::uint64_t seed) {
  auto raw = bits.unpack();
  Xoshiro256ss rng(seed);
  for (std::size_t i = raw.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(raw[i - 1], raw[j]);
  }
  return BitSequence::from_bits(raw);
}

std::pair<BitSequence, ExtractionReport> extract_pipeline(
    const BitSequence& bits, const ExtractorConfig& config) {
  config.validate();
  ExtractionReport report;
  report.chunk_size_bits = config.chunk_size_bits;
  report.recursion_depth_limit = config.recursion_depth_limit;
  report.shuffle_seed = config.shuffle_seed;
  report.total_input_bits = bits.size();

  BitSequence output;
  std::size_t complete_chunks = 0;
  std::size_t complete_output_total = 0;
  std::size_t offset = 0;
  std::size_t index = 0;
  while (offset < bits.size()) {
    const std::size_t len = std::min(config.chunk_size_bits, bits.size() - offset);
    const BitSequence chunk = bits.slice(offset, len);
    const std::uint64_t chunk_seed =
        child_seed(config.shuffle_seed, "shuffle", index);
    const BitSequence extracted =
        peres(shuffle(chunk, chunk_seed), config.recursion_depth_limit);
    report.chunks.push_back({len, extracted.size()});
    if (len == config.chunk_size_bits) {
      ++complete_chunks;
      complete_output_total += extracted.size();
    }
    output.append(extracted);
    offset += len;
    ++index;
  }
  report.total_output_bits = output.size();
  report.mean_complete_chunk_output_bits =
      complete_chunks == 0 ? 0.0
                           : static_cast<double>(complete_output_total) /
                                 static_cast<double>(complete_chunks);
  return {std::move(output), report};
}

}  // namespace qrng::extract
