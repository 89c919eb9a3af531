#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace qrng {

/// Length-aware packed bit sequence. Bits are stored MSB-first within each
/// byte; trailing pad bits of the last byte are always zero. This matches the
/// on-disk QBITS001 payload layout byte for byte.
class BitSequence {
 public:
  BitSequence() = default;
  explicit BitSequence(std::size_t length)
      : payload_((length + 7) / 8, 0), length_(length) {}

  static BitSequence from_bits(std::span<const std::uint8_t> bits);
  static BitSequence from_string(std::string_view zeros_and_ones);

  [[nodiscard]] std::size_t size() const noexcept { return length_; }
  [[nodiscard]] bool empty() const noexcept { return length_ == 0; }

  [[nodiscard]] int get(std::size_t i) const {
    return (payload_[i >> 3] >> (7 - (i & 7))) & 1;
  }

  void set(std::size_t i, int bit) {
    const std::uint8_t mask = static_cast<std::uint8_t>(1U << (7 - (i & 7)));
    if (bit)
      payload_[i >> 3] |= mask;
    else
      payload_[i >> 3] &= static_cast<std::uint8_t>(~mask);
  }

  void append(int bit);
  void append(const BitSequence& other);

  [[nodiscard]] BitSequence slice(std::size_t offset, std::size_t count) const;
  [[nodiscard]] std::size_t count_ones() const;

  /// One byte per bit (values 0/1); convenient for scan-heavy consumers.
  [[nodiscard]] std::vector<std::uint8_t> unpack() const;

  [[nodiscard]] const std::vector<std::uint8_t>& payload() const noexcept {
    return payload_;
  }

  [[nodiscard]] std::string to_string() const;

  // QBITS001 container: magic "QBITS001", u64le bit length, packed payload.
  [[nodiscard]] std::vector<std::uint8_t> serialize() const;
  static BitSequence deserialize(std::span<const std::uint8_t> bytes);
  void save(const std::filesystem::path& path) const;
  static BitSequence load(const std::filesystem::path& path);

  bool operator==(const BitSequence&) const = default;

 private:
  std::vector<std::uint8_t> payload_;
  std::size_t length_ = 0;
};

/// Atomic file write: writes to a sibling temp file, then renames into place.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view text);

}  // namespace qrng
