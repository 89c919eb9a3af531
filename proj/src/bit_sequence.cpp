#include "qrng/bit_sequence.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "qrng/errors.hpp"

namespace qrng {

namespace {
constexpr char kMagic[8] = {'Q', 'B', 'I', 'T', 'S', '0', '0', '1'};

void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u64le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}
}  // namespace

BitSequence BitSequence::from_bits(std::span<const std::uint8_t> bits) {
  BitSequence seq(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) seq.payload_[i >> 3] |= static_cast<std::uint8_t>(1U << (7 - (i & 7)));
  return seq;
}

BitSequence BitSequence::from_string(std::string_view zeros_and_ones) {
  BitSequence seq(zeros_and_ones.size());
  for (std::size_t i = 0; i < zeros_and_ones.size(); ++i) {
    const char c = zeros_and_ones[i];
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitSequence: expected only '0'/'1'");
    if (c == '1') seq.set(i, 1);
  }
  return seq;
}

void BitSequence::append(int bit) {
  if (length_ % 8 == 0) payload_.push_back(0);
  ++length_;
  if (bit) set(length_ - 1, 1);
}

void BitSequence::append(const BitSequence& other) {
  if (length_ % 8 == 0) {
    // byte-aligned: splice the payload directly
    payload_.insert(payload_.end(), other.payload_.begin(), other.payload_.end());
    length_ += other.length_;
    return;
  }
  for (std::size_t i = 0; i < other.length_; ++i) append(other.get(i));
}

BitSequence BitSequence::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > length_)
    throw std::out_of_range("BitSequence::slice: range exceeds length");
  BitSequence out(count);
  if (offset % 8 == 0) {
    const std::size_t nbytes = (count + 7) / 8;
    std::memcpy(out.payload_.data(), payload_.data() + offset / 8, nbytes);
    // clear pad bits of the final byte
    if (count % 8 != 0)
      out.payload_.back() &= static_cast<std::uint8_t>(0xFF << (8 - count % 8));
  } else {
    for (std::size_t i = 0; i < count; ++i)
      if (get(offset + i)) out.set(i, 1);
  }
  return out;
}

std::size_t BitSequence::count_ones() const {
  std::size_t total = 0;
  for (std::uint8_t b : payload_) total += std::popcount(b);
  return total;  // pad bits are zero by invariant
}

std::vector<std::uint8_t> BitSequence::unpack() const {
  std::vector<std::uint8_t> out(length_);
  for (std::size_t i = 0; i < length_; ++i)
    out[i] = static_cast<std::uint8_t>(get(i));
  return out;
}

std::string BitSequence::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::vector<std::uint8_t> BitSequence::serialize() const {
  std::vector<std::uint8_t> out;
  out.reserve(16 + payload_.size());
  out.insert(out.end(), kMagic, kMagic + 8);
  put_u64le(out, length_);
  out.insert(out.end(), payload_.begin(), payload_.end());
  return out;
}

BitSequence BitSequence::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw format_error("QBITS: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw format_error("QBITS: bad magic");
  const std::uint64_t length = get_u64le(bytes.data() + 8);
  const std::uint64_t expect = (length + 7) / 8;
  if (bytes.size() - 16 != expect)
    throw format_error("QBITS: payload size does not match bit length");
  BitSequence seq;
  seq.length_ = static_cast<std::size_t>(length);
  seq.payload_.assign(bytes.begin() + 16, bytes.end());
  if (length % 8 != 0 && !seq.payload_.empty()) {
    const std::uint8_t pad_mask =
        static_cast<std::uint8_t>(0xFF >> (length % 8));
    if (seq.payload_.back() & pad_mask)
      throw format_error("QBITS: nonzero trailing pad bits");
  }
  return seq;
}

void BitSequence::save(const std::filesystem::path& path) const {
  const auto bytes = serialize();
  write_file_atomic(path, std::span<const std::uint8_t>(bytes));
}

BitSequence BitSequence::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::span<const std::uint8_t>(
                              reinterpret_cast<const std::uint8_t*>(text.data()),
                              text.size()));
}

}  // namespace qrng
