#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <vector>

#include "qrng/bit_sequence.hpp"

namespace qrng::timetag {

/// One detection: timestamp in 25 ps ticks (or whatever tick the producer
/// used) plus the detector channel. The tick epoch is file-local.
struct TimeTagRecord {
  std::uint64_t ticks = 0;
  std::uint8_t channel = 0;  // 0 or 1

  bool operator==(const TimeTagRecord&) const = default;
};

// QTTAG001 container: magic "QTTAG001", u64le record count, then one 9-byte
// entry per record (u64le ticks + 1-byte channel), in time order. For equal
// ticks the order of appearance in the file is authoritative.
inline constexpr std::size_t kRecordBytes = 9;
inline constexpr std::size_t kHeaderBytes = 16;

std::vector<std::uint8_t> encode_records(std::span<const TimeTagRecord> records);
std::vector<TimeTagRecord> decode_records(std::span<const std::uint8_t> bytes);

void save_records(const std::filesystem::path& path,
                  std::span<const TimeTagRecord> records);
std::vector<TimeTagRecord> load_records(const std::filesystem::path& path);

/// Streams the file record by record without materializing it; returns the
/// record count. Throws format_error on malformed content.
std::uint64_t for_each_record(const std::filesystem::path& path,
                              const std::function<void(TimeTagRecord)>& fn);

/// Buffered streaming writer for large runs. Writes a placeholder header,
/// patches the count on close, then renames into place (atomic publish).
class RecordFileWriter {
 public:
  explicit RecordFileWriter(std::filesystem::path path);
  ~RecordFileWriter();

  void write(TimeTagRecord record);
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  void close();

 private:
  std::filesystem::path final_path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  std::vector<std::uint8_t> buffer_;
  std::uint64_t count_ = 0;
  bool closed_ = false;

  void flush_buffer();
};

/// One bit per record in timestamp (file) order; the bit value is the channel.
BitSequence bits_from_records(std::span<const TimeTagRecord> records);

double raw_rate_bits_per_s(std::uint64_t record_count, double duration_s);

}  // namespace qrng::timetag
