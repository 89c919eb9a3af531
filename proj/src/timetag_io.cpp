#include "qrng/timetag_io.hpp"

#include <cstring>
#include <stdexcept>

#include "qrng/errors.hpp"

namespace qrng::timetag {

namespace {
constexpr char kMagic[8] = {'Q', 'T', 'T', 'A', 'G', '0', '0', '1'};

void put_u64le(std::uint8_t* p, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint64_t get_u64le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void encode_one(std::uint8_t* p, const TimeTagRecord& r) {
  put_u64le(p, r.ticks);
  p[8] = r.channel;
}

TimeTagRecord decode_one(const std::uint8_t* p) {
  TimeTagRecord r;
  r.ticks = get_u64le(p);
  r.channel = p[8];
  if (r.channel > 1) throw format_error("QTTAG: channel byte not in {0,1}");
  return r;
}
}  // namespace

std::vector<std::uint8_t> encode_records(std::span<const TimeTagRecord> records) {
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].ticks < records[i - 1].ticks)
      throw std::domain_error("encode_records: records must be time-ordered");
  std::vector<std::uint8_t> out(kHeaderBytes + kRecordBytes * records.size());
  std::memcpy(out.data(), kMagic, 8);
  put_u64le(out.data() + 8, records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    encode_one(out.data() + kHeaderBytes + i * kRecordBytes, records[i]);
  return out;
}

std::vector<TimeTagRecord> decode_records(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw format_error("QTTAG: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw format_error("QTTAG: bad magic");
  const std::uint64_t count = get_u64le(bytes.data() + 8);
  if (bytes.size() - kHeaderBytes != count * kRecordBytes)
    throw format_error("QTTAG: payload size does not match record count");
  std::vector<TimeTagRecord> records(count);
  for (std::uint64_t i = 0; i < count; ++i)
    records[i] = decode_one(bytes.data() + kHeaderBytes + i * kRecordBytes);
  return records;
}

void save_records(const std::filesystem::path& path,
                  std::span<const TimeTagRecord> records) {
  const auto bytes = encode_records(records);
  write_file_atomic(path, std::span<const std::uint8_t>(bytes));
}

std::vector<TimeTagRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_records(bytes);
}

std::uint64_t for_each_record(const std::filesystem::path& path,
                              const std::function<void(TimeTagRecord)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path.string());
  std::uint8_t header[kHeaderBytes];
  in.read(reinterpret_cast<char*>(header), kHeaderBytes);
  if (in.gcount() != static_cast<std::streamsize>(kHeaderBytes))
    throw format_error("QTTAG: truncated header");
  if (std::memcmp(header, kMagic, 8) != 0) throw format_error("QTTAG: bad magic");
  const std::uint64_t count = get_u64le(header + 8);

  constexpr std::size_t kChunkRecords = 1 << 16;
  std::vector<std::uint8_t> buf(kChunkRecords * kRecordBytes);
  std::uint64_t seen = 0;
  while (seen < count) {
    const std::uint64_t want =
        std::min<std::uint64_t>(kChunkRecords, count - seen);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(want * kRecordBytes));
    if (in.gcount() != static_cast<std::streamsize>(want * kRecordBytes))
      throw format_error("QTTAG: truncated record payload");
    for (std::uint64_t i = 0; i < want; ++i)
      fn(decode_one(buf.data() + i * kRecordBytes));
    seen += want;
  }
  return count;
}

RecordFileWriter::RecordFileWriter(std::filesystem::path path)
    : final_path_(std::move(path)),
      tmp_path_(final_path_.string() + ".tmp"),
      out_(tmp_path_, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot write " + tmp_path_.string());
  std::uint8_t header[kHeaderBytes] = {};
  std::memcpy(header, kMagic, 8);
  out_.write(reinterpret_cast<const char*>(header), kHeaderBytes);
  buffer_.reserve((1 << 16) * kRecordBytes);
}

RecordFileWriter::~RecordFileWriter() {
  if (!closed_) {
    // abandoned writer: drop the temp file, never publish a partial result
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_path_, ec);
  }
}

void RecordFileWriter::write(TimeTagRecord record) {
  std::uint8_t entry[kRecordBytes];
  encode_one(entry, record);
  buffer_.insert(buffer_.end(), entry, entry + kRecordBytes);
  ++count_;
  if (buffer_.size() >= (1 << 16) * kRecordBytes) flush_buffer();
}

void RecordFileWriter::flush_buffer() {
  out_.write(reinterpret_cast<const char*>(buffer_.data()),
             static_cast<std::streamsize>(buffer_.size()));
  buffer_.clear();
}

void RecordFileWriter::close() {
  if (closed_) return;
  flush_buffer();
  out_.seekp(8);
  std::uint8_t count_le[8];
  put_u64le(count_le, count_);
  out_.write(reinterpret_cast<const char*>(count_le), 8);
  out_.close();
  if (!out_) throw std::runtime_error("write failed for " + tmp_path_.string());
  std::filesystem::rename(tmp_path_, final_path_);
  closed_ = true;
}

BitSequence bits_from_records(std::span<const TimeTagRecord> records) {
  BitSequence bits(records.size());
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].channel) bits.set(i, 1);
  return bits;
}

double raw_rate_bits_per_s(std::uint64_t record_count, double duration_s) {
  if (!(duration_s > 0)) throw std::domain_error("duration must be > 0");
  return static_cast<double>(record_count) / duration_s;
}

}  // namespace qrng::timetag
