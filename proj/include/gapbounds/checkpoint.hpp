#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gapbounds {

// Binary checkpoint for long theta scans: a fixed header identifying the
// run followed by one record per completed segment.  All integers and
// doubles are stored little-endian so files are portable across hosts.

inline constexpr char kCheckpointMagic[8] = {'G', 'B', 'T', 'H', 'C', 'P', '0', '1'};

struct ThetaCheckpointHeader {
  std::uint64_t lo = 0, hi = 0;
  std::uint64_t n_max = 0, segment_size = 0;
  std::string label;

  friend bool operator==(const ThetaCheckpointHeader&, const ThetaCheckpointHeader&) = default;
};

struct ThetaSegmentRecord {
  std::uint64_t seg_lo = 0, seg_hi = 0;
  std::uint64_t prime_count = 0;  // cumulative primes <= seg_hi
  double theta_lo = 0.0, theta_hi = 0.0;
  std::uint64_t maxrel_p = 0, maxrel_gap = 0;  // running max of g/p seen so far

  friend bool operator==(const ThetaSegmentRecord&, const ThetaSegmentRecord&) = default;
};

namespace detail {

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class ByteReader {
 public:
  ByteReader(const char* data, std::size_t size) : data_(data), size_(size) {}
  bool ok() const { return ok_; }
  std::size_t remaining() const { return size_ - pos_; }
  std::uint64_t u64() {
    if (pos_ + 8 > size_) {
      ok_ = false;
      return 0;
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes(std::size_t n) {
    if (pos_ + n > size_) {
      ok_ = false;
      return {};
    }
    std::string s(data_ + pos_, n);
    pos_ += n;
    return s;
  }

 private:
  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

inline std::string encode_record(const ThetaSegmentRecord& r) {
  std::string out;
  put_u64(out, r.seg_lo);
  put_u64(out, r.seg_hi);
  put_u64(out, r.prime_count);
  put_f64(out, r.theta_lo);
  put_f64(out, r.theta_hi);
  put_u64(out, r.maxrel_p);
  put_u64(out, r.maxrel_gap);
  return out;
}

inline constexpr std::size_t kRecordBytes = 7 * 8;

}  // namespace detail

inline void checkpoint_create(const std::string& path, const ThetaCheckpointHeader& h) {
  std::string out(kCheckpointMagic, sizeof kCheckpointMagic);
  detail::put_u64(out, h.lo);
  detail::put_u64(out, h.hi);
  detail::put_u64(out, h.n_max);
  detail::put_u64(out, h.segment_size);
  detail::put_u64(out, h.label.size());
  out += h.label;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("checkpoint: cannot create '" + path + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("checkpoint: write failed for '" + path + "'");
}

inline void checkpoint_append(const std::string& path, const ThetaSegmentRecord& r) {
  const std::string out = detail::encode_record(r);
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) throw std::runtime_error("checkpoint: cannot open '" + path + "' for append");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  f.flush();
  if (!f) throw std::runtime_error("checkpoint: append failed for '" + path + "'");
}

// Returns the header and all complete segment records, or nullopt if the
// file does not exist.  A trailing partial record (interrupted write) is
// ignored.
inline std::optional<std::pair<ThetaCheckpointHeader, std::vector<ThetaSegmentRecord>>>
checkpoint_read(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  std::string blob((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (blob.size() < sizeof kCheckpointMagic ||
      std::memcmp(blob.data(), kCheckpointMagic, sizeof kCheckpointMagic) != 0)
    throw std::runtime_error("checkpoint: bad magic in '" + path + "'");
  detail::ByteReader rd(blob.data() + sizeof kCheckpointMagic, blob.size() - sizeof kCheckpointMagic);
  ThetaCheckpointHeader h;
  h.lo = rd.u64();
  h.hi = rd.u64();
  h.n_max = rd.u64();
  h.segment_size = rd.u64();
  const std::uint64_t len = rd.u64();
  if (!rd.ok() || len > rd.remaining())
    throw std::runtime_error("checkpoint: truncated header in '" + path + "'");
  h.label = rd.bytes(len);
  std::vector<ThetaSegmentRecord> recs;
  while (rd.remaining() >= detail::kRecordBytes) {
    ThetaSegmentRecord r;
    r.seg_lo = rd.u64();
    r.seg_hi = rd.u64();
    r.prime_count = rd.u64();
    r.theta_lo = rd.f64();
    r.theta_hi = rd.f64();
    r.maxrel_p = rd.u64();
    r.maxrel_gap = rd.u64();
    recs.push_back(r);
  }
  return std::make_pair(std::move(h), std::move(recs));
}

}  // namespace gapbounds
