#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsroute {

struct BitstreamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Growable bit string. Bit 0 is the MSB of byte 0; multi-bit fields are
// big-endian. Trailing pad bits in the byte view are zero.
class BitString {
 public:
  BitString() = default;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool bit(std::size_t i) const {
    if (i >= size_) throw BitstreamError("bit index past end");
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
  }

  void append_bit(bool b) {
    if ((size_ & 7) == 0) bytes_.push_back(0);
    if (b) bytes_[size_ >> 3] |= static_cast<std::uint8_t>(1u << (7 - (size_ & 7)));
    ++size_;
  }

  void append(std::uint64_t value, unsigned width) {
    if (width > 64) throw BitstreamError("field wider than 64 bits");
    if (width < 64 && value >> width) throw BitstreamError("value does not fit field");
    for (unsigned i = width; i-- > 0;) append_bit((value >> i) & 1);
  }

  void append_bits(const BitString& other, std::size_t from, std::size_t count) {
    if (from + count > other.size_) throw BitstreamError("append range past end");
    for (std::size_t i = 0; i < count; ++i) append_bit(other.bit(from + i));
  }

  std::uint64_t read(std::size_t pos, unsigned width) const {
    if (width > 64) throw BitstreamError("field wider than 64 bits");
    if (pos + width > size_) throw BitstreamError("read past end");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | (bit(pos + i) ? 1 : 0);
    return v;
  }

  void overwrite(std::size_t pos, std::uint64_t value, unsigned width) {
    if (pos + width > size_) throw BitstreamError("overwrite past end");
    for (unsigned i = 0; i < width; ++i) {
      bool b = (value >> (width - 1 - i)) & 1;
      std::size_t idx = pos + i;
      std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (idx & 7)));
      if (b) {
        bytes_[idx >> 3] |= mask;
      } else {
        bytes_[idx >> 3] &= static_cast<std::uint8_t>(~mask);
      }
    }
  }

  BitString slice(std::size_t from, std::size_t count) const {
    BitString out;
    out.append_bits(*this, from, count);
    return out;
  }

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::size_t byte_size() const { return bytes_.size(); }

  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes_.size() * 2);
    for (std::uint8_t b : bytes_) {
      s.push_back(digits[b >> 4]);
      s.push_back(digits[b & 15]);
    }
    return s;
  }

  static BitString from_hex(const std::string& hex, std::size_t bit_count) {
    if (hex.size() % 2) throw BitstreamError("odd hex digit count");
    if (bit_count > hex.size() * 4) throw BitstreamError("bit count exceeds hex payload");
    auto nibble = [](char c) -> unsigned {
      if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
      if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
      if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
      throw BitstreamError("bad hex digit");
    };
    BitString out;
    for (std::size_t i = 0; i < bit_count; ++i) {
      unsigned nib = nibble(hex[i / 4]);
      out.append_bit((nib >> (3 - (i & 3))) & 1);
    }
    return out;
  }

  friend bool operator==(const BitString& a, const BitString& b) {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i) {
      if (a.bit(i) != b.bit(i)) return false;
    }
    return true;
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t size_ = 0;
};

// Cursor-style reader over a BitString.
class BitReader {
 public:
  explicit BitReader(const BitString& bits, std::size_t pos = 0) : bits_(&bits), pos_(pos) {}

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bits_->size() - pos_; }

  std::uint64_t read(unsigned width) {
    std::uint64_t v = bits_->read(pos_, width);
    pos_ += width;
    return v;
  }

  void seek(std::size_t pos) {
    if (pos > bits_->size()) throw BitstreamError("seek past end");
    pos_ = pos;
  }

 private:
  const BitString* bits_;
  std::size_t pos_;
};

}  // namespace fsroute
