#include "commnash/bits.hpp"

#include <bit>
#include <stdexcept>

namespace commnash {

std::size_t index_bits(std::size_t n) {
  if (n == 0) throw std::invalid_argument("index_bits: n must be >= 1");
  return static_cast<std::size_t>(std::bit_width(n - 1));
}

void BitString::append_uint(std::uint64_t value, std::size_t width) {
  if (width < 64 && (value >> width) != 0) {
    throw std::out_of_range("value does not fit in the requested bit width");
  }
  for (std::size_t b = width; b-- > 0;) bits_.push_back(((value >> b) & 1U) != 0);
}

std::uint64_t BitString::read_uint(std::size_t offset, std::size_t width) const {
  if (width > 64 || offset + width > bits_.size()) throw std::out_of_range("bit read past end");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v = (v << 1) | (bits_[offset + i] ? 1U : 0U);
  return v;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t start = 0; start < bits_.size(); start += 8) {
    unsigned byte = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      byte <<= 1;
      if (start + i < bits_.size() && bits_[start + i]) byte |= 1U;
    }
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

BitString BitString::from_hex(const std::string& hex, std::size_t bit_length) {
  if (hex.size() != 2 * ((bit_length + 7) / 8)) {
    throw std::invalid_argument("hex payload length does not match bit length");
  }
  BitString out;
  for (std::size_t i = 0; i < bit_length; ++i) {
    const char c = hex[i / 4];
    unsigned nibble;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument(std::string("invalid hex digit '") + c + "'");
    }
    out.push_back(((nibble >> (3 - i % 4)) & 1U) != 0);
  }
  return out;
}

BitString encode_indices(const std::vector<std::size_t>& indices, std::size_t n) {
  const std::size_t width = index_bits(n);
  BitString out;
  for (std::size_t idx : indices) {
    if (idx >= n) throw std::out_of_range("strategy index out of range");
    out.append_uint(idx, width);
  }
  return out;
}

std::vector<std::size_t> decode_indices(const BitString& bits, std::size_t n) {
  const std::size_t width = index_bits(n);
  if (width == 0) throw std::invalid_argument("n = 1 strategies carry no index bits");
  if (bits.size() % width != 0) throw std::invalid_argument("payload is not a whole number of indices");
  std::vector<std::size_t> out;
  for (std::size_t off = 0; off < bits.size(); off += width) {
    const auto idx = static_cast<std::size_t>(bits.read_uint(off, width));
    if (idx >= n) throw std::out_of_range("decoded strategy index out of range");
    out.push_back(idx);
  }
  return out;
}

}  // namespace commnash
