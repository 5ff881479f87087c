#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace commnash {

// Bits needed to name one of n pure strategies: ceil(log2 n), zero for n = 1.
std::size_t index_bits(std::size_t n);

// Ordered bit sequence. Integers are written most significant bit first.
class BitString {
 public:
  BitString() = default;

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }

  void push_back(bool bit) { bits_.push_back(bit); }
  void append_uint(std::uint64_t value, std::size_t width);
  std::uint64_t read_uint(std::size_t offset, std::size_t width) const;

  // Packed MSB-first into bytes, zero padded, lowercase hex.
  std::string to_hex() const;
  static BitString from_hex(const std::string& hex, std::size_t bit_length);

  bool operator==(const BitString& other) const { return bits_ == other.bits_; }

 private:
  std::vector<bool> bits_;
};

// Fixed-width encoding of a sequence of pure strategy indices.
BitString encode_indices(const std::vector<std::size_t>& indices, std::size_t n);
std::vector<std::size_t> decode_indices(const BitString& bits, std::size_t n);

}  // namespace commnash
