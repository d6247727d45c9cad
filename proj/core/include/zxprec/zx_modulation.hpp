// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace zxprec {

// Symbol alphabet of the zero-crossing modulation. R = m_rx + 1 symbols:
// symbol 1 carries no crossing, symbol j >= 2 places the crossing in sample
// interval m_rx - j + 2 of the symbol. Detection and the error analysis work
// on blocks of block_symbols consecutive symbols (2 for m_rx = 2, otherwise 1).
struct ZxAlphabet {
  int m_rx = 3;
  int block_symbols = 1;

  static ZxAlphabet standard(int m_rx);

  int size() const { return m_rx + 1; }                    // R
  int block_len() const { return m_rx * block_symbols; }   // samples per block
  int block_count() const;                                 // valid symbol tuples
  int bits_per_block() const;                              // log2(block_count)
  void validate() const;
};

// Valid symbol tuples of one detection block, in lexicographic symbol-index
// order. For block_symbols = 2 a tuple is valid iff its consecutive crossings
// are at least two samples apart; exactly one of the 3x3 combinations drops out.
const std::vector<std::vector<int>>& valid_blocks(const ZxAlphabet& a);

// Codeword of one symbol continuing polarity rho_prev: samples before the
// crossing keep rho_prev, samples from the crossing on are flipped.
std::vector<int> codeword(int symbol, int rho_prev, const ZxAlphabet& a);

// Concatenated block codeword (block_len samples) starting from rho_prev.
std::vector<int> block_pattern(const std::vector<int>& symbols, int rho_prev,
                               const ZxAlphabet& a);

struct ZxFrame {
  std::vector<int> symbols;      // 1-based symbol indices, length N
  int rho0 = +1;
  Eigen::VectorXi c_out;         // signs, length N*m_rx + 1, c_out(0) = rho0
  std::vector<std::uint8_t> bits;  // Gray payload when built from bits, else empty
};

// Chain the per-symbol codewords behind the pilot sample.
ZxFrame encode(const std::vector<int>& symbols, int rho0, const ZxAlphabet& a);

struct DetectedBlock {
  int block_index = 0;           // index into valid_blocks(a)
  std::vector<int> symbols;      // decoded symbol tuple
  int hamming_cost = 0;
  bool tie = false;
};

// Precomputed candidate table for one alphabet; detection is a minimum
// Hamming-distance scan over it. Candidates share the observed prefix sample,
// so only the block_len payload samples enter the cost.
struct ZxCodebook {
  explicit ZxCodebook(const ZxAlphabet& a);
  const ZxAlphabet& alphabet() const { return alpha_; }

  // z_b holds 1 + block_len signs; z_b[0] is the previous (already decided)
  // sample acting as the polarity reference. Ties resolve to the lowest
  // block index.
  DetectedBlock detect_block(const int* z_b) const;

 private:
  ZxAlphabet alpha_;
  // patterns_[0]: rho = +1, patterns_[1]: rho = -1
  std::vector<std::vector<int>> patterns_[2];
};

DetectedBlock detect_block(const std::vector<int>& z_b, const ZxAlphabet& a);

// Sequential block detection over a full frame; each block reuses the
// preceding received sample as its polarity reference.
std::vector<int> detect(const Eigen::VectorXi& z, const ZxAlphabet& a);
std::vector<int> detect(const Eigen::VectorXi& z, const ZxCodebook& cb);

// Reflected-Gray bit labels along the block order of valid_blocks(): adjacent
// blocks in crossing-position order differ in exactly one payload bit.
// Requires block_count() to be a power of two.
std::vector<int> gray_encode(const std::vector<std::uint8_t>& bits, const ZxAlphabet& a);
std::vector<std::uint8_t> gray_decode(const std::vector<int>& symbols, const ZxAlphabet& a);

}  // namespace zxprec
