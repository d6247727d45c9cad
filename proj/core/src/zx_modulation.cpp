// SPDX-License-Identifier: Apache-2.0
#include "zxprec/zx_modulation.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace zxprec {

namespace {

// Crossing position of a symbol inside its own m_rx samples, 1-based; 0 means
// no crossing. Symbol j >= 2 flips from sample m_rx - j + 2 onward.
int crossing_pos(int symbol, int m_rx) {
  if (symbol == 1) return 0;
  return m_rx - symbol + 2;
}

std::vector<std::vector<int>> enumerate_valid_blocks(const ZxAlphabet& a) {
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(a.block_symbols, 1);
  for (;;) {
    // Collect global crossing positions of the tuple and test the spacing rule:
    // consecutive crossings closer than 2 samples cannot be represented by the
    // run-length-limited waveform, so such tuples are excluded.
    bool ok = true;
    int prev = -10;
    for (int i = 0; i < a.block_symbols && ok; ++i) {
      int pos = crossing_pos(tuple[i], a.m_rx);
      if (pos == 0) continue;
      int global = i * a.m_rx + pos;
      if (global - prev < 2) ok = false;
      prev = global;
    }
    if (ok) out.push_back(tuple);
    // next tuple, lexicographic
    int i = a.block_symbols - 1;
    while (i >= 0 && tuple[i] == a.size()) {
      tuple[i] = 1;
      --i;
    }
    if (i < 0) break;
    ++tuple[i];
  }
  return out;
}

const std::vector<std::vector<int>>& cached_blocks(const ZxAlphabet& a) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(a.m_rx, a.block_symbols);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_valid_blocks(a)).first;
  return it->second;
}

}  // namespace

ZxAlphabet ZxAlphabet::standard(int m_rx) {
  ZxAlphabet a;
  a.m_rx = m_rx;
  a.block_symbols = (m_rx == 2) ? 2 : 1;
  a.validate();
  return a;
}

void ZxAlphabet::validate() const {
  if (m_rx < 2) throw std::invalid_argument("ZxAlphabet: m_rx must be >= 2");
  if (block_symbols < 1) throw std::invalid_argument("ZxAlphabet: block_symbols must be >= 1");
  if (block_symbols > 2)
    throw std::invalid_argument("ZxAlphabet: blocks longer than 2 symbols are not supported");
}

int ZxAlphabet::block_count() const { return static_cast<int>(valid_blocks(*this).size()); }

int ZxAlphabet::bits_per_block() const {
  int c = block_count();
  int bits = 0;
  while ((1 << bits) < c) ++bits;
  if ((1 << bits) != c)
    throw std::invalid_argument("ZxAlphabet: block count is not a power of two, no bit mapping");
  return bits;
}

const std::vector<std::vector<int>>& valid_blocks(const ZxAlphabet& a) {
  a.validate();
  return cached_blocks(a);
}

std::vector<int> codeword(int symbol, int rho_prev, const ZxAlphabet& a) {
  a.validate();
  if (symbol < 1 || symbol > a.size())
    throw std::invalid_argument("codeword: symbol index out of range");
  if (rho_prev != 1 && rho_prev != -1)
    throw std::invalid_argument("codeword: rho_prev must be +1 or -1");
  std::vector<int> w(a.m_rx, rho_prev);
  int pos = crossing_pos(symbol, a.m_rx);
  if (pos > 0)
    for (int i = pos; i <= a.m_rx; ++i) w[i - 1] = -rho_prev;
  return w;
}

std::vector<int> block_pattern(const std::vector<int>& symbols, int rho_prev,
                               const ZxAlphabet& a) {
  std::vector<int> pat;
  pat.reserve(a.block_len());
  int rho = rho_prev;
  for (int s : symbols) {
    auto w = codeword(s, rho, a);
    pat.insert(pat.end(), w.begin(), w.end());
    rho = pat.back();
  }
  return pat;
}

ZxFrame encode(const std::vector<int>& symbols, int rho0, const ZxAlphabet& a) {
  a.validate();
  if (symbols.empty()) throw std::invalid_argument("encode: empty symbol stream");
  if (rho0 != 1 && rho0 != -1) throw std::invalid_argument("encode: rho0 must be +1 or -1");
  ZxFrame f;
  f.symbols = symbols;
  f.rho0 = rho0;
  f.c_out.resize(static_cast<Eigen::Index>(symbols.size()) * a.m_rx + 1);
  f.c_out(0) = rho0;
  Eigen::Index pos = 1;
  int rho = rho0;
  for (int s : symbols) {
    auto w = codeword(s, rho, a);
    for (int v : w) f.c_out(pos++) = v;
    rho = w.back();
  }
  return f;
}

ZxCodebook::ZxCodebook(const ZxAlphabet& a) : alpha_(a) {
  a.validate();
  const auto& blocks = valid_blocks(a);
  for (int r = 0; r < 2; ++r) {
    int rho = (r == 0) ? +1 : -1;
    patterns_[r].reserve(blocks.size());
    for (const auto& b : blocks) patterns_[r].push_back(block_pattern(b, rho, a));
  }
}

DetectedBlock ZxCodebook::detect_block(const int* z_b) const {
  const int rho = z_b[0];
  const auto& pats = patterns_[rho > 0 ? 0 : 1];
  const int len = alpha_.block_len();
  DetectedBlock best;
  best.hamming_cost = len + 1;
  for (int c = 0; c < static_cast<int>(pats.size()); ++c) {
    int cost = 0;
    const auto& p = pats[c];
    for (int i = 0; i < len; ++i) cost += (z_b[1 + i] != p[i]);
    if (cost < best.hamming_cost) {
      best.hamming_cost = cost;
      best.block_index = c;
      best.tie = false;
    } else if (cost == best.hamming_cost) {
      best.tie = true;
    }
  }
  best.symbols = valid_blocks(alpha_)[best.block_index];
  return best;
}

DetectedBlock detect_block(const std::vector<int>& z_b, const ZxAlphabet& a) {
  if (static_cast<int>(z_b.size()) != a.block_len() + 1)
    throw std::invalid_argument("detect_block: window must hold 1 + block_len samples");
  for (int v : z_b)
    if (v != 1 && v != -1) throw std::invalid_argument("detect_block: entries must be +-1");
  ZxCodebook cb(a);
  return cb.detect_block(z_b.data());
}

std::vector<int> detect(const Eigen::VectorXi& z, const ZxCodebook& cb) {
  const ZxAlphabet& a = cb.alphabet();
  const int len = a.block_len();
  if ((z.size() - 1) % len != 0)
    throw std::invalid_argument("detect: frame length must be 1 + k*block_len");
  const int n_blocks = static_cast<int>((z.size() - 1) / len);
  std::vector<int> symbols;
  symbols.reserve(static_cast<size_t>(n_blocks) * a.block_symbols);
  std::vector<int> window(1 + len);
  for (int b = 0; b < n_blocks; ++b) {
    for (int i = 0; i <= len; ++i) window[i] = z(b * len + i);
    DetectedBlock d = cb.detect_block(window.data());
    symbols.insert(symbols.end(), d.symbols.begin(), d.symbols.end());
  }
  return symbols;
}

std::vector<int> detect(const Eigen::VectorXi& z, const ZxAlphabet& a) {
  ZxCodebook cb(a);
  return detect(z, cb);
}

std::vector<int> gray_encode(const std::vector<std::uint8_t>& bits, const ZxAlphabet& a) {
  const int nb = a.bits_per_block();
  if (bits.size() % nb != 0)
    throw std::invalid_argument("gray_encode: payload length not divisible by bits per block");
  const auto& blocks = valid_blocks(a);
  std::vector<int> symbols;
  symbols.reserve(bits.size() / nb * a.block_symbols);
  for (size_t i = 0; i < bits.size(); i += nb) {
    int v = 0;
    for (int j = 0; j < nb; ++j) v = (v << 1) | (bits[i + j] ? 1 : 0);
    // Reflected Gray: label of block k is k ^ (k >> 1), so the block index for
    // label v inverts that map.
    int k = 0;
    for (int g = v; g; g >>= 1) k ^= g;
    const auto& blk = blocks[k];
    symbols.insert(symbols.end(), blk.begin(), blk.end());
  }
  return symbols;
}

std::vector<std::uint8_t> gray_decode(const std::vector<int>& symbols, const ZxAlphabet& a) {
  const int nb = a.bits_per_block();
  if (symbols.size() % a.block_symbols != 0)
    throw std::invalid_argument("gray_decode: symbol count not divisible by block size");
  const auto& blocks = valid_blocks(a);
  std::vector<std::uint8_t> bits;
  bits.reserve(symbols.size() / a.block_symbols * nb);
  for (size_t i = 0; i < symbols.size(); i += a.block_symbols) {
    std::vector<int> tuple(symbols.begin() + i, symbols.begin() + i + a.block_symbols);
    int k = -1;
    for (int c = 0; c < static_cast<int>(blocks.size()); ++c)
      if (blocks[c] == tuple) {
        k = c;
        break;
      }
    if (k < 0) throw std::invalid_argument("gray_decode: symbol tuple is not a valid block");
    int g = k ^ (k >> 1);
    for (int j = nb - 1; j >= 0; --j) bits.push_back(static_cast<std::uint8_t>((g >> j) & 1));
  }
  return bits;
}

}  // namespace zxprec
