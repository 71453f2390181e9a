#pragma once

// Busy/idle bookkeeping over ranked servers 1, 2, 3, ...
//
// Two bit levels: one bit per server, plus one summary bit per 64-server
// block that is entirely busy. The lowest idle server is found by a
// find-first-zero scan of the summary followed by one inside the block, so
// the densely busy prefix costs O(capacity/4096) words in the worst case and
// a couple of words typically.

#include <bit>
#include <cstdint>
#include <vector>

namespace rankedmm {

class ServerSet {
 public:
  explicit ServerSet(int capacity_hint = 64) {
    grow_to_blocks((static_cast<std::size_t>(capacity_hint > 0 ? capacity_hint : 1) + 63) / 64);
  }

  int capacity() const { return static_cast<int>(bits_.size() * 64); }

  bool busy(int server) const {
    const std::size_t i = static_cast<std::size_t>(server) - 1;
    if (i >= bits_.size() * 64) return false;
    return (bits_[i >> 6] >> (i & 63)) & 1u;
  }

  // Lowest-indexed idle server (1-based); capacity()+1 if every tracked
  // server is busy. Never mutates.
  int lowest_idle() const {
    for (std::size_t w = 0; w < full_.size(); ++w) {
      if (full_[w] == ~0ull) continue;
      const std::size_t block = (w << 6) + static_cast<std::size_t>(std::countr_one(full_[w]));
      // blocks past the end of bits_ read as full, so block is real
      const std::size_t bit = static_cast<std::size_t>(std::countr_one(bits_[block]));
      return static_cast<int>((block << 6) + bit) + 1;
    }
    return capacity() + 1;
  }

  // Marks a server busy, growing the tracked range on demand.
  void set_busy(int server) {
    while (server > capacity()) grow_to_blocks(bits_.size() * 2);
    const std::size_t i = static_cast<std::size_t>(server) - 1;
    bits_[i >> 6] |= 1ull << (i & 63);
    if (bits_[i >> 6] == ~0ull) {
      const std::size_t block = i >> 6;
      full_[block >> 6] |= 1ull << (block & 63);
    }
  }

  void set_idle(int server) {
    const std::size_t i = static_cast<std::size_t>(server) - 1;
    const std::size_t block = i >> 6;
    bits_[block] &= ~(1ull << (i & 63));
    full_[block >> 6] &= ~(1ull << (block & 63));
  }

  // Total busy servers; used by the debug invariant checks.
  int popcount() const {
    int count = 0;
    for (std::uint64_t word : bits_) count += std::popcount(word);
    return count;
  }

 private:
  void grow_to_blocks(std::size_t n_blocks) {
    if (n_blocks == 0) n_blocks = 1;
    if (n_blocks <= bits_.size()) return;
    bits_.resize(n_blocks, 0);
    // Rebuild the summary: real blocks reflect their word, blocks past the
    // end read as full so the scan never walks off bits_.
    full_.assign((n_blocks + 63) / 64, 0);
    for (std::size_t block = 0; block < bits_.size(); ++block) {
      if (bits_[block] == ~0ull) full_[block >> 6] |= 1ull << (block & 63);
    }
    for (std::size_t virt = bits_.size(); virt < full_.size() * 64; ++virt) {
      full_[virt >> 6] |= 1ull << (virt & 63);
    }
  }

  std::vector<std::uint64_t> bits_;   // bit i-1 <=> server i busy
  std::vector<std::uint64_t> full_;   // per-block all-busy summary
};

}  // namespace rankedmm
