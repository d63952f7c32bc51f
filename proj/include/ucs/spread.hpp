#pragma once

// Spreads: finite prefixes of sequences of pairwise disjoint, nonempty,
// finite blocks whose sizes grow without bound.  At a finite horizon the
// prefix itself only needs disjointness and nonemptiness (any such prefix
// extends); the named constructors additionally enforce an exact size
// profile, and matches_profile lets callers check one after the fact.

#include <functional>
#include <stdexcept>
#include <vector>

#include "ucs/core.hpp"

namespace ucs {

struct Spread {
  std::vector<std::vector<Pos>> blocks; // 0-based storage; block n of the papers is blocks[n-1]

  std::size_t levels() const { return blocks.size(); }
};

inline Spread make_spread(std::vector<std::vector<Pos>> blocks) {
  std::vector<Pos> seen;
  for (auto& b : blocks) {
    b = detail::normalized(std::move(b));
    if (b.empty()) throw std::invalid_argument("spread block must be nonempty");
    if (!detail::vec_disjoint(seen, b)) throw std::invalid_argument("spread blocks must be disjoint");
    seen = detail::vec_union(seen, b);
  }
  return Spread{std::move(blocks)};
}

using SizeProfile = std::function<Pos(std::size_t)>; // level (1-based) -> block size

inline SizeProfile profile_linear() {
  return [](std::size_t n) { return static_cast<Pos>(n); };
}
inline SizeProfile profile_square() {
  return [](std::size_t n) { return static_cast<Pos>(n * n); };
}

// Consecutive layout: block n occupies the next profile(n) positions.
inline Spread spread_standard(std::size_t levels, const SizeProfile& profile) {
  std::vector<std::vector<Pos>> blocks;
  Pos next = 0;
  for (std::size_t n = 1; n <= levels; ++n) {
    const Pos sz = profile(n);
    if (sz <= 0) throw std::invalid_argument("block size profile must be positive");
    std::vector<Pos> b(static_cast<std::size_t>(sz));
    for (Pos i = 0; i < sz; ++i) b[static_cast<std::size_t>(i)] = next + i;
    next += sz;
    blocks.push_back(std::move(b));
  }
  return Spread{std::move(blocks)};
}

inline Spread spread_standard(std::size_t levels) { return spread_standard(levels, profile_linear()); }

inline bool matches_profile(const Spread& e, const SizeProfile& profile) {
  for (std::size_t n = 1; n <= e.levels(); ++n)
    if (static_cast<Pos>(e.blocks[n - 1].size()) != profile(n)) return false;
  return true;
}

inline std::vector<Pos> spread_join(const Spread& e) {
  std::vector<Pos> out;
  for (const auto& b : e.blocks) out = detail::vec_union(out, b);
  return out;
}

// Union of blocks strictly before / strictly after level n (1-based).
inline std::vector<Pos> blocks_below(const Spread& e, std::size_t n) {
  std::vector<Pos> out;
  for (std::size_t j = 1; j < n && j <= e.levels(); ++j) out = detail::vec_union(out, e.blocks[j - 1]);
  return out;
}

inline std::vector<Pos> blocks_above(const Spread& e, std::size_t n) {
  std::vector<Pos> out;
  for (std::size_t j = n + 1; j <= e.levels(); ++j) out = detail::vec_union(out, e.blocks[j - 1]);
  return out;
}

// F refines E when every F-block sits inside a block of E and distinct
// F-blocks sit inside distinct E-blocks.  (Blocks of E are disjoint, so the
// containing block is unique; only injectivity needs checking.)
inline bool refines(const Spread& f, const Spread& e) {
  std::vector<bool> used(e.levels(), false);
  for (const auto& fb : f.blocks) {
    bool placed = false;
    for (std::size_t n = 0; n < e.levels(); ++n) {
      if (detail::vec_includes(e.blocks[n], fb)) {
        if (used[n]) return false;
        used[n] = true;
        placed = true;
        break;
      }
    }
    if (!placed) return false;
  }
  return true;
}

// Sub-spread on a set of surviving levels (1-based, strictly increasing).
inline Spread sub_spread(const Spread& e, const std::vector<std::size_t>& levels) {
  std::vector<std::vector<Pos>> blocks;
  for (std::size_t n : levels) {
    if (n < 1 || n > e.levels()) throw std::invalid_argument("sub_spread level out of range");
    blocks.push_back(e.blocks[n - 1]);
  }
  return Spread{std::move(blocks)};
}

// Blockwise intersection with a member; levels whose block dies are dropped
// and the list of survivors (1-based original levels) is reported.
inline Spread intersect_spread(const Spread& e, const Member& m, std::vector<std::size_t>* survivors = nullptr) {
  std::vector<std::vector<Pos>> blocks;
  if (survivors) survivors->clear();
  for (std::size_t n = 1; n <= e.levels(); ++n) {
    std::vector<Pos> b;
    for (Pos p : e.blocks[n - 1])
      if (member_contains(m, p)) b.push_back(p);
    if (b.empty()) continue;
    blocks.push_back(std::move(b));
    if (survivors) survivors->push_back(n);
  }
  return Spread{std::move(blocks)};
}

} // namespace ucs
