#pragma once

// The three canonical families over a spread E, their finite prefixes, and
// level decompositions.
//
// With E_{<n} and E_{>n} the unions of the earlier / later blocks, the
// member of level n with nonempty inner set a inside block n is
//   max:  E_{<n} u a
//   min:  a u E_{>n}
//   ort:  E_{<n} u a u E_{>n}
// At a finite horizon the tail E_{>n} is read either inside the prefix
// (windowed mode: finite members) or against the infinite continuation
// (unbounded mode: the min/ort members become cofinite, excluding
// E_{<n} u (E_n \ a), resp. E_n \ a).
//
// The inner set a = E_n makes the ort member equal to the whole join at
// every level, so distinct levels of the ort family share their top member;
// the constructor deduplicates and reports how many patterns merged.  The
// max and min families never merge (distinct levels meet distinct blocks
// first), which is asserted.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ucs/core.hpp"
#include "ucs/spread.hpp"
#include "ucs/system.hpp"

namespace ucs {

enum class CanonicalType { max, min, ort };

enum class HorizonMode { windowed, unbounded };

inline const char* to_string(CanonicalType t) {
  switch (t) {
    case CanonicalType::max: return "max";
    case CanonicalType::min: return "min";
    case CanonicalType::ort: return "ort";
  }
  return "?";
}

// The required trace of a level-n member on the join of the prefix; this is
// what certificates are verified against, in either horizon mode.
inline std::vector<Pos> level_pattern(CanonicalType t, const Spread& e, std::size_t n,
                                      const std::vector<Pos>& inner) {
  if (n < 1 || n > e.levels()) throw std::invalid_argument("level out of range");
  auto a = detail::normalized(inner);
  if (a.empty() || !detail::vec_includes(e.blocks[n - 1], a))
    throw std::invalid_argument("inner set must be a nonempty subset of its block");
  switch (t) {
    case CanonicalType::max: return detail::vec_union(blocks_below(e, n), a);
    case CanonicalType::min: return detail::vec_union(a, blocks_above(e, n));
    case CanonicalType::ort:
      return detail::vec_union(detail::vec_union(blocks_below(e, n), a), blocks_above(e, n));
  }
  return {};
}

// The level-n member itself at the chosen horizon.
inline Member canonical_member(CanonicalType t, const Spread& e, std::size_t n,
                               const std::vector<Pos>& inner, HorizonMode mode) {
  auto a = detail::normalized(inner);
  if (n < 1 || n > e.levels() || a.empty() || !detail::vec_includes(e.blocks[n - 1], a))
    throw std::invalid_argument("bad level/inner pair");
  const std::vector<Pos> gap = detail::vec_diff(e.blocks[n - 1], a);
  if (mode == HorizonMode::windowed || t == CanonicalType::max) {
    return finite_member(level_pattern(t, e, n, a));
  }
  if (t == CanonicalType::min) return cofinite_member(detail::vec_union(blocks_below(e, n), gap));
  return cofinite_member(gap); // ort
}

struct CanonicalFamily {
  SetSystem system;
  Spread spread;
  CanonicalType type;
  HorizonMode mode;
  std::size_t merged_patterns = 0; // level patterns that coincided as sets
};

// Enumerates every (level, nonempty inner) pattern, deduplicates, and builds
// the explicit prefix system.  Member count is sum over n of 2^|E_n| - 1
// minus the merges (zero for max/min; levels-1 for ort, all at the top).
inline CanonicalFamily canonical_family(CanonicalType t, const Spread& e, HorizonMode mode) {
  for (const auto& b : e.blocks)
    if (b.size() > 20) throw std::invalid_argument("block too large to enumerate");
  Pos extent = 0;
  for (Pos p : spread_join(e)) extent = std::max(extent, p + 1);
  const GroundWindow g = mode == HorizonMode::windowed ? bounded_ground(extent)
                                                       : unbounded_ground(extent);
  std::vector<Member> members;
  std::size_t patterns = 0;
  for (std::size_t n = 1; n <= e.levels(); ++n) {
    const auto& block = e.blocks[n - 1];
    const std::size_t bs = block.size();
    for (std::size_t bitsel = 1; bitsel < (std::size_t{1} << bs); ++bitsel) {
      std::vector<Pos> a;
      for (std::size_t i = 0; i < bs; ++i)
        if (bitsel & (std::size_t{1} << i)) a.push_back(block[i]);
      members.push_back(canonical_member(t, e, n, a, mode));
      ++patterns;
    }
  }
  SetSystem sys = make_system_unchecked(g, members, true);
  CanonicalFamily out{std::move(sys), e, t, mode, 0};
  out.merged_patterns = patterns - out.system.size();
  if (t != CanonicalType::ort && out.merged_patterns != 0)
    throw std::logic_error("max/min canonical prefixes must not merge");
  return out;
}

struct LevelDecomposition {
  std::size_t level = 0;    // 1-based
  std::vector<Pos> inner;   // nonempty subset of block `level`
};

// Inverts canonical_member: if x is exactly a member of the type's prefix
// over e at the given horizon, returns its (level, inner) pair.  The shared
// ort top matches every level; the smallest is returned.
inline std::optional<LevelDecomposition> level_of(const Member& x, CanonicalType t,
                                                  const Spread& e, HorizonMode mode) {
  for (std::size_t n = 1; n <= e.levels(); ++n) {
    std::vector<Pos> a;
    for (Pos p : e.blocks[n - 1])
      if (member_contains(x, p)) a.push_back(p);
    if (a.empty()) continue;
    if (canonical_member(t, e, n, a, mode) == x) return LevelDecomposition{n, a};
  }
  return std::nullopt;
}

// --- small concrete systems used throughout --------------------------------

// All nonempty subsets of [0, n): the free example of breadth n.
inline SetSystem free_semilattice(std::size_t n) {
  if (n == 0 || n > 20) throw std::invalid_argument("free_semilattice size out of range");
  std::vector<Member> members;
  for (std::size_t sel = 1; sel < (std::size_t{1} << n); ++sel) {
    std::vector<Pos> pts;
    for (std::size_t i = 0; i < n; ++i)
      if (sel & (std::size_t{1} << i)) pts.push_back(static_cast<Pos>(i));
    members.push_back(finite_member(pts));
  }
  return make_system_unchecked(bounded_ground(static_cast<Pos>(n)), std::move(members), true);
}

// Nested prefixes {0}, {0,1}, ..., [0, n): totally ordered, breadth 1.
inline SetSystem chain_system(std::size_t n) {
  if (n == 0) throw std::invalid_argument("chain_system needs at least one member");
  std::vector<Member> members;
  std::vector<Pos> acc;
  for (std::size_t i = 0; i < n; ++i) {
    acc.push_back(static_cast<Pos>(i));
    members.push_back(finite_member(acc));
  }
  return make_system_unchecked(bounded_ground(static_cast<Pos>(n)), std::move(members), true);
}

} // namespace ucs
