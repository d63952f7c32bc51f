#pragma once

// Breadth search: exact breadth of explicit systems and bounded searches for
// incompressible families of a prescribed size.
//
// Engine notes.  Incompressible families form a hereditary set family (every
// nonempty subfamily of an incompressible family is incompressible, because
// private points stay private when members are removed; dually, supersets of
// compressible families are compressible).  All searches below exploit this:
// depth-first extension with pruning as soon as a prefix loses a private
// region.  Members are compiled to bitmasks over the "effective universe" of
// named positions plus, on unbounded grounds, a single tail slot standing
// for the infinitely many positions no member names; every member treats all
// tail positions alike, so one slot is exact for joins and subset tests.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ucs/core.hpp"
#include "ucs/system.hpp"

namespace ucs {

// Budgets count search nodes (candidate extensions and enumeration pulls).
struct Budget {
  std::uint64_t limit = 1'000'000;
  std::uint64_t used = 0;

  bool spend(std::uint64_t n = 1) {
    used += n;
    return used <= limit;
  }
  bool exhausted() const { return used > limit; }
};

struct SearchStats {
  std::uint64_t nodes = 0;      // budget consumed by this search
  std::size_t enumerated = 0;   // members pulled from an enumeration, if any
  bool budget_hit = false;      // the node limit cut the search short
  bool exhaustive = false;      // the stated search space was fully examined
};

enum class SearchOutcome { found, absent, inconclusive };

// --- mask compilation ------------------------------------------------------

class MaskFamily {
public:
  MaskFamily(const std::vector<Member>& members, const GroundWindow& g) {
    std::vector<Pos> named;
    for (const Member& m : members) named = detail::vec_union(named, m.support);
    tail_ = g.unbounded;
    bits_ = named.size() + (tail_ ? 1 : 0);
    words_ = (bits_ + 63) / 64;
    if (words_ == 0) words_ = 1;
    masks_.assign(members.size(), std::vector<std::uint64_t>(words_, 0));
    for (std::size_t i = 0; i < members.size(); ++i) {
      const Member& m = members[i];
      for (std::size_t b = 0; b < named.size(); ++b) {
        const bool in = detail::vec_contains(m.support, named[b]);
        if (is_finite(m) ? in : !in) set_bit(masks_[i], b);
      }
      if (tail_ && is_cofinite(m)) set_bit(masks_[i], named.size());
    }
  }

  std::size_t count() const { return masks_.size(); }
  std::size_t words() const { return words_; }
  const std::vector<std::uint64_t>& mask(std::size_t i) const { return masks_[i]; }

  static void set_bit(std::vector<std::uint64_t>& w, std::size_t b) {
    w[b / 64] |= std::uint64_t{1} << (b % 64);
  }
  static bool any(const std::vector<std::uint64_t>& w) {
    for (std::uint64_t x : w)
      if (x) return true;
    return false;
  }

private:
  std::size_t bits_ = 0;
  std::size_t words_ = 1;
  bool tail_ = false;
  std::vector<std::vector<std::uint64_t>> masks_;
};

namespace detail {

// Incremental state for depth-first incompressible-family extension.
struct FamilyDfs {
  const MaskFamily& mf;
  std::vector<std::size_t> chosen;
  std::vector<std::vector<std::uint64_t>> priv; // private region per chosen member
  std::vector<std::uint64_t> join;

  explicit FamilyDfs(const MaskFamily& m) : mf(m), join(m.words(), 0) {}

  // Attempts to extend by member i; keeps every private region nonempty.
  bool push(std::size_t i) {
    const auto& x = mf.mask(i);
    std::vector<std::uint64_t> px(mf.words());
    for (std::size_t w = 0; w < mf.words(); ++w) px[w] = x[w] & ~join[w];
    if (!MaskFamily::any(px)) return false;
    for (auto& p : priv) {
      bool nonzero = false;
      for (std::size_t w = 0; w < mf.words(); ++w)
        if (p[w] & ~x[w]) { nonzero = true; break; }
      if (!nonzero) return false;
    }
    for (auto& p : priv)
      for (std::size_t w = 0; w < mf.words(); ++w) p[w] &= ~x[w];
    priv.push_back(std::move(px));
    for (std::size_t w = 0; w < mf.words(); ++w) join[w] |= x[w];
    chosen.push_back(i);
    return true;
  }

  // Rolls back the most recent successful push; masks of remaining members
  // are recomputed from scratch (families are small, words few).
  void pop() {
    chosen.pop_back();
    priv.clear();
    std::fill(join.begin(), join.end(), 0);
    std::vector<std::size_t> redo = chosen;
    chosen.clear();
    for (std::size_t i : redo) push(i);
  }
};

} // namespace detail

enum class ScanEnd { stopped, exhausted, budget };

// Enumerates incompressible k-subsets of the compiled family in graded
// order: by largest index first, then lexicographically on the rest.  This
// matches the lazy order in which oracle prefixes grow.  The callback
// receives ascending indices; returning true ends the scan.  min_top
// restricts to subsets whose largest index is at least min_top (used to
// resume after the prefix grows).
template <typename Fn>
ScanEnd scan_incompressible_ksubsets(const MaskFamily& mf, std::size_t k, Budget& budget,
                                     Fn&& fn, std::size_t min_top = 0) {
  if (k == 0) throw std::invalid_argument("family size must be positive");
  if (mf.count() < k) return ScanEnd::exhausted;
  detail::FamilyDfs dfs(mf);
  bool stopped = false;
  bool out_of_budget = false;

  // Chooses the remaining need members from [from, top), then appends top.
  std::function<void(std::size_t, std::size_t, std::size_t)> rec =
      [&](std::size_t from, std::size_t top, std::size_t need) {
        if (stopped || out_of_budget) return;
        if (need == 0) {
          if (!budget.spend()) { out_of_budget = true; return; }
          if (dfs.push(top)) {
            if (fn(dfs.chosen)) stopped = true;
            dfs.pop();
          }
          return;
        }
        for (std::size_t i = from; i + need <= top && !stopped && !out_of_budget; ++i) {
          if (!budget.spend()) { out_of_budget = true; return; }
          if (!dfs.push(i)) continue;
          rec(i + 1, top, need - 1);
          dfs.pop();
        }
      };

  for (std::size_t top = std::max(min_top, k - 1); top < mf.count(); ++top) {
    rec(0, top, k - 1);
    if (stopped) return ScanEnd::stopped;
    if (out_of_budget) return ScanEnd::budget;
  }
  return ScanEnd::exhausted;
}

// --- breadth ---------------------------------------------------------------

struct BreadthResult {
  std::size_t breadth = 0;
  std::vector<std::size_t> family; // indices of a largest incompressible family found
  SearchStats stats;
};

// Exact breadth by exhaustive depth-first search with hereditary pruning.
// If the budget runs out the reported value is a lower bound and
// stats.exhaustive is false.
inline BreadthResult breadth_exact(const SetSystem& s, Budget& budget) {
  BreadthResult res;
  const std::uint64_t before = budget.used;
  MaskFamily mf(s.members, s.ground);
  detail::FamilyDfs dfs(mf);
  bool out_of_budget = false;

  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (dfs.chosen.size() > res.breadth) {
      res.breadth = dfs.chosen.size();
      res.family = dfs.chosen;
    }
    for (std::size_t i = from; i < mf.count() && !out_of_budget; ++i) {
      if (dfs.chosen.size() + (mf.count() - i) <= res.breadth) break;
      if (!budget.spend()) { out_of_budget = true; return; }
      if (!dfs.push(i)) continue;
      rec(i + 1);
      dfs.pop();
    }
  };
  rec(0);

  res.stats.nodes = budget.used - before;
  res.stats.budget_hit = out_of_budget;
  res.stats.exhaustive = !out_of_budget;
  return res;
}

struct FamilySearchResult {
  SearchOutcome outcome = SearchOutcome::inconclusive;
  std::vector<std::size_t> indices; // into the searched member list
  std::vector<Member> family;
  Witness witness;
  SearchStats stats;
};

// First incompressible family of exactly size k, in the canonical scan
// order, together with its canonical witness.  Families whose witness points
// fall outside the window are skipped (they remain incompressible; only the
// exhibit is missing), so a found result always carries a verifiable witness.
inline FamilySearchResult find_incompressible(const std::vector<Member>& members,
                                              const GroundWindow& g, std::size_t k,
                                              Budget& budget) {
  FamilySearchResult res;
  const std::uint64_t before = budget.used;
  MaskFamily mf(members, g);
  ScanEnd end = scan_incompressible_ksubsets(mf, k, budget, [&](const std::vector<std::size_t>& idx) {
    std::vector<Member> fam;
    fam.reserve(idx.size());
    for (std::size_t i : idx) fam.push_back(members[i]);
    WitnessResult w = find_witness(fam, g);
    if (w.outcome != WitnessOutcome::found) return false;
    res.indices = idx;
    res.family = std::move(fam);
    res.witness = w.witness;
    return true;
  });
  res.stats.nodes = budget.used - before;
  res.stats.budget_hit = end == ScanEnd::budget;
  res.stats.exhaustive = end == ScanEnd::exhausted;
  res.outcome = end == ScanEnd::stopped  ? SearchOutcome::found
              : end == ScanEnd::exhausted ? SearchOutcome::absent
                                          : SearchOutcome::inconclusive;
  return res;
}

inline FamilySearchResult breadth_at_least(const SetSystem& s, std::size_t k, Budget& budget) {
  return find_incompressible(s.members, s.ground, k, budget);
}

// Finite thickness surrogate: does the trace system S n a retain an
// incompressible family of size k?
inline FamilySearchResult thickness_probe(const SetSystem& s, const Member& a, std::size_t k,
                                          Budget& budget) {
  return breadth_at_least(restrict_system(s, RestrictOp::trace, a), k, budget);
}

} // namespace ucs
