#pragma once

// Colourings of spreads and the splitting machinery built on them: decisive
// bound tables, sign-pattern (atom) partitions generated by a member family,
// shattering certificates, the halving iteration that either splits every
// colour class or exhibits a decisive one, the dichotomy search alternating
// the two, and the realization of a finite target system inside a shattering
// family's atoms.
//
// All limit statements of the underlying theory appear here as parameterized
// finite surrogates: a count threshold t replaces "grows without bound", a
// tail length w replaces "for all large n", an onset index replaces
// "eventually", and an enumeration prefix replaces "some member of the
// system".  Every report echoes its parameters, so each claim can be
// falsified by recomputation at the same parameters.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ucs/breadth.hpp"
#include "ucs/core.hpp"
#include "ucs/oracle.hpp"
#include "ucs/spread.hpp"
#include "ucs/system.hpp"

namespace ucs {

// --- colourings -------------------------------------------------------------

// A partition of the window [0, size) into finitely many position classes.
struct Colouring {
  std::vector<std::vector<Pos>> classes;
};

inline Colouring trivial_colouring(Pos window) {
  std::vector<Pos> all;
  for (Pos p = 0; p < window; ++p) all.push_back(p);
  return Colouring{{std::move(all)}};
}

inline Colouring parity_colouring(Pos window) {
  std::vector<Pos> even, odd;
  for (Pos p = 0; p < window; ++p) (p % 2 == 0 ? even : odd).push_back(p);
  return Colouring{{std::move(even), std::move(odd)}};
}

inline bool colouring_is_partition(const Colouring& c, Pos window) {
  if (c.classes.empty()) return false;
  std::vector<bool> seen(static_cast<std::size_t>(window), false);
  for (const auto& cl : c.classes)
    for (Pos p : cl) {
      if (p < 0 || p >= window || seen[static_cast<std::size_t>(p)]) return false;
      seen[static_cast<std::size_t>(p)] = true;
    }
  for (bool b : seen)
    if (!b) return false;
  return true;
}

// Finite surrogate of "every class meets every block without bound": each
// class meets each of the last w blocks in at least t points.
inline bool colours_spread(const Colouring& c, const Spread& e, std::size_t t, std::size_t w) {
  if (w > e.levels()) throw std::invalid_argument("colours_spread: tail longer than the spread");
  for (const auto& cl : c.classes)
    for (std::size_t n = e.levels() - w + 1; n <= e.levels(); ++n)
      if (detail::vec_inter(cl, e.blocks[n - 1]).size() < t) return false;
  return true;
}

namespace detail {

// |x ∩ cls ∩ block| over finite position lists.
inline std::size_t count_in(const Member& x, const std::vector<Pos>& cls,
                            const std::vector<Pos>& block) {
  std::size_t k = 0;
  for (Pos p : block)
    if (vec_contains(cls, p) && member_contains(x, p)) ++k;
  return k;
}

// |x^c ∩ cls ∩ block|; the complement never needs materializing.
inline std::size_t count_out(const Member& x, const std::vector<Pos>& cls,
                             const std::vector<Pos>& block) {
  std::size_t k = 0;
  for (Pos p : block)
    if (vec_contains(cls, p) && !member_contains(x, p)) ++k;
  return k;
}

} // namespace detail

// --- decisive bound tables --------------------------------------------------

// One member's term at one block: the smaller of its presence in the decisive
// class and its absences from every class.
inline std::size_t decisive_level_value(const Colouring& c, std::size_t c0, const Member& x,
                                        const std::vector<Pos>& block) {
  std::size_t v = detail::count_in(x, c.classes[c0], block);
  for (const auto& cl : c.classes) v = std::min(v, detail::count_out(x, cl, block));
  return v;
}

struct DecisiveBound {
  Member member = finite_member({});
  std::size_t bound = 0;  // max over the checked levels of the level value
  std::size_t level = 0;  // first level attaining it (1-based; 0 when the bound is 0)
};

struct DecisiveReport {
  Colouring colouring;
  std::size_t decisive_class = 0;
  std::vector<DecisiveBound> table;
  std::size_t horizon = 0;  // levels checked
  std::string sample;       // how the members were drawn
  std::size_t max_bound = 0;
  std::optional<Member> counterexample;  // set when a requested bound is exceeded
};

// Per-member bounds are the faithful reading; the max across the sample and
// the optional counterexample serve the uniform reading.
inline DecisiveReport decisive_check(const Colouring& c, std::size_t c0,
                                     const std::vector<Member>& sample, const Spread& e,
                                     std::size_t horizon,
                                     std::optional<std::size_t> bound = {}) {
  if (c0 >= c.classes.size()) throw std::invalid_argument("decisive_check: class index out of range");
  DecisiveReport rep;
  rep.colouring = c;
  rep.decisive_class = c0;
  rep.horizon = std::min(horizon, e.levels());
  rep.sample = "explicit[" + std::to_string(sample.size()) + "]";
  for (const Member& x : sample) {
    DecisiveBound row{x, 0, 0};
    for (std::size_t n = 1; n <= rep.horizon; ++n) {
      std::size_t v = decisive_level_value(c, c0, x, e.blocks[n - 1]);
      if (v > row.bound) {
        row.bound = v;
        row.level = n;
      }
    }
    rep.max_bound = std::max(rep.max_bound, row.bound);
    if (bound && row.bound > *bound && !rep.counterexample) rep.counterexample = x;
    rep.table.push_back(std::move(row));
  }
  return rep;
}

// Convenience: sample = the oracle's enumeration prefix.
inline DecisiveReport decisive_check(const Colouring& c, std::size_t c0, const OracleSystem& o,
                                     std::size_t count, const Spread& e, std::size_t horizon,
                                     std::optional<std::size_t> bound = {}) {
  std::vector<Member> sample;
  for (std::size_t i = 0; i < count; ++i) {
    std::optional<Member> m = o.enumerate(i);
    if (!m) break;
    sample.push_back(std::move(*m));
  }
  DecisiveReport rep = decisive_check(c, c0, sample, e, horizon, bound);
  rep.sample = "prefix[" + std::to_string(rep.table.size()) + "]";
  return rep;
}

// The strengthened bound swaps sup and min: every term is maximized over the
// levels separately before the minimum is taken.  Block-aligned systems
// refute it: a member holding exactly the even-indexed blocks drives the
// inside term up along even levels and every outside term up along odd ones.
struct StrongerTerms {
  std::size_t in_term = 0;             // max over levels of |x ∩ C0 ∩ E_n|
  std::vector<std::size_t> out_terms;  // per class, max over levels of |x^c ∩ C ∩ E_n|
  std::size_t value = 0;               // min over all terms
};

inline StrongerTerms stronger_decisive_terms(const Colouring& c, std::size_t c0, const Member& x,
                                             const Spread& e, std::size_t horizon) {
  if (c0 >= c.classes.size())
    throw std::invalid_argument("stronger_decisive_terms: class index out of range");
  StrongerTerms st;
  st.out_terms.assign(c.classes.size(), 0);
  const std::size_t levels = std::min(horizon, e.levels());
  for (std::size_t n = 1; n <= levels; ++n) {
    st.in_term = std::max(st.in_term, detail::count_in(x, c.classes[c0], e.blocks[n - 1]));
    for (std::size_t j = 0; j < c.classes.size(); ++j)
      st.out_terms[j] =
          std::max(st.out_terms[j], detail::count_out(x, c.classes[j], e.blocks[n - 1]));
  }
  st.value = st.in_term;
  for (std::size_t v : st.out_terms) st.value = std::min(st.value, v);
  return st;
}

// --- sign-pattern atoms -----------------------------------------------------

// The 2^m atoms a member family cuts out of the window: position p lands in
// the atom whose pattern bit j records p ∈ x_j.  Empty atoms are dropped from
// the colouring; their patterns are reported alongside.
struct GammaPartition {
  Colouring colouring;
  std::vector<std::uint32_t> patterns;        // pattern of classes[i]
  std::vector<std::uint32_t> empty_patterns;  // patterns of the dropped atoms
};

inline GammaPartition gamma_partition(const std::vector<Member>& xs, Pos window) {
  if (xs.empty()) throw std::invalid_argument("gamma_partition: empty family");
  if (xs.size() > 20) throw std::invalid_argument("gamma_partition: more than 20 generators");
  std::vector<std::vector<Pos>> atoms(std::size_t{1} << xs.size());
  for (Pos p = 0; p < window; ++p) {
    std::uint32_t pat = 0;
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (member_contains(xs[j], p)) pat |= std::uint32_t{1} << j;
    atoms[pat].push_back(p);
  }
  GammaPartition gp;
  for (std::uint32_t pat = 0; pat < atoms.size(); ++pat) {
    if (atoms[pat].empty()) gp.empty_patterns.push_back(pat);
    else {
      gp.colouring.classes.push_back(std::move(atoms[pat]));
      gp.patterns.push_back(pat);
    }
  }
  return gp;
}

// --- shattering -------------------------------------------------------------

// Certifies that every sign pattern over the listed members keeps at least
// `threshold` points inside every block from the onset level on.
struct ShatterCertificate {
  std::vector<Member> members;
  Spread spread;
  std::size_t threshold = 1;
  std::size_t onset = 1;                        // first certified level, 1-based
  std::vector<std::vector<std::size_t>> table;  // [pattern][level - onset]
};

struct ShatterResult {
  bool ok = false;
  ShatterCertificate certificate;     // table filled even on failure
  std::uint32_t failing_pattern = 0;  // first underfull pattern when !ok
  std::size_t failing_level = 0;      // its level (1-based) when !ok
};

inline ShatterResult shatter_check(const std::vector<Member>& as, const Spread& g,
                                   std::size_t threshold, std::size_t onset) {
  if (as.empty() || as.size() > 16)
    throw std::invalid_argument("shatter_check: family size out of range [1, 16]");
  if (onset < 1 || onset > g.levels())
    throw std::invalid_argument("shatter_check: onset out of range");
  ShatterResult res;
  res.certificate = ShatterCertificate{as, g, threshold, onset, {}};
  res.ok = true;
  const std::uint32_t npat = std::uint32_t{1} << as.size();
  for (std::uint32_t pat = 0; pat < npat; ++pat) {
    std::vector<std::size_t> row;
    for (std::size_t n = onset; n <= g.levels(); ++n) {
      std::size_t cnt = 0;
      for (Pos p : g.blocks[n - 1]) {
        bool match = true;
        for (std::size_t j = 0; j < as.size() && match; ++j)
          match = member_contains(as[j], p) == (((pat >> j) & 1u) != 0);
        if (match) ++cnt;
      }
      if (cnt < threshold && res.ok) {
        res.ok = false;
        res.failing_pattern = pat;
        res.failing_level = n;
      }
      row.push_back(cnt);
    }
    res.certificate.table.push_back(std::move(row));
  }
  return res;
}

// Recomputes a certificate's table from its raw members and blocks.
inline bool verify_shatter(const ShatterCertificate& cert) {
  ShatterResult redo = shatter_check(cert.members, cert.spread, cert.threshold, cert.onset);
  return redo.ok && redo.certificate.table == cert.table;
}

// --- the halving iteration --------------------------------------------------

// A member splitting every colour class along a surviving set of levels: the
// inside and outside counts both stay at or above the threshold.
struct HalvingTrace {
  Member y = finite_member({});
  std::vector<std::size_t> levels;               // surviving 1-based spread levels
  std::vector<std::vector<std::size_t>> inside;   // [class][i] = |y ∩ C ∩ E_levels[i]|
  std::vector<std::vector<std::size_t>> outside;  // [class][i] = |y^c ∩ C ∩ E_levels[i]|
};

inline bool verify_halving(const HalvingTrace& tr, const Colouring& c, const Spread& e,
                           std::size_t t) {
  if (tr.levels.empty()) return false;
  if (tr.inside.size() != c.classes.size() || tr.outside.size() != c.classes.size()) return false;
  for (std::size_t j = 0; j < c.classes.size(); ++j) {
    if (tr.inside[j].size() != tr.levels.size() || tr.outside[j].size() != tr.levels.size())
      return false;
    for (std::size_t i = 0; i < tr.levels.size(); ++i) {
      std::size_t n = tr.levels[i];
      if (n < 1 || n > e.levels()) return false;
      std::size_t in = detail::count_in(tr.y, c.classes[j], e.blocks[n - 1]);
      std::size_t out = detail::count_out(tr.y, c.classes[j], e.blocks[n - 1]);
      if (in != tr.inside[j][i] || out != tr.outside[j][i]) return false;
      if (in < t || out < t) return false;
    }
  }
  return true;
}

enum class HalvingKind { halved, decisive, inconclusive };

struct HalvingOptions {
  std::size_t max_members = 128;  // enumeration prefix scanned per class round
  std::size_t min_levels = 2;     // surviving levels required to continue
};

struct HalvingOutcome {
  HalvingKind kind = HalvingKind::inconclusive;
  HalvingTrace trace;         // halved
  Spread refined;             // decisive: the sub-spread the report refers to
  DecisiveReport report;      // decisive
  std::vector<Member> steps;  // the member accepted in each class round
  SearchStats stats;
};

// One class at a time: find a member that meets the class inside the
// accumulator's complement while avoiding part of every class there, union it
// into the accumulator, and thin the level set to where both counts clear the
// threshold.  A class with no such member in the scanned prefix looks
// decisive on the current sub-spread, which is returned with its bound table.
inline HalvingOutcome halving_iteration(OracleRef o, const Spread& e, const Colouring& c,
                                        std::size_t t, Budget& budget, HalvingOptions opt = {}) {
  HalvingOutcome out;
  const std::uint64_t before = budget.used;
  Member y = finite_member({});
  std::vector<std::size_t> live;
  for (std::size_t n = 1; n <= e.levels(); ++n) live.push_back(n);

  for (std::size_t k = 0; k < c.classes.size(); ++k) {
    std::vector<Member> scanned;
    bool accepted = false;
    bool stream_ended = false;
    for (std::size_t i = 0; i < opt.max_members; ++i) {
      if (!budget.spend(1)) {
        out.stats.nodes = budget.used - before;
        out.stats.budget_hit = true;
        return out;
      }
      std::optional<Member> xm = o->enumerate(i);
      if (!xm) {
        stream_ended = true;
        break;
      }
      const Member x = *xm;
      scanned.push_back(x);
      std::vector<std::size_t> survivors;
      for (std::size_t n : live) {
        std::vector<Pos> sub;  // the accumulator's complement within the block
        for (Pos p : e.blocks[n - 1])
          if (!member_contains(y, p)) sub.push_back(p);
        bool good = detail::count_in(x, c.classes[k], sub) >= t;
        for (std::size_t j = 0; j < c.classes.size() && good; ++j)
          good = detail::count_out(x, c.classes[j], sub) >= t;
        if (good) survivors.push_back(n);
      }
      if (survivors.size() >= opt.min_levels) {
        y = member_union(y, x);
        live = std::move(survivors);
        out.steps.push_back(x);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::vector<std::vector<Pos>> blocks;
      for (std::size_t n : live) {
        std::vector<Pos> sub;
        for (Pos p : e.blocks[n - 1])
          if (!member_contains(y, p)) sub.push_back(p);
        if (!sub.empty()) blocks.push_back(std::move(sub));
      }
      out.refined = Spread{std::move(blocks)};
      out.report = decisive_check(c, k, scanned, out.refined, out.refined.levels());
      out.report.sample = "prefix[" + std::to_string(scanned.size()) + "]";
      out.kind = HalvingKind::decisive;
      out.stats.nodes = budget.used - before;
      out.stats.exhaustive = stream_ended;
      return out;
    }
  }

  // Record the final accumulator's growth tables against the original blocks.
  out.trace.y = y;
  out.trace.levels = live;
  out.trace.inside.assign(c.classes.size(), {});
  out.trace.outside.assign(c.classes.size(), {});
  for (std::size_t j = 0; j < c.classes.size(); ++j)
    for (std::size_t n : live) {
      out.trace.inside[j].push_back(detail::count_in(y, c.classes[j], e.blocks[n - 1]));
      out.trace.outside[j].push_back(detail::count_out(y, c.classes[j], e.blocks[n - 1]));
    }
  out.kind = HalvingKind::halved;
  out.stats.nodes = budget.used - before;
  return out;
}

// --- the dichotomy search ---------------------------------------------------

enum class DichotomyKind { shattered, decisive, inconclusive };

struct DichotomyOptions {
  std::size_t max_members = 128;
  std::size_t min_levels = 2;
};

struct DichotomyResult {
  DichotomyKind kind = DichotomyKind::inconclusive;
  ShatterResult shatter;  // shattered
  Spread refined;         // decisive
  DecisiveReport report;  // decisive
  std::vector<Member> members;                       // accumulated splitting family
  std::vector<std::vector<std::size_t>> index_sets;  // surviving levels after each round
  std::vector<std::size_t> diagonal;                 // i-th surviving level of the i-th set
  SearchStats stats;
};

// Alternates atom partitions and halving rounds: each round either yields a
// member splitting every current atom (extending the family, thinning the
// level set) or stops with the decisive report of the class that resisted.
// The per-round threshold doubles toward the early rounds, so every atom
// keeps enough points for all remaining splits; the final family's full
// pattern table is certified at the requested threshold.
inline DichotomyResult dichotomy_search(OracleRef o, const Spread& e, std::size_t depth,
                                        std::size_t t, Budget& budget,
                                        DichotomyOptions opt = {}) {
  if (depth < 1 || depth > 16)
    throw std::invalid_argument("dichotomy_search: depth out of range [1, 16]");
  if (t < 1) throw std::invalid_argument("dichotomy_search: threshold below 1");
  DichotomyResult res;
  const std::uint64_t before = budget.used;
  const Pos window = o->ground().size;
  std::vector<std::size_t> live;
  for (std::size_t n = 1; n <= e.levels(); ++n) live.push_back(n);

  for (std::size_t round = 0; round < depth; ++round) {
    Colouring c = res.members.empty() ? trivial_colouring(window)
                                      : gamma_partition(res.members, window).colouring;
    Spread current = sub_spread(e, live);
    const std::size_t margin = t << (depth - 1 - round);
    HalvingOutcome h =
        halving_iteration(o, current, c, margin, budget, {opt.max_members, opt.min_levels});
    res.stats.nodes = budget.used - before;
    if (h.kind == HalvingKind::inconclusive) {
      res.stats.budget_hit = true;
      return res;
    }
    if (h.kind == HalvingKind::decisive) {
      res.kind = DichotomyKind::decisive;
      res.refined = h.refined;
      res.report = h.report;
      res.stats.exhaustive = h.stats.exhaustive;
      return res;
    }
    res.members.push_back(h.trace.y);
    std::vector<std::size_t> next;
    for (std::size_t idx : h.trace.levels) next.push_back(live[idx - 1]);
    live = std::move(next);
    res.index_sets.push_back(live);
  }

  for (std::size_t i = 0; i < res.index_sets.size(); ++i)
    if (i < res.index_sets[i].size()) res.diagonal.push_back(res.index_sets[i][i]);
  res.shatter = shatter_check(res.members, sub_spread(e, live), t, 1);
  res.kind = res.shatter.ok ? DichotomyKind::shattered : DichotomyKind::inconclusive;
  res.stats.nodes = budget.used - before;
  return res;
}

// --- realizing a finite system inside the atoms -----------------------------

// The binary-digit family: member j collects the window positions whose j-th
// bit is set.  Over blocks aligned to bit boundaries it shatters at any
// threshold the block sizes allow.
inline std::vector<Member> digit_family(std::size_t m, Pos window) {
  std::vector<Member> out;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Pos> pts;
    for (Pos p = 0; p < window; ++p)
      if ((static_cast<std::uint32_t>(p) >> j) & 1u) pts.push_back(p);
    out.push_back(finite_member(std::move(pts)));
  }
  return out;
}

// Picks one point per element of the target's ground, all inside a single
// certified block, such that point j lies in certificate member n exactly
// when element j lies in the n-th listed target member.  Listings must be
// duplicate-free; a listing that fails to separate two elements first gets
// the missing singletons adjoined (and reported).
struct RealizeResult {
  bool ok = false;
  std::string error;
  std::vector<Member> listing;  // target members actually used
  std::size_t adjoined = 0;     // singletons appended for separation
  std::vector<Pos> points;      // one ground point per target element
  std::size_t block_level = 0;  // 1-based certified level the points came from
  std::vector<std::vector<int>> table;  // [element][n] = membership, re-verified
};

inline RealizeResult realize_finite_semilattice(const ShatterCertificate& cert,
                                                const SetSystem& q) {
  RealizeResult res;
  if (cert.threshold < 1) {
    res.error = "certificate threshold below 1";
    return res;
  }
  if (q.ground.unbounded || q.ground.size < 1) {
    res.error = "target ground must be a nonempty bounded window";
    return res;
  }
  if (q.members.empty()) {
    res.error = "target listing is empty";
    return res;
  }
  res.listing = q.members;
  for (std::size_t a = 0; a < res.listing.size(); ++a)
    for (std::size_t b = a + 1; b < res.listing.size(); ++b)
      if (res.listing[a] == res.listing[b]) {
        res.error = "target listing repeats a member";
        return res;
      }

  const Pos k = q.ground.size;
  auto separated = [&]() {
    for (Pos a = 0; a < k; ++a)
      for (Pos b = a + 1; b < k; ++b) {
        bool sep = false;
        for (const Member& m : res.listing)
          if (member_contains(m, a) != member_contains(m, b)) {
            sep = true;
            break;
          }
        if (!sep) return false;
      }
    return true;
  };
  if (!separated()) {
    for (Pos j = 0; j < k; ++j) {
      Member s = finite_member({j});
      if (std::find(res.listing.begin(), res.listing.end(), s) == res.listing.end()) {
        res.listing.push_back(std::move(s));
        ++res.adjoined;
      }
    }
  }
  const std::size_t used = res.listing.size();
  if (used > cert.members.size()) {
    res.error = "certificate depth below the listing length";
    return res;
  }

  for (std::size_t n = cert.onset; n <= cert.spread.levels() && res.points.empty(); ++n) {
    std::vector<Pos> pick;
    for (Pos j = 0; j < k; ++j) {
      Pos chosen = -1;
      for (Pos p : cert.spread.blocks[n - 1]) {
        bool match = true;
        for (std::size_t i = 0; i < used && match; ++i)
          match = member_contains(cert.members[i], p) == member_contains(res.listing[i], j);
        if (match) {
          chosen = p;
          break;
        }
      }
      if (chosen < 0) break;
      pick.push_back(chosen);
    }
    if (static_cast<Pos>(pick.size()) == k) {
      res.points = std::move(pick);
      res.block_level = n;
    }
  }
  if (res.points.empty()) {
    res.error = "no certified block realizes every required pattern";
    return res;
  }

  res.table.assign(static_cast<std::size_t>(k), std::vector<int>(used, 0));
  for (Pos j = 0; j < k; ++j)
    for (std::size_t i = 0; i < used; ++i) {
      bool in = member_contains(cert.members[i], res.points[static_cast<std::size_t>(j)]);
      res.table[static_cast<std::size_t>(j)][i] = in ? 1 : 0;
      if (in != member_contains(res.listing[i], j)) {
        res.error = "realized point contradicts the target listing";
        return res;
      }
    }
  for (std::size_t a = 0; a < res.points.size(); ++a)
    for (std::size_t b = a + 1; b < res.points.size(); ++b)
      if (res.points[a] == res.points[b]) {
        res.error = "realized points collide";
        return res;
      }
  res.ok = true;
  return res;
}

} // namespace ucs
