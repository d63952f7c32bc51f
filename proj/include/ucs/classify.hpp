#pragma once

// Structure detection: searching a (possibly infinite, query-presented)
// union-closed system for canonical max/min/ort patterns, and the
// constructions that produce or transport the resulting certificates.
//
// A type certificate consists of a spread E_1..E_k and, for every level n
// and nonempty a inside E_n, a member of the system whose trace on
// join(E) equals the canonical level pattern.  Detection proceeds stage by
// stage: stage n searches a restricted working system for an incompressible
// size-n family, takes its witness points as E_n, and maps the family back
// to base members through recorded enumeration preimages.  All searches are
// deterministic; absence claims are always relative to the declared search
// discipline (enumeration prefix caps, candidate caps, listed witness
// points, first-occurrence preimages), and results say whether the space
// was exhausted or a budget intervened.
//
// Working systems per stage:
//   max  subtract the union of all previous stage families
//        (realization: previous union  u  chosen sources)
//   min  drop members meeting previous witness points, trace to the
//        intersection of previous sources
//   ort  keep members containing all previous witness points, trace to the
//        intersection of previous sources; additionally each stage family
//        must jointly cover the current trace constraint (empty residue),
//        because the target pattern contains its own top at every depth —
//        this bars certificates burrowed inside a proper corner of the
//        system, where no member reaches the whole constraint
//
// Witness points are not unique, and the least choice can be globally
// wrong (an early point may lie in every member, killing the next stage),
// so each candidate family iterates over a bounded list of witness
// variants.  Variant 0 is always the canonical least-point witness.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ucs/breadth.hpp"
#include "ucs/canonical.hpp"
#include "ucs/core.hpp"
#include "ucs/oracle.hpp"
#include "ucs/spread.hpp"
#include "ucs/system.hpp"

namespace ucs {

// --- candidate scanning ----------------------------------------------------

// The least `count` points of a member, within the ground window.
inline std::vector<Pos> first_points(const Member& m, const GroundWindow& g, std::size_t count) {
  std::vector<Pos> pts;
  if (is_finite(m)) {
    for (Pos p : m.support) {
      if (pts.size() >= count) break;
      pts.push_back(p);
    }
  } else {
    for (Pos p = 0; p < g.size && pts.size() < count; ++p)
      if (!detail::vec_contains(m.support, p)) pts.push_back(p);
  }
  return pts;
}

struct FamilyCandidate {
  std::vector<std::size_t> indices;  // into the working system's enumeration
  std::vector<Member> family;
  std::vector<Member> privates;      // x_j \ join(others), exact
};

struct ScanLimits {
  std::size_t max_members = 64;
  std::size_t max_candidates = 32;
};

struct CandidateScan {
  bool stopped = false;     // callback accepted a candidate
  bool exhausted = false;   // full declared space scanned without a stop
  bool budget_hit = false;
  bool capped = false;      // candidate cap cut the scan short
  std::size_t families_seen = 0;
};

// Enumerates incompressible size-k subfamilies of the working system's
// enumeration prefix, in canonical graded order, with exact private
// regions.  The callback returns true to stop (success).
template <typename Fn>
CandidateScan for_each_family(const OracleSystem& working, std::size_t k, Budget& budget,
                              const ScanLimits& lim, Fn&& fn) {
  CandidateScan out;
  if (k == 0) throw std::invalid_argument("family size must be positive");
  OraclePrefix prefix{&working, {}, false};
  for (std::size_t top = k - 1; top < lim.max_members; ++top) {
    if (!prefix.ensure(top + 1, budget)) {
      out.budget_hit = budget.exhausted();
      break;
    }
    MaskFamily mf(prefix.members, working.ground());
    ScanEnd end = scan_incompressible_ksubsets(mf, k, budget, [&](const std::vector<std::size_t>& idx) {
      if (out.families_seen >= lim.max_candidates) {
        out.capped = true;
        return true;
      }
      ++out.families_seen;
      FamilyCandidate cand;
      cand.indices = idx;
      for (std::size_t i : idx) cand.family.push_back(prefix.members[i]);
      for (std::size_t j = 0; j < cand.family.size(); ++j)
        cand.privates.push_back(member_difference(cand.family[j], join_without(cand.family, j)));
      if (fn(cand)) {
        out.stopped = true;
        return true;
      }
      return false;
    }, top);
    if (out.stopped || out.capped) break;
    if (end == ScanEnd::budget) { out.budget_hit = true; break; }
  }
  out.exhausted = !out.stopped && !out.capped && !out.budget_hit;
  return out;
}

struct VariantLimits {
  std::size_t points_per_member = 4;
  std::size_t max_variants = 16;
};

// Bounded list of witness-point tuples (one point per member, drawn from
// that member's private region).  Private regions of an incompressible
// family are pairwise disjoint, so the points of a tuple are automatically
// distinct.  Empty result: some private region has no point inside the
// window, i.e. no witness is exhibitable under this discipline.
inline std::vector<std::vector<Pos>> witness_variants(const std::vector<Member>& privates,
                                                      const GroundWindow& g,
                                                      const VariantLimits& lim) {
  std::vector<std::vector<Pos>> choices;
  for (const Member& pr : privates) {
    choices.push_back(first_points(pr, g, lim.points_per_member));
    if (choices.back().empty()) return {};
  }
  std::vector<std::vector<Pos>> out;
  std::vector<std::size_t> odo(choices.size(), 0);
  while (out.size() < lim.max_variants) {
    std::vector<Pos> pts;
    for (std::size_t j = 0; j < choices.size(); ++j) pts.push_back(choices[j][odo[j]]);
    out.push_back(std::move(pts));
    std::size_t j = choices.size();
    while (j > 0) {
      --j;
      if (++odo[j] < choices[j].size()) break;
      odo[j] = 0;
      if (j == 0) return out; // odometer wrapped: all variants listed
    }
  }
  return out;
}

// --- certificates ----------------------------------------------------------

struct Realization {
  std::size_t level = 0;
  std::vector<Pos> inner;  // nonempty subset of the level's block
  Member member;
};

struct TypeCertificate {
  CanonicalType type = CanonicalType::max;
  Spread spread;
  std::vector<Realization> realizations;
};

struct CertificateCheck {
  bool valid = false;
  std::size_t patterns_checked = 0;
  std::size_t membership_unknown = 0;
  std::string failure;
};

// Checks a certificate against the system it claims to live in: the spread
// must be valid, every level pattern must have exactly one realization,
// every realization's trace on join(spread) must equal its pattern, and no
// realization may be rejected by the membership test (unknown is tolerated
// and counted).
inline CertificateCheck verify_certificate(const OracleSystem& oracle,
                                           const TypeCertificate& cert) {
  CertificateCheck out;
  Spread e;
  try {
    std::vector<std::vector<Pos>> blocks;
    for (const auto& b : cert.spread.blocks) blocks.push_back(b);
    e = make_spread(blocks);
  } catch (const std::exception& ex) {
    out.failure = std::string("invalid spread: ") + ex.what();
    return out;
  }
  for (const auto& b : e.blocks)
    if (b.size() > 20) {
      out.failure = "spread block too large to enumerate inner sets";
      return out;
    }
  std::map<std::pair<std::size_t, std::vector<Pos>>, const Member*> lookup;
  for (const auto& r : cert.realizations) {
    if (r.level < 1 || r.level > e.levels()) {
      out.failure = "realization level out of range";
      return out;
    }
    const auto& block = e.blocks[r.level - 1];
    if (r.inner.empty() || !detail::vec_includes(block, r.inner) ||
        detail::normalized(r.inner) != r.inner) {
      out.failure = "realization inner set is not a nonempty subset of its block";
      return out;
    }
    if (!lookup.emplace(std::make_pair(r.level, r.inner), &r.member).second) {
      out.failure = "duplicate realization for one level pattern";
      return out;
    }
  }
  const Member join_e = finite_member(spread_join(e));
  for (std::size_t n = 1; n <= e.levels(); ++n) {
    const auto& block = e.blocks[n - 1];
    for (std::size_t mask = 1; mask < (std::size_t{1} << block.size()); ++mask) {
      std::vector<Pos> a;
      for (std::size_t i = 0; i < block.size(); ++i)
        if (mask & (std::size_t{1} << i)) a.push_back(block[i]);
      auto it = lookup.find(std::make_pair(n, a));
      if (it == lookup.end()) {
        out.failure = "missing realization for a level pattern";
        return out;
      }
      const Member& z = *it->second;
      Member tr = member_intersection(z, join_e);
      if (!is_finite(tr) || tr.support != level_pattern(cert.type, e, n, a)) {
        out.failure = "realization trace differs from its level pattern";
        return out;
      }
      ++out.patterns_checked;
      Membership mem = oracle.contains(z);
      if (mem == Membership::no) {
        out.failure = "realization rejected by the membership test";
        return out;
      }
      if (mem == Membership::unknown) ++out.membership_unknown;
    }
  }
  if (lookup.size() != out.patterns_checked) {
    out.failure = "certificate carries extra realizations";
    return out;
  }
  out.valid = true;
  return out;
}

// --- type detection --------------------------------------------------------

struct DetectOptions {
  std::size_t depth = 3;
  std::size_t max_members = 64;        // enumeration prefix per stage search
  std::size_t max_candidates = 128;    // candidate families per stage
  std::size_t witness_points = 4;      // listed points per private region
  std::size_t max_witness_variants = 16;
  std::size_t base_pull_cap = 4096;    // wrapper enumeration pull cap
  bool lookahead = true;               // prune candidates whose next stage is provably empty
};

struct DetectResult {
  SearchOutcome outcome = SearchOutcome::inconclusive;
  std::optional<TypeCertificate> certificate;
  std::size_t stages_completed = 0;   // deepest stage ever reached
  SearchStats stats;
};

namespace detail {

struct LevelRecord {
  std::vector<Pos> block;
  std::map<Pos, Member> source_of;  // witness point -> base member
  Member prefix_union = finite_member({});  // max only: accumulated union before this level
};

struct DetectCtx {
  OracleRef base;
  GroundWindow ground;
  CanonicalType type = CanonicalType::max;
  DetectOptions opt;
  Budget* budget = nullptr;
  bool tainted = false;             // some claim-relevant search was cut short
  std::size_t best = 0;
  std::vector<LevelRecord> levels;
  Member p = finite_member({});     // max: union of previous stage families
  std::vector<Pos> removed;         // min: dropped points; ort: required points
  std::optional<Member> q;          // min/ort: trace constraint
};

inline OracleRef stage_working(const DetectCtx& ctx) {
  OracleRef o = ctx.base;
  switch (ctx.type) {
    case CanonicalType::max:
      if (!is_empty(ctx.p))
        o = restrict_oracle(o, RestrictOp::subtract, ctx.p, ctx.opt.base_pull_cap);
      break;
    case CanonicalType::min:
      if (!ctx.removed.empty())
        o = restrict_oracle(o, RestrictOp::minus, finite_member(ctx.removed), ctx.opt.base_pull_cap);
      if (ctx.q) o = restrict_oracle(o, RestrictOp::trace, *ctx.q, ctx.opt.base_pull_cap);
      break;
    case CanonicalType::ort:
      if (!ctx.removed.empty())
        o = restrict_oracle(o, RestrictOp::above, finite_member(ctx.removed), ctx.opt.base_pull_cap);
      if (ctx.q) o = restrict_oracle(o, RestrictOp::trace, *ctx.q, ctx.opt.base_pull_cap);
      break;
  }
  return o;
}

// Does the next working system provably lack an incompressible family of
// the next stage's size, under the same search discipline?  Only a clean
// exhaustive absence prunes; budget-cut probes do not.
inline bool next_stage_provably_empty(DetectCtx& ctx, std::size_t next_size) {
  OracleRef next = stage_working(ctx);
  FamilySearchResult probe =
      oracle_find_incompressible(*next, next_size, *ctx.budget, {ctx.opt.max_members});
  return probe.outcome == SearchOutcome::absent;
}

inline bool detect_stage(DetectCtx& ctx, std::size_t n) {
  if (n > ctx.opt.depth) return true;
  OracleRef working = stage_working(ctx);
  ScanLimits lim{ctx.opt.max_members, ctx.opt.max_candidates};
  CandidateScan scan = for_each_family(*working, n, *ctx.budget, lim,
                                       [&](const FamilyCandidate& cand) -> bool {
    std::vector<Member> sources;
    for (const Member& x : cand.family) sources.push_back(working->source_member(x));

    if (ctx.type == CanonicalType::ort) {
      // The target pattern contains its own top at every depth (the full
      // inner set at level n realizes the whole remaining constraint), so
      // a stage family is only viable if its join covers that constraint.
      Member jf = join(cand.family);
      Member residue = ctx.q ? member_difference(*ctx.q, jf)
                             : member_complement(jf, ctx.ground);
      if (!is_empty(residue)) return false;
    }

    if (ctx.type == CanonicalType::max && ctx.opt.lookahead && n < ctx.opt.depth) {
      // The max continuation depends only on the family, not the witness.
      Member saved = ctx.p;
      for (const Member& s : sources) ctx.p = member_union(ctx.p, s);
      bool dead = next_stage_provably_empty(ctx, n + 1);
      ctx.p = saved;
      if (dead) return false;
    }

    std::vector<std::vector<Pos>> variants =
        witness_variants(cand.privates, ctx.ground, {ctx.opt.witness_points, ctx.opt.max_witness_variants});
    for (const std::vector<Pos>& pts : variants) {
      LevelRecord rec;
      rec.block = ucs::detail::normalized(pts);
      rec.prefix_union = ctx.p;
      for (std::size_t j = 0; j < pts.size(); ++j) rec.source_of[pts[j]] = sources[j];

      const Member saved_p = ctx.p;
      const std::vector<Pos> saved_removed = ctx.removed;
      const std::optional<Member> saved_q = ctx.q;
      if (ctx.type == CanonicalType::max) {
        for (const Member& s : sources) ctx.p = member_union(ctx.p, s);
      } else {
        ctx.removed = ucs::detail::vec_union(ctx.removed, rec.block);
        Member c = sources.front();
        for (std::size_t j = 1; j < sources.size(); ++j) c = member_intersection(c, sources[j]);
        ctx.q = ctx.q ? member_intersection(*ctx.q, c) : c;
      }
      ctx.levels.push_back(std::move(rec));
      ctx.best = std::max(ctx.best, n);

      bool descend = true;
      if (ctx.type != CanonicalType::max && ctx.opt.lookahead && n < ctx.opt.depth)
        descend = !next_stage_provably_empty(ctx, n + 1);
      if (descend && detect_stage(ctx, n + 1)) return true;

      ctx.levels.pop_back();
      ctx.p = saved_p;
      ctx.removed = saved_removed;
      ctx.q = saved_q;
      // The max continuation ignores the witness choice, so a failed
      // descent rules out every variant of this family at once.
      if (ctx.type == CanonicalType::max) break;
    }
    return false;
  });
  if (scan.stopped) return true;
  if (!scan.exhausted) ctx.tainted = true;
  return false;
}

inline TypeCertificate assemble_certificate(const DetectCtx& ctx) {
  TypeCertificate cert;
  cert.type = ctx.type;
  std::vector<std::vector<Pos>> blocks;
  for (const auto& lr : ctx.levels) blocks.push_back(lr.block);
  cert.spread = make_spread(blocks);
  for (std::size_t n = 1; n <= ctx.levels.size(); ++n) {
    const LevelRecord& lr = ctx.levels[n - 1];
    for (std::size_t mask = 1; mask < (std::size_t{1} << lr.block.size()); ++mask) {
      Realization r;
      r.level = n;
      Member z = ctx.type == CanonicalType::max ? lr.prefix_union : finite_member({});
      for (std::size_t i = 0; i < lr.block.size(); ++i)
        if (mask & (std::size_t{1} << i)) {
          r.inner.push_back(lr.block[i]);
          z = member_union(z, lr.source_of.at(lr.block[i]));
        }
      r.member = std::move(z);
      cert.realizations.push_back(std::move(r));
    }
  }
  return cert;
}

} // namespace detail

inline DetectResult detect_type(OracleRef base, CanonicalType type, Budget& budget,
                                DetectOptions opt = {}) {
  if (opt.depth == 0) throw std::invalid_argument("detection depth must be positive");
  detail::DetectCtx ctx;
  ctx.base = base;
  ctx.ground = base->ground();
  ctx.type = type;
  ctx.opt = opt;
  ctx.budget = &budget;
  const std::uint64_t before = budget.used;

  DetectResult res;
  bool ok = detail::detect_stage(ctx, 1);
  res.stats.nodes = budget.used - before;
  res.stages_completed = ok ? opt.depth : ctx.best;
  if (ok) {
    res.outcome = SearchOutcome::found;
    res.certificate = detail::assemble_certificate(ctx);
    CertificateCheck check = verify_certificate(*base, *res.certificate);
    if (!check.valid)
      throw std::logic_error("internal error: assembled certificate failed verification: " +
                             check.failure);
  } else if (ctx.tainted || budget.exhausted()) {
    res.outcome = SearchOutcome::inconclusive;
    res.stats.budget_hit = budget.exhausted();
  } else {
    res.outcome = SearchOutcome::absent;
    res.stats.exhaustive = true;
  }
  return res;
}

// Runs all three detectors in a fixed order on one shared budget.
inline std::vector<DetectResult> detect_any(OracleRef base, Budget& budget,
                                            DetectOptions opt = {}) {
  std::vector<DetectResult> out;
  for (CanonicalType t : {CanonicalType::max, CanonicalType::min, CanonicalType::ort})
    out.push_back(detect_type(base, t, budget, opt));
  return out;
}

// --- incompressible sequences induce the max pattern -----------------------

struct ChainCertificate {
  bool ok = false;
  std::string error;
  TypeCertificate certificate;
  std::size_t depth = 0;
  std::size_t used_members = 0;
};

// From a sequence whose every prefix is an incompressible family, builds a
// max-type certificate of depth floor(sqrt(length)): level k consumes the
// members with index in (  (k-1)^2, k^2 ], stripped of the union of all
// earlier members; the witness of each stripped family becomes E_k, so
// |E_k| = 2k-1.  Realizations are unions of sequence members, hence stay
// inside any union-closed system containing the sequence.
inline ChainCertificate chain_to_tmax(const std::vector<Member>& seq, const GroundWindow& g) {
  ChainCertificate out;
  std::set<Member, MemberLess> seen;
  for (const Member& m : seq)
    if (!seen.insert(m).second) {
      out.error = "sequence members must be distinct";
      return out;
    }
  for (std::size_t m = 1; m <= seq.size(); ++m) {
    std::vector<Member> prefix(seq.begin(), seq.begin() + m);
    if (is_compressible(prefix)) {
      out.error = "prefix of length " + std::to_string(m) + " is compressible";
      return out;
    }
  }
  std::size_t depth = 0;
  while ((depth + 1) * (depth + 1) <= seq.size()) ++depth;
  if (depth == 0) {
    out.error = "sequence is empty";
    return out;
  }

  TypeCertificate cert;
  cert.type = CanonicalType::max;
  std::vector<std::vector<Pos>> blocks;
  Member d_prev = finite_member({});
  for (std::size_t k = 1; k <= depth; ++k) {
    const std::size_t lo = (k - 1) * (k - 1);  // exclusive, 0-based
    const std::size_t hi = k * k;              // inclusive, 0-based end
    std::vector<Member> stripped;
    for (std::size_t j = lo; j < hi; ++j)
      stripped.push_back(member_difference(seq[j], d_prev));
    WitnessResult w = find_witness(stripped, g);
    if (w.outcome != WitnessOutcome::found) {
      out.error = "no witness exhibitable inside the window at depth " + std::to_string(k);
      return out;
    }
    std::map<Pos, std::size_t> member_of;  // witness point -> sequence index
    for (std::size_t j = 0; j < stripped.size(); ++j)
      member_of[w.witness.points[j]] = lo + j;
    std::vector<Pos> block = detail::normalized(w.witness.points);
    blocks.push_back(block);
    for (std::size_t mask = 1; mask < (std::size_t{1} << block.size()); ++mask) {
      Realization r;
      r.level = k;
      Member z = d_prev;
      for (std::size_t i = 0; i < block.size(); ++i)
        if (mask & (std::size_t{1} << i)) {
          r.inner.push_back(block[i]);
          z = member_union(z, seq[member_of.at(block[i])]);
        }
      r.member = std::move(z);
      cert.realizations.push_back(std::move(r));
    }
    for (std::size_t j = lo; j < hi; ++j) d_prev = member_union(d_prev, seq[j]);
  }
  cert.spread = make_spread(blocks);
  out.ok = true;
  out.certificate = std::move(cert);
  out.depth = depth;
  out.used_members = depth * depth;
  return out;
}

// --- the two auxiliary conditions, probed at fixed parameters ---------------

struct ConditionProbeOptions {
  std::size_t max_members = 64;
  std::size_t max_candidates = 32;
  std::size_t witness_points = 4;
  std::size_t max_witness_variants = 16;
  std::size_t base_pull_cap = 4096;
};

struct ConditionProbeResult {
  SearchOutcome outcome = SearchOutcome::inconclusive;  // found = condition holds here
  std::vector<Member> family;    // the exhibiting family (in the working system)
  Witness witness;               // its witness (condition B: the removed points)
  FamilySearchResult retained;   // the residual thickness evidence
  SearchStats stats;
};

// First condition at (k, p): some incompressible size-k family F of the
// system with p subtracted leaves, outside join(F), a trace that still
// carries an incompressible size-k family.
inline ConditionProbeResult condition_probe_a(OracleRef base, std::size_t k, const Member& p,
                                              Budget& budget, ConditionProbeOptions opt = {}) {
  ConditionProbeResult res;
  const std::uint64_t before = budget.used;
  OracleRef working =
      is_empty(p) ? base : restrict_oracle(base, RestrictOp::subtract, p, opt.base_pull_cap);
  const GroundWindow g = base->ground();
  bool tainted = false;
  CandidateScan scan = for_each_family(*working, k, budget, {opt.max_members, opt.max_candidates},
                                       [&](const FamilyCandidate& cand) -> bool {
    Member residue = member_complement(join(cand.family), g);
    if (is_empty(residue)) return false;
    FamilySearchResult probe =
        oracle_thickness_probe(working, residue, k, budget, {opt.max_members});
    if (probe.outcome == SearchOutcome::inconclusive) tainted = true;
    if (probe.outcome != SearchOutcome::found) return false;
    WitnessResult w = find_witness(cand.family, g);
    if (w.outcome != WitnessOutcome::found) return false;
    res.family = cand.family;
    res.witness = w.witness;
    res.retained = probe;
    return true;
  });
  res.stats.nodes = budget.used - before;
  if (scan.stopped) res.outcome = SearchOutcome::found;
  else if (scan.exhausted && !tainted) {
    res.outcome = SearchOutcome::absent;
    res.stats.exhaustive = true;
  } else {
    res.outcome = SearchOutcome::inconclusive;
    res.stats.budget_hit = scan.budget_hit || budget.exhausted();
  }
  return res;
}

// Second condition at (k, c, gamma): some incompressible size-k family of
// the gamma-avoiding system traced to c admits a witness E whose removal
// (gamma u E) still leaves a size-k incompressible family in the trace.
inline ConditionProbeResult condition_probe_b(OracleRef base, std::size_t k, const Member& c,
                                              const Member& gamma, Budget& budget,
                                              ConditionProbeOptions opt = {}) {
  ConditionProbeResult res;
  const std::uint64_t before = budget.used;
  const GroundWindow g = base->ground();
  OracleRef avoiding =
      is_empty(gamma) ? base : restrict_oracle(base, RestrictOp::minus, gamma, opt.base_pull_cap);
  OracleRef working = restrict_oracle(avoiding, RestrictOp::trace, c, opt.base_pull_cap);
  bool tainted = false;
  CandidateScan scan = for_each_family(*working, k, budget, {opt.max_members, opt.max_candidates},
                                       [&](const FamilyCandidate& cand) -> bool {
    std::vector<std::vector<Pos>> variants =
        witness_variants(cand.privates, g, {opt.witness_points, opt.max_witness_variants});
    for (const std::vector<Pos>& pts : variants) {
      Member removed = member_union(gamma, finite_member(pts));
      OracleRef still =
          restrict_oracle(restrict_oracle(base, RestrictOp::minus, removed, opt.base_pull_cap),
                          RestrictOp::trace, c, opt.base_pull_cap);
      FamilySearchResult probe = oracle_find_incompressible(*still, k, budget, {opt.max_members});
      if (probe.outcome == SearchOutcome::inconclusive) tainted = true;
      if (probe.outcome == SearchOutcome::found) {
        res.family = cand.family;
        res.witness = Witness{pts};
        res.retained = probe;
        return true;
      }
    }
    return false;
  });
  res.stats.nodes = budget.used - before;
  if (scan.stopped) res.outcome = SearchOutcome::found;
  else if (scan.exhausted && !tainted) {
    res.outcome = SearchOutcome::absent;
    res.stats.exhaustive = true;
  } else {
    res.outcome = SearchOutcome::inconclusive;
    res.stats.budget_hit = scan.budget_hit || budget.exhausted();
  }
  return res;
}

// --- transporting a max certificate through a union-preserving map ----------

struct TransferResult {
  bool ok = false;
  std::string error;
  TypeCertificate certificate;
};

// Given a max-type certificate and a correspondence phi defined on all of
// its realization members and preserving unions (checked on every pair
// whose union is again a realization member), rebuilds a max-type
// certificate over the image system.  For each level point, a fresh image
// point is picked inside the image of its singleton realization but
// outside all lower-level images and same-level sibling images; the new
// realizations are the corresponding unions of images.  min/ort patterns
// do not transport this way and are rejected.
inline TransferResult transfer_spread(const TypeCertificate& cert,
                                      const std::map<Member, Member, MemberLess>& phi,
                                      const GroundWindow& target_ground) {
  TransferResult out;
  if (cert.type != CanonicalType::max) {
    out.error = "only max-type certificates transport through union-preserving maps";
    return out;
  }
  std::map<std::pair<std::size_t, std::vector<Pos>>, const Member*> lookup;
  for (const auto& r : cert.realizations)
    lookup[std::make_pair(r.level, r.inner)] = &r.member;
  for (const auto& r : cert.realizations)
    if (!phi.count(r.member)) {
      out.error = "correspondence is missing a realization member";
      return out;
    }
  // union preservation on in-domain pairs
  std::vector<const Member*> domain;
  for (const auto& r : cert.realizations) domain.push_back(&r.member);
  for (const Member* x : domain)
    for (const Member* y : domain) {
      Member u = member_union(*x, *y);
      auto it = phi.find(u);
      if (it == phi.end()) continue;
      if (!(it->second == member_union(phi.at(*x), phi.at(*y)))) {
        out.error = "correspondence does not preserve unions";
        return out;
      }
    }

  const std::size_t k = cert.spread.levels();
  // singleton images, per level in block order
  std::vector<std::vector<Member>> image(k);
  for (std::size_t n = 1; n <= k; ++n)
    for (Pos gamma : cert.spread.blocks[n - 1]) {
      auto it = lookup.find(std::make_pair(n, std::vector<Pos>{gamma}));
      if (it == lookup.end()) {
        out.error = "certificate is missing a singleton realization";
        return out;
      }
      image[n - 1].push_back(phi.at(*it->second));
    }

  // pick one private point per image
  std::vector<std::vector<Pos>> new_blocks(k);
  for (std::size_t n = 0; n < k; ++n)
    for (std::size_t j = 0; j < image[n].size(); ++j) {
      Member region = image[n][j];
      for (std::size_t m = 0; m < n; ++m)
        for (const Member& a : image[m]) region = member_difference(region, a);
      for (std::size_t l = 0; l < image[n].size(); ++l)
        if (l != j) region = member_difference(region, image[n][l]);
      std::vector<Pos> pick = first_points(region, target_ground, 1);
      if (pick.empty()) {
        out.error = "image spread collapsed: no private point for a transported level point";
        return out;
      }
      new_blocks[n].push_back(pick[0]);
    }

  TypeCertificate res;
  res.type = CanonicalType::max;
  try {
    std::vector<std::vector<Pos>> sorted_blocks;
    for (auto& b : new_blocks) sorted_blocks.push_back(detail::normalized(b));
    res.spread = make_spread(sorted_blocks);
  } catch (const std::exception& ex) {
    out.error = std::string("transported blocks do not form a spread: ") + ex.what();
    return out;
  }
  // realizations: lower-level images in full, plus the chosen same-level images
  for (std::size_t n = 0; n < k; ++n) {
    Member lower = finite_member({});
    for (std::size_t m = 0; m < n; ++m)
      for (const Member& a : image[m]) lower = member_union(lower, a);
    const auto& block = res.spread.blocks[n];
    // map each new block point back to its image index at this level
    std::map<Pos, std::size_t> index_of_point;
    for (std::size_t j = 0; j < new_blocks[n].size(); ++j) index_of_point[new_blocks[n][j]] = j;
    for (std::size_t mask = 1; mask < (std::size_t{1} << block.size()); ++mask) {
      Realization r;
      r.level = n + 1;
      Member z = lower;
      for (std::size_t i = 0; i < block.size(); ++i)
        if (mask & (std::size_t{1} << i)) {
          r.inner.push_back(block[i]);
          z = member_union(z, image[n][index_of_point.at(block[i])]);
        }
      r.member = std::move(z);
      res.realizations.push_back(std::move(r));
    }
  }
  out.ok = true;
  out.certificate = std::move(res);
  return out;
}

} // namespace ucs
