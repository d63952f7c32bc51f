#pragma once

// Explicit set systems, family subsets, compressibility and witnesses.
//
// A finite family {x_1, ..., x_m} is compressible when some proper subfamily
// has the same join; equivalently when some x_j is covered by the union of
// the others; equivalently when some x_j meets the intersection of the
// others' complements emptily.  A witness is a tuple of points, one per
// member, each private to its member; one exists exactly when the family is
// incompressible.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ucs/core.hpp"

namespace ucs {

struct SetSystem {
  GroundWindow ground;
  std::vector<Member> members; // canonical member order, duplicate-free
  bool closed = false;         // union of any two members is again a member

  std::size_t size() const { return members.size(); }
};

inline bool is_union_closed(const GroundWindow&, const std::vector<Member>& ms) {
  std::set<Member, MemberLess> present(ms.begin(), ms.end());
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (!present.count(member_union(ms[i], ms[j]))) return false;
  return true;
}

inline bool is_union_closed(const SetSystem& s) { return is_union_closed(s.ground, s.members); }

namespace detail {

inline std::vector<Member> sorted_unique_members(std::vector<Member> ms) {
  std::sort(ms.begin(), ms.end(), MemberLess{});
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  return ms;
}

} // namespace detail

// Builds a system: validates members against the ground, deduplicates, sorts
// canonically and computes the closure flag (quadratic; desk scale).
inline SetSystem make_system(GroundWindow g, std::vector<Member> ms) {
  for (const Member& m : ms) validate_member(m, g);
  SetSystem s{g, detail::sorted_unique_members(std::move(ms)), false};
  s.closed = is_union_closed(s);
  return s;
}

// Like make_system but keeps the caller's closure claim; for large systems
// whose closure is known by construction.
inline SetSystem make_system_unchecked(GroundWindow g, std::vector<Member> ms, bool closed) {
  for (const Member& m : ms) validate_member(m, g);
  return SetSystem{g, detail::sorted_unique_members(std::move(ms)), closed};
}

// A listing refuses duplicates instead of merging them: used where the order
// and multiplicity of the input is part of the contract.
inline std::vector<Member> make_listing(const GroundWindow& g, std::vector<Member> ms) {
  for (const Member& m : ms) validate_member(m, g);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (ms[i] == ms[j]) throw std::invalid_argument("listing contains a repeated member");
  return ms;
}

inline std::optional<std::size_t> index_of(const SetSystem& s, const Member& m) {
  auto it = std::lower_bound(s.members.begin(), s.members.end(), m, MemberLess{});
  if (it != s.members.end() && *it == m)
    return static_cast<std::size_t>(it - s.members.begin());
  return std::nullopt;
}

// References into a system's member list; order is significant (witness
// tuples align with it), duplicates are not.
struct FamilySubset {
  std::vector<std::size_t> indices;
};

inline FamilySubset make_family_subset(const SetSystem& s, std::vector<std::size_t> idx) {
  if (idx.empty()) throw std::invalid_argument("family subset must be nonempty");
  for (std::size_t i : idx)
    if (i >= s.members.size()) throw std::invalid_argument("family index out of range");
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j)
      if (idx[i] == idx[j]) throw std::invalid_argument("family index repeated");
  return FamilySubset{std::move(idx)};
}

inline std::vector<Member> family_members(const SetSystem& s, const FamilySubset& f) {
  std::vector<Member> out;
  out.reserve(f.indices.size());
  for (std::size_t i : f.indices) out.push_back(s.members[i]);
  return out;
}

// Join of a family: the empty join is the empty set.
inline Member join(const std::vector<Member>& family) {
  Member acc = finite_member({});
  for (const Member& m : family) acc = member_union(acc, m);
  return acc;
}

inline Member join_without(const std::vector<Member>& family, std::size_t skip) {
  Member acc = finite_member({});
  for (std::size_t i = 0; i < family.size(); ++i)
    if (i != skip) acc = member_union(acc, family[i]);
  return acc;
}

// Some member is covered by the union of the others.  (If a proper subfamily
// has the same join, dropping a single member already preserves it, so the
// single-drop test is equivalent to the subfamily definition.)
inline bool is_compressible(const std::vector<Member>& family) {
  if (family.empty()) throw std::invalid_argument("compressibility of an empty family");
  for (std::size_t j = 0; j < family.size(); ++j)
    if (member_subset(family[j], join_without(family, j))) return true;
  return false;
}

struct Witness {
  std::vector<Pos> points; // aligned with the family it certifies
};

enum class WitnessOutcome {
  found,           // witness exhibited inside the window
  compressible,    // no witness exists: some member is dominated
  window_exhausted // a private region is nonempty but entirely outside the window
};

struct WitnessResult {
  WitnessOutcome outcome = WitnessOutcome::compressible;
  Witness witness;               // valid when outcome == found
  std::size_t dominated_index = 0; // valid when outcome == compressible
};

// Finds the canonical witness: for each member the least point of its
// private region x_j \ join(others).  For cofinite private regions the least
// unexcluded window position is taken; if the window has none the search
// reports window_exhausted (a larger window would succeed, so this outcome
// is distinct from compressibility).
inline WitnessResult find_witness(const std::vector<Member>& family, const GroundWindow& g) {
  if (family.empty()) throw std::invalid_argument("witness of an empty family");
  WitnessResult res;
  res.witness.points.reserve(family.size());
  for (std::size_t j = 0; j < family.size(); ++j) {
    Member priv = member_difference(family[j], join_without(family, j));
    if (is_empty(priv)) return WitnessResult{WitnessOutcome::compressible, {}, j};
    if (is_finite(priv)) {
      res.witness.points.push_back(priv.support.front());
      continue;
    }
    Pos pick = -1;
    for (Pos p = 0; p < g.size; ++p) {
      if (!detail::vec_contains(priv.support, p)) { pick = p; break; }
    }
    if (pick < 0) return WitnessResult{WitnessOutcome::window_exhausted, {}, j};
    res.witness.points.push_back(pick);
  }
  res.outcome = WitnessOutcome::found;
  return res;
}

inline bool verify_witness(const std::vector<Member>& family, const Witness& w) {
  if (family.empty() || w.points.size() != family.size()) return false;
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (!member_contains(family[j], w.points[j])) return false;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (i != j && member_contains(family[i], w.points[j])) return false;
  }
  return true;
}

// The four system-level operators.  Each preserves union-closure: the first
// two are filters stable under unions, the last two are images under the
// union homomorphisms x -> x \ a and x -> x n a.
enum class RestrictOp { minus, above, subtract, trace };

inline SetSystem restrict_system(const SetSystem& s, RestrictOp op, const Member& arg) {
  std::vector<Member> out;
  switch (op) {
    case RestrictOp::minus:
      for (const Member& m : s.members)
        if (is_empty(member_intersection(m, arg))) out.push_back(m);
      break;
    case RestrictOp::above:
      for (const Member& m : s.members)
        if (member_subset(arg, m)) out.push_back(m);
      break;
    case RestrictOp::subtract:
      for (const Member& m : s.members) out.push_back(member_difference(m, arg));
      break;
    case RestrictOp::trace:
      for (const Member& m : s.members) out.push_back(member_intersection(m, arg));
      break;
  }
  return SetSystem{s.ground, detail::sorted_unique_members(std::move(out)), s.closed};
}

// Union-closure of a generating family (fixpoint of pairwise unions).
inline SetSystem close_under_union(GroundWindow g, std::vector<Member> gens) {
  for (const Member& m : gens) validate_member(m, g);
  std::set<Member, MemberLess> acc(gens.begin(), gens.end());
  std::vector<Member> frontier(acc.begin(), acc.end());
  while (!frontier.empty()) {
    // Stage new unions in a set: frontier x acc produces each fresh member
    // many times over, and buffering the duplicates would swamp memory on
    // systems whose closure is much larger than the generating family.
    std::set<Member, MemberLess> staged;
    for (const Member& f : frontier)
      for (const Member& m : acc) {
        Member u = member_union(f, m);
        if (!acc.count(u)) staged.insert(std::move(u));
      }
    frontier.assign(staged.begin(), staged.end());
    acc.insert(staged.begin(), staged.end());
  }
  return SetSystem{g, std::vector<Member>(acc.begin(), acc.end()), true};
}

} // namespace ucs
