#pragma once

// Abstract semilattices as multiplication tables, and the Cayley-style
// embedding into a union-closed set system: element x maps to
// E_x = { y : x does not divide y }, where x divides y means xy = y.
// Unions then track products (E_x u E_y = E_{xy}) and the map is injective,
// so breadth questions about any finite semilattice reduce to a concrete
// system on one position per element.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ucs/core.hpp"
#include "ucs/system.hpp"

namespace ucs {

struct AbstractSemilattice {
  std::size_t order = 0;
  std::vector<std::size_t> table; // row-major: product of i and j at i*order+j

  std::size_t product(std::size_t i, std::size_t j) const { return table[i * order + j]; }
};

// Validates commutativity, idempotence and associativity exhaustively.
inline AbstractSemilattice make_semilattice(std::size_t order, std::vector<std::size_t> table) {
  if (order == 0 || table.size() != order * order)
    throw std::invalid_argument("table size must match order");
  for (std::size_t v : table)
    if (v >= order) throw std::invalid_argument("table entry out of range");
  AbstractSemilattice s{order, std::move(table)};
  for (std::size_t i = 0; i < order; ++i) {
    if (s.product(i, i) != i) throw std::invalid_argument("table not idempotent");
    for (std::size_t j = 0; j < order; ++j) {
      if (s.product(i, j) != s.product(j, i)) throw std::invalid_argument("table not commutative");
      for (std::size_t k = 0; k < order; ++k)
        if (s.product(s.product(i, j), k) != s.product(i, s.product(j, k)))
          throw std::invalid_argument("table not associative");
    }
  }
  return s;
}

inline bool divides_abstract(const AbstractSemilattice& s, std::size_t x, std::size_t y) {
  return s.product(x, y) == y;
}

struct CayleyImage {
  SetSystem system;
  std::vector<Member> member_of; // element index -> its image member
};

inline CayleyImage cayley_embed(const AbstractSemilattice& s) {
  const GroundWindow g = bounded_ground(static_cast<Pos>(s.order));
  std::vector<Member> member_of(s.order);
  for (std::size_t x = 0; x < s.order; ++x) {
    std::vector<Pos> pts;
    for (std::size_t y = 0; y < s.order; ++y)
      if (!divides_abstract(s, x, y)) pts.push_back(static_cast<Pos>(y));
    member_of[x] = finite_member(pts);
  }
  // Internal consistency: the embedding must be a union homomorphism and
  // injective for every valid table.
  for (std::size_t x = 0; x < s.order; ++x)
    for (std::size_t y = 0; y < s.order; ++y)
      if (member_union(member_of[x], member_of[y]) != member_of[s.product(x, y)])
        throw std::logic_error("cayley image is not a union homomorphism");
  for (std::size_t x = 0; x < s.order; ++x)
    for (std::size_t y = x + 1; y < s.order; ++y)
      if (member_of[x] == member_of[y]) throw std::logic_error("cayley image not injective");
  return CayleyImage{make_system_unchecked(g, member_of, true), std::move(member_of)};
}

// --- standard tables -------------------------------------------------------

// Chain 0 < 1 < ... < n-1 under meet (= min).
inline AbstractSemilattice chain_table(std::size_t n) {
  std::vector<std::size_t> t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i * n + j] = std::min(i, j);
  return make_semilattice(n, std::move(t));
}

// Complete k-ary tree with `depth` levels under youngest common ancestor;
// nodes in heap order (root 0, children of v at k*v+1 .. k*v+k).
inline AbstractSemilattice tree_table(std::size_t arity, std::size_t depth) {
  if (arity < 2 || depth < 1) throw std::invalid_argument("tree needs arity >= 2, depth >= 1");
  std::size_t n = 0, layer = 1;
  for (std::size_t d = 0; d < depth; ++d) { n += layer; layer *= arity; }
  auto parent = [&](std::size_t v) { return (v - 1) / arity; };
  auto node_depth = [&](std::size_t v) {
    std::size_t d = 0;
    while (v) { v = parent(v); ++d; }
    return d;
  };
  std::vector<std::size_t> t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t a = i, b = j;
      std::size_t da = node_depth(a), db = node_depth(b);
      while (da > db) { a = parent(a); --da; }
      while (db > da) { b = parent(b); --db; }
      while (a != b) { a = parent(a); b = parent(b); }
      t[i * n + j] = a;
    }
  return make_semilattice(n, std::move(t));
}

// The free example on n generators: elements are the nonempty subsets of
// [0, n) (encoded as bitmasks minus one), product is union.
inline AbstractSemilattice free_table(std::size_t n) {
  if (n == 0 || n > 10) throw std::invalid_argument("free_table size out of range");
  const std::size_t m = (std::size_t{1} << n) - 1;
  std::vector<std::size_t> t(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) t[i * m + j] = ((i + 1) | (j + 1)) - 1;
  return make_semilattice(m, std::move(t));
}

// Reads off the abstract table of an explicit union-closed system; members
// are indexed in the system's canonical order.
inline AbstractSemilattice table_from_system(const SetSystem& s) {
  if (!s.closed) throw std::invalid_argument("table requires a union-closed system");
  const std::size_t n = s.size();
  std::vector<std::size_t> t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto idx = index_of(s, member_union(s.members[i], s.members[j]));
      if (!idx) throw std::invalid_argument("system is not closed under union");
      t[i * n + j] = *idx;
    }
  return make_semilattice(n, std::move(t));
}

} // namespace ucs
