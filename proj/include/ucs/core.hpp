#pragma once

// Ground windows and members of set systems.
//
// A ground set is either a bounded window [0, N) or an unbounded ground of
// which [0, N) is the working window.  Members are tagged finite/cofinite
// sets with sorted, duplicate-free support vectors; a cofinite member stores
// the finitely many excluded positions and is legal only on unbounded
// grounds.  All boolean operations below are exact on this representation:
// unions, intersections and differences of finite/cofinite sets are again
// finite or cofinite, so no operation needs to look at the window except
// complement and trace.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucs {

using Pos = int;

struct GroundWindow {
  Pos size = 0;           // working window is [0, size)
  bool unbounded = false; // true: the ground continues beyond the window

  friend bool operator==(const GroundWindow&, const GroundWindow&) = default;
};

inline GroundWindow bounded_ground(Pos n) { return GroundWindow{n, false}; }
inline GroundWindow unbounded_ground(Pos window) { return GroundWindow{window, true}; }

namespace detail {

inline std::vector<Pos> normalized(std::vector<Pos> v) {
  for (Pos p : v)
    if (p < 0) throw std::invalid_argument("negative ground position");
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline std::vector<Pos> vec_union(const std::vector<Pos>& a, const std::vector<Pos>& b) {
  std::vector<Pos> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<Pos> vec_inter(const std::vector<Pos>& a, const std::vector<Pos>& b) {
  std::vector<Pos> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<Pos> vec_diff(const std::vector<Pos>& a, const std::vector<Pos>& b) {
  std::vector<Pos> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool vec_includes(const std::vector<Pos>& big, const std::vector<Pos>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline bool vec_disjoint(const std::vector<Pos>& a, const std::vector<Pos>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else return false;
  }
  return true;
}

inline bool vec_contains(const std::vector<Pos>& v, Pos p) {
  return std::binary_search(v.begin(), v.end(), p);
}

// Graded comparison used everywhere ties must break deterministically:
// empty set first, then by (max element, size, lexicographic).
inline int vec_graded_cmp(const std::vector<Pos>& a, const std::vector<Pos>& b) {
  const Pos amax = a.empty() ? -1 : a.back();
  const Pos bmax = b.empty() ? -1 : b.back();
  if (amax != bmax) return amax < bmax ? -1 : 1;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

} // namespace detail

struct Member {
  enum class Kind : std::uint8_t { finite, cofinite };

  Kind kind = Kind::finite;
  std::vector<Pos> support; // the set itself (finite) or the exclusions (cofinite)

  friend bool operator==(const Member&, const Member&) = default;
};

inline Member finite_member(std::vector<Pos> pts) {
  return Member{Member::Kind::finite, detail::normalized(std::move(pts))};
}

inline Member cofinite_member(std::vector<Pos> excluded) {
  return Member{Member::Kind::cofinite, detail::normalized(std::move(excluded))};
}

inline bool is_finite(const Member& m) { return m.kind == Member::Kind::finite; }
inline bool is_cofinite(const Member& m) { return m.kind == Member::Kind::cofinite; }
inline bool is_empty(const Member& m) { return is_finite(m) && m.support.empty(); }

inline bool member_contains(const Member& m, Pos p) {
  const bool named = detail::vec_contains(m.support, p);
  return is_finite(m) ? named : !named;
}

inline Member member_union(const Member& x, const Member& y) {
  using detail::vec_diff;
  using detail::vec_inter;
  using detail::vec_union;
  if (is_finite(x) && is_finite(y)) return Member{Member::Kind::finite, vec_union(x.support, y.support)};
  if (is_finite(x)) return Member{Member::Kind::cofinite, vec_diff(y.support, x.support)};
  if (is_finite(y)) return Member{Member::Kind::cofinite, vec_diff(x.support, y.support)};
  return Member{Member::Kind::cofinite, vec_inter(x.support, y.support)};
}

inline Member member_intersection(const Member& x, const Member& y) {
  using detail::vec_diff;
  using detail::vec_inter;
  using detail::vec_union;
  if (is_finite(x) && is_finite(y)) return Member{Member::Kind::finite, vec_inter(x.support, y.support)};
  if (is_finite(x)) return Member{Member::Kind::finite, vec_diff(x.support, y.support)};
  if (is_finite(y)) return Member{Member::Kind::finite, vec_diff(y.support, x.support)};
  return Member{Member::Kind::cofinite, vec_union(x.support, y.support)};
}

// x \ y, exact for every kind combination; never consults the window.
inline Member member_difference(const Member& x, const Member& y) {
  using detail::vec_diff;
  using detail::vec_inter;
  using detail::vec_union;
  if (is_finite(x) && is_finite(y)) return Member{Member::Kind::finite, vec_diff(x.support, y.support)};
  if (is_finite(x)) return Member{Member::Kind::finite, vec_inter(x.support, y.support)};
  if (is_finite(y)) return Member{Member::Kind::cofinite, vec_union(x.support, y.support)};
  return Member{Member::Kind::finite, vec_diff(y.support, x.support)};
}

// Complement, relative to the ground.  On a bounded ground the result is the
// finite window difference; on an unbounded ground the kinds swap.
inline Member member_complement(const Member& m, const GroundWindow& g) {
  if (g.unbounded)
    return Member{is_finite(m) ? Member::Kind::cofinite : Member::Kind::finite, m.support};
  if (is_cofinite(m)) throw std::invalid_argument("cofinite member on bounded ground");
  std::vector<Pos> all(static_cast<std::size_t>(g.size));
  for (Pos p = 0; p < g.size; ++p) all[static_cast<std::size_t>(p)] = p;
  return Member{Member::Kind::finite, detail::vec_diff(all, m.support)};
}

// Containment of sets (x subset of y).  A cofinite member is never contained
// in a finite one because cofinite members only occur on unbounded grounds.
inline bool member_subset(const Member& x, const Member& y) {
  using detail::vec_disjoint;
  using detail::vec_includes;
  if (is_finite(x) && is_finite(y)) return vec_includes(y.support, x.support);
  if (is_finite(x)) return vec_disjoint(x.support, y.support);
  if (is_finite(y)) return false;
  return vec_includes(x.support, y.support);
}

// The canonical order is containment: x divides y when the join of x and y
// is y, i.e. x is a subset of y.  Exposed under explicit names because the
// tempting identification of "below" with "subset" points the wrong way in
// half the literature; nothing here is called plain "leq".
inline bool divides(const Member& x, const Member& y) { return member_subset(x, y); }
inline bool above_in_containment_order(const Member& x, const Member& y) { return member_subset(x, y); }

// Trace onto the working window: always a finite, explicitly listed set.
inline std::vector<Pos> member_trace(const Member& m, Pos window) {
  std::vector<Pos> out;
  if (is_finite(m)) {
    for (Pos p : m.support)
      if (p < window) out.push_back(p);
    return out;
  }
  for (Pos p = 0; p < window; ++p)
    if (!detail::vec_contains(m.support, p)) out.push_back(p);
  return out;
}

// Deterministic total order on members: finite before cofinite, then the
// graded support order (max element, size, lexicographic; empty first).
inline bool member_less(const Member& a, const Member& b) {
  if (a.kind != b.kind) return is_finite(a);
  return detail::vec_graded_cmp(a.support, b.support) < 0;
}

struct MemberLess {
  bool operator()(const Member& a, const Member& b) const { return member_less(a, b); }
};

// Validation against a ground: positions inside the window, cofinite members
// only on unbounded grounds.
inline void validate_member(const Member& m, const GroundWindow& g) {
  if (is_cofinite(m) && !g.unbounded)
    throw std::invalid_argument("cofinite member on bounded ground");
  if (!m.support.empty() && m.support.back() >= g.size)
    throw std::invalid_argument("member references position outside window");
}

inline std::string member_to_string(const Member& m) {
  std::string s = is_cofinite(m) ? "~{" : "{";
  for (std::size_t i = 0; i < m.support.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(m.support[i]);
  }
  s += '}';
  return s;
}

} // namespace ucs
