#pragma once

// Query-presented (possibly infinite) union-closed systems.
//
// An oracle exposes a deterministic, duplicate-free enumeration of canonical
// members, an exact-or-unknown membership test, and the ground it lives on.
// Handles are the canonical members themselves: every built-in family here
// is fully representable as tagged finite/cofinite data, so describe() is
// the identity and union of handles is the member-algebra union.
//
// Enumeration orders (fixed, documented, relied on by tests):
//   fin       all finite sets, graded by (max element, size, lex); {} first
//   cofin     all cofinite sets, by exclusion set in the same graded order
//   fincofin  interleaved: fin[0], cofin[0], fin[1], cofin[1], ...
//   pow N     all subsets of [0,N), graded; finite enumeration
//   tmax/tmin/tort   levels ascending, inner sets graded inside each block;
//                    tort emits the shared top only once (level 1)
//   blocks    unions of whole blocks, by block-index set, graded
//   ex5s/ex5sprime   by (m, level, inner) with m = 2..M ascending;
//                    ex5sprime emits the full ground only once
//
// Canonical-family oracles enumerate a level-capped prefix of the infinite
// family; membership tests remain exact for the infinite object.  Wrapped
// oracles (the four restriction operators) enumerate lazily over a capped
// base prefix and remember, for each emitted member, the first base member
// that produced it; classify's searchers use those preimages to assemble
// realizations inside the original system.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ucs/breadth.hpp"
#include "ucs/canonical.hpp"
#include "ucs/core.hpp"
#include "ucs/spread.hpp"
#include "ucs/system.hpp"

namespace ucs {

enum class Membership { yes, no, unknown };

class OracleSystem {
public:
  virtual ~OracleSystem() = default;
  virtual GroundWindow ground() const = 0;
  virtual std::optional<Member> enumerate(std::size_t index) const = 0;
  virtual Membership contains(const Member& m) const = 0;
  virtual std::string family_name() const = 0;
  // Maps a member of this (possibly wrapped) system back to a member of the
  // outermost base system it was derived from.
  virtual Member source_member(const Member& m) const { return m; }
};

using OracleRef = std::shared_ptr<const OracleSystem>;

// --- graded generation of finite sets --------------------------------------

namespace detail {

// Advances a set through the graded order (max element, size, lex) over all
// finite subsets of N.  The empty set is the first element.
inline std::vector<Pos> graded_next(std::vector<Pos> v) {
  if (v.empty()) return {0};
  const Pos mx = v.back();
  std::vector<Pos> low(v.begin(), v.end() - 1); // subset of [0, mx)
  // advance `low` in lex order among subsets of [0,mx) of its size
  const std::size_t s = low.size();
  std::size_t i = s;
  while (i > 0) {
    const Pos limit = (i == s) ? mx : low[i];
    if (low[i - 1] + 1 < limit) {
      ++low[i - 1];
      for (std::size_t j = i; j < s; ++j) low[j] = low[j - 1] + 1;
      low.push_back(mx);
      return low;
    }
    --i;
  }
  // next size, still below max mx
  if (static_cast<Pos>(s + 1) <= mx) {
    std::vector<Pos> first(s + 1);
    for (std::size_t j = 0; j <= s; ++j) first[j] = static_cast<Pos>(j);
    first.push_back(mx);
    return first;
  }
  // next max element
  return {mx + 1};
}

} // namespace detail

// Caches a deterministic stream; thread-safe, append-only.
class MemberStreamCache {
public:
  template <typename NextFn>
  std::optional<Member> at(std::size_t index, NextFn&& next) const {
    std::lock_guard<std::mutex> lock(mu_);
    while (cache_.size() <= index && !done_) {
      std::optional<Member> m = next(cache_.size());
      if (!m) { done_ = true; break; }
      cache_.push_back(std::move(*m));
    }
    if (index < cache_.size()) return cache_[index];
    return std::nullopt;
  }

private:
  mutable std::mutex mu_;
  mutable std::vector<Member> cache_;
  mutable bool done_ = false;
};

// --- elementary built-ins --------------------------------------------------

class FinOracle final : public OracleSystem {
public:
  explicit FinOracle(Pos window) : g_(unbounded_ground(window)) {}
  GroundWindow ground() const override { return g_; }
  std::optional<Member> enumerate(std::size_t index) const override {
    return cache_.at(index, [this](std::size_t) -> std::optional<Member> {
      last_ = first_ ? std::vector<Pos>{} : detail::graded_next(std::move(last_));
      first_ = false;
      if (!last_.empty() && last_.back() >= g_.size) return std::nullopt;
      return finite_member(last_);
    });
  }
  Membership contains(const Member& m) const override {
    return is_finite(m) ? Membership::yes : Membership::no;
  }
  std::string family_name() const override { return "fin"; }

private:
  GroundWindow g_;
  MemberStreamCache cache_;
  mutable std::vector<Pos> last_;
  mutable bool first_ = true;
};

class CofinOracle final : public OracleSystem {
public:
  explicit CofinOracle(Pos window) : g_(unbounded_ground(window)) {}
  GroundWindow ground() const override { return g_; }
  std::optional<Member> enumerate(std::size_t index) const override {
    return cache_.at(index, [this](std::size_t) -> std::optional<Member> {
      last_ = first_ ? std::vector<Pos>{} : detail::graded_next(std::move(last_));
      first_ = false;
      if (!last_.empty() && last_.back() >= g_.size) return std::nullopt;
      return cofinite_member(last_);
    });
  }
  Membership contains(const Member& m) const override {
    return is_cofinite(m) ? Membership::yes : Membership::no;
  }
  std::string family_name() const override { return "cofin"; }

private:
  GroundWindow g_;
  MemberStreamCache cache_;
  mutable std::vector<Pos> last_;
  mutable bool first_ = true;
};

class FinCofinOracle final : public OracleSystem {
public:
  explicit FinCofinOracle(Pos window) : fin_(window), cofin_(window) {}
  GroundWindow ground() const override { return fin_.ground(); }
  std::optional<Member> enumerate(std::size_t index) const override {
    return index % 2 == 0 ? fin_.enumerate(index / 2) : cofin_.enumerate(index / 2);
  }
  Membership contains(const Member&) const override { return Membership::yes; }
  std::string family_name() const override { return "fincofin"; }

private:
  FinOracle fin_;
  CofinOracle cofin_;
};

class PowOracle final : public OracleSystem {
public:
  explicit PowOracle(Pos window) : g_(bounded_ground(window)) {
    if (window < 1 || window > 30) throw std::invalid_argument("pow window out of range");
  }
  GroundWindow ground() const override { return g_; }
  std::optional<Member> enumerate(std::size_t index) const override {
    return cache_.at(index, [this](std::size_t) -> std::optional<Member> {
      last_ = first_ ? std::vector<Pos>{} : detail::graded_next(std::move(last_));
      first_ = false;
      if (!last_.empty() && last_.back() >= g_.size) return std::nullopt;
      return finite_member(last_);
    });
  }
  Membership contains(const Member& m) const override {
    if (!is_finite(m)) return Membership::no;
    if (!m.support.empty() && m.support.back() >= g_.size) return Membership::no;
    return Membership::yes;
  }
  std::string family_name() const override { return "pow"; }

private:
  GroundWindow g_;
  MemberStreamCache cache_;
  mutable std::vector<Pos> last_;
  mutable bool first_ = true;
};

class ExplicitOracle final : public OracleSystem {
public:
  explicit ExplicitOracle(SetSystem s) : s_(std::move(s)) {}
  GroundWindow ground() const override { return s_.ground; }
  std::optional<Member> enumerate(std::size_t index) const override {
    if (index >= s_.members.size()) return std::nullopt;
    return s_.members[index];
  }
  Membership contains(const Member& m) const override {
    return index_of(s_, m) ? Membership::yes : Membership::no;
  }
  std::string family_name() const override { return "explicit"; }
  const SetSystem& system() const { return s_; }

private:
  SetSystem s_;
};

// --- canonical-family oracles ----------------------------------------------

enum class ProfileKind { linear, square };

inline SizeProfile to_profile(ProfileKind k) {
  return k == ProfileKind::linear ? profile_linear() : profile_square();
}

class CanonicalOracle final : public OracleSystem {
public:
  CanonicalOracle(CanonicalType t, ProfileKind p, std::size_t level_cap)
      : type_(t), profile_(p), cap_(level_cap), spread_(spread_standard(level_cap, to_profile(p))) {
    Pos extent = 0;
    for (Pos q : spread_join(spread_)) extent = std::max(extent, q + 1);
    g_ = unbounded_ground(extent);
  }

  GroundWindow ground() const override { return g_; }

  std::optional<Member> enumerate(std::size_t index) const override {
    return cache_.at(index, [this](std::size_t) -> std::optional<Member> {
      while (level_ <= cap_) {
        const auto& block = spread_.blocks[level_ - 1];
        // advance the inner set within the block (graded, local indices)
        inner_ = inner_first_ ? std::vector<Pos>{0} : detail::graded_next(std::move(inner_));
        inner_first_ = false;
        if (!inner_.empty() && inner_.back() >= static_cast<Pos>(block.size())) {
          ++level_;
          inner_.clear();
          inner_first_ = true;
          continue;
        }
        std::vector<Pos> a;
        for (Pos i : inner_) a.push_back(block[static_cast<std::size_t>(i)]);
        const bool full = a.size() == block.size();
        if (type_ == CanonicalType::ort && full && level_ > 1) continue; // shared top
        return canonical_member(type_, spread_, level_, a, HorizonMode::unbounded);
      }
      return std::nullopt;
    });
  }

  Membership contains(const Member& m) const override {
    // Decode against a prefix one block longer than the support extent: a
    // cofinite member whose inner set is a full block excludes exactly the
    // earlier blocks, so its level sits one past its last exclusion.
    Pos extent_needed = m.support.empty() ? 0 : m.support.back() + 1;
    std::size_t levels = 1;
    Pos extent = to_profile(profile_)(1);
    while (extent < extent_needed) { ++levels; extent += to_profile(profile_)(levels); }
    ++levels;
    Spread e = spread_standard(levels, to_profile(profile_));
    return level_of(m, type_, e, HorizonMode::unbounded) ? Membership::yes : Membership::no;
  }

  std::string family_name() const override {
    return std::string("t") + to_string(type_);
  }

  const Spread& prefix_spread() const { return spread_; }
  std::size_t level_cap() const { return cap_; }

private:
  CanonicalType type_;
  ProfileKind profile_;
  std::size_t cap_;
  Spread spread_;
  GroundWindow g_;
  MemberStreamCache cache_;
  mutable std::size_t level_ = 1;
  mutable std::vector<Pos> inner_;   // local indices into the current block
  mutable bool inner_first_ = true;
};

class BlocksOracle final : public OracleSystem {
public:
  explicit BlocksOracle(Spread e) : e_(std::move(e)) {
    if (e_.levels() > 20) throw std::invalid_argument("too many blocks to enumerate");
    Pos extent = 0;
    for (Pos q : spread_join(e_)) extent = std::max(extent, q + 1);
    g_ = bounded_ground(extent);
  }

  GroundWindow ground() const override { return g_; }

  std::optional<Member> enumerate(std::size_t index) const override {
    return cache_.at(index, [this](std::size_t) -> std::optional<Member> {
      sel_ = sel_first_ ? std::vector<Pos>{} : detail::graded_next(std::move(sel_));
      sel_first_ = false;
      if (!sel_.empty() && sel_.back() >= static_cast<Pos>(e_.levels())) return std::nullopt;
      std::vector<Pos> pts;
      for (Pos b : sel_) pts = detail::vec_union(pts, e_.blocks[static_cast<std::size_t>(b)]);
      return finite_member(pts);
    });
  }

  Membership contains(const Member& m) const override {
    if (!is_finite(m)) return Membership::no;
    std::vector<Pos> rest = m.support;
    for (const auto& b : e_.blocks) {
      if (detail::vec_includes(rest, b)) rest = detail::vec_diff(rest, b);
      else if (!detail::vec_disjoint(rest, b)) return Membership::no;
    }
    return rest.empty() ? Membership::yes : Membership::no;
  }

  std::string family_name() const override { return "blocks"; }
  const Spread& spread() const { return e_; }

private:
  Spread e_;
  GroundWindow g_;
  MemberStreamCache cache_;
  mutable std::vector<Pos> sel_;
  mutable bool sel_first_ = true;
};

// --- the two systems of the closing example --------------------------------

// Triangular pairing for the ground Omega_0 = {(n,k) : 1 <= k <= n}.
inline Pos tri_pair(std::size_t n, std::size_t k) {
  return static_cast<Pos>(n * (n - 1) / 2 + (k - 1));
}
inline std::size_t tri_row(Pos p) {
  std::size_t n = 1;
  while (tri_pair(n + 1, 1) <= p) ++n;
  return n;
}
// Positions of row n (the n-th spread block of Omega_0).
inline std::vector<Pos> tri_block(std::size_t n) {
  std::vector<Pos> b;
  for (std::size_t k = 1; k <= n; ++k) b.push_back(tri_pair(n, k));
  return b;
}

// S on Omega = Omega_0 |_| N with the natural-number factor truncated at M:
// positions 0..M-1 carry {1..M}, position M+p carries Omega_0 point p.
// Members are a |_| {1..m} with a in T_min(E) of level n, 2 <= n <= m <= M.
class Ex5SOracle final : public OracleSystem {
public:
  explicit Ex5SOracle(std::size_t nat_horizon = 12) : M_(nat_horizon) {
    if (M_ < 2 || M_ > 16) throw std::invalid_argument("ex5 horizon out of range");
    g_ = unbounded_ground(static_cast<Pos>(M_) + tri_pair(M_ + 1, 1));
  }

  // {1..M} sits at positions 0..M-1; Omega_0 point p sits at M + p.
  Pos omega0_pos(Pos p) const { return static_cast<Pos>(M_) + p; }

  GroundWindow ground() const override { return g_; }

  Member member_at(std::size_t n, const std::vector<Pos>& inner_local, std::size_t m) const {
    // inner_local: 1-based k indices of row n kept in a
    std::vector<Pos> excl;
    for (std::size_t j = m + 1; j <= M_; ++j) excl.push_back(static_cast<Pos>(j - 1));
    for (std::size_t r = 1; r < n; ++r)
      for (Pos p : tri_block(r)) excl.push_back(omega0_pos(p));
    for (std::size_t k = 1; k <= n; ++k)
      if (!detail::vec_contains(inner_local, static_cast<Pos>(k)))
        excl.push_back(omega0_pos(tri_pair(n, k)));
    return cofinite_member(excl);
  }

  std::optional<Member> enumerate(std::size_t index) const override {
    return cache_.at(index, [this](std::size_t) -> std::optional<Member> {
      while (m_ <= M_) {
        if (n_ > m_) { ++m_; n_ = 2; inner_.clear(); inner_first_ = true; continue; }
        inner_ = inner_first_ ? std::vector<Pos>{0} : detail::graded_next(std::move(inner_));
        inner_first_ = false;
        if (!inner_.empty() && inner_.back() >= static_cast<Pos>(n_)) {
          ++n_;
          inner_.clear();
          inner_first_ = true;
          continue;
        }
        std::vector<Pos> local;
        for (Pos i : inner_) local.push_back(i + 1);
        return member_at(n_, local, m_);
      }
      return std::nullopt;
    });
  }

  Membership contains(const Member& m) const override {
    if (!is_cofinite(m)) return Membership::no;
    std::vector<Pos> low, high;
    for (Pos p : m.support)
      (p < static_cast<Pos>(M_) ? low : high).push_back(p - (p < static_cast<Pos>(M_) ? 0 : static_cast<Pos>(M_)));
    const std::size_t mm = M_ - low.size();
    for (std::size_t i = 0; i < low.size(); ++i)
      if (low[i] != static_cast<Pos>(mm + i)) return Membership::no;
    std::size_t n = 0;
    std::vector<Pos> a_local;
    if (!decode_tmin_exclusions(high, n, a_local)) return Membership::no;
    if (n < 2 || mm < n) return Membership::no;
    return Membership::yes;
  }

  // Decodes X = E_{<n} u (E_n \ a) over the triangular layout; returns the
  // level and the kept 1-based column indices of row n.
  static bool decode_tmin_exclusions(const std::vector<Pos>& x, std::size_t& n_out,
                                     std::vector<Pos>& a_local) {
    std::size_t n = 1;
    while (detail::vec_includes(x, tri_block(n))) ++n;
    std::vector<Pos> expect;
    for (std::size_t r = 1; r < n; ++r)
      for (Pos p : tri_block(r)) expect.push_back(p);
    a_local.clear();
    for (std::size_t k = 1; k <= n; ++k) {
      if (detail::vec_contains(x, tri_pair(n, k))) expect.push_back(tri_pair(n, k));
      else a_local.push_back(static_cast<Pos>(k));
    }
    n_out = n;
    return detail::normalized(expect) == x;
  }

  std::string family_name() const override { return "ex5s"; }
  std::size_t nat_horizon() const { return M_; }

private:
  std::size_t M_;
  GroundWindow g_;
  MemberStreamCache cache_;
  mutable std::size_t m_ = 2, n_ = 2;
  mutable std::vector<Pos> inner_;
  mutable bool inner_first_ = true;
};

// S' on Omega' = Omega_0 x {1..M}: position of (p, j) is p*M + (j-1).
// Member (a, m) = (a x {1..M}) u (Omega_0 x {1..m}); its complement is
// (Omega_0 \ a) x {m+1..M}, a finite rectangle.
class Ex5SprimeOracle final : public OracleSystem {
public:
  explicit Ex5SprimeOracle(std::size_t nat_horizon = 12) : M_(nat_horizon) {
    if (M_ < 2 || M_ > 16) throw std::invalid_argument("ex5 horizon out of range");
    g_ = unbounded_ground(static_cast<Pos>(tri_pair(M_ + 1, 1) * static_cast<Pos>(M_)));
  }

  GroundWindow ground() const override { return g_; }

  Member member_at(std::size_t n, const std::vector<Pos>& inner_local, std::size_t m) const {
    std::vector<Pos> rows;
    for (std::size_t r = 1; r < n; ++r)
      for (Pos p : tri_block(r)) rows.push_back(p);
    for (std::size_t k = 1; k <= n; ++k)
      if (!detail::vec_contains(inner_local, static_cast<Pos>(k))) rows.push_back(tri_pair(n, k));
    std::vector<Pos> excl;
    for (Pos p : rows)
      for (std::size_t j = m + 1; j <= M_; ++j)
        excl.push_back(p * static_cast<Pos>(M_) + static_cast<Pos>(j - 1));
    return cofinite_member(excl);
  }

  std::optional<Member> enumerate(std::size_t index) const override {
    return cache_.at(index, [this](std::size_t) -> std::optional<Member> {
      while (m_ <= M_) {
        if (n_ > m_) { ++m_; n_ = 2; inner_.clear(); inner_first_ = true; continue; }
        inner_ = inner_first_ ? std::vector<Pos>{0} : detail::graded_next(std::move(inner_));
        inner_first_ = false;
        if (!inner_.empty() && inner_.back() >= static_cast<Pos>(n_)) {
          ++n_;
          inner_.clear();
          inner_first_ = true;
          continue;
        }
        std::vector<Pos> local;
        for (Pos i : inner_) local.push_back(i + 1);
        Member mem = member_at(n_, local, m_);
        if (mem.support.empty() && top_emitted_) continue; // full ground repeats at m = M
        if (mem.support.empty()) top_emitted_ = true;
        return mem;
      }
      return std::nullopt;
    });
  }

  Membership contains(const Member& m) const override {
    if (!is_cofinite(m)) return Membership::no;
    if (m.support.empty()) return Membership::yes; // (a, M) for any a
    std::vector<Pos> rows, cols;
    for (Pos p : m.support) {
      rows.push_back(p / static_cast<Pos>(M_));
      cols.push_back(p % static_cast<Pos>(M_));
    }
    rows = detail::normalized(rows);
    cols = detail::normalized(cols);
    if (rows.size() * cols.size() != m.support.size()) return Membership::no;
    const std::size_t mm = M_ - cols.size();
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] != static_cast<Pos>(mm + i)) return Membership::no;
    std::size_t n = 0;
    std::vector<Pos> a_local;
    if (!Ex5SOracle::decode_tmin_exclusions(rows, n, a_local)) return Membership::no;
    if (n < 2 || mm < n) return Membership::no;
    return Membership::yes;
  }

  std::string family_name() const override { return "ex5sprime"; }
  std::size_t nat_horizon() const { return M_; }

private:
  std::size_t M_;
  GroundWindow g_;
  MemberStreamCache cache_;
  mutable std::size_t m_ = 2, n_ = 2;
  mutable std::vector<Pos> inner_;
  mutable bool inner_first_ = true;
  mutable bool top_emitted_ = false;
};

// --- restriction wrappers --------------------------------------------------

class RestrictedOracle final : public OracleSystem {
public:
  RestrictedOracle(OracleRef base, RestrictOp op, Member arg, std::size_t base_pull_cap = 4096)
      : base_(std::move(base)), op_(op), arg_(std::move(arg)), cap_(base_pull_cap) {}

  GroundWindow ground() const override { return base_->ground(); }

  std::optional<Member> enumerate(std::size_t index) const override {
    std::lock_guard<std::mutex> lock(mu_);
    while (cache_.size() <= index && !done_) {
      if (cursor_ >= cap_) { done_ = true; break; }
      std::optional<Member> bm = base_->enumerate(cursor_++);
      if (!bm) { done_ = true; break; }
      std::optional<Member> im = image(*bm);
      if (!im) continue;
      if (seen_.insert(*im).second) {
        cache_.push_back(*im);
        pre_.emplace(*im, *bm);
      }
    }
    if (index < cache_.size()) return cache_[index];
    return std::nullopt;
  }

  Membership contains(const Member& m) const override {
    switch (op_) {
      case RestrictOp::minus:
        if (!is_empty(member_intersection(m, arg_))) return Membership::no;
        return base_->contains(m);
      case RestrictOp::above:
        if (!member_subset(arg_, m)) return Membership::no;
        return base_->contains(m);
      case RestrictOp::subtract: {
        if (!is_empty(member_intersection(m, arg_))) return Membership::no;
        if (is_cofinite(arg_) || arg_.support.size() > 16) return Membership::unknown;
        bool unknown = false;
        const std::size_t k = arg_.support.size();
        for (std::size_t sel = 0; sel < (std::size_t{1} << k); ++sel) {
          std::vector<Pos> extra;
          for (std::size_t i = 0; i < k; ++i)
            if (sel & (std::size_t{1} << i)) extra.push_back(arg_.support[i]);
          Membership r = base_->contains(member_union(m, finite_member(extra)));
          if (r == Membership::yes) return Membership::yes;
          if (r == Membership::unknown) unknown = true;
        }
        return unknown ? Membership::unknown : Membership::no;
      }
      case RestrictOp::trace: {
        if (!member_subset(m, arg_)) return Membership::no;
        if (is_cofinite(arg_) && arg_.support.size() <= 16) {
          bool unknown = false;
          const std::size_t k = arg_.support.size();
          for (std::size_t sel = 0; sel < (std::size_t{1} << k); ++sel) {
            std::vector<Pos> extra;
            for (std::size_t i = 0; i < k; ++i)
              if (sel & (std::size_t{1} << i)) extra.push_back(arg_.support[i]);
            Membership r = base_->contains(member_union(m, finite_member(extra)));
            if (r == Membership::yes) return Membership::yes;
            if (r == Membership::unknown) unknown = true;
          }
          return unknown ? Membership::unknown : Membership::no;
        }
        if (base_->contains(m) == Membership::yes) return Membership::yes;
        return Membership::unknown;
      }
    }
    return Membership::unknown;
  }

  std::string family_name() const override {
    const char* ops[] = {"minus", "above", "subtract", "trace"};
    return base_->family_name() + ":" + ops[static_cast<int>(op_)];
  }

  Member source_member(const Member& m) const override {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pre_.find(m);
    if (it == pre_.end()) throw std::invalid_argument("member was not enumerated by this wrapper");
    return base_->source_member(it->second);
  }

private:
  std::optional<Member> image(const Member& bm) const {
    switch (op_) {
      case RestrictOp::minus:
        return is_empty(member_intersection(bm, arg_)) ? std::optional<Member>(bm) : std::nullopt;
      case RestrictOp::above:
        return member_subset(arg_, bm) ? std::optional<Member>(bm) : std::nullopt;
      case RestrictOp::subtract: return member_difference(bm, arg_);
      case RestrictOp::trace: return member_intersection(bm, arg_);
    }
    return std::nullopt;
  }

  OracleRef base_;
  RestrictOp op_;
  Member arg_;
  std::size_t cap_;
  mutable std::mutex mu_;
  mutable std::vector<Member> cache_;
  mutable std::map<Member, Member, MemberLess> pre_;
  mutable std::set<Member, MemberLess> seen_;
  mutable std::size_t cursor_ = 0;
  mutable bool done_ = false;
};

inline OracleRef restrict_oracle(OracleRef base, RestrictOp op, Member arg,
                                 std::size_t base_pull_cap = 4096) {
  return std::make_shared<RestrictedOracle>(std::move(base), op, std::move(arg), base_pull_cap);
}

// --- prefix pulls and searches over oracles --------------------------------

struct OraclePrefix {
  const OracleSystem* oracle = nullptr;
  std::vector<Member> members;
  bool enumeration_done = false;

  // Ensures `count` members are present; each pull costs one budget node.
  bool ensure(std::size_t count, Budget& budget) {
    while (members.size() < count && !enumeration_done) {
      if (!budget.spend()) return false;
      std::optional<Member> m = oracle->enumerate(members.size());
      if (!m) { enumeration_done = true; break; }
      members.push_back(std::move(*m));
    }
    return members.size() >= count;
  }
};

struct OracleSearchOptions {
  std::size_t max_members = 64; // enumeration prefix cap for this search
};

// First incompressible size-k family within the oracle's enumeration prefix,
// scanned lazily in the canonical graded order.  `exhaustive` in the result
// means the full prefix (bounded by max_members or the end of the
// enumeration) was scanned without success.
inline FamilySearchResult oracle_find_incompressible(const OracleSystem& o, std::size_t k,
                                                     Budget& budget,
                                                     OracleSearchOptions opt = {}) {
  FamilySearchResult res;
  const std::uint64_t before = budget.used;
  OraclePrefix prefix{&o, {}, false};
  bool budget_hit = false;
  for (std::size_t top = k - 1; top < opt.max_members; ++top) {
    if (!prefix.ensure(top + 1, budget)) {
      budget_hit = budget.exhausted();
      break;
    }
    MaskFamily mf(prefix.members, o.ground());
    ScanEnd end = scan_incompressible_ksubsets(mf, k, budget, [&](const std::vector<std::size_t>& idx) {
      std::vector<Member> fam;
      for (std::size_t i : idx) fam.push_back(prefix.members[i]);
      WitnessResult w = find_witness(fam, o.ground());
      if (w.outcome != WitnessOutcome::found) return false;
      res.indices = idx;
      res.family = std::move(fam);
      res.witness = w.witness;
      return true;
    }, top);
    if (end == ScanEnd::stopped) {
      res.outcome = SearchOutcome::found;
      res.stats.nodes = budget.used - before;
      res.stats.enumerated = prefix.members.size();
      return res;
    }
    if (end == ScanEnd::budget) { budget_hit = true; break; }
  }
  res.stats.nodes = budget.used - before;
  res.stats.enumerated = prefix.members.size();
  res.stats.budget_hit = budget_hit;
  res.stats.exhaustive = !budget_hit;
  res.outcome = budget_hit ? SearchOutcome::inconclusive : SearchOutcome::absent;
  return res;
}

inline FamilySearchResult oracle_breadth_at_least(const OracleSystem& o, std::size_t k,
                                                  Budget& budget, OracleSearchOptions opt = {}) {
  return oracle_find_incompressible(o, k, budget, opt);
}

// Thickness surrogate on oracles: trace to `a`, then search for a size-k
// incompressible family.
inline FamilySearchResult oracle_thickness_probe(OracleRef o, const Member& a, std::size_t k,
                                                 Budget& budget, OracleSearchOptions opt = {}) {
  RestrictedOracle traced(std::move(o), RestrictOp::trace, a, 4096);
  return oracle_find_incompressible(traced, k, budget, opt);
}

// --- snapshots -------------------------------------------------------------

struct SnapshotResult {
  SetSystem system;
  std::size_t enumerated = 0;
  bool enumeration_exhausted = false;
};

// Traces the first `count` members onto [0, window), deduplicates, and
// closes under union inside the window.  The result is the trace of a finite
// subfamily's generated subsemilattice, hence a homomorphic finite shadow.
inline SnapshotResult snapshot(const OracleSystem& o, Pos window, std::size_t count) {
  std::vector<Member> traces;
  std::size_t pulled = 0;
  bool done = false;
  for (; pulled < count; ++pulled) {
    std::optional<Member> m = o.enumerate(pulled);
    if (!m) { done = true; break; }
    traces.push_back(finite_member(member_trace(*m, window)));
  }
  SetSystem sys = close_under_union(bounded_ground(window), std::move(traces));
  return SnapshotResult{std::move(sys), pulled, done};
}

// --- built-in registry -----------------------------------------------------

struct BuiltinSpec {
  std::string family;                    // fin cofin fincofin pow tmax tmin tort blocks ex5s ex5sprime
  Pos window = 64;                       // fin/cofin/fincofin window, pow size
  std::size_t levels = 8;                // canonical level cap
  std::string profile = "linear";        // canonical profile
  std::vector<std::vector<Pos>> blocks;  // blocks family
  std::size_t nat_horizon = 12;          // ex5 horizon M
};

inline std::shared_ptr<const OracleSystem> make_builtin(const BuiltinSpec& spec) {
  const std::string& f = spec.family;
  if (f == "fin") return std::make_shared<FinOracle>(spec.window);
  if (f == "cofin") return std::make_shared<CofinOracle>(spec.window);
  if (f == "fincofin") return std::make_shared<FinCofinOracle>(spec.window);
  if (f == "pow") return std::make_shared<PowOracle>(spec.window);
  if (f == "tmax" || f == "tmin" || f == "tort") {
    CanonicalType t = f == "tmax" ? CanonicalType::max
                    : f == "tmin" ? CanonicalType::min
                                  : CanonicalType::ort;
    ProfileKind p = spec.profile == "square" ? ProfileKind::square : ProfileKind::linear;
    return std::make_shared<CanonicalOracle>(t, p, spec.levels);
  }
  if (f == "blocks") return std::make_shared<BlocksOracle>(make_spread(spec.blocks));
  if (f == "ex5s") return std::make_shared<Ex5SOracle>(spec.nat_horizon);
  if (f == "ex5sprime") return std::make_shared<Ex5SprimeOracle>(spec.nat_horizon);
  throw std::invalid_argument("unknown built-in family: " + f);
}

} // namespace ucs
