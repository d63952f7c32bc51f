#include <catch2/catch_amalgamated.hpp>

#include "ucs/canonical.hpp"
#include "ucs/spread.hpp"

using namespace ucs;

TEST_CASE("standard spreads follow their size profile") {
  Spread lin = spread_standard(3);
  REQUIRE(lin.levels() == 3);
  CHECK(lin.blocks[0] == std::vector<Pos>{0});
  CHECK(lin.blocks[1] == std::vector<Pos>{1, 2});
  CHECK(lin.blocks[2] == std::vector<Pos>{3, 4, 5});
  CHECK(matches_profile(lin, profile_linear()));
  CHECK_FALSE(matches_profile(lin, profile_square()));

  Spread sq = spread_standard(3, profile_square());
  CHECK(sq.blocks[1] == std::vector<Pos>{1, 2, 3, 4});
  CHECK(sq.blocks[2] == std::vector<Pos>{5, 6, 7, 8, 9, 10, 11, 12, 13});
  CHECK(spread_join(lin) == std::vector<Pos>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("spread construction validates its blocks") {
  CHECK_NOTHROW(make_spread({{3, 1}, {0, 2}}));         // unsorted input is normalized
  CHECK_THROWS_AS(make_spread({{0}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(make_spread({{0, 1}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("block neighbourhoods and refinement") {
  Spread e = spread_standard(3);
  CHECK(blocks_below(e, 3) == std::vector<Pos>{0, 1, 2});
  CHECK(blocks_below(e, 1).empty());
  CHECK(blocks_above(e, 1) == std::vector<Pos>{1, 2, 3, 4, 5});
  CHECK(blocks_above(e, 3).empty());

  CHECK(refines(make_spread({{0}, {2}}), e));
  CHECK(refines(make_spread({{1}, {4, 5}}), e));
  // Two refined blocks inside one block of e: not a refinement.
  CHECK_FALSE(refines(make_spread({{1}, {2}}), e));
  CHECK_FALSE(refines(make_spread({{0, 1}}), e));        // straddles two blocks

  Spread sub = sub_spread(e, {1, 3});
  REQUIRE(sub.levels() == 2);
  CHECK(sub.blocks[1] == std::vector<Pos>{3, 4, 5});
  CHECK_THROWS_AS(sub_spread(e, {0}), std::invalid_argument);
  CHECK_THROWS_AS(sub_spread(e, {4}), std::invalid_argument);

  std::vector<std::size_t> survivors;
  Spread cut = intersect_spread(e, finite_member({0, 4, 5}), &survivors);
  CHECK(survivors == std::vector<std::size_t>{1, 3});
  CHECK(cut.blocks[1] == std::vector<Pos>{4, 5});
}

TEST_CASE("level patterns of the three canonical types") {
  Spread e = spread_standard(3);
  CHECK(level_pattern(CanonicalType::max, e, 2, {1}) == std::vector<Pos>{0, 1});
  CHECK(level_pattern(CanonicalType::min, e, 2, {2}) == std::vector<Pos>{2, 3, 4, 5});
  CHECK(level_pattern(CanonicalType::ort, e, 2, {1}) == std::vector<Pos>{0, 1, 3, 4, 5});
  CHECK(level_pattern(CanonicalType::max, e, 1, {0}) == std::vector<Pos>{0});
  CHECK_THROWS_AS(level_pattern(CanonicalType::max, e, 4, {0}), std::invalid_argument);
  CHECK_THROWS_AS(level_pattern(CanonicalType::max, e, 2, {}), std::invalid_argument);
  CHECK_THROWS_AS(level_pattern(CanonicalType::max, e, 2, {3}), std::invalid_argument);
}

TEST_CASE("canonical members at both horizons") {
  Spread e = spread_standard(3);
  // max members are finite at either horizon.
  CHECK(canonical_member(CanonicalType::max, e, 3, {3}, HorizonMode::windowed) ==
        finite_member({0, 1, 2, 3}));
  CHECK(canonical_member(CanonicalType::max, e, 3, {3}, HorizonMode::unbounded) ==
        finite_member({0, 1, 2, 3}));
  // min: kept inner points plus everything above; cofinite when unbounded.
  CHECK(canonical_member(CanonicalType::min, e, 3, {4}, HorizonMode::windowed) ==
        finite_member({4}));
  CHECK(canonical_member(CanonicalType::min, e, 2, {1, 2}, HorizonMode::windowed) ==
        finite_member({1, 2, 3, 4, 5}));
  CHECK(canonical_member(CanonicalType::min, e, 3, {4}, HorizonMode::unbounded) ==
        cofinite_member({0, 1, 2, 3, 5}));
  // ort: everything except the gap at its level.
  CHECK(canonical_member(CanonicalType::ort, e, 2, {2}, HorizonMode::windowed) ==
        finite_member({0, 2, 3, 4, 5}));
  CHECK(canonical_member(CanonicalType::ort, e, 2, {2}, HorizonMode::unbounded) ==
        cofinite_member({1}));
  CHECK_THROWS_AS(canonical_member(CanonicalType::min, e, 2, {5}, HorizonMode::windowed),
                  std::invalid_argument);
}

TEST_CASE("level decomposition inverts the member construction") {
  Spread e = spread_standard(3);
  for (CanonicalType t : {CanonicalType::max, CanonicalType::min, CanonicalType::ort})
    for (HorizonMode mode : {HorizonMode::windowed, HorizonMode::unbounded})
      for (std::size_t n = 1; n <= 3; ++n) {
        const auto& block = e.blocks[n - 1];
        for (std::size_t mask = 1; mask < (std::size_t{1} << block.size()); ++mask) {
          std::vector<Pos> inner;
          for (std::size_t i = 0; i < block.size(); ++i)
            if (mask & (std::size_t{1} << i)) inner.push_back(block[i]);
          Member m = canonical_member(t, e, n, inner, mode);
          auto dec = level_of(m, t, e, mode);
          REQUIRE(dec.has_value());
          if (t == CanonicalType::ort && inner.size() == block.size()) {
            // The shared top decodes at the smallest level.
            CHECK(dec->level == 1);
          } else {
            CHECK(dec->level == n);
            CHECK(dec->inner == inner);
          }
        }
      }
  CHECK_FALSE(level_of(finite_member({1}), CanonicalType::max, e, HorizonMode::windowed));
  CHECK_FALSE(level_of(finite_member({0, 3}), CanonicalType::max, e, HorizonMode::windowed));
  CHECK_FALSE(level_of(cofinite_member({0}), CanonicalType::ort, e, HorizonMode::unbounded));
}

TEST_CASE("explicit canonical prefixes") {
  Spread e = spread_standard(3);
  CanonicalFamily mx = canonical_family(CanonicalType::max, e, HorizonMode::windowed);
  CHECK(mx.system.size() == 11);
  CHECK(mx.merged_patterns == 0);
  CHECK(mx.system.ground == bounded_ground(6));
  CHECK(mx.system.closed);
  CHECK(is_union_closed(mx.system));

  CanonicalFamily mn = canonical_family(CanonicalType::min, e, HorizonMode::unbounded);
  CHECK(mn.system.size() == 11);
  CHECK(mn.system.ground == unbounded_ground(6));
  CHECK(is_union_closed(mn.system));

  // The ort prefix shares its top across levels: 11 patterns, 9 members.
  CanonicalFamily ort = canonical_family(CanonicalType::ort, e, HorizonMode::unbounded);
  CHECK(ort.system.size() == 9);
  CHECK(ort.merged_patterns == 2);
  CHECK(is_union_closed(ort.system));
}

TEST_CASE("free and chain systems") {
  SetSystem f3 = free_semilattice(3);
  CHECK(f3.size() == 7);
  CHECK(f3.closed);
  CHECK(f3.ground == bounded_ground(3));
  CHECK_THROWS_AS(free_semilattice(0), std::invalid_argument);
  CHECK_THROWS_AS(free_semilattice(21), std::invalid_argument);

  SetSystem c4 = chain_system(4);
  REQUIRE(c4.size() == 4);
  CHECK(c4.members.front() == finite_member({0}));
  CHECK(c4.members.back() == finite_member({0, 1, 2, 3}));
  CHECK(c4.closed);
  CHECK_THROWS_AS(chain_system(0), std::invalid_argument);
}
