#include <catch2/catch_amalgamated.hpp>

#include "ucs/core.hpp"

using namespace ucs;

TEST_CASE("members normalize their support") {
  Member m = finite_member({3, 1, 3, 0});
  CHECK(m.support == std::vector<Pos>{0, 1, 3});
  CHECK(is_finite(m));
  Member c = cofinite_member({5, 2, 2});
  CHECK(c.support == std::vector<Pos>{2, 5});
  CHECK(is_cofinite(c));
  CHECK_THROWS_AS(finite_member({-1}), std::invalid_argument);
  CHECK_THROWS_AS(cofinite_member({0, -2}), std::invalid_argument);
}

TEST_CASE("emptiness and pointwise membership") {
  CHECK(is_empty(finite_member({})));
  CHECK_FALSE(is_empty(cofinite_member({})));
  Member a = finite_member({0, 2});
  CHECK(member_contains(a, 0));
  CHECK_FALSE(member_contains(a, 1));
  Member c = cofinite_member({1, 2});
  CHECK(member_contains(c, 0));
  CHECK_FALSE(member_contains(c, 2));
  CHECK(member_contains(c, 999));
}

TEST_CASE("boolean algebra across all kind combinations") {
  const Member a = finite_member({0, 1, 2});
  const Member b = finite_member({2, 3});
  const Member c = cofinite_member({1, 2});
  const Member d = cofinite_member({3});

  SECTION("union") {
    CHECK(member_union(a, b) == finite_member({0, 1, 2, 3}));
    CHECK(member_union(a, c) == cofinite_member({}));    // a supplies 1 and 2
    CHECK(member_union(a, d) == cofinite_member({3}));
    CHECK(member_union(d, a) == cofinite_member({3}));
    CHECK(member_union(c, d) == cofinite_member({}));    // exclusions intersect
  }
  SECTION("intersection") {
    CHECK(member_intersection(a, b) == finite_member({2}));
    CHECK(member_intersection(a, c) == finite_member({0}));
    CHECK(member_intersection(c, a) == finite_member({0}));
    CHECK(member_intersection(c, d) == cofinite_member({1, 2, 3}));
  }
  SECTION("difference") {
    CHECK(member_difference(a, b) == finite_member({0, 1}));
    CHECK(member_difference(a, c) == finite_member({1, 2}));
    CHECK(member_difference(c, b) == cofinite_member({1, 2, 3}));
    CHECK(member_difference(c, d) == finite_member({3}));
    CHECK(member_difference(d, d) == finite_member({}));
  }
}

TEST_CASE("complement consults the ground") {
  const Member a = finite_member({0, 1, 2});
  CHECK(member_complement(a, bounded_ground(5)) == finite_member({3, 4}));
  CHECK(member_complement(a, unbounded_ground(5)) == cofinite_member({0, 1, 2}));
  CHECK(member_complement(cofinite_member({1}), unbounded_ground(5)) == finite_member({1}));
  CHECK_THROWS_AS(member_complement(cofinite_member({1}), bounded_ground(5)),
                  std::invalid_argument);
}

TEST_CASE("subset relation across kinds") {
  CHECK(member_subset(finite_member({0}), finite_member({0, 1})));
  CHECK_FALSE(member_subset(finite_member({0, 2}), finite_member({0, 1})));
  CHECK(member_subset(finite_member({0, 1}), cofinite_member({3})));
  CHECK_FALSE(member_subset(finite_member({0, 3}), cofinite_member({3})));
  CHECK_FALSE(member_subset(cofinite_member({3}), finite_member({0, 1, 2})));
  CHECK(member_subset(cofinite_member({1, 2}), cofinite_member({1})));
  CHECK_FALSE(member_subset(cofinite_member({1}), cofinite_member({1, 2})));
  CHECK(divides(finite_member({0}), finite_member({0, 1})));
}

TEST_CASE("trace restricts to the working window") {
  CHECK(member_trace(finite_member({1, 4, 9}), 5) == std::vector<Pos>{1, 4});
  CHECK(member_trace(cofinite_member({1, 2}), 5) == std::vector<Pos>{0, 3, 4});
  CHECK(member_trace(cofinite_member({}), 3) == std::vector<Pos>{0, 1, 2});
}

TEST_CASE("canonical member order is finite-first then graded") {
  // Graded on support: by max element, then size, then lexicographic.
  std::vector<Member> ms = {
      cofinite_member({}),          // compares after every finite member
      finite_member({2, 3}),
      finite_member({0, 1, 3}),
      finite_member({3}),
      finite_member({}),
      finite_member({0, 2}),
      cofinite_member({0}),
  };
  std::sort(ms.begin(), ms.end(), MemberLess{});
  const std::vector<Member> want = {
      finite_member({}),     finite_member({0, 2}),    finite_member({3}),
      finite_member({2, 3}), finite_member({0, 1, 3}), cofinite_member({}),
      cofinite_member({0}),
  };
  CHECK(ms == want);
}

TEST_CASE("validation against a ground window") {
  CHECK_NOTHROW(validate_member(finite_member({4}), bounded_ground(5)));
  CHECK_THROWS_AS(validate_member(finite_member({5}), bounded_ground(5)), std::invalid_argument);
  CHECK_THROWS_AS(validate_member(cofinite_member({0}), bounded_ground(5)), std::invalid_argument);
  CHECK_NOTHROW(validate_member(cofinite_member({0}), unbounded_ground(5)));
  CHECK_THROWS_AS(validate_member(cofinite_member({7}), unbounded_ground(5)),
                  std::invalid_argument);
}

TEST_CASE("rendering") {
  CHECK(member_to_string(finite_member({})) == "{}");
  CHECK(member_to_string(finite_member({0, 2})) == "{0,2}");
  CHECK(member_to_string(cofinite_member({1, 5})) == "~{1,5}");
}
