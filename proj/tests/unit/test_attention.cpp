#include <doctest.h>

#include "gesture/attention.hpp"
#include "gesture/random.hpp"
#include "oracles.hpp"

using namespace gesture;

TEST_CASE("mask for the small reference layout") {
  const SegmentLayout l{2, 2, 2, 2, false};
  const AttentionMask m = build_attention_mask(l);
  REQUIRE(m.rows() == 6);
  for (int r = 2; r < 4; ++r)
    for (int c = 0; c < 6; ++c) CHECK(m(r, c) == (c <= 3));
  for (int r = 4; r < 6; ++r)
    for (int c = 0; c < 6; ++c) CHECK(m(r, c) == (c >= 2));
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 6; ++c) CHECK(m(r, c) == (c < 2));
}

TEST_CASE("single perception segment is fully visible") {
  const AttentionMask m = build_attention_mask({0, 0, 3, 0, false});
  CHECK(m.rows() == 3);
  CHECK(m.all());
}

TEST_CASE("mask matches the cell rule on random layouts") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    SegmentLayout l;
    l.len_int = static_cast<int>(rng.below(9));
    l.int_prefix = static_cast<int>(rng.below(l.len_int + 1));
    l.len_per = static_cast<int>(rng.below(9));
    l.len_act = static_cast<int>(rng.below(9));
    l.allow_act_to_int = rng.uniform() < 0.5;
    if (l.total() == 0) continue;
    const AttentionMask m = build_attention_mask(l);
    for (int r = 0; r < l.total(); ++r)
      for (int c = 0; c < l.total(); ++c) CHECK(m(r, c) == testing::mask_rule(l, r, c));
    CHECK(!m.topRightCorner(l.len_int, l.len_per + l.len_act).any());
  }
}

TEST_CASE("act_to_int flag") {
  SegmentLayout l{2, 1, 2, 2, false};
  CHECK(!build_attention_mask(l).block(4, 0, 2, 2).any());
  l.allow_act_to_int = true;
  CHECK(build_attention_mask(l).block(4, 0, 2, 2).all());
}

TEST_CASE("layout parsing and validation") {
  const SegmentLayout l = parse_layout("2,1,3,4");
  CHECK(l.len_int == 2);
  CHECK(l.int_prefix == 1);
  CHECK(l.len_per == 3);
  CHECK(l.len_act == 4);
  CHECK_THROWS_AS(parse_layout("2,3"), Error);
  CHECK_THROWS_AS(parse_layout("2,3,1,1"), Error);  // prefix longer than the intent segment
  CHECK_THROWS_AS(parse_layout("a,b,c,d"), Error);
  CHECK(format_mask(build_attention_mask({1, 1, 1, 0, false})) == "10\n11\n");
}

TEST_CASE("inference_cost") {
  CHECK(inference_cost(1, 1) == InferenceCost{1, 1, 1});
  CHECK(inference_cost(10, 5) == InferenceCost{1, 10, 50});
  try {
    inference_cost(0, 5);
    FAIL("expected InvalidSchedule");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSchedule);
  }
  CHECK_THROWS_AS(inference_cost(3, 0), Error);
}
