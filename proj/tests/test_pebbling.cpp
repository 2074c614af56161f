#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "pebres/pebbling.hpp"

using namespace pebres;

TEST_CASE("move rules") {
  auto g = make_pyramid(1);  // s1=0, s2=1, z=2
  BwConfig c;
  c = apply_bw(c, {BwMove::PlaceBlack, 0}, g);
  REQUIRE(c.B == bit(0));
  // z cannot be blackened with s2 uncovered
  REQUIRE_THROWS_AS(apply_bw(c, {BwMove::PlaceBlack, 2}, g), PebbleError);
  // occupied vertex
  REQUIRE_THROWS_AS(apply_bw(c, {BwMove::PlaceWhite, 0}, g), PebbleError);
  // white on s2, then z is placeable and the source white removable
  c = apply_bw(c, {BwMove::PlaceWhite, 1}, g);
  c = apply_bw(c, {BwMove::PlaceBlack, 2}, g);
  c = apply_bw(c, {BwMove::RemoveWhite, 1}, g);
  REQUIRE(c.B == (bit(0) | bit(2)));
  REQUIRE(c.W == 0);
  // removing a missing pebble
  REQUIRE_THROWS_AS(apply_bw(c, {BwMove::RemoveWhite, 1}, g), PebbleError);
  // white removal from a non-source needs covered predecessors
  BwConfig d{0, bit(2)};
  REQUIRE_THROWS_AS(apply_bw(d, {BwMove::RemoveWhite, 2}, g), PebbleError);
}

TEST_CASE("pebbling cost") {
  auto g = make_pyramid(1);
  Pebbling p;
  REQUIRE(pebbling_cost(g, p) == 0);
  p.moves = {{BwMove::PlaceBlack, 0}, {BwMove::PlaceBlack, 1},
             {BwMove::PlaceBlack, 2}, {BwMove::RemoveBlack, 0},
             {BwMove::RemoveBlack, 1}};
  REQUIRE(pebbling_cost(g, p) == 3);
  p.moves.push_back({BwMove::RemoveBlack, 0});  // illegal: already removed
  REQUIRE_THROWS_AS(pebbling_cost(g, p), PebbleError);
}

TEST_CASE("black strategy costs h+2") {
  REQUIRE(pebbling_cost(make_pyramid(1), black_strategy(make_pyramid(1))) == 3);
  REQUIRE(pebbling_cost(make_pyramid(3), black_strategy(make_pyramid(3))) == 5);
  REQUIRE(pebbling_cost(make_tree(3), black_strategy(make_tree(3))) == 5);
  for (int h = 1; h <= 4; ++h) {
    auto g = make_pyramid(h);
    auto p = black_strategy(g);
    REQUIRE(pebbling_cost(g, p) <= h + 2);
    REQUIRE_NOTHROW(check_pebbling(g, p));
  }
}

TEST_CASE("exact prices") {
  auto pi2 = make_pyramid(2);
  auto r = exact_price(pi2, PebbleMode::Black, 10);
  REQUIRE(r.price == 4);
  auto t2 = make_tree(2);
  REQUIRE(exact_price(t2, PebbleMode::BW, 10).price == 4);
  auto pi1 = make_pyramid(1);
  REQUIRE(exact_price(pi1, PebbleMode::BW, 10).price == 3);
}

TEST_CASE("search witnesses replay to the returned price") {
  for (int h = 1; h <= 2; ++h) {
    for (auto mode : {PebbleMode::Black, PebbleMode::BW}) {
      auto g = make_pyramid(h);
      auto r = exact_price(g, mode, 10);
      REQUIRE(r.price.has_value());
      REQUIRE(pebbling_cost(g, r.witness) == *r.price);
      // complete: ends at ({z}, {})
      BwConfig c = r.witness.start;
      for (auto& m : r.witness.moves) c = apply_bw(c, m, g);
      REQUIRE(c.B == bit(g.sink));
      REQUIRE(c.W == 0);
    }
  }
}

TEST_CASE("bw price never exceeds black price") {
  for (int h = 1; h <= 3; ++h) {
    auto g = make_pyramid(h);
    REQUIRE(*exact_price(g, PebbleMode::BW, 10).price <=
            *exact_price(g, PebbleMode::Black, 10).price);
  }
  for (int h = 1; h <= 2; ++h) {
    auto t = make_tree(h);
    REQUIRE(*exact_price(t, PebbleMode::BW, 10).price <=
            *exact_price(t, PebbleMode::Black, 10).price);
  }
}

TEST_CASE("reversal duality") {
  for (int h = 1; h <= 2; ++h) {
    auto g = make_pyramid(h);
    auto r = exact_price(g, PebbleMode::BW, 10);
    auto dual = reverse_dual(g, r.witness);
    REQUIRE(pebbling_cost(g, dual) == *r.price);
    BwConfig c = dual.start;
    for (auto& m : dual.moves) c = apply_bw(c, m, g);
    REQUIRE(c.B == 0);
    REQUIRE(c.W == 0);
  }
}

TEST_CASE("budget exhaustion") {
  auto g = make_pyramid(2);
  auto r = exact_price(g, PebbleMode::Black, 3);  // price is 4
  REQUIRE(!r.price.has_value());
}

TEST_CASE("pebbling text round trip") {
  auto g = make_pyramid(1);
  auto r = exact_price(g, PebbleMode::BW, 10);
  std::ostringstream os;
  write_pebbling(os, r.witness);
  std::istringstream is(os.str());
  auto p = read_pebbling(is);
  REQUIRE(p.moves.size() == r.witness.moves.size());
  REQUIRE(pebbling_cost(g, p) == *r.price);
  std::istringstream bad("xx 1\n");
  REQUIRE_THROWS(read_pebbling(bad));
}
