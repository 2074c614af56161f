#include <catch2/catch_amalgamated.hpp>

#include "pebres/hiding.hpp"
#include "pebres/induced.hpp"
#include "pebres/resolution.hpp"

using namespace pebres;

namespace {
// The four clauses ~x(s2)_i v ~x(s3)_j v x(u2)_1 v All+(z) on Pi_2, d=2.
std::vector<Clause> figure_clauses() {
  std::vector<Clause> cb;
  for (int i : {3, 4})
    for (int j : {5, 6}) cb.push_back(Clause::of({-i, -j, 9, 11, 12}));
  return cb;
}
}  // namespace

TEST_CASE("entailment oracle") {
  REQUIRE(entails({Clause::of({11, 12})}, Clause::of({7, 11, 12}), 12));
  REQUIRE(!entails({}, Clause::of({11}), 12));
  auto g = make_pyramid(2);
  auto f = strip_targets(pebbling_contradiction(g, 2));
  REQUIRE(entails(f.cnf.clauses, f.all_plus(bit(g.sink)), f.cnf.nvars));
  REQUIRE_THROWS_AS(entails({}, Clause::of({25}), 25), InducedError);
}

TEST_CASE("precise implication") {
  auto g = make_pyramid(2);
  auto f = pebbling_contradiction(g, 2);
  auto cb = figure_clauses();
  REQUIRE(precise_implication(cb, bit(1) | bit(2), bit(4) | bit(5), g, f));
  // condition (a) fails with B = {z}: u2 true, z false satisfies C_B
  REQUIRE(!precise_implication(cb, bit(1) | bit(2), bit(5), g, f));
  // a single All+(v) clause is its own minimal witness
  REQUIRE(precise_implication({f.all_plus(bit(3))}, 0, bit(3), g, f));
  // non-minimal premises fail
  auto extra = cb;
  extra.push_back(f.all_plus(bit(5)));
  REQUIRE(!precise_implication(extra, bit(1) | bit(2), bit(4) | bit(5), g, f));
  REQUIRE(!precise_implication(cb, bit(0) | bit(1) | bit(2), bit(4) | bit(5), g, f));
  REQUIRE(!is_chain(g, bit(3) | bit(4)));
  REQUIRE(!precise_implication(cb, 0, bit(3) | bit(4), g, f));
  REQUIRE_THROWS_AS(precise_implication(cb, bit(5), bit(5), g, f), InducedError);
}

TEST_CASE("induced configurations") {
  auto g = make_pyramid(2);
  auto f = pebbling_contradiction(g, 2);
  REQUIRE(induced_config({}, g, f).empty());
  REQUIRE(induced_config({f.all_plus(bit(g.sink))}, g, f) ==
          BlobConfig{{bit(g.sink), 0}});
  // the figure clauses induce exactly [u2,z]<s2,s3>
  auto ic = induced_config(figure_clauses(), g, f);
  REQUIRE(ic == BlobConfig{{bit(4) | bit(5), bit(1) | bit(2)}});
  // budget guards
  std::vector<Clause> many(9, f.all_plus(bit(0)));
  REQUIRE_THROWS_AS(induced_config(many, g, f), InducedError);
}

TEST_CASE("induced configurations shrink under erasure and grow under download") {
  auto g = make_pyramid(1);
  auto f = strip_targets(pebbling_contradiction(g, 2));
  auto t = build_linear(g, 2, f);
  std::vector<std::vector<Clause>> bounds;
  replay(f.cnf, t, [&](int, const std::map<int, Clause>& mem) {
    std::vector<Clause> cfg;
    for (auto& [id, c] : mem) cfg.push_back(c);
    bounds.push_back(cfg);
  });
  for (size_t i = 0; i < t.steps.size(); ++i) {
    auto a = induced_config(bounds[i], g, f);
    auto b = induced_config(bounds[i + 1], g, f);
    auto subset = [](const BlobConfig& x, const BlobConfig& y) {
      for (auto& s : x)
        if (std::find(y.begin(), y.end(), s) == y.end()) return false;
      return true;
    };
    if (t.steps[i].kind == Step::Erase)
      REQUIRE(subset(b, a));
    else
      REQUIRE(subset(a, b));
  }
}

TEST_CASE("translation of builder traces") {
  for (int h = 1; h <= 2; ++h) {
    auto g = make_pyramid(h);
    auto f = strip_targets(pebbling_contradiction(g, 2));
    for (int which = 0; which < 2; ++which) {
      auto t = which == 0 ? build_linear(g, 2, f)
                          : build_from_pebbling(g, 2, black_strategy(g), f);
      auto m = replay(f.cnf, t);
      auto r = translate(f, t);
      auto seq = replay_blob(g, r.pebbling);
      REQUIRE(seq.back() == BlobConfig{{bit(g.sink), 0}});
      REQUIRE(r.max_cost <= m.clause_space + 4);
      REQUIRE(r.boundary_costs.size() == t.steps.size() + 1);
      // boundary configurations really are the induced ones
      std::vector<std::vector<Clause>> bounds;
      replay(f.cnf, t, [&](int, const std::map<int, Clause>& mem) {
        std::vector<Clause> cfg;
        for (auto& [id, c] : mem) cfg.push_back(c);
        bounds.push_back(cfg);
      });
      for (size_t i = 0; i < bounds.size(); ++i)
        REQUIRE(seq[r.boundary_moves[i]] == induced_config(bounds[i], g, f));
    }
  }
}

TEST_CASE("translation rejects bad input") {
  auto g = make_pyramid(1);
  auto ft = pebbling_contradiction(g, 2);
  auto tt = build_linear(g, 2, ft);
  REQUIRE_THROWS_AS(translate(ft, tt), InducedError);  // targets present
  auto f = strip_targets(ft);
  DerivationTrace stub;
  stub.steps = {Step::download(0)};
  REQUIRE_THROWS_AS(translate(f, stub), InducedError);  // All+(z) not derived
}

TEST_CASE("single-download trace translates to an introduction") {
  auto g = make_pyramid(1);
  auto f = strip_targets(pebbling_contradiction(g, 2));
  // downloading All+(s1) induces [s1]<>
  DerivationTrace t;
  t.steps = {Step::download(0)};
  auto bounds = induced_config({f.cnf.clauses[0]}, g, f);
  REQUIRE(bounds == BlobConfig{{bit(0), 0}});
}

TEST_CASE("bounds verification") {
  auto g = make_pyramid(2);
  auto f = strip_targets(pebbling_contradiction(g, 2));
  auto t = build_linear(g, 2, f);
  auto rep = verify_bounds(f, t);
  REQUIRE(rep.ok);
  REQUIRE(rep.violations.empty());
  for (size_t i = 0; i < rep.boundary_costs.size(); ++i)
    REQUIRE(rep.boundary_costs[i] <= rep.boundary_sizes[i]);
  REQUIRE(rep.max_blob_cost <= rep.clause_space + 4);
}

TEST_CASE("degree 1 admits cheap clauses inducing expensive blobs") {
  // On Pi_2 with d=1, one clause already induces a cost-3 configuration.
  auto g = make_pyramid(2);
  auto f = strip_targets(pebbling_contradiction(g, 1));
  Clause c = Clause::of({-(int)f.var(3, 1), -(int)f.var(4, 1), (int)f.var(5, 1)});
  auto ic = induced_config({c}, g, f);
  REQUIRE(std::find(ic.begin(), ic.end(),
                    BlobSubconfig{bit(5), bit(3) | bit(4)}) != ic.end());
  REQUIRE(blob_cost(g, ic) == 3);  // > |config| = 1
}

TEST_CASE("potential stays within a constant factor of translated cost") {
  for (int h = 1; h <= 2; ++h) {
    auto g = make_pyramid(h);
    auto f = strip_targets(pebbling_contradiction(g, 2));
    auto t = build_linear(g, 2, f);
    auto r = translate(f, t);
    auto seq = replay_blob(g, r.pebbling);
    int maxcost = 0;
    for (auto& c : seq) {
      maxcost = std::max(maxcost, blob_cost(g, c));
      REQUIRE(potential_blob(g, c).potential <= kBlobInductionFactor * maxcost);
    }
  }
}
