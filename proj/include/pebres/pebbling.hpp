#pragma once
// Black and black-white pebble games: legality, cost, exact price search,
// and an h+2 black strategy for layered DAGs.

#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>

#include "pebres/dag.hpp"

namespace pebres {

struct BwConfig {
  VSet B = 0, W = 0;  // disjoint
  int cost() const { return popcount(B | W); }
  bool operator==(const BwConfig&) const = default;
};

struct BwMove {
  enum Kind { PlaceBlack, RemoveBlack, PlaceWhite, RemoveWhite } kind;
  int v;
  bool operator==(const BwMove&) const = default;
};

struct Pebbling {
  BwConfig start;
  std::vector<BwMove> moves;
};

struct PebbleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline BwConfig apply_bw(BwConfig c, BwMove m, const LayeredDag& g) {
  VSet covered = c.B | c.W;
  VSet vb = bit(m.v);
  switch (m.kind) {
    case BwMove::PlaceBlack:
      if (covered & vb) throw PebbleError("vertex occupied");
      if (!g.is_source(m.v) && (g.pred_set(m.v) & ~covered))
        throw PebbleError("predecessors uncovered");
      c.B |= vb;
      break;
    case BwMove::RemoveBlack:
      if (!(c.B & vb)) throw PebbleError("no such pebble");
      c.B &= ~vb;
      break;
    case BwMove::PlaceWhite:
      if (covered & vb) throw PebbleError("vertex occupied");
      c.W |= vb;
      break;
    case BwMove::RemoveWhite:
      if (!(c.W & vb)) throw PebbleError("no such pebble");
      if (!g.is_source(m.v) && (g.pred_set(m.v) & ~covered))
        throw PebbleError("predecessors uncovered");
      c.W &= ~vb;
      break;
  }
  return c;
}

// Replays p, throwing on the first illegal move; returns max |B ∪ W|.
inline int pebbling_cost(const LayeredDag& g, const Pebbling& p) {
  BwConfig c = p.start;
  int cost = c.cost();
  for (size_t i = 0; i < p.moves.size(); ++i) {
    try {
      c = apply_bw(c, p.moves[i], g);
    } catch (const PebbleError& e) {
      throw PebbleError("move " + std::to_string(i) + ": " + e.what());
    }
    cost = std::max(cost, c.cost());
  }
  return cost;
}

// Legality check for a black pebbling used as a derivation skeleton:
// legal moves, black-only, starts empty, ends covering the sink.
inline void check_pebbling(const LayeredDag& g, const Pebbling& p) {
  if (p.start.B || p.start.W) throw PebbleError("pebbling must start empty");
  BwConfig c = p.start;
  for (auto& m : p.moves) {
    if (m.kind == BwMove::PlaceWhite || m.kind == BwMove::RemoveWhite)
      throw PebbleError("white move in black pebbling");
    c = apply_bw(c, m, g);
  }
  if (!(c.B & bit(g.sink))) throw PebbleError("sink not pebbled at end");
}

struct PriceResult {
  std::optional<int> price;
  long long states_explored = 0;
  Pebbling witness;
};

enum class PebbleMode { Black, BW };

// Least k admitting a complete pebbling (∅,∅) → ({z},∅) of cost ≤ k.
// Increasing-k restarts; per k, BFS over (B,W) bitmask pairs, moves in
// lexicographic order so the witness is deterministic.
inline PriceResult exact_price(const LayeredDag& g, PebbleMode mode,
                               int budget) {
  if (mode == PebbleMode::BW && g.n() > 20)
    throw DagError("graph too large for bw price search");
  if (mode == PebbleMode::Black && g.n() > 24)
    throw DagError("graph too large for black price search");
  PriceResult res;
  auto key = [](BwConfig c) { return (std::uint64_t)c.B << 32 | c.W; };
  BwConfig goal{bit(g.sink), 0};
  for (int k = 1; k <= budget; ++k) {
    std::unordered_map<std::uint64_t, std::pair<std::uint64_t, BwMove>> parent;
    std::deque<BwConfig> q;
    q.push_back({});
    parent.emplace(key({}), std::make_pair(key({}), BwMove{}));
    bool found = false;
    while (!q.empty() && !found) {
      BwConfig c = q.front();
      q.pop_front();
      ++res.states_explored;
      auto try_move = [&](BwMove m) {
        BwConfig nc;
        try {
          nc = apply_bw(c, m, g);
        } catch (const PebbleError&) {
          return;
        }
        if (nc.cost() > k) return;
        auto [it, fresh] = parent.emplace(key(nc), std::make_pair(key(c), m));
        if (!fresh) return;
        if (nc == goal) {
          found = true;
          return;
        }
        q.push_back(nc);
      };
      for (int v = 0; v < g.n() && !found; ++v) {
        try_move({BwMove::PlaceBlack, v});
        if (found) break;
        try_move({BwMove::RemoveBlack, v});
        if (found) break;
        if (mode == PebbleMode::BW) {
          try_move({BwMove::PlaceWhite, v});
          if (found) break;
          try_move({BwMove::RemoveWhite, v});
        }
      }
    }
    if (found) {
      res.price = k;
      std::vector<BwMove> rev;
      std::uint64_t cur = key(goal), root = key({});
      while (cur != root) {
        auto& [pk, mv] = parent.at(cur);
        rev.push_back(mv);
        cur = pk;
      }
      res.witness.moves.assign(rev.rbegin(), rev.rend());
      return res;
    }
  }
  return res;  // price empty: exceeds budget
}

// Complete black pebbling of cost ≤ h+2 by the standard recursion: hold the
// first predecessor while pebbling the second. Exactly h+2 on pyramids.
inline Pebbling black_strategy(const LayeredDag& g) {
  Pebbling p;
  VSet on = 0;
  // Returns true iff this call placed the pebble on v (so the caller may
  // remove it afterwards).
  std::function<bool(int)> pebble = [&](int v) -> bool {
    if (on & bit(v)) return false;
    if (!g.is_source(v)) {
      int u = g.pred(v)[0], w = g.pred(v)[1];
      bool pu = pebble(u);
      bool pw = pebble(w);
      p.moves.push_back({BwMove::PlaceBlack, v});
      on |= bit(v);
      if (pu) {
        p.moves.push_back({BwMove::RemoveBlack, u});
        on &= ~bit(u);
      }
      if (pw) {
        p.moves.push_back({BwMove::RemoveBlack, w});
        on &= ~bit(w);
      }
    } else {
      p.moves.push_back({BwMove::PlaceBlack, v});
      on |= bit(v);
    }
    return true;
  };
  pebble(g.sink);
  return p;
}

// Reverse the move sequence and swap colors everywhere (moves and start
// config): a complete pebbling ∅ → ({z},∅) becomes a legal pebbling of the
// same cost from (∅,{z}) back to ∅ (duality sanity check).
inline Pebbling reverse_dual(const LayeredDag& g, const Pebbling& p) {
  Pebbling r;
  r.start = {0, bit(g.sink)};
  for (auto it = p.moves.rbegin(); it != p.moves.rend(); ++it) {
    BwMove m = *it;
    switch (m.kind) {
      case BwMove::PlaceBlack: m.kind = BwMove::RemoveWhite; break;
      case BwMove::RemoveBlack: m.kind = BwMove::PlaceWhite; break;
      case BwMove::PlaceWhite: m.kind = BwMove::RemoveBlack; break;
      case BwMove::RemoveWhite: m.kind = BwMove::PlaceBlack; break;
    }
    r.moves.push_back(m);
  }
  return r;
}

inline void write_pebbling(std::ostream& os, const Pebbling& p) {
  for (auto& m : p.moves) {
    const char* tag = m.kind == BwMove::PlaceBlack    ? "+b"
                      : m.kind == BwMove::RemoveBlack ? "-b"
                      : m.kind == BwMove::PlaceWhite  ? "+w"
                                                      : "-w";
    os << tag << " " << m.v << "\n";
  }
}

inline Pebbling read_pebbling(std::istream& is) {
  Pebbling p;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    int v;
    if (!(ss >> tag >> v)) throw std::runtime_error("malformed pebbling line");
    if (tag == "+b")
      p.moves.push_back({BwMove::PlaceBlack, v});
    else if (tag == "-b")
      p.moves.push_back({BwMove::RemoveBlack, v});
    else if (tag == "+w")
      p.moves.push_back({BwMove::PlaceWhite, v});
    else if (tag == "-w")
      p.moves.push_back({BwMove::RemoveWhite, v});
    else
      throw std::runtime_error("unknown pebbling move: " + tag);
  }
  return p;
}

}  // namespace pebres
