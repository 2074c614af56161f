#pragma once
// Blob-pebble game: subconfigurations [B]<W>, the four move rules,
// chargeable-vertex cost, replay, lifting of black pebblings, and exact
// price search on tiny graphs.

#include <deque>
#include <map>

#include "pebres/pebbling.hpp"

namespace pebres {

struct BlobError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// [B]<W>: B a nonempty chain, W ⊆ lpp(B). Atomic iff |B|=1.
struct BlobSubconfig {
  VSet B = 0, W = 0;
  bool operator==(const BlobSubconfig&) const = default;
  auto operator<=>(const BlobSubconfig&) const = default;
  bool atomic() const { return popcount(B) == 1; }
  bool independent() const { return W == 0; }
};

inline void validate_subconfig(const LayeredDag& g, const BlobSubconfig& s) {
  if (!s.B) throw BlobError("empty blob");
  if (!is_chain(g, s.B)) throw BlobError("blob not a chain");
  if (s.W & ~lpp(g, s.B)) throw BlobError("white pebbles outside lpp(B)");
}

// Configs are kept canonical: sorted by (bot(B), B, W), deduped.
using BlobConfig = std::vector<BlobSubconfig>;

inline void canonicalize(const LayeredDag& g, BlobConfig& c) {
  std::sort(c.begin(), c.end(), [&](const BlobSubconfig& a, const BlobSubconfig& b) {
    return std::tuple(bottom_of(g, a.B), a.B, a.W) <
           std::tuple(bottom_of(g, b.B), b.B, b.W);
  });
  c.erase(std::unique(c.begin(), c.end()), c.end());
}

struct BlobMove {
  enum Op { Intro, Merge, Inflate, Erase } op;
  int v = -1;             // Intro vertex / Merge vertex v*
  BlobSubconfig s1, s2;   // Merge operands; Inflate: s1 = source subconfig
  BlobSubconfig to;       // Inflate target
};

inline BlobSubconfig merge_subconfigs(const LayeredDag& g,
                                      const BlobSubconfig& s1,
                                      const BlobSubconfig& s2, int vstar) {
  if ((s2.B & s1.W) != bit(vstar))
    throw BlobError("merger vertex not the unique B2-in-W1 vertex");
  if (s1.B & s2.W) throw BlobError("B1 intersects W2");
  if (!is_chain(g, s1.B | s2.B)) throw BlobError("B1 ∪ B2 not totally ordered");
  VSet B = (s1.B | s2.B) & ~bit(vstar);
  if (!B) throw BlobError("merged blob empty");
  VSet W = ((s1.W | s2.W) & ~bit(vstar)) & lpp(g, B);
  return {B, W};
}

inline BlobConfig apply_blob(const LayeredDag& g, BlobConfig c, const BlobMove& m) {
  auto contains = [&](const BlobSubconfig& s) {
    return std::find(c.begin(), c.end(), s) != c.end();
  };
  switch (m.op) {
    case BlobMove::Intro: {
      if (m.v < 0 || m.v >= g.n()) throw BlobError("no such vertex");
      c.push_back({bit(m.v), g.pred_set(m.v)});
      break;
    }
    case BlobMove::Merge: {
      if (!contains(m.s1) || !contains(m.s2))
        throw BlobError("merger operand not in configuration");
      c.push_back(merge_subconfigs(g, m.s1, m.s2, m.v));
      break;
    }
    case BlobMove::Inflate: {
      if (!contains(m.s1)) throw BlobError("inflation source not in configuration");
      if ((m.to.B & m.s1.B) != m.s1.B) throw BlobError("B does not contain B'");
      if (m.to.B & m.s1.W) throw BlobError("B intersects W'");
      if ((m.s1.W & lpp(g, m.to.B)) & ~m.to.W)
        throw BlobError("W does not cover W' within lpp(B)");
      validate_subconfig(g, m.to);
      c.push_back(m.to);
      break;
    }
    case BlobMove::Erase: {
      auto it = std::find(c.begin(), c.end(), m.s1);
      if (it == c.end()) throw BlobError("erasure target not in configuration");
      c.erase(it);
      break;
    }
  }
  canonicalize(g, c);
  return c;
}

// Chargeable vertices: each subconfig charges bot(B) and the whites below
// bot(B); blobs sharing a bottom vertex come for free.
inline VSet chargeable(const LayeredDag& g, const BlobConfig& c) {
  VSet ch = 0;
  for (auto& s : c) {
    int b = bottom_of(g, s.B);
    ch |= bit(b);
    ch |= s.W & g.strictly_below(b);
  }
  return ch;
}

inline int blob_cost(const LayeredDag& g, const BlobConfig& c) {
  return popcount(chargeable(g, c));
}

struct BlobPebbling {
  std::vector<BlobMove> moves;  // starts from the empty configuration
};

// Replays, validating every move; returns the configuration sequence
// (including the empty start).
inline std::vector<BlobConfig> replay_blob(const LayeredDag& g,
                                           const BlobPebbling& p) {
  std::vector<BlobConfig> seq{BlobConfig{}};
  for (size_t i = 0; i < p.moves.size(); ++i) {
    try {
      seq.push_back(apply_blob(g, seq.back(), p.moves[i]));
    } catch (const BlobError& e) {
      throw BlobError("move " + std::to_string(i) + ": " + e.what());
    }
  }
  return seq;
}

inline int blob_pebbling_cost(const LayeredDag& g, const BlobPebbling& p) {
  int c = 0;
  for (auto& cfg : replay_blob(g, p)) c = std::max(c, blob_cost(g, cfg));
  return c;
}

inline bool is_complete_blob(const LayeredDag& g, const BlobPebbling& p) {
  auto seq = replay_blob(g, p);
  BlobSubconfig goal{bit(g.sink), 0};
  return seq.back() == BlobConfig{goal};
}

// Lift a black pebbling to a blob pebbling of the same cost: placements
// become an introduction plus mergers against the predecessors' atomic
// blobs; removals become erasures.
inline BlobPebbling lift_black(const LayeredDag& g, const Pebbling& p) {
  BlobPebbling bp;
  BlobConfig cur;
  auto push = [&](BlobMove m) {
    cur = apply_blob(g, cur, m);
    bp.moves.push_back(std::move(m));
  };
  for (auto& m : p.moves) {
    if (m.kind == BwMove::PlaceBlack) {
      push({BlobMove::Intro, m.v});
      BlobSubconfig acc{bit(m.v), g.pred_set(m.v)};
      for (int u : g.pred(m.v)) {
        if (u < 0) break;
        BlobSubconfig pu{bit(u), 0};
        BlobSubconfig merged = merge_subconfigs(g, acc, pu, u);
        push({BlobMove::Merge, u, acc, pu});
        push({BlobMove::Erase, -1, acc});
        acc = merged;
      }
    } else if (m.kind == BwMove::RemoveBlack) {
      push({BlobMove::Erase, -1, BlobSubconfig{bit(m.v), 0}});
    } else {
      throw BlobError("white move in black pebbling");
    }
  }
  return bp;
}

struct BlobLimits {
  int max_cost = -1;        // default h+3, set by blob_price_exact
  int max_subconfigs = 4;
  bool restrict_inflation = true;  // search with W = W' ∩ lpp(B) exactly
};

struct BlobPriceResult {
  std::optional<int> price;
  long long states_explored = 0;
  BlobPebbling witness;
  std::string note;  // "inconclusive at (cost, size)" when price is empty
};

// Least cost of a pebbling ∅ → {[z]<∅>} within the limits. BFS over
// canonical configs with increasing cost cap.
inline BlobPriceResult blob_price_exact(const LayeredDag& g, BlobLimits lim = {}) {
  if (g.n() > 7) throw BlobError("graph too large for blob price search");
  auto val = validate_blob_pebblable(g);
  if (!val.ok) throw BlobError("not blob-pebblable: " + val.violations.front());
  if (lim.max_cost < 0) lim.max_cost = g.height() + 3;
  BlobPriceResult res;
  // Precompute all chains and their lpp sets.
  std::vector<VSet> chains;
  std::map<VSet, VSet> lpp_of;
  for (VSet s = 1; s < bit(g.n()); ++s)
    if (is_chain(g, s)) {
      chains.push_back(s);
      lpp_of[s] = lpp(g, s);
    }
  BlobConfig goal{{bit(g.sink), 0}};
  for (int k = 1; k <= lim.max_cost; ++k) {
    std::map<BlobConfig, std::pair<BlobConfig, BlobMove>> parent;
    std::deque<BlobConfig> q;
    q.push_back({});
    parent.emplace(BlobConfig{}, std::make_pair(BlobConfig{}, BlobMove{}));
    bool found = false;
    BlobConfig final_cfg;
    auto expand = [&](const BlobConfig& c, BlobMove m) {
      if (found) return;
      BlobConfig nc;
      try {
        nc = apply_blob(g, c, m);
      } catch (const BlobError&) {
        return;
      }
      if (blob_cost(g, nc) > k || (int)nc.size() > lim.max_subconfigs) return;
      auto [it, fresh] = parent.emplace(nc, std::make_pair(c, std::move(m)));
      if (!fresh) return;
      if (it->first == goal) {
        found = true;
        final_cfg = it->first;
        return;
      }
      q.push_back(it->first);
    };
    while (!q.empty() && !found) {
      BlobConfig c = q.front();
      q.pop_front();
      ++res.states_explored;
      for (int v = 0; v < g.n() && !found; ++v)
        expand(c, {BlobMove::Intro, v});
      for (auto& s : c) {  // erasures
        if (found) break;
        expand(c, {BlobMove::Erase, -1, s});
      }
      for (auto& s1 : c)
        for (auto& s2 : c) {  // mergers
          if (found) break;
          if (popcount(s2.B & s1.W) != 1 || (s1.B & s2.W)) continue;
          expand(c, {BlobMove::Merge, std::countr_zero(s2.B & s1.W), s1, s2});
        }
      for (auto& s : c) {  // inflations
        if (found) break;
        for (VSet B : chains) {
          if ((B & s.B) != s.B || (B & s.W)) continue;
          VSet wmin = s.W & lpp_of[B];
          if (lim.restrict_inflation) {
            expand(c, {BlobMove::Inflate, -1, s, {}, {B, wmin}});
          } else {
            VSet free = lpp_of[B] & ~wmin;
            for (VSet extra = free;; extra = (extra - 1) & free) {
              expand(c, {BlobMove::Inflate, -1, s, {}, {B, wmin | extra}});
              if (!extra || found) break;
            }
          }
          if (found) break;
        }
      }
    }
    if (found) {
      res.price = k;
      std::vector<BlobMove> rev;
      BlobConfig cur = final_cfg;
      while (!(cur.empty())) {
        auto& [pc, mv] = parent.at(cur);
        rev.push_back(mv);
        cur = pc;
      }
      res.witness.moves.assign(rev.rbegin(), rev.rend());
      return res;
    }
  }
  res.note = "inconclusive at (" + std::to_string(lim.max_cost) + ", " +
             std::to_string(lim.max_subconfigs) + ")";
  return res;
}

}  // namespace pebres
