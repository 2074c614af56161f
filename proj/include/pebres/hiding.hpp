#pragma once
// Hiding/blocking analysis: hidden vertices, blockers, measures, potentials,
// tight subsets, necessary hiding subsets, hiding-set graphs, mhs_j,
// spreading checks, white elimination, and the measure preorder.

#include "pebres/blob.hpp"

namespace pebres {

// Theory constants (used by verifiers, never by the engines).
inline constexpr int kKlaweCK = 13;
inline constexpr int kBlobInductionFactor = 2 * kKlaweCK + 1;  // 27

struct HidingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All w such that every source path ending at w intersects U.
inline VSet hidden_vertices(const LayeredDag& g, VSet U) {
  VSet h = 0;
  for (int v = 0; v < g.n(); ++v) {  // ids are topologically sorted
    bool hv;
    if (has(U, v))
      hv = true;
    else if (g.is_source(v))
      hv = false;
    else
      hv = has(h, g.pred(v)[0]) && has(h, g.pred(v)[1]);
    if (hv) h |= bit(v);
  }
  return h;
}

// True iff some source path via B (ending at top(B)) avoids `avoid`.
inline bool exists_unblocked_path(const LayeredDag& g, VSet B, VSet avoid) {
  int t = top_of(g, B);
  if (has(avoid, t)) return false;
  std::vector<std::pair<int, VSet>> stack{{t, B & ~bit(t)}};
  while (!stack.empty()) {
    auto [v, need] = stack.back();
    stack.pop_back();
    if (g.is_source(v)) {
      if (!need) return true;
      continue;
    }
    for (int u : g.pred(v)) {
      if (has(avoid, u)) continue;
      VSet rest = need & ~bit(u);
      if (rest & ~g.below(u)) continue;  // some required vertex unreachable
      stack.push_back({u, rest});
    }
  }
  return false;
}

// U blocks [B]<W>: U ∪ W intersects every source path via B.
inline bool blocks(const LayeredDag& g, VSet U, const BlobSubconfig& sc) {
  return !exists_unblocked_path(g, sc.B, U | sc.W);
}

inline bool blocks_config(const LayeredDag& g, VSet U, const BlobConfig& c) {
  for (auto& sc : c)
    if (!blocks(g, U, sc)) return false;
  return true;
}

// U hides [B]<W>: U ∪ W hides bot(B).
inline bool hides_subconfig(const LayeredDag& g, VSet U, const BlobSubconfig& sc) {
  return has(hidden_vertices(g, U | sc.W), bottom_of(g, sc.B));
}

struct MeasureProfile {
  int measure = 0;
  std::vector<int> mj;  // partial measures, j = 0..height
};

// Partial measure m_j = j + 2|U_{>=j}| when U_{>=j} ≠ ∅, else 0; measure is
// the max over j. Multiset counting: repetitions are charged.
inline MeasureProfile measure(const LayeredDag& g, const std::vector<int>& U) {
  MeasureProfile p;
  p.mj.assign(g.height() + 1, 0);
  for (int j = 0; j <= g.height(); ++j) {
    int cnt = 0;
    for (int u : U)
      if (g.level(u) >= j) ++cnt;
    p.mj[j] = cnt ? j + 2 * cnt : 0;
    p.measure = std::max(p.measure, p.mj[j]);
  }
  return p;
}

inline MeasureProfile measure_set(const LayeredDag& g, VSet U) {
  return measure(g, to_vec(U));
}

// U ≼_m V: for every j there is an i ≤ j with m_j(U) ≤ m_i(V).
inline bool measure_preorder(const LayeredDag& g, VSet U, VSet V) {
  auto mu = measure_set(g, U), mv = measure_set(g, V);
  int best = 0;
  for (int j = 0; j <= g.height(); ++j) {
    best = std::max(best, mv.mj[j]);  // max_{i<=j} m_i(V)
    if (mu.mj[j] > best) return false;
  }
  return true;
}

struct PotentialResult {
  int potential = 0;
  VSet blocker = 0;  // witness U of minimum measure
  bool exhaustive = true;  // size-bounded exact search is used beyond 12 vertices
};

// Min-measure U satisfying pred, found exactly: exhaustive for |V| <= 12,
// otherwise enumeration by increasing |U| with the bound m(U) >= 2|U| for
// U ≠ ∅, seeded by `seed` (which must satisfy pred).
template <typename Pred>
PotentialResult min_measure_blocker(const LayeredDag& g, VSet seed, Pred pred) {
  PotentialResult res;
  if (g.n() <= 12) {
    res.potential = -1;
    for (VSet U = 0; U < bit(g.n()); ++U) {
      if (!pred(U)) continue;
      int m = measure_set(g, U).measure;
      if (res.potential < 0 || m < res.potential) {
        res.potential = m;
        res.blocker = U;
      }
    }
    if (res.potential < 0) throw HidingError("no blocker exists");
    return res;
  }
  res.exhaustive = false;
  if (!pred(seed)) throw HidingError("potential seed does not block");
  res.potential = measure_set(g, seed).measure;
  res.blocker = seed;
  if (pred(0)) return {0, 0, false};
  std::vector<int> verts(g.n());
  for (int i = 0; i < g.n(); ++i) verts[i] = i;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int from) {
    if ((int)cur.size() >= 1) {
      VSet U = 0;
      for (int v : cur) U |= bit(v);
      if (pred(U)) {
        int m = measure_set(g, U).measure;
        if (m < res.potential) {
          res.potential = m;
          res.blocker = U;
        }
      }
    }
    // Any improvement must satisfy 2|U| <= m(U) < current best.
    if (2 * ((int)cur.size() + 1) >= res.potential) return;
    for (int i = from; i < g.n(); ++i) {
      cur.push_back(verts[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return res;
}

// Potential of a BW configuration: min m(U) over U with B ⊆ hidden(U ∪ W).
inline PotentialResult potential_bw(const LayeredDag& g, const BwConfig& c) {
  return min_measure_blocker(g, c.B, [&](VSet U) {
    return (c.B & ~hidden_vertices(g, U | c.W)) == 0;
  });
}

// Potential of a blob configuration: min m(U) over U blocking every
// subconfiguration.
inline PotentialResult potential_blob(const LayeredDag& g, const BlobConfig& c) {
  VSet seed = 0;
  for (auto& sc : c) seed |= bit(bottom_of(g, sc.B));
  return min_measure_blocker(g, seed,
                             [&](VSet U) { return blocks_config(g, U, c); });
}

// The unique minimal (tight) subset U* ⊆ U with hidden(U*) = hidden(U),
// built level by level: a vertex already hidden by the kept vertices below
// is dropped.
inline VSet tight_subset(const LayeredDag& g, VSet U) {
  VSet kept = 0;
  for (int v = 0; v < g.n(); ++v)  // id order = level order
    if (has(U, v) && !has(hidden_vertices(g, kept), v)) kept |= bit(v);
  return kept;
}

inline bool is_tight(const LayeredDag& g, VSet U) {
  for (int u : to_vec(U))
    if (has(hidden_vertices(g, U & ~bit(u)), u)) return false;
  return true;
}

// X<x>: the u ∈ X admitting a source path P to x with P ∩ X = {u}.
inline VSet necessary_hiding(const LayeredDag& g, VSet X, int x) {
  if (!has(hidden_vertices(g, X), x)) throw HidingError("vertex not hidden");
  VSet out = 0;
  for (int u : to_vec(X & g.below(x))) {
    VSet avoid = X & ~bit(u);
    // Lower part: source path to u avoiding X \ {u}.
    std::vector<char> dn(g.n(), 0);
    for (int v = 0; v <= u; ++v) {
      if (has(avoid, v)) continue;
      dn[v] = g.is_source(v) ? 1 : (dn[g.pred(v)[0]] || dn[g.pred(v)[1]]);
    }
    if (!dn[u]) continue;
    // Upper part: path from u up to x avoiding X \ {u}.
    std::vector<char> up(g.n(), 0);
    up[u] = 1;
    for (int v = u + 1; v <= x; ++v) {
      if (has(avoid, v) || g.is_source(v)) continue;
      up[v] = up[g.pred(v)[0]] || up[g.pred(v)[1]];
    }
    if (up[x]) out |= bit(u);
  }
  if (is_tight(g, X) && !has(hidden_vertices(g, out), x))
    throw HidingError("necessary hiding subset fails to hide its vertex");
  return out;
}

struct HidingSetGraph {
  VSet verts = 0;                         // hidden(X)
  std::vector<std::pair<int, int>> edges;
  std::vector<VSet> components;
};

// Hiding-set graph over hidden(X). The defining edge test intersects
// below-cones with hidden(X<u>); on pyramids the equivalent shortcut
// X<u> ∩ X<v> ≠ ∅ is used.
inline HidingSetGraph hiding_graph(const LayeredDag& g, VSet X) {
  if (!is_tight(g, X)) throw HidingError("hiding graph requires a tight set");
  HidingSetGraph hg;
  hg.verts = hidden_vertices(g, X);
  auto vs = to_vec(hg.verts);
  std::map<int, VSet> nec, nechid;
  for (int v : vs) {
    nec[v] = necessary_hiding(g, X, v);
    nechid[v] = hidden_vertices(g, nec[v]);
  }
  std::map<int, int> comp;  // union-find
  for (int v : vs) comp[v] = v;
  std::function<int(int)> find = [&](int v) {
    return comp[v] == v ? v : comp[v] = find(comp[v]);
  };
  for (size_t i = 0; i < vs.size(); ++i)
    for (size_t j = i + 1; j < vs.size(); ++j) {
      int u = vs[i], v = vs[j];
      bool edge;
      if (g.pyramid_shape)
        edge = (nec[u] & nec[v]) != 0;
      else
        edge = (g.below(u) & nechid[u] & g.below(v) & nechid[v]) != 0;
      if (edge) {
        hg.edges.push_back({u, v});
        comp[find(u)] = find(v);
      }
    }
  std::map<int, VSet> groups;
  for (int v : vs) groups[find(v)] |= bit(v);
  for (auto& [r, s] : groups) hg.components.push_back(s);
  // Each component V_i must satisfy V_i = hidden(X ∩ V_i).
  for (VSet c : hg.components)
    if (hidden_vertices(g, X & c) != c)
      throw HidingError("component is not hidden by its own part of X");
  return hg;
}

inline bool hiding_connected(const LayeredDag& g, VSet X) {
  return hiding_graph(g, X).components.size() == 1;
}

// mhs_j(X): size of a smallest Y with Y = Y_{>=j} hiding X_{>=j}.
inline int mhs(const LayeredDag& g, int j, VSet X) {
  VSet xj = 0, cand = 0;
  for (int v = 0; v < g.n(); ++v)
    if (g.level(v) >= j) {
      cand |= bit(v);
      if (has(X, v)) xj |= bit(v);
    }
  if (!xj) return 0;
  if (popcount(cand) > 20) throw HidingError("mhs budget exceeded");
  int best = popcount(xj);  // Y = X_{>=j} always works
  auto cv = to_vec(cand);
  // Enumerate subsets of cand by increasing size with early exit.
  for (int size = 0; size < best; ++size) {
    std::vector<int> cur;
    bool found = false;
    std::function<void(int)> rec = [&](int from) {
      if (found) return;
      if ((int)cur.size() == size) {
        VSet Y = 0;
        for (int v : cur) Y |= bit(v);
        if ((xj & ~hidden_vertices(g, Y)) == 0) found = true;
        return;
      }
      for (int i = from; i < (int)cv.size() && !found; ++i) {
        cur.push_back(cv[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    if (found) {
      best = size;
      break;
    }
  }
  return best;
}

struct SpreadingResult {
  bool pass = true;
  VSet counterexample_x = 0;
  int counterexample_j = -1;
};

// Spreading inequality |X| >= mhs_j(hidden(X)) + j - minlevel(X) for every
// tight, hiding-connected, nonempty X and every j = 1..maxlevel(hidden(X)).
inline SpreadingResult spreading_check(const LayeredDag& g) {
  if (g.n() > 10) throw HidingError("spreading check budget exceeded");
  for (VSet X = 1; X < bit(g.n()); ++X) {
    if (!is_tight(g, X) || !hiding_connected(g, X)) continue;
    int minlevel = g.height();
    for (int v : to_vec(X)) minlevel = std::min(minlevel, g.level(v));
    VSet H = hidden_vertices(g, X);
    int maxlevel_h = 0;
    for (int v : to_vec(H)) maxlevel_h = std::max(maxlevel_h, g.level(v));
    for (int j = 1; j <= maxlevel_h; ++j)
      if (popcount(X) < mhs(g, j, H) + j - minlevel)
        return {false, X, j};
  }
  return {};
}

// [B]<W> is self-blocking when W alone blocks B.
inline bool self_blocking(const LayeredDag& g, const BlobSubconfig& sc) {
  return blocks(g, 0, sc);
}

struct Classification {
  BlobConfig hidden, just_blocked;  // 𝕊_H / 𝕊_B
  VSet bl_h = 0, bl_b = 0;          // their bottom vertices
  VSet w_h = 0, w_b = 0;            // whites below those bottoms
};

inline Classification classify(const LayeredDag& g, const BlobConfig& c, VSet U) {
  if (!blocks_config(g, U, c)) throw HidingError("set does not block configuration");
  Classification r;
  for (auto& sc : c) {
    int b = bottom_of(g, sc.B);
    VSet wb = sc.W & g.strictly_below(b);
    if (hides_subconfig(g, U, sc)) {
      r.hidden.push_back(sc);
      r.bl_h |= bit(b);
      r.w_h |= wb;
    } else {
      r.just_blocked.push_back(sc);
      r.bl_b |= bit(b);
      r.w_b |= wb;
    }
  }
  return r;
}

// White elimination: drop self-blockers, then scan each subconfig's whites
// in vertex-id order, removing w whenever U ∪ (W ∖ {w}) still blocks B.
inline BlobConfig white_eliminate(const LayeredDag& g, const BlobConfig& c, VSet U) {
  if (!blocks_config(g, U, c)) throw HidingError("set does not block configuration");
  BlobConfig out;
  for (auto sc : c) {
    if (self_blocking(g, sc)) continue;
    for (int w : to_vec(sc.W)) {
      BlobSubconfig trial{sc.B, sc.W & ~bit(w)};
      if (blocks(g, U, trial)) sc.W = trial.W;
    }
    out.push_back(sc);
  }
  canonicalize(g, out);
  return out;
}

}  // namespace pebres
