#pragma once
// Layered DAGs: construction, reachability, path/chain utilities.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pebres {

// Vertex sets over graphs with at most 64 vertices, as bitmasks.
using VSet = std::uint64_t;

inline int popcount(VSet s) { return std::popcount(s); }
inline VSet bit(int v) { return VSet{1} << v; }
inline bool has(VSet s, int v) { return (s >> v) & 1; }

inline std::vector<int> to_vec(VSet s) {
  std::vector<int> out;
  while (s) {
    int v = std::countr_zero(s);
    out.push_back(v);
    s &= s - 1;
  }
  return out;
}

struct DagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Layered DAG: vertices are dense ids ordered by (level, index); all edges
// run between consecutive levels; non-sources have indegree exactly 2;
// unique sink.
class LayeredDag {
public:
  int num_levels = 0;                 // height h = num_levels - 1
  std::vector<int> level_of;          // per vertex
  std::vector<int> index_of;          // 1-based index within level
  std::vector<std::vector<int>> levels;  // vertex ids per level
  std::vector<std::pair<int, int>> edges;       // (from, to)
  std::vector<std::array<int, 2>> preds_;       // {-1,-1} for sources
  std::vector<std::vector<int>> succs_;
  int sink = -1;
  bool pyramid_shape = false;

  int n() const { return (int)level_of.size(); }
  int height() const { return num_levels - 1; }
  bool is_source(int v) const { return preds_[v][0] < 0; }
  const std::array<int, 2>& pred(int v) const { return preds_[v]; }
  VSet pred_set(int v) const {
    return is_source(v) ? 0 : (bit(preds_[v][0]) | bit(preds_[v][1]));
  }
  const std::vector<int>& succ(int v) const { return succs_[v]; }
  int level(int v) const { return level_of[v]; }

  VSet sources() const {
    VSet s = 0;
    for (int v = 0; v < n(); ++v)
      if (is_source(v)) s |= bit(v);
    return s;
  }
  VSet all_vertices() const {
    return n() == 64 ? ~VSet{0} : (bit(n()) - 1);
  }

  // below(v): v plus everything that reaches v.
  VSet below(int v) const { return below_[v]; }
  VSet above(int v) const { return above_[v]; }
  VSet strictly_below(int v) const { return below_[v] & ~bit(v); }
  VSet strictly_above(int v) const { return above_[v] & ~bit(v); }
  VSet below(VSet s) const {
    VSet r = 0;
    for (int v : to_vec(s)) r |= below_[v];
    return r;
  }

  void finalize() {
    int nv = n();
    if (nv > 64) throw DagError("graph too large (> 64 vertices)");
    preds_.assign(nv, {-1, -1});
    succs_.assign(nv, {});
    std::vector<int> indeg(nv, 0);
    for (auto [a, b] : edges) {
      if (a < 0 || b < 0 || a >= nv || b >= nv)
        throw DagError("edge endpoint out of range");
      if (level_of[b] != level_of[a] + 1)
        throw DagError("non-consecutive edge");
      if (indeg[b] >= 2) throw DagError("indegree exceeds 2");
      preds_[b][indeg[b]++] = a;
      succs_[a].push_back(b);
    }
    for (int v = 0; v < nv; ++v) {
      if (level_of[v] == 0) {
        if (indeg[v] != 0) throw DagError("source with incoming edge");
      } else if (indeg[v] != 2) {
        throw DagError("non-source vertex with indegree != 2");
      }
      if (preds_[v][0] > preds_[v][1]) std::swap(preds_[v][0], preds_[v][1]);
    }
    sink = -1;
    for (int v = 0; v < nv; ++v)
      if (succs_[v].empty()) {
        if (sink >= 0) throw DagError("multiple sinks");
        sink = v;
      }
    if (sink < 0) throw DagError("no sink");
    below_.assign(nv, 0);
    above_.assign(nv, 0);
    for (int v = 0; v < nv; ++v) {  // ids are topologically sorted
      below_[v] = bit(v);
      if (!is_source(v)) below_[v] |= below_[preds_[v][0]] | below_[preds_[v][1]];
    }
    for (int v = nv - 1; v >= 0; --v) {
      above_[v] = bit(v);
      for (int s : succs_[v]) above_[v] |= above_[s];
    }
    pyramid_shape = detect_pyramid();
  }

private:
  std::vector<VSet> below_, above_;

  bool detect_pyramid() const {
    int h = height();
    for (int L = 0; L <= h; ++L)
      if ((int)levels[L].size() != h + 1 - L) return false;
    for (int L = 1; L <= h; ++L)
      for (int i = 0; i < (int)levels[L].size(); ++i) {
        int v = levels[L][i];
        if (preds_[v][0] != levels[L - 1][i] || preds_[v][1] != levels[L - 1][i + 1])
          return false;
      }
    return true;
  }
};

inline LayeredDag make_from_levels(const std::vector<int>& counts,
                                   const std::vector<std::pair<int, int>>& edges) {
  LayeredDag g;
  g.num_levels = (int)counts.size();
  g.levels.resize(counts.size());
  int id = 0;
  for (int L = 0; L < (int)counts.size(); ++L)
    for (int i = 0; i < counts[L]; ++i) {
      g.level_of.push_back(L);
      g.index_of.push_back(i + 1);
      g.levels[L].push_back(id++);
    }
  g.edges = edges;
  g.finalize();
  return g;
}

inline LayeredDag make_pyramid(int h) {
  if (h < 1) throw DagError("pyramid height must be >= 1");
  std::vector<int> counts;
  for (int L = 0; L <= h; ++L) counts.push_back(h + 1 - L);
  std::vector<std::pair<int, int>> edges;
  int base = 0;
  for (int L = 1; L <= h; ++L) {
    int prev = base;
    base += h + 1 - (L - 1);
    for (int i = 0; i < h + 1 - L; ++i) {
      edges.push_back({prev + i, base + i});
      edges.push_back({prev + i + 1, base + i});
    }
  }
  return make_from_levels(counts, edges);
}

inline LayeredDag make_tree(int h) {
  if (h < 1) throw DagError("tree height must be >= 1");
  // Level L (from the leaves) holds 2^(h-L) vertices; root is the sink.
  std::vector<int> counts;
  for (int L = 0; L <= h; ++L) counts.push_back(1 << (h - L));
  std::vector<int> base(h + 1);
  int id = 0;
  for (int L = 0; L <= h; ++L) {
    base[L] = id;
    id += counts[L];
  }
  std::vector<std::pair<int, int>> edges;
  for (int L = 1; L <= h; ++L)
    for (int i = 0; i < counts[L]; ++i) {
      edges.push_back({base[L - 1] + 2 * i, base[L] + i});
      edges.push_back({base[L - 1] + 2 * i + 1, base[L] + i});
    }
  return make_from_levels(counts, edges);
}

inline bool is_chain(const LayeredDag& g, VSet B) {
  auto vs = to_vec(B);
  for (size_t i = 0; i + 1 < vs.size(); ++i)
    if (!has(g.below(vs[i + 1]), vs[i])) return false;  // ids sorted by level
  return true;
}

inline int bottom_of(const LayeredDag& g, VSet B) {
  (void)g;
  return std::countr_zero(B);  // lowest id = lowest level on a chain
}
inline int top_of(const LayeredDag& g, VSet B) {
  (void)g;
  return 63 - std::countl_zero(B);
}

// All source paths P with B <= P ending at top(B), as vertex sets.
inline std::vector<VSet> paths_via(const LayeredDag& g, VSet B) {
  if (!B) throw DagError("empty chain");
  if (!is_chain(g, B)) throw DagError("not totally ordered");
  std::vector<VSet> paths;
  int t = top_of(g, B);
  // Walk down from t choosing predecessors, requiring B on the path.
  std::vector<std::pair<int, VSet>> stack{{t, bit(t)}};
  while (!stack.empty()) {
    auto [v, p] = stack.back();
    stack.pop_back();
    if (g.is_source(v)) {
      if ((B & ~p) == 0) paths.push_back(p);
      continue;
    }
    for (int u : g.pred(v)) {
      // Prune: every B-vertex at or below u's level must be reachable below u.
      VSet need = B & ~p;
      if ((need & ~g.below(u)) == 0) stack.push_back({u, p | bit(u)});
    }
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

// Legal pebble positions: union of source paths via B, minus B.
inline VSet lpp(const LayeredDag& g, VSet B) {
  VSet u = 0;
  for (VSet p : paths_via(g, B)) u |= p;
  return u & ~B;
}

// A Path is a contiguous chain (each non-top member has its immediate
// successor in the set).
inline bool is_path(const LayeredDag& g, VSet P) {
  if (!P || !is_chain(g, P)) return false;
  auto vs = to_vec(P);
  for (size_t i = 0; i + 1 < vs.size(); ++i) {
    auto& sc = g.succ(vs[i]);
    if (std::find(sc.begin(), sc.end(), vs[i + 1]) == sc.end()) return false;
  }
  return true;
}

// Converging source paths for a path P from u to w: one path per vertex
// v_i of P above u, coinciding with P from v_i onward and arriving at v_i
// in a straight line through the off-path predecessor of v_i (extend the
// edge other->v_i downward; this keeps pairwise intersections inside P).
inline std::vector<VSet> converging_paths(const LayeredDag& g, VSet P) {
  if (!is_path(g, P)) throw DagError("not a contiguous path");
  auto vs = to_vec(P);
  std::vector<VSet> out;
  for (size_t i = 1; i < vs.size(); ++i) {
    int vi = vs[i], prev = vs[i - 1];
    int other = g.pred(vi)[0] == prev ? g.pred(vi)[1] : g.pred(vi)[0];
    VSet q = bit(vi) | bit(other);
    int c = vi, d = other;
    while (!g.is_source(d)) {
      // Straight line: keep descending in the direction of edge d -> c.
      int next;
      if (g.pyramid_shape) {
        int shift = g.index_of[d] - g.index_of[c];  // 0 = left, 1 = right
        next = g.levels[g.level(d) - 1][g.index_of[d] - 1 + shift];
      } else {
        next = g.pred(d)[0];
      }
      c = d;
      d = next;
      q |= bit(d);
    }
    for (size_t j = i + 1; j < vs.size(); ++j) q |= bit(vs[j]);
    out.push_back(q);
  }
  return out;
}

struct Validation {
  bool ok = true;
  std::vector<std::string> violations;
};

inline Validation validate_blob_pebblable(const LayeredDag& g) {
  Validation r;
  auto fail = [&](const std::string& m) {
    r.ok = false;
    r.violations.push_back(m);
  };
  int sinks = 0;
  for (int v = 0; v < g.n(); ++v)
    if (g.succ(v).empty()) ++sinks;
  if (sinks != 1) fail("sink count != 1");
  for (int v = 0; v < g.n(); ++v) {
    int d = g.is_source(v) ? 0 : 2;
    if (g.level(v) == 0 && d != 0) fail("level-0 vertex with predecessors");
    if (g.level(v) > 0 && d != 2) fail("non-source with indegree != 2");
  }
  // Sibling non-reachability (automatic for layered graphs, still asserted).
  for (int v = 0; v < g.n(); ++v)
    if (!g.is_source(v)) {
      int a = g.pred(v)[0], b = g.pred(v)[1];
      if (has(g.below(a), b) || has(g.below(b), a)) fail("siblings reachable");
    }
  return r;
}

// Graph text format: `layered <num_levels>`, `level <L> <count>`, `edge a b`.
inline void write_graph(std::ostream& os, const LayeredDag& g) {
  os << "layered " << g.num_levels << "\n";
  for (int L = 0; L < g.num_levels; ++L)
    os << "level " << L << " " << g.levels[L].size() << "\n";
  for (auto [a, b] : g.edges) os << "edge " << a << " " << b << "\n";
}

inline LayeredDag read_graph(std::istream& is) {
  std::string line, kw;
  int num_levels = -1;
  std::vector<int> counts;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    ss >> kw;
    if (kw == "layered") {
      ss >> num_levels;
      counts.assign(num_levels, 0);
    } else if (kw == "level") {
      int L, c;
      ss >> L >> c;
      if (num_levels < 0 || L < 0 || L >= num_levels)
        throw DagError("level line out of range");
      counts[L] = c;
    } else if (kw == "edge") {
      int a, b;
      ss >> a >> b;
      edges.push_back({a, b});
    } else {
      throw DagError("unknown line: " + line);
    }
  }
  if (num_levels < 0) throw DagError("missing 'layered' header");
  return make_from_levels(counts, edges);
}

// Human-readable vertex name, e.g. s1/u2/z for pyramids of height <= 6.
inline std::string vertex_name(const LayeredDag& g, int v) {
  static const char* letters = "suvwxy";
  int L = g.level(v), i = g.index_of[v];
  if (g.pyramid_shape && v == g.sink) return "z";
  char c = (L < 6) ? letters[L] : 'a';
  return std::string(1, c) + std::to_string(i);
}

}  // namespace pebres
