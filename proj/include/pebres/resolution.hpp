#pragma once
// Configuration-style resolution: legality checking, space/width/length
// profiling, and explicit refutation builders.

#include <functional>
#include <map>

#include "pebres/formula.hpp"
#include "pebres/pebbling.hpp"

namespace pebres {

struct StepDownload {
  int axiom;  // index into the formula's clause list
};
struct StepInfer {
  int id1, id2;  // live clause ids (premise with x positive first)
  int pivot;     // variable
};
struct StepErase {
  int id;
};

struct Step {
  enum Kind { Download, Infer, Erase } kind;
  int a = 0, b = 0, c = 0;  // Download: axiom; Infer: id1,id2,pivot; Erase: id

  static Step download(int ax) { return {Download, ax, 0, 0}; }
  static Step infer(int id1, int id2, int pivot) { return {Infer, id1, id2, pivot}; }
  static Step erase(int id) { return {Erase, id, 0, 0}; }
};

struct DerivationTrace {
  std::vector<Step> steps;
  std::optional<Clause> goal;  // empty clause if lits empty
};

struct Metrics {
  long long length = 0;    // Download + Infer steps
  int width = 0;           // max clause width seen
  int clause_space = 0;    // max configuration cardinality
  int variable_space = 0;  // max total literal count in the configuration
  std::vector<int> profile;  // per-step configuration cardinality
};

struct ReplayError : std::runtime_error {
  int step_index;
  ReplayError(int i, const std::string& m)
      : std::runtime_error("step " + std::to_string(i) + ": " + m), step_index(i) {}
};

inline Clause resolve(const Clause& c1, const Clause& c2, int x) {
  if (!c1.has(x)) throw std::runtime_error("pivot not positive in first premise");
  if (!c2.has(-x)) throw std::runtime_error("pivot not negative in second premise");
  std::set<Lit> ls;
  for (Lit l : c1.lits)
    if (l != x) ls.insert(l);
  for (Lit l : c2.lits)
    if (l != -x) ls.insert(l);
  for (Lit l : ls)
    if (ls.count(-l)) throw std::runtime_error("tautological resolvent");
  return Clause::of(std::vector<Lit>(ls.begin(), ls.end()));
}

// Replays a trace against a formula, verifying every step and that the
// final configuration contains the goal. Ids are assigned 1,2,... in entry
// order and never reused.
inline Metrics replay(const CnfFormula& f, const DerivationTrace& t,
                      const std::function<void(int, const std::map<int, Clause>&)>&
                          on_config = nullptr) {
  std::map<int, Clause> mem;
  Metrics m;
  int next_id = 1, var_space = 0;
  if (on_config) on_config(-1, mem);
  auto enter = [&](Clause c) {
    m.width = std::max(m.width, c.width());
    var_space += c.width();
    mem.emplace(next_id++, std::move(c));
  };
  for (size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    switch (s.kind) {
      case Step::Download:
        if (s.a < 0 || s.a >= (int)f.clauses.size())
          throw ReplayError((int)i, "axiom index out of range");
        enter(f.clauses[s.a]);
        ++m.length;
        break;
      case Step::Infer: {
        auto i1 = mem.find(s.a), i2 = mem.find(s.b);
        if (i1 == mem.end() || i2 == mem.end())
          throw ReplayError((int)i, "premise not live");
        Clause r;
        try {
          r = resolve(i1->second, i2->second, s.c);
        } catch (const std::exception& e) {
          throw ReplayError((int)i, e.what());
        }
        enter(std::move(r));
        ++m.length;
        break;
      }
      case Step::Erase: {
        auto it = mem.find(s.a);
        if (it == mem.end()) throw ReplayError((int)i, "no such clause");
        var_space -= it->second.width();
        mem.erase(it);
        break;
      }
    }
    m.clause_space = std::max(m.clause_space, (int)mem.size());
    m.variable_space = std::max(m.variable_space, var_space);
    m.profile.push_back((int)mem.size());
    if (on_config) on_config((int)i, mem);
  }
  if (t.goal) {
    bool found = false;
    for (auto& [id, c] : mem)
      if (c == *t.goal) found = true;
    if (!found) throw ReplayError((int)t.steps.size(), "goal not reached");
  }
  return m;
}

// Helper for builders: tracks live ids the same way replay will assign them.
class TraceBuilder {
public:
  explicit TraceBuilder(const PebblingFormula& f) : f_(f) {
    for (size_t i = 0; i < f.cnf.clauses.size(); ++i)
      axiom_index_[f.cnf.clauses[i]] = (int)i;
  }
  int download(const Clause& c) {
    auto it = axiom_index_.find(c);
    if (it == axiom_index_.end()) throw std::runtime_error("no such axiom");
    t_.steps.push_back(Step::download(it->second));
    live_.emplace(next_id_, c);
    return next_id_++;
  }
  // resolve a (x positive) with b (x negative); orders premises itself
  int resolve_on(int a, int b, int pivot) {
    bool a_pos = live_.at(a).has(pivot);
    int id1 = a_pos ? a : b, id2 = a_pos ? b : a;
    Clause r = resolve(live_.at(id1), live_.at(id2), pivot);
    t_.steps.push_back(Step::infer(id1, id2, pivot));
    live_.emplace(next_id_, std::move(r));
    return next_id_++;
  }
  void erase(int id) {
    live_.erase(id);
    t_.steps.push_back(Step::erase(id));
  }
  const Clause& clause(int id) const { return live_.at(id); }
  DerivationTrace finish(std::optional<Clause> goal) {
    t_.goal = std::move(goal);
    return std::move(t_);
  }

private:
  const PebblingFormula& f_;
  DerivationTrace t_;
  std::map<Clause, int> axiom_index_;
  std::map<int, Clause> live_;
  int next_id_ = 1;
};

// Derive All+(w) from live All+(u), All+(v) and w's pebbling axioms,
// erasing all intermediates. Returns the id of All+(w). Peak scratch while
// running: row accumulator + fold accumulator + freshly downloaded axiom
// + one resolvent = 4 clauses beyond the invariant set.
inline int derive_allplus(TraceBuilder& tb, const PebblingFormula& f, int w,
                          int id_u, int id_v) {
  const LayeredDag& g = *f.dag;
  int u = g.pred(w)[0], v = g.pred(w)[1];
  int d = f.degree;
  int fold = id_u;  // P_0 = All+(u); fold becomes x(u)_{i+1..d} | All+(w)
  for (int i = 1; i <= d; ++i) {
    // Build A_i = !x(u)_i | All+(w) by eliminating x(v)_j via All+(v).
    std::vector<Lit> ax{-f.var(u, i), -f.var(v, 1)};
    for (int k = 1; k <= d; ++k) ax.push_back(f.var(w, k));
    int acc = tb.download(Clause::of(ax));
    int row = tb.resolve_on(id_v, acc, f.var(v, 1));
    tb.erase(acc);
    acc = row;  // !x(u)_i | x(v)_{2..d} | All+(w)
    for (int j = 2; j <= d; ++j) {
      std::vector<Lit> axj{-f.var(u, i), -f.var(v, j)};
      for (int k = 1; k <= d; ++k) axj.push_back(f.var(w, k));
      int aid = tb.download(Clause::of(axj));
      int nxt = tb.resolve_on(acc, aid, f.var(v, j));
      tb.erase(aid);
      tb.erase(acc);
      acc = nxt;
    }
    // acc = A_i; fold it into the running P.
    int nfold = tb.resolve_on(fold, acc, f.var(u, i));
    tb.erase(acc);
    if (fold != id_u) tb.erase(fold);
    fold = nfold;
  }
  return fold;  // All+(w)
}

// Resolve All+(z) against the d target units down to the empty clause.
inline void refute_with_targets(TraceBuilder& tb, const PebblingFormula& f,
                                int id_allz) {
  int acc = id_allz;
  for (int i = 1; i <= f.degree; ++i) {
    int t = tb.download(Clause::of({-f.var(f.dag->sink, i)}));
    int nxt = tb.resolve_on(acc, t, f.var(f.dag->sink, i));
    tb.erase(t);
    tb.erase(acc);
    acc = nxt;
  }
}

// Refutation (or All+(z)-derivation) following a black pebbling: whenever
// the pebbling holds black pebbles on V, memory holds {All+(v) : v in V}
// plus at most 4 scratch clauses.
inline DerivationTrace build_from_pebbling(const LayeredDag& g, int d,
                                           const Pebbling& p,
                                           const PebblingFormula& f) {
  if (f.degree != d || f.dag != &g) throw std::runtime_error("formula mismatch");
  check_pebbling(g, p);  // throws on illegal pebblings
  TraceBuilder tb(f);
  std::map<int, int> idof;  // vertex -> live All+(v) id
  for (auto& mv : p.moves) {
    if (mv.kind == BwMove::PlaceBlack) {
      int w = mv.v;
      if (idof.count(w)) continue;
      if (g.is_source(w)) {
        idof[w] = tb.download(f.all_plus(bit(w)));
      } else {
        idof[w] = derive_allplus(tb, f, w, idof.at(g.pred(w)[0]),
                                 idof.at(g.pred(w)[1]));
      }
    } else if (mv.kind == BwMove::RemoveBlack) {
      auto it = idof.find(mv.v);
      if (it != idof.end() && mv.v != g.sink) {
        tb.erase(it->second);
        idof.erase(it);
      }
    } else {
      throw std::runtime_error("white move in black pebbling");
    }
  }
  int idz = idof.at(g.sink);
  if (f.targets_present) {
    refute_with_targets(tb, f, idz);
    return tb.finish(Clause::of({}));
  }
  return tb.finish(f.all_plus(bit(g.sink)));
}

// Bottom-up refutation: derive All+(v) level by level in topological order
// (ties by vertex id), erasing a level once the one above is complete.
// Length O(d^2 |V|), width <= 2d (= d+2 for d <= 2).
inline DerivationTrace build_linear(const LayeredDag& g, int d,
                                    const PebblingFormula& f) {
  if (f.degree != d || f.dag != &g) throw std::runtime_error("formula mismatch");
  TraceBuilder tb(f);
  std::map<int, int> idof;
  for (int v = 0; v < g.n(); ++v) {  // ids are topologically sorted
    if (g.is_source(v))
      idof[v] = tb.download(f.all_plus(bit(v)));
    else
      idof[v] = derive_allplus(tb, f, v, idof.at(g.pred(v)[0]), idof.at(g.pred(v)[1]));
    // Erase predecessors whose successors are all derived.
    if (!g.is_source(v))
      for (int u : g.pred(v)) {
        bool done = true;
        for (int s : g.succ(u))
          if (!idof.count(s)) done = false;
        if (done) {
          tb.erase(idof.at(u));
          idof.erase(u);
        }
      }
  }
  if (f.targets_present) {
    refute_with_targets(tb, f, idof.at(g.sink));
    return tb.finish(Clause::of({}));
  }
  return tb.finish(f.all_plus(bit(g.sink)));
}

// Degree-1 tree-like refutation: move false literals downwards from the
// sink axiom, then cancel sources and the target unit. Clause space <= 3.
inline DerivationTrace build_degree1(const LayeredDag& g,
                                     const PebblingFormula& f) {
  if (f.degree != 1) throw std::runtime_error("build_degree1 requires d=1");
  TraceBuilder tb(f);
  auto axiom_of = [&](int w) {
    std::vector<Lit> ls{-f.var(g.pred(w)[0], 1), -f.var(g.pred(w)[1], 1),
                        f.var(w, 1)};
    return Clause::of(ls);
  };
  int acc = tb.download(axiom_of(g.sink));
  // Expand non-source negative literals in reverse topological order.
  for (int v = g.n() - 1; v >= 0; --v) {
    if (g.is_source(v) || v == g.sink) continue;
    if (!tb.clause(acc).has(-f.var(v, 1))) continue;
    int ax = tb.download(axiom_of(v));
    int nxt = tb.resolve_on(ax, acc, f.var(v, 1));
    tb.erase(ax);
    tb.erase(acc);
    acc = nxt;
  }
  // Cancel sources.
  for (int v = 0; v < g.n(); ++v) {
    if (!g.is_source(v) || !tb.clause(acc).has(-f.var(v, 1))) continue;
    int ax = tb.download(f.all_plus(bit(v)));
    int nxt = tb.resolve_on(ax, acc, f.var(v, 1));
    tb.erase(ax);
    tb.erase(acc);
    acc = nxt;
  }
  if (f.targets_present) {
    refute_with_targets(tb, f, acc);
    return tb.finish(Clause::of({}));
  }
  return tb.finish(f.all_plus(bit(g.sink)));
}

// Trace text format: header `p drv <cnf-file>`, then `d <axiom>` /
// `i <id1> <id2> <var>` / `e <id>` lines.
inline void write_trace(std::ostream& os, const DerivationTrace& t,
                        const std::string& cnf_name) {
  os << "p drv " << cnf_name << "\n";
  for (auto& s : t.steps) switch (s.kind) {
      case Step::Download: os << "d " << s.a << "\n"; break;
      case Step::Infer: os << "i " << s.a << " " << s.b << " " << s.c << "\n"; break;
      case Step::Erase: os << "e " << s.a << "\n"; break;
    }
}

inline DerivationTrace read_trace(std::istream& is) {
  DerivationTrace t;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw == "p") {
      header = true;
      continue;
    }
    if (!header) throw std::runtime_error("trace body before header");
    if (kw == "d") {
      int a;
      ss >> a;
      t.steps.push_back(Step::download(a));
    } else if (kw == "i") {
      int a, b, c;
      ss >> a >> b >> c;
      t.steps.push_back(Step::infer(a, b, c));
    } else if (kw == "e") {
      int a;
      ss >> a;
      t.steps.push_back(Step::erase(a));
    } else {
      throw std::runtime_error("unknown trace line: " + line);
    }
  }
  return t;
}

}  // namespace pebres
