#pragma once
// Pebbling-contradiction CNF construction and DIMACS interchange.

#include <cstdlib>
#include <map>
#include <optional>
#include <set>

#include "pebres/dag.hpp"

namespace pebres {

// A literal is a signed variable id (DIMACS convention); a clause is a set
// of literals over pairwise distinct variables.
using Lit = int;

struct Clause {
  std::vector<Lit> lits;  // sorted by |lit|, unique variables

  static Clause of(std::vector<Lit> ls) {
    std::sort(ls.begin(), ls.end(),
              [](Lit a, Lit b) { return std::abs(a) < std::abs(b); });
    for (size_t i = 0; i + 1 < ls.size(); ++i)
      if (std::abs(ls[i]) == std::abs(ls[i + 1]))
        throw std::runtime_error("variable repeated in clause");
    return Clause{std::move(ls)};
  }
  int width() const { return (int)lits.size(); }
  bool operator==(const Clause&) const = default;
  auto operator<=>(const Clause&) const = default;
  bool has(Lit l) const {
    return std::find(lits.begin(), lits.end(), l) != lits.end();
  }
};

struct VarInfo {
  int vertex;  // dag vertex id
  int idx;     // 1..d
};

struct CnfFormula {
  int nvars = 0;
  std::vector<Clause> clauses;
  std::vector<VarInfo> varmap;  // optional; varmap[var-1] when present

  bool has_map() const { return (int)varmap.size() == nvars; }
};

enum class AxiomGroup { Source, Pebbling, Target };

struct PebblingFormula {
  CnfFormula cnf;
  const LayeredDag* dag = nullptr;
  int degree = 1;
  std::vector<AxiomGroup> group;  // per clause
  std::vector<int> axiom_vertex;  // vertex each clause belongs to (Ax(v))
  bool targets_present = true;

  // Variable id of x(v)_i, i in 1..d.
  int var(int v, int i) const { return degree * v + i; }

  Clause all_plus(VSet B) const {
    std::vector<Lit> ls;
    for (int v : to_vec(B))
      for (int i = 1; i <= degree; ++i) ls.push_back(var(v, i));
    return Clause::of(std::move(ls));
  }
};

inline PebblingFormula pebbling_contradiction(const LayeredDag& g, int d) {
  if (d < 1) throw std::runtime_error("degree must be >= 1");
  if (d * g.n() > 62) throw std::runtime_error("variable ids overflow budget");
  PebblingFormula f;
  f.dag = &g;
  f.degree = d;
  f.cnf.nvars = d * g.n();
  for (int v = 0; v < g.n(); ++v)
    for (int i = 1; i <= d; ++i) f.cnf.varmap.push_back({v, i});
  auto add = [&](Clause c, AxiomGroup gr, int v) {
    f.cnf.clauses.push_back(std::move(c));
    f.group.push_back(gr);
    f.axiom_vertex.push_back(v);
  };
  // Sources true.
  for (int v = 0; v < g.n(); ++v)
    if (g.is_source(v)) add(f.all_plus(bit(v)), AxiomGroup::Source, v);
  // Truth propagates: for w with preds u < v, clause !x(u)_i | !x(v)_j | All+(w).
  for (int w = 0; w < g.n(); ++w)
    if (!g.is_source(w)) {
      int u = g.pred(w)[0], v = g.pred(w)[1];
      for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) {
          std::vector<Lit> ls{-f.var(u, i), -f.var(v, j)};
          for (int k = 1; k <= d; ++k) ls.push_back(f.var(w, k));
          add(Clause::of(std::move(ls)), AxiomGroup::Pebbling, w);
        }
    }
  // Sink false.
  for (int i = 1; i <= d; ++i)
    add(Clause::of({-f.var(g.sink, i)}), AxiomGroup::Target, g.sink);
  return f;
}

// *Peb: drop the d target units; All+(z) becomes the derivation goal.
inline PebblingFormula strip_targets(const PebblingFormula& f) {
  PebblingFormula r = f;
  r.cnf.clauses.clear();
  r.group.clear();
  r.axiom_vertex.clear();
  for (size_t i = 0; i < f.cnf.clauses.size(); ++i)
    if (f.group[i] != AxiomGroup::Target) {
      r.cnf.clauses.push_back(f.cnf.clauses[i]);
      r.group.push_back(f.group[i]);
      r.axiom_vertex.push_back(f.axiom_vertex[i]);
    }
  r.targets_present = false;
  return r;
}

inline void write_dimacs(std::ostream& os, const CnfFormula& f,
                         const LayeredDag* g = nullptr) {
  if (f.has_map() && g) {
    for (int x = 1; x <= f.nvars; ++x)
      os << "c map v=" << f.varmap[x - 1].vertex
         << " level=" << g->level(f.varmap[x - 1].vertex)
         << " idx=" << f.varmap[x - 1].idx << "\n";
  }
  os << "p cnf " << f.nvars << " " << f.clauses.size() << "\n";
  for (auto& c : f.clauses) {
    for (Lit l : c.lits) os << l << " ";
    os << "0\n";
  }
}

inline CnfFormula read_dimacs(std::istream& is) {
  CnfFormula f;
  std::string line;
  bool header = false;
  size_t declared = 0;
  std::vector<Lit> cur;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == 'c') {
      int v, L, i;
      if (std::sscanf(line.c_str(), "c map v=%d level=%d idx=%d", &v, &L, &i) == 3)
        f.varmap.push_back({v, i});
      continue;
    }
    std::istringstream ss(line);
    if (line[0] == 'p') {
      std::string p, cnf;
      ss >> p >> cnf >> f.nvars >> declared;
      if (cnf != "cnf") throw std::runtime_error("malformed DIMACS header");
      header = true;
      continue;
    }
    if (!header) throw std::runtime_error("clause before DIMACS header");
    Lit l;
    while (ss >> l) {
      if (l == 0) {
        f.clauses.push_back(Clause::of(cur));
        cur.clear();
      } else {
        if (std::abs(l) > f.nvars) throw std::runtime_error("literal out of range");
        cur.push_back(l);
      }
    }
  }
  if (!cur.empty()) throw std::runtime_error("missing terminating 0");
  if (f.clauses.size() != declared)
    throw std::runtime_error("clause count mismatch");
  if ((int)f.varmap.size() != f.nvars) f.varmap.clear();
  return f;
}

struct Renaming {
  int shift = 0;  // g's variable x becomes x + shift
};

inline std::pair<CnfFormula, Renaming> disjoint_conjunction(const CnfFormula& f,
                                                            const CnfFormula& g) {
  CnfFormula r = f;
  Renaming ren{f.nvars};
  r.nvars = f.nvars + g.nvars;
  r.varmap.clear();  // vertex maps do not survive combination
  for (auto& c : g.clauses) {
    std::vector<Lit> ls;
    for (Lit l : c.lits) ls.push_back(l > 0 ? l + ren.shift : l - ren.shift);
    r.clauses.push_back(Clause::of(std::move(ls)));
  }
  return {r, ren};
}

// Truth-table satisfiability for small formulas.
inline bool satisfiable(const CnfFormula& f) {
  if (f.nvars > 24) throw std::runtime_error("variable budget exceeded");
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << f.nvars); ++a) {
    bool ok = true;
    for (auto& c : f.clauses) {
      bool sat = false;
      for (Lit l : c.lits)
        if (((a >> (std::abs(l) - 1)) & 1) == (l > 0)) {
          sat = true;
          break;
        }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace pebres
