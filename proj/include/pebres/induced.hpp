#pragma once
// Semantic entailment, precise implication, induced blob configurations,
// and the refutation → blob-pebbling translator with its verifiers.

#include "pebres/hiding.hpp"
#include "pebres/resolution.hpp"

namespace pebres {

struct InducedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Truth-table entailment: every assignment satisfying all of `clauses`
// satisfies `goal`.
inline bool entails(const std::vector<Clause>& clauses, const Clause& goal,
                    int nvars) {
  if (nvars > 24) throw InducedError("variable budget exceeded");
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << nvars); ++a) {
    auto sat = [&](const Clause& c) {
      for (Lit l : c.lits)
        if ((bool)((a >> (std::abs(l) - 1)) & 1) == (l > 0)) return true;
      return false;
    };
    bool prem = true;
    for (auto& c : clauses)
      if (!sat(c)) {
        prem = false;
        break;
      }
    if (prem && !sat(goal)) return false;
  }
  return true;
}

// truth(S): one clause All+(s) per s ∈ S (the vertices in S are "true").
inline std::vector<Clause> truth_clauses(const PebblingFormula& f, VSet S) {
  std::vector<Clause> out;
  for (int s : to_vec(S)) out.push_back(f.all_plus(bit(s)));
  return out;
}

// Precise implication C_B ∪ truth(S) ⊳ All+(B): entailment holds and fails
// for every strict subset of C_B, of S, and of B. Monotonicity makes
// single-element removals sufficient.
inline bool precise_implication(const std::vector<Clause>& cb, VSet S, VSet B,
                                const LayeredDag& g, const PebblingFormula& f) {
  if (!B || !is_chain(g, B)) return false;
  if (S & B) throw InducedError("S must be disjoint from B");
  int nv = f.cnf.nvars;
  auto holds = [&](const std::vector<Clause>& prem, VSet S_, VSet B_) {
    std::vector<Clause> all = prem;
    for (auto& c : truth_clauses(f, S_)) all.push_back(c);
    return entails(all, f.all_plus(B_), nv);
  };
  if (!holds(cb, S, B)) return false;
  for (size_t i = 0; i < cb.size(); ++i) {
    std::vector<Clause> sub;
    for (size_t j = 0; j < cb.size(); ++j)
      if (j != i) sub.push_back(cb[j]);
    if (holds(sub, S, B)) return false;
  }
  for (int s : to_vec(S))
    if (holds(cb, S & ~bit(s), B)) return false;
  for (int b : to_vec(B))
    if (holds(cb, S, B & ~bit(b))) return false;
  return true;
}

// Bitset over all 2^nv assignments, for the enumeration-heavy induced-
// configuration computation.
class TTMask {
public:
  TTMask() = default;
  TTMask(int nv, bool fill) : nv_(nv) {
    std::uint64_t bits = std::uint64_t{1} << nv;
    w_.assign((bits + 63) / 64, fill ? ~std::uint64_t{0} : 0);
    if (fill && bits < 64) w_[0] = (std::uint64_t{1} << bits) - 1;
  }
  static TTMask of_clause(int nv, const Clause& c) {
    TTMask m(nv, false);
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << nv); ++a)
      for (Lit l : c.lits)
        if ((bool)((a >> (std::abs(l) - 1)) & 1) == (l > 0)) {
          m.w_[a >> 6] |= std::uint64_t{1} << (a & 63);
          break;
        }
    return m;
  }
  TTMask& operator&=(const TTMask& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  // this ⊆ other (as assignment sets)
  bool subset_of(const TTMask& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

private:
  int nv_ = 0;
  std::vector<std::uint64_t> w_;
};

// All subconfigurations [B]<S ∩ lpp(B)> induced by cfg: some C_B ⊆ cfg and
// S ⊆ V ∖ B satisfy the precise implication for B.
inline BlobConfig induced_config(const std::vector<Clause>& cfg,
                                 const LayeredDag& g, const PebblingFormula& f) {
  if (cfg.size() > 8) throw InducedError("configuration budget exceeded");
  int nv = f.cnf.nvars;
  if (nv > 16) throw InducedError("variable budget exceeded");
  size_t m = cfg.size();
  // AND-fold of clause masks over all subsets of cfg.
  std::vector<TTMask> fold(size_t{1} << m, TTMask(nv, true));
  std::vector<TTMask> cmask;
  for (auto& c : cfg) cmask.push_back(TTMask::of_clause(nv, c));
  for (size_t sub = 1; sub < fold.size(); ++sub) {
    size_t low = sub & (sub - 1);
    fold[sub] = fold[low];
    fold[sub] &= cmask[std::countr_zero(sub)];
  }
  std::vector<TTMask> vtruth(g.n());
  for (int v = 0; v < g.n(); ++v)
    vtruth[v] = TTMask::of_clause(nv, f.all_plus(bit(v)));

  std::set<BlobSubconfig> out;
  for (VSet B = 1; B < bit(g.n()); ++B) {
    if (!is_chain(g, B)) continue;
    TTMask goal = TTMask::of_clause(nv, f.all_plus(B));
    std::vector<TTMask> subgoal;  // goals for B ∖ {b}
    for (int b : to_vec(B))
      subgoal.push_back(TTMask::of_clause(nv, f.all_plus(B & ~bit(b))));
    VSet wset = lpp(g, B);
    auto svec = to_vec(g.all_vertices() & ~B);
    // DFS over S with a running AND of truth masks.
    std::function<void(size_t, VSet, const TTMask&)> rec =
        [&](size_t i, VSet S, const TTMask& smask) {
          if (i == svec.size()) {
            for (size_t cb = 0; cb < fold.size(); ++cb) {
              TTMask prem = fold[cb];
              prem &= smask;
              if (!prem.subset_of(goal)) continue;  // (a) fails
              bool precise = true;
              for (size_t j = 0; j < m && precise; ++j) {  // (b)
                if (!(cb >> j & 1)) continue;
                TTMask p = fold[cb & ~(size_t{1} << j)];
                p &= smask;
                if (p.subset_of(goal)) precise = false;
              }
              if (precise) {  // (c)
                for (int s : to_vec(S)) {
                  TTMask p = fold[cb];
                  for (int s2 : to_vec(S & ~bit(s))) p &= vtruth[s2];
                  if (p.subset_of(goal)) {
                    precise = false;
                    break;
                  }
                }
              }
              if (precise)  // (d)
                for (auto& sg : subgoal)
                  if (prem.subset_of(sg)) {
                    precise = false;
                    break;
                  }
              if (precise) {
                out.insert({B, S & wset});
                break;  // one witness per (B, S) is enough
              }
            }
            return;
          }
          rec(i + 1, S, smask);
          TTMask next = smask;
          next &= vtruth[svec[i]];
          rec(i + 1, S | bit(svec[i]), next);
        };
    rec(0, 0, TTMask(nv, true));
  }
  BlobConfig res(out.begin(), out.end());
  canonicalize(g, res);
  return res;
}

struct TranslateResult {
  BlobPebbling pebbling;
  std::vector<int> boundary_costs;      // blob cost at each step boundary
  std::vector<size_t> boundary_moves;   // #moves emitted up to each boundary
  int max_cost = 0;                 // over all intermediate configurations
  std::vector<std::string> notes;   // cost-excess findings
};

namespace detail {

// BFS bridge from `cur` to a configuration covering `target`, using
// introductions of `intro_vertex` (if >= 0), mergers, and inflations onto
// missing target subconfigs. Depth- and cost-capped; returns the moves or
// nullopt.
inline std::optional<std::vector<BlobMove>> bridge_search(
    const LayeredDag& g, const BlobConfig& cur, const BlobConfig& target,
    int intro_vertex, int max_depth, int cost_cap) {
  auto covers = [&](const BlobConfig& c) {
    for (auto& s : target)
      if (std::find(c.begin(), c.end(), s) == c.end()) return false;
    return true;
  };
  if (covers(cur)) return std::vector<BlobMove>{};
  std::map<BlobConfig, std::pair<BlobConfig, BlobMove>> parent;
  std::deque<std::pair<BlobConfig, int>> q;
  q.push_back({cur, 0});
  parent.emplace(cur, std::make_pair(cur, BlobMove{}));
  while (!q.empty()) {
    auto [c, depth] = q.front();
    q.pop_front();
    if (depth >= max_depth) continue;
    if (parent.size() > 200000)
      throw InducedError("bridge search state budget exceeded");
    auto expand = [&](BlobMove m) -> std::optional<BlobConfig> {
      BlobConfig nc;
      try {
        nc = apply_blob(g, c, m);
      } catch (const BlobError&) {
        return std::nullopt;
      }
      if (cost_cap >= 0 && blob_cost(g, nc) > cost_cap) return std::nullopt;
      auto [it, fresh] = parent.emplace(nc, std::make_pair(c, std::move(m)));
      if (!fresh) return std::nullopt;
      if (covers(nc)) return it->first;
      q.push_back({it->first, depth + 1});
      return std::nullopt;
    };
    std::optional<BlobConfig> done;
    auto step = [&](BlobMove m) {
      if (!done) done = expand(std::move(m));
    };
    if (intro_vertex >= 0) step({BlobMove::Intro, intro_vertex});
    for (auto& s1 : c)
      for (auto& s2 : c) {
        if (done) break;
        if (popcount(s2.B & s1.W) != 1 || (s1.B & s2.W)) continue;
        step({BlobMove::Merge, std::countr_zero(s2.B & s1.W), s1, s2});
      }
    for (auto& s : c) {
      if (done) break;
      for (auto& t : target) {
        if (std::find(c.begin(), c.end(), t) != c.end()) continue;
        step({BlobMove::Inflate, -1, s, {}, t});
        if (done) break;
      }
    }
    if (done) {
      std::vector<BlobMove> rev;
      BlobConfig curc = *done;
      while (!(curc == cur)) {
        auto& [pc, mv] = parent.at(curc);
        rev.push_back(mv);
        curc = pc;
      }
      return std::vector<BlobMove>(rev.rbegin(), rev.rend());
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Translate a derivation of All+(z) from the target-free formula into a
// blob pebbling whose configurations at step boundaries equal the induced
// configurations. Erasure steps translate to erasures; inference steps to
// inflations; downloads to an introduction of [r]<pred(r)> plus mergers and
// inflations, with a bounded bridge search covering ambiguous cases.
inline TranslateResult translate(const PebblingFormula& f,
                                 const DerivationTrace& t) {
  if (f.targets_present)
    throw InducedError("translation requires the target-free formula");
  const LayeredDag& g = *f.dag;
  std::vector<std::vector<Clause>> boundaries;
  replay(f.cnf, t, [&](int, const std::map<int, Clause>& mem) {
    std::vector<Clause> cfg;
    for (auto& [id, c] : mem) cfg.push_back(c);
    boundaries.push_back(std::move(cfg));
  });
  {
    Clause allz = f.all_plus(bit(g.sink));
    auto& fin = boundaries.back();
    if (std::find(fin.begin(), fin.end(), allz) == fin.end())
      throw InducedError("trace does not derive All+(z)");
  }
  TranslateResult res;
  BlobConfig cur;
  res.boundary_costs.push_back(0);
  res.boundary_moves.push_back(0);
  auto emit = [&](const BlobMove& m) {
    cur = apply_blob(g, cur, m);
    res.pebbling.moves.push_back(m);
    res.max_cost = std::max(res.max_cost, blob_cost(g, cur));
  };
  for (size_t i = 0; i < t.steps.size(); ++i) {
    BlobConfig target = induced_config(boundaries[i + 1], g, f);
    int intro = -1;
    if (t.steps[i].kind == Step::Download)
      intro = f.axiom_vertex[t.steps[i].a];
    int cap = std::max(blob_cost(g, cur), blob_cost(g, target)) + 4;
    auto moves = detail::bridge_search(g, cur, target, intro, 8, cap);
    if (!moves) {
      moves = detail::bridge_search(g, cur, target, intro, 8, -1);
      if (moves)
        res.notes.push_back("step " + std::to_string(i) +
                            ": intermediate cost exceeds boundary max + 4");
    }
    if (!moves)
      throw InducedError("step " + std::to_string(i) +
                         ": bridging failed (translation bug trap)");
    for (auto& m : *moves) emit(m);
    // Erase everything beyond the induced configuration.
    for (bool changed = true; changed;) {
      changed = false;
      for (auto& s : cur)
        if (std::find(target.begin(), target.end(), s) == target.end()) {
          emit({BlobMove::Erase, -1, s});
          changed = true;
          break;
        }
    }
    if (!(cur == target))
      throw InducedError("step " + std::to_string(i) +
                         ": boundary configuration mismatch");
    res.boundary_costs.push_back(blob_cost(g, cur));
    res.boundary_moves.push_back(res.pebbling.moves.size());
  }
  return res;
}

struct BoundsReport {
  bool ok = true;
  std::vector<std::string> violations;
  int clause_space = 0;
  int max_blob_cost = 0;
  std::vector<int> boundary_sizes, boundary_costs;
};

// Checks, on every step boundary, blob_cost(induced(ℂ)) ≤ |ℂ| (degree ≥ 2),
// and that the translated pebbling never costs more than clause space + 4.
inline BoundsReport verify_bounds(const PebblingFormula& f,
                                  const DerivationTrace& t) {
  const LayeredDag& g = *f.dag;
  BoundsReport rep;
  Metrics m = replay(f.cnf, t);
  rep.clause_space = m.clause_space;
  std::vector<std::vector<Clause>> boundaries;
  replay(f.cnf, t, [&](int, const std::map<int, Clause>& mem) {
    std::vector<Clause> cfg;
    for (auto& [id, c] : mem) cfg.push_back(c);
    boundaries.push_back(std::move(cfg));
  });
  for (size_t i = 0; i < boundaries.size(); ++i) {
    BlobConfig ic = induced_config(boundaries[i], g, f);
    int cost = blob_cost(g, ic);
    rep.boundary_sizes.push_back((int)boundaries[i].size());
    rep.boundary_costs.push_back(cost);
    if (f.degree >= 2 && cost > (int)boundaries[i].size()) {
      rep.ok = false;
      rep.violations.push_back("boundary " + std::to_string(i) +
                               ": induced cost " + std::to_string(cost) +
                               " exceeds configuration size " +
                               std::to_string(boundaries[i].size()));
    }
  }
  TranslateResult tr = translate(f, t);
  rep.max_blob_cost = tr.max_cost;
  if (tr.max_cost > rep.clause_space + 4) {
    rep.ok = false;
    rep.violations.push_back("translated pebbling cost " +
                             std::to_string(tr.max_cost) +
                             " exceeds clause space + 4 = " +
                             std::to_string(rep.clause_space + 4));
  }
  return rep;
}

}  // namespace pebres
