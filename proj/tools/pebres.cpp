// pebres: proof-complexity laboratory CLI.
//
// Subcommands: gen, check, price, build, translate, potential, spreading,
// verify-bounds. Exit codes: 0 pass, 1 failed check / violated bound,
// 2 usage error, 3 budget exceeded.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "pebres/induced.hpp"

using json = nlohmann::json;
using namespace pebres;

namespace {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LayeredDag load_graph(const std::string& spec) {
  if (spec.rfind("pyramid:", 0) == 0) return make_pyramid(std::stoi(spec.substr(8)));
  if (spec.rfind("tree:", 0) == 0) return make_tree(std::stoi(spec.substr(5)));
  if (spec == "-") return read_graph(std::cin);
  std::ifstream in(spec);
  if (!in) throw std::runtime_error("cannot open graph file: " + spec);
  return read_graph(in);
}

template <typename Fn>
void with_output(const std::string& path, Fn fn) {
  if (path == "-" || path.empty()) {
    fn(std::cout);
  } else {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    fn(out);
  }
}

std::string slurp(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

long long state_budget() {
  if (const char* s = std::getenv("PEBRES_BUDGET_STATES")) return std::atoll(s);
  return -1;
}

void check_states(long long explored) {
  long long cap = state_budget();
  if (cap >= 0 && explored > cap) throw BudgetExceeded("state budget exceeded");
}

void emit(const json& report, const std::string& format) {
  if (format == "json") {
    std::cout << report.dump(2) << "\n";
    return;
  }
  for (auto& [k, v] : report.items())
    std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
              << "\n";
}

json move_to_json(const BlobMove& m) {
  auto sc = [](const BlobSubconfig& s) {
    return json{{"B", to_vec(s.B)}, {"W", to_vec(s.W)}};
  };
  switch (m.op) {
    case BlobMove::Intro: return {{"op", "intro"}, {"v", m.v}};
    case BlobMove::Merge:
      return {{"op", "merge"}, {"v", m.v}, {"sc1", sc(m.s1)}, {"sc2", sc(m.s2)}};
    case BlobMove::Inflate:
      return {{"op", "inflate"}, {"sc", sc(m.s1)}, {"to", sc(m.to)}};
    case BlobMove::Erase: return {{"op", "erase"}, {"sc", sc(m.s1)}};
  }
  return {};
}

VSet vset_of(const json& arr) {
  VSet s = 0;
  for (int v : arr.get<std::vector<int>>()) s |= bit(v);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proof-complexity laboratory for pebbling formulas"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  std::string format = "json";
  int jobs = 1;
  unsigned seed = 0;
  app.add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  app.add_option("--jobs", jobs);
  app.add_option("--seed", seed);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a pebbling contradiction CNF");
  std::string g_graph, g_out = "-";
  int g_degree = 1;
  bool g_strip = false;
  gen->add_option("--graph", g_graph)->required();
  gen->add_option("--degree", g_degree)->check(CLI::Range(1, 4));
  gen->add_flag("--strip-targets", g_strip);
  gen->add_option("--out", g_out);

  // check
  auto* check = app.add_subcommand("check", "replay and profile a derivation");
  std::string c_cnf, c_trace, c_goal = "empty";
  check->add_option("--cnf", c_cnf)->required();
  check->add_option("--trace", c_trace)->required();
  check->add_option("--goal", c_goal)->check(CLI::IsMember({"empty", "target", "none"}));

  // price
  auto* price = app.add_subcommand("price", "exact pebbling price search");
  std::string p_graph, p_mode = "black";
  int p_budget = 64;
  price->add_option("--graph", p_graph)->required();
  price->add_option("--mode", p_mode)->check(CLI::IsMember({"black", "bw", "blob"}));
  price->add_option("--budget", p_budget);

  // build
  auto* build = app.add_subcommand("build", "construct a refutation trace");
  std::string b_graph, b_strategy = "linear", b_out = "-";
  int b_degree = 1;
  bool b_strip = false;
  build->add_option("--graph", b_graph)->required();
  build->add_option("--degree", b_degree)->check(CLI::Range(1, 4));
  build->add_option("--strategy", b_strategy)
      ->check(CLI::IsMember({"linear", "pebbling", "degree1"}));
  build->add_flag("--strip-targets", b_strip);
  build->add_option("--out", b_out);

  // translate
  auto* trans = app.add_subcommand("translate", "refutation to blob pebbling");
  std::string t_graph, t_trace;
  int t_degree = 2;
  trans->add_option("--graph", t_graph)->required();
  trans->add_option("--degree", t_degree)->check(CLI::Range(1, 4));
  trans->add_option("--trace", t_trace)->required();

  // potential
  auto* pot = app.add_subcommand("potential", "measure / potential analysis");
  std::string po_graph, po_config;
  pot->add_option("--graph", po_graph)->required();
  pot->add_option("--config", po_config)
      ->description("JSON: {B:[...],W:[...]} or {subconfigs:[{B,W},...]}")
      ->required();

  // spreading
  auto* spread = app.add_subcommand("spreading", "spreading-inequality check");
  std::string s_graph;
  spread->add_option("--graph", s_graph)->required();

  // verify-bounds
  auto* vb = app.add_subcommand("verify-bounds", "cost/space bound verifier");
  std::string v_graph, v_trace;
  int v_degree = 2;
  vb->add_option("--graph", v_graph)->required();
  vb->add_option("--degree", v_degree)->check(CLI::Range(1, 4));
  vb->add_option("--trace", v_trace)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  try {
    if (*gen) {
      LayeredDag g = load_graph(g_graph);
      PebblingFormula f = pebbling_contradiction(g, g_degree);
      if (g_strip) f = strip_targets(f);
      with_output(g_out, [&](std::ostream& os) { write_dimacs(os, f.cnf, &g); });
      return 0;
    }
    if (*check) {
      std::istringstream cnf_in(slurp(c_cnf)), trace_in(slurp(c_trace));
      CnfFormula f = read_dimacs(cnf_in);
      DerivationTrace t = read_trace(trace_in);
      if (c_goal == "empty") t.goal = Clause::of({});
      if (c_goal == "target") {
        // All+(z): all positive literals of the sink (the largest vertex id).
        if (!f.has_map()) throw std::runtime_error("target goal needs a var map");
        int sink = -1;
        for (int x = 1; x <= f.nvars; ++x)
          sink = std::max(sink, f.varmap[x - 1].vertex);
        std::vector<Lit> ls;
        for (int x = 1; x <= f.nvars; ++x)
          if (f.varmap[x - 1].vertex == sink) ls.push_back(x);
        t.goal = Clause::of(ls);
      }
      json rep;
      try {
        Metrics m = replay(f, t);
        rep = {{"verdict", "pass"},   {"length", m.length},
               {"width", m.width},    {"clause_space", m.clause_space},
               {"variable_space", m.variable_space}, {"wall_clock", elapsed()}};
        emit(rep, format);
        return 0;
      } catch (const ReplayError& e) {
        rep = {{"verdict", "fail"}, {"error", e.what()}, {"wall_clock", elapsed()}};
        emit(rep, format);
        return 1;
      }
    }
    if (*price) {
      LayeredDag g = load_graph(p_graph);
      json rep{{"mode", p_mode}};
      if (p_mode == "blob") {
        BlobLimits lim;
        lim.max_cost = std::min(p_budget, g.height() + 3);
        auto r = blob_price_exact(g, lim);
        check_states(r.states_explored);
        rep["states_explored"] = r.states_explored;
        if (!r.price) {
          rep["verdict"] = r.note;
          emit(rep, format);
          return 3;
        }
        rep["price"] = *r.price;
        json w = json::array();
        for (auto& m : r.witness.moves) w.push_back(move_to_json(m));
        rep["witness"] = w;
      } else {
        auto r = exact_price(
            g, p_mode == "bw" ? PebbleMode::BW : PebbleMode::Black, p_budget);
        check_states(r.states_explored);
        rep["states_explored"] = r.states_explored;
        if (!r.price) {
          rep["verdict"] = "exceeds budget";
          emit(rep, format);
          return 3;
        }
        rep["price"] = *r.price;
        json w = json::array();
        std::ostringstream mv;
        write_pebbling(mv, r.witness);
        std::istringstream mvi(mv.str());
        for (std::string line; std::getline(mvi, line);) w.push_back(line);
        rep["witness"] = w;
      }
      rep["wall_clock"] = elapsed();
      emit(rep, format);
      return 0;
    }
    if (*build) {
      LayeredDag g = load_graph(b_graph);
      PebblingFormula f = pebbling_contradiction(g, b_degree);
      if (b_strip) f = strip_targets(f);
      DerivationTrace t;
      if (b_strategy == "linear")
        t = build_linear(g, b_degree, f);
      else if (b_strategy == "pebbling")
        t = build_from_pebbling(g, b_degree, black_strategy(g), f);
      else
        t = build_degree1(g, f);
      with_output(b_out, [&](std::ostream& os) { write_trace(os, t, b_graph); });
      return 0;
    }
    if (*trans) {
      LayeredDag g = load_graph(t_graph);
      PebblingFormula f = strip_targets(pebbling_contradiction(g, t_degree));
      std::istringstream trace_in(slurp(t_trace));
      DerivationTrace t = read_trace(trace_in);
      TranslateResult r = translate(f, t);
      json moves = json::array();
      for (auto& m : r.pebbling.moves) moves.push_back(move_to_json(m));
      json rep{{"moves", moves},
               {"max_cost", r.max_cost},
               {"boundary_costs", r.boundary_costs},
               {"notes", r.notes},
               {"wall_clock", elapsed()}};
      emit(rep, format);
      return 0;
    }
    if (*pot) {
      LayeredDag g = load_graph(po_graph);
      json cfg = json::parse(po_config);
      json rep;
      if (cfg.contains("subconfigs")) {
        BlobConfig c;
        for (auto& s : cfg["subconfigs"])
          c.push_back({vset_of(s["B"]), vset_of(s["W"])});
        canonicalize(g, c);
        for (auto& s : c) validate_subconfig(g, s);
        auto r = potential_blob(g, c);
        rep = {{"potential", r.potential}, {"witness", to_vec(r.blocker)}};
      } else {
        BwConfig c{vset_of(cfg.value("B", json::array())),
                   vset_of(cfg.value("W", json::array()))};
        auto r = potential_bw(g, c);
        rep = {{"potential", r.potential}, {"witness", to_vec(r.blocker)}};
        auto mp = measure_set(g, c.B | c.W);
        rep["measure"] = mp.measure;
        json prof;
        for (size_t j = 0; j < mp.mj.size(); ++j)
          prof[std::to_string(j)] = mp.mj[j];
        rep["profile"] = prof;
      }
      rep["wall_clock"] = elapsed();
      emit(rep, format);
      return 0;
    }
    if (*spread) {
      LayeredDag g = load_graph(s_graph);
      auto r = spreading_check(g);
      json rep{{"spreading",
                {{"verdict", r.pass ? "pass" : "fail"}}},
               {"wall_clock", elapsed()}};
      if (!r.pass)
        rep["spreading"]["counterexample"] = {
            {"X", to_vec(r.counterexample_x)}, {"j", r.counterexample_j}};
      emit(rep, format);
      return r.pass ? 0 : 1;
    }
    if (*vb) {
      LayeredDag g = load_graph(v_graph);
      PebblingFormula f = strip_targets(pebbling_contradiction(g, v_degree));
      std::istringstream trace_in(slurp(v_trace));
      DerivationTrace t = read_trace(trace_in);
      BoundsReport r = verify_bounds(f, t);
      json rep{{"verdict", r.ok ? "pass" : "fail"},
               {"violations", r.violations},
               {"clause_space", r.clause_space},
               {"max_blob_cost", r.max_blob_cost},
               {"boundary_sizes", r.boundary_sizes},
               {"boundary_costs", r.boundary_costs},
               {"wall_clock", elapsed()}};
      emit(rep, format);
      return r.ok ? 0 : 1;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    if (msg.find("budget") != std::string::npos) return 3;
    return 2;
  }
  return 2;
}
