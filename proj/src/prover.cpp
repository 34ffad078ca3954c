#include "eens/prover.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "eens/error.hpp"

namespace eens {

namespace {

// Negation normal form over interned nodes.
enum class NK { Top, Bot, Lit, NLit, And, Or, Box, Dia };

struct NNode {
  NK kind;
  int prop = -1;   // Lit / NLit
  int agent = -1;  // Box / Dia
  int a = -1;      // first child
  int b = -1;      // second child
};

struct Arena {
  std::vector<NNode> nodes;
  std::map<std::tuple<NK, int, int, int, int>, int> interned;
  std::vector<std::string> props;
  std::map<std::string, int> prop_ids;
  std::vector<std::string> agents;
  std::map<std::string, int> agent_ids;

  int intern(NNode n) {
    auto key = std::make_tuple(n.kind, n.prop, n.agent, n.a, n.b);
    auto it = interned.find(key);
    if (it != interned.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    nodes.push_back(n);
    interned.emplace(key, id);
    return id;
  }

  int prop_id(const std::string& name) {
    auto it = prop_ids.find(name);
    if (it != prop_ids.end()) return it->second;
    int id = static_cast<int>(props.size());
    props.push_back(name);
    prop_ids.emplace(name, id);
    return id;
  }

  int agent_id(const std::string& name) {
    auto it = agent_ids.find(name);
    if (it != agent_ids.end()) return it->second;
    int id = static_cast<int>(agents.size());
    agents.push_back(name);
    agent_ids.emplace(name, id);
    return id;
  }
};

int to_nnf(Arena& ar, const Formula& f, bool pos) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return ar.intern({pos ? NK::Top : NK::Bot});
    case Formula::Kind::Atom:
      return ar.intern(
          {pos ? NK::Lit : NK::NLit, ar.prop_id(f.prop().name)});
    case Formula::Kind::Not:
      return to_nnf(ar, f.lhs(), !pos);
    case Formula::Kind::And: {
      int l = to_nnf(ar, f.lhs(), pos);
      int r = to_nnf(ar, f.rhs(), pos);
      return ar.intern({pos ? NK::And : NK::Or, -1, -1, l, r});
    }
    case Formula::Kind::Knows: {
      int s = to_nnf(ar, f.lhs(), pos);
      return ar.intern(
          {pos ? NK::Box : NK::Dia, -1, ar.agent_id(f.agent().name), s});
    }
    default:
      return to_nnf(ar, desugar(f), pos);
  }
}

enum class Outcome { Sat, Unsat, Cut };

struct TableauLimit {};

// One branch of the tableau. Copied wholesale at disjunction points; the
// structures are small at the scale this prover is used.
struct Branch {
  std::vector<std::set<int>> label;        // [world] -> NNF ids
  std::vector<int> depth;                  // [world] -> creation depth
  std::vector<std::vector<int>> cls;       // [world][agent] -> class id
  std::vector<std::vector<std::vector<int>>> members;  // [agent][class]
  std::vector<std::vector<std::set<int>>> boxes;       // [agent][class]
  std::vector<std::pair<int, int>> det;    // (world, id) queue
  std::size_t det_next = 0;
  std::vector<std::pair<int, int>> ors;
  std::size_t ors_next = 0;
  std::vector<std::pair<int, int>> dias;
  std::size_t dias_next = 0;
};

class Tableau {
 public:
  Tableau(Arena& ar, int n_agents, const ProverOptions& opt, int ceiling)
      : ar_(ar), n_agents_(n_agents), opt_(opt), ceiling_(ceiling) {}

  Outcome run(int root_formula, Branch& model_out) {
    Branch b;
    new_world(b, 0);
    if (!add(b, 0, root_formula)) return Outcome::Unsat;
    return solve(b, model_out);
  }

  long steps = 0;

 private:
  Arena& ar_;
  int n_agents_;
  const ProverOptions& opt_;
  int ceiling_;

  int new_world(Branch& b, int depth) {
    int w = static_cast<int>(b.label.size());
    b.label.emplace_back();
    b.depth.push_back(depth);
    b.cls.emplace_back();
    if (b.members.empty()) {
      b.members.resize(n_agents_);
      b.boxes.resize(n_agents_);
    }
    for (int a = 0; a < n_agents_; ++a) {
      int c = static_cast<int>(b.members[a].size());
      b.members[a].push_back({w});
      b.boxes[a].emplace_back();
      b.cls[w].push_back(c);
    }
    return w;
  }

  // Returns false on clash.
  bool add(Branch& b, int w, int id) {
    if (b.label[w].count(id)) return true;
    const NNode& n = ar_.nodes[id];
    if (n.kind == NK::Bot) return false;
    if (n.kind == NK::Lit || n.kind == NK::NLit) {
      NNode comp = n;
      comp.kind = n.kind == NK::Lit ? NK::NLit : NK::Lit;
      auto key = std::make_tuple(comp.kind, comp.prop, -1, -1, -1);
      auto it = ar_.interned.find(key);
      if (it != ar_.interned.end() && b.label[w].count(it->second))
        return false;
    }
    b.label[w].insert(id);
    switch (n.kind) {
      case NK::And:
      case NK::Box:
        b.det.push_back({w, id});
        break;
      case NK::Or:
        b.ors.push_back({w, id});
        break;
      case NK::Dia:
        b.dias.push_back({w, id});
        break;
      default:
        break;
    }
    return true;
  }

  // Applies deterministic rules to exhaustion. Returns false on clash.
  bool saturate_det(Branch& b) {
    while (b.det_next < b.det.size()) {
      if (++steps > opt_.max_steps) throw TableauLimit{};
      auto [w, id] = b.det[b.det_next++];
      const NNode& n = ar_.nodes[id];
      if (n.kind == NK::And) {
        if (!add(b, w, n.a) || !add(b, w, n.b)) return false;
      } else {  // Box
        int a = n.agent;
        int c = b.cls[w][a];
        if (b.boxes[a][c].insert(n.a).second)
          for (int m : b.members[a][c])
            if (!add(b, m, n.a)) return false;
      }
    }
    return true;
  }

  Outcome solve(Branch& b, Branch& model_out) {
    for (;;) {
      if (++steps > opt_.max_steps) throw TableauLimit{};
      if (!saturate_det(b)) return Outcome::Unsat;

      if (b.ors_next < b.ors.size()) {
        auto [w, id] = b.ors[b.ors_next++];
        const NNode& n = ar_.nodes[id];
        if (b.label[w].count(n.a) || b.label[w].count(n.b)) continue;
        Branch left = b;
        Outcome r1 = Outcome::Unsat;
        if (add(left, w, n.a)) r1 = solve(left, model_out);
        if (r1 == Outcome::Sat) return Outcome::Sat;
        Outcome r2 = Outcome::Unsat;
        if (add(b, w, n.b)) r2 = solve(b, model_out);
        if (r2 == Outcome::Sat) return Outcome::Sat;
        if (r1 == Outcome::Cut || r2 == Outcome::Cut) return Outcome::Cut;
        return Outcome::Unsat;
      }

      if (b.dias_next < b.dias.size()) {
        auto [w, id] = b.dias[b.dias_next++];
        const NNode& n = ar_.nodes[id];
        int a = n.agent;
        int c = b.cls[w][a];
        bool witnessed = false;
        for (int m : b.members[a][c])
          if (b.label[m].count(n.a)) {
            witnessed = true;
            break;
          }
        if (witnessed) continue;
        if (b.depth[w] + 1 > ceiling_ ||
            static_cast<int>(b.label.size()) >= opt_.max_worlds)
          return Outcome::Cut;
        int v = new_world(b, b.depth[w] + 1);
        // Move v into w's a-class and inherit its box constraints.
        b.members[a].pop_back();
        b.boxes[a].pop_back();
        b.cls[v][a] = c;
        b.members[a][c].push_back(v);
        if (!add(b, v, n.a)) return Outcome::Unsat;
        for (int boxed : b.boxes[a][c])
          if (!add(b, v, boxed)) return Outcome::Unsat;
        continue;
      }

      model_out = b;
      return Outcome::Sat;
    }
  }
};

}  // namespace

ProofResult Prover::is_satisfiable(const Formula& f) const {
  check_over_signature(f, sig_);
  Formula core = desugar(f);
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(core);
    if (it != cache_.end()) return it->second;
  }

  Arena ar;
  for (const auto& a : sig_.agents) ar.agent_id(a.name);
  for (const auto& p : sig_.props) ar.prop_id(p.name);
  int root = to_nnf(ar, core, true);
  int n_agents = static_cast<int>(ar.agents.size());

  ProofResult result{Verdict::Unsat, std::nullopt};
  bool decided = false;
  for (int ceiling = opt_.initial_depth; ceiling <= opt_.max_depth;
       ceiling *= 2) {
    Tableau t(ar, n_agents, opt_, ceiling);
    Branch model;
    Outcome out;
    try {
      out = t.run(root, model);
    } catch (const TableauLimit&) {
      throw InconclusiveError("prover: step limit exceeded on " +
                              to_string(core));
    }
    if (out == Outcome::Cut) continue;
    if (out == Outcome::Unsat) {
      result = {Verdict::Unsat, std::nullopt};
      decided = true;
      break;
    }

    // Assemble the witness from the saturated branch.
    PointedKripke s;
    int n_worlds = static_cast<int>(model.label.size());
    s.structure.label.resize(n_worlds);
    for (int w = 0; w < n_worlds; ++w) {
      s.structure.worlds.push_back("w" + std::to_string(w));
      for (int id : model.label[w]) {
        const NNode& n = ar.nodes[id];
        if (n.kind == NK::Lit)
          s.structure.label[w].insert(Prop{ar.props[n.prop]});
      }
    }
    for (int a = 0; a < n_agents; ++a) {
      auto& rel = s.structure.access[AgentId{ar.agents[a]}];
      for (const auto& cls : model.members[a])
        for (int x : cls)
          for (int y : cls) rel.insert({x, y});
    }
    s.point = 0;
    if (!satisfies(s, core))
      throw Error("prover: extracted model fails self-check for " +
                  to_string(core));
    result = {Verdict::Sat, std::move(s)};
    decided = true;
    break;
  }
  if (!decided)
    throw InconclusiveError("prover: depth ceiling reached on " +
                            to_string(core));

  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_.emplace(core, result);
  return result;
}

bool Prover::is_valid(const Formula& f) const {
  return is_satisfiable(Formula::lnot(f)).verdict == Verdict::Unsat;
}

bool Prover::equivalent(const Formula& f, const Formula& g) const {
  if (desugar(f) == desugar(g)) return true;
  return is_valid(Formula::iff(f, g));
}

}  // namespace eens
