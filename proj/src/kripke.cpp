#include "eens/kripke.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eens/action.hpp"
#include "eens/error.hpp"

namespace eens {

int KripkeStructure::world_index(const std::string& name) const {
  for (std::size_t i = 0; i < worlds.size(); ++i)
    if (worlds[i] == name) return static_cast<int>(i);
  return -1;
}

bool KripkeStructure::related(const AgentId& a, int w, int v) const {
  auto it = access.find(a);
  if (it == access.end())
    throw SignatureError("unknown agent '" + a.name + "'");
  return it->second.count({w, v}) > 0;
}

std::vector<int> KripkeStructure::successors(const AgentId& a, int w) const {
  auto it = access.find(a);
  if (it == access.end())
    throw SignatureError("unknown agent '" + a.name + "'");
  std::vector<int> out;
  for (auto pit = it->second.lower_bound({w, 0});
       pit != it->second.end() && pit->first == w; ++pit)
    out.push_back(pit->second);
  return out;
}

bool satisfies(const KripkeStructure& k, int w, const Formula& f) {
  if (w < 0 || w >= static_cast<int>(k.worlds.size()))
    throw Error("world index out of range");
  switch (f.kind()) {
    case Formula::Kind::Top:
      return true;
    case Formula::Kind::Atom:
      return k.label[w].count(f.prop()) > 0;
    case Formula::Kind::Not:
      return !satisfies(k, w, f.lhs());
    case Formula::Kind::And:
      return satisfies(k, w, f.lhs()) && satisfies(k, w, f.rhs());
    case Formula::Kind::Knows: {
      for (int v : k.successors(f.agent(), w))
        if (!satisfies(k, v, f.lhs())) return false;
      return true;
    }
    default:
      return satisfies(k, w, desugar(f));
  }
}

bool satisfies(const PointedKripke& s, const Formula& f) {
  return satisfies(s.structure, s.point, f);
}

std::string S5Violation::describe(const KripkeStructure& k) const {
  std::ostringstream os;
  os << "agent " << agent.name << ": ";
  switch (kind) {
    case Kind::Reflexivity:
      os << "missing self-loop at " << k.worlds[w1];
      break;
    case Kind::Symmetry:
      os << "(" << k.worlds[w1] << "," << k.worlds[w2]
         << ") present without its converse";
      break;
    case Kind::Transitivity:
      os << "missing (" << k.worlds[w1] << "," << k.worlds[w2]
         << ") required by transitivity";
      break;
  }
  return os.str();
}

std::vector<S5Violation> validate_s5(const KripkeStructure& k) {
  std::vector<S5Violation> out;
  int n = static_cast<int>(k.worlds.size());
  for (const auto& [a, rel] : k.access) {
    for (int w = 0; w < n; ++w)
      if (!rel.count({w, w}))
        out.push_back({S5Violation::Kind::Reflexivity, a, w, w});
    for (const auto& [w, v] : rel) {
      if (w >= n || v >= n || w < 0 || v < 0)
        throw Error("access pair out of range for agent " + a.name);
      if (!rel.count({v, w}))
        out.push_back({S5Violation::Kind::Symmetry, a, w, v});
    }
    for (const auto& [w, v] : rel)
      for (const auto& [v2, u] : rel)
        if (v2 == v && !rel.count({w, u}))
          out.push_back({S5Violation::Kind::Transitivity, a, w, u});
  }
  return out;
}

KripkeStructure close_s5(KripkeStructure k) {
  int n = static_cast<int>(k.worlds.size());
  for (auto& [a, rel] : k.access) {
    for (int w = 0; w < n; ++w) rel.insert({w, w});
    bool changed = true;
    while (changed) {
      changed = false;
      std::set<std::pair<int, int>> add;
      for (const auto& [w, v] : rel) {
        if (!rel.count({v, w})) add.insert({v, w});
        for (const auto& [v2, u] : rel)
          if (v2 == v && !rel.count({w, u})) add.insert({w, u});
      }
      if (!add.empty()) {
        rel.insert(add.begin(), add.end());
        changed = true;
      }
    }
  }
  return k;
}

namespace {

// Worlds reachable from the point through any agent's relation. Truth at
// the point only depends on this generated substructure.
PointedKripke reachable_part(const PointedKripke& s) {
  const auto& k = s.structure;
  int n = static_cast<int>(k.worlds.size());
  std::vector<bool> seen(n, false);
  std::vector<int> stack{s.point};
  seen[s.point] = true;
  while (!stack.empty()) {
    int w = stack.back();
    stack.pop_back();
    for (const auto& [a, rel] : k.access) {
      (void)a;
      for (auto it = rel.lower_bound({w, 0}); it != rel.end() && it->first == w;
           ++it)
        if (!seen[it->second]) {
          seen[it->second] = true;
          stack.push_back(it->second);
        }
    }
  }
  std::vector<int> remap(n, -1);
  PointedKripke out;
  for (int w = 0; w < n; ++w)
    if (seen[w]) {
      remap[w] = static_cast<int>(out.structure.worlds.size());
      out.structure.worlds.push_back(k.worlds[w]);
      out.structure.label.push_back(k.label[w]);
    }
  for (const auto& [a, rel] : k.access) {
    auto& nrel = out.structure.access[a];
    for (const auto& [w, v] : rel)
      if (seen[w] && seen[v]) nrel.insert({remap[w], remap[v]});
  }
  out.point = remap[s.point];
  return out;
}

// Iterated modal colour refinement. Base colours come from the labels;
// each round appends, per agent, the sorted set of successor colours. The
// stable partition is the coarsest bisimulation respecting labels.
std::vector<int> bisim_partition(const KripkeStructure& k) {
  int n = static_cast<int>(k.worlds.size());
  std::vector<int> colour(n);
  {
    std::vector<std::pair<std::string, int>> keyed(n);
    for (int w = 0; w < n; ++w) {
      std::string key;
      for (const auto& p : k.label[w]) key += p.name + ";";
      keyed[w] = {key, w};
    }
    std::sort(keyed.begin(), keyed.end());
    int c = -1;
    std::string prev = "\x01";
    for (const auto& [key, w] : keyed) {
      if (key != prev) ++c;
      prev = key;
      colour[w] = c;
    }
  }
  for (;;) {
    std::vector<std::pair<std::vector<int>, int>> sigs(n);
    for (int w = 0; w < n; ++w) {
      std::vector<int> sig{colour[w]};
      for (const auto& [a, rel] : k.access) {
        (void)a;
        std::set<int> succ;
        for (auto it = rel.lower_bound({w, 0});
             it != rel.end() && it->first == w; ++it)
          succ.insert(colour[it->second]);
        sig.push_back(-1);  // agent separator
        sig.insert(sig.end(), succ.begin(), succ.end());
      }
      sigs[w] = {std::move(sig), w};
    }
    auto sorted = sigs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> next(n);
    int c = -1;
    const std::vector<int>* prev = nullptr;
    for (const auto& [sig, w] : sorted) {
      if (!prev || sig != *prev) ++c;
      prev = &sig;
      next[w] = c;
    }
    if (next == colour) return colour;
    colour = std::move(next);
  }
}

}  // namespace

PointedKripke minimize(const PointedKripke& s) {
  PointedKripke g = reachable_part(s);
  const auto& k = g.structure;
  std::vector<int> colour = bisim_partition(k);
  int blocks = *std::max_element(colour.begin(), colour.end()) + 1;

  // Quotient. Distinct blocks are pairwise non-bisimilar, so the refinement
  // colours of the quotient worlds form a canonical total order already:
  // the block colour is determined by labels and successor colours alone,
  // never by input world order.
  PointedKripke out;
  out.structure.worlds.resize(blocks);
  out.structure.label.resize(blocks);
  std::vector<int> rep(blocks, -1);
  for (int w = 0; w < static_cast<int>(k.worlds.size()); ++w)
    if (rep[colour[w]] < 0) rep[colour[w]] = w;
  for (int b = 0; b < blocks; ++b) {
    out.structure.worlds[b] = "w" + std::to_string(b);
    out.structure.label[b] = k.label[rep[b]];
  }
  for (const auto& [a, rel] : k.access) {
    auto& nrel = out.structure.access[a];
    for (const auto& [w, v] : rel) nrel.insert({colour[w], colour[v]});
  }
  out.point = colour[g.point];
  return out;
}

std::string canonical_key(const PointedKripke& s) {
  std::ostringstream os;
  const auto& k = s.structure;
  os << k.worlds.size() << "@" << s.point << "|";
  for (const auto& l : k.label) {
    for (const auto& p : l) os << p.name << ",";
    os << ";";
  }
  for (const auto& [a, rel] : k.access) {
    os << a.name << ":";
    for (const auto& [w, v] : rel) os << w << "-" << v << ",";
    os << ";";
  }
  return os.str();
}

std::optional<PointedKripke> product_update(const PointedKripke& s,
                                            const EpistemicAction& e) {
  const auto& k = s.structure;
  const auto& m = *e.model;
  if (!satisfies(k, s.point, m.pre[e.point])) return std::nullopt;

  std::vector<std::pair<int, int>> pairs;  // (world, event)
  std::map<std::pair<int, int>, int> index;
  for (int w = 0; w < static_cast<int>(k.worlds.size()); ++w)
    for (int f = 0; f < static_cast<int>(m.events.size()); ++f)
      if (satisfies(k, w, m.pre[f])) {
        index[{w, f}] = static_cast<int>(pairs.size());
        pairs.push_back({w, f});
      }

  PointedKripke out;
  for (const auto& [w, f] : pairs) {
    out.structure.worlds.push_back("(" + k.worlds[w] + "," + m.events[f] +
                                   ")");
    out.structure.label.push_back(k.label[w]);
  }
  for (const auto& [a, rel] : k.access) {
    auto& nrel = out.structure.access[a];
    auto mit = m.access.find(a);
    if (mit == m.access.end())
      throw SignatureError("action model lacks relation for agent " + a.name);
    for (const auto& [w, v] : rel)
      for (const auto& [f, g] : mit->second) {
        auto i = index.find({w, f});
        auto j = index.find({v, g});
        if (i != index.end() && j != index.end())
          nrel.insert({i->second, j->second});
      }
  }
  out.point = index.at({s.point, e.point});
  return out;
}

std::string to_json(const PointedKripke& s) {
  nlohmann::json j;
  const auto& k = s.structure;
  j["worlds"] = k.worlds;
  nlohmann::json acc = nlohmann::json::object();
  for (const auto& [a, rel] : k.access) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [w, v] : rel)
      pairs.push_back({k.worlds[w], k.worlds[v]});
    acc[a.name] = pairs;
  }
  j["access"] = acc;
  nlohmann::json lab = nlohmann::json::object();
  for (std::size_t w = 0; w < k.worlds.size(); ++w) {
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : k.label[w]) props.push_back(p.name);
    lab[k.worlds[w]] = props;
  }
  j["label"] = lab;
  j["point"] = k.worlds[s.point];
  return j.dump(2);
}

PointedKripke pointed_kripke_from_json(const std::string& text,
                                       bool auto_close) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid structure JSON: ") + e.what());
  }
  PointedKripke s;
  auto& k = s.structure;
  if (!j.contains("worlds") || !j["worlds"].is_array())
    throw Error("structure JSON: missing 'worlds' array");
  for (const auto& w : j["worlds"]) k.worlds.push_back(w.get<std::string>());
  k.label.resize(k.worlds.size());
  if (j.contains("label"))
    for (const auto& [name, props] : j["label"].items()) {
      int w = k.world_index(name);
      if (w < 0) throw Error("structure JSON: label for unknown world " + name);
      for (const auto& p : props) k.label[w].insert(Prop{p.get<std::string>()});
    }
  if (j.contains("access"))
    for (const auto& [agent, pairs] : j["access"].items()) {
      auto& rel = k.access[AgentId{agent}];
      for (const auto& pr : pairs) {
        int w = k.world_index(pr.at(0).get<std::string>());
        int v = k.world_index(pr.at(1).get<std::string>());
        if (w < 0 || v < 0)
          throw Error("structure JSON: access pair with unknown world");
        rel.insert({w, v});
      }
    }
  if (!j.contains("point"))
    throw Error("structure JSON: missing 'point'");
  s.point = k.world_index(j["point"].get<std::string>());
  if (s.point < 0) throw Error("structure JSON: point is not a world");
  if (auto_close) {
    s.structure = close_s5(s.structure);
  } else {
    auto bad = validate_s5(k);
    if (!bad.empty())
      throw Error("structure is not S5: " + bad.front().describe(k) +
                  (bad.size() > 1
                       ? " (+" + std::to_string(bad.size() - 1) + " more)"
                       : ""));
  }
  return s;
}

std::string to_dot(const PointedKripke& s) {
  const auto& k = s.structure;
  std::ostringstream os;
  os << "graph kripke {\n  rankdir=LR;\n";
  for (std::size_t w = 0; w < k.worlds.size(); ++w) {
    os << "  n" << w << " [label=\"" << k.worlds[w] << "\\n{";
    bool first = true;
    for (const auto& p : k.label[w]) {
      if (!first) os << ",";
      first = false;
      os << p.name;
    }
    os << "}\", shape=ellipse";
    if (static_cast<int>(w) == s.point) os << ", peripheries=2";
    os << "];\n";
  }
  // Undirected rendering: relations are symmetric, self-loops left implicit.
  std::map<std::pair<int, int>, std::vector<std::string>> edges;
  for (const auto& [a, rel] : k.access)
    for (const auto& [w, v] : rel)
      if (w < v) edges[{w, v}].push_back(a.name);
  for (const auto& [e, agents] : edges) {
    os << "  n" << e.first << " -- n" << e.second << " [label=\"";
    for (std::size_t i = 0; i < agents.size(); ++i)
      os << (i ? "," : "") << agents[i];
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace eens
