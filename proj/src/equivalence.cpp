#include "eens/equivalence.hpp"

#include <deque>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eens/error.hpp"

namespace eens {

namespace {

std::string state_brief(const SymbolicState& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& f : s.members()) {
    if (!first) os << ", ";
    first = false;
    os << to_string(f);
  }
  os << "}";
  return os.str();
}

}  // namespace

std::string to_json(const EquivalenceReport& r) {
  nlohmann::json j;
  j["schema"] = "eens-report-1";
  j["pairs_checked"] = r.pairs_checked;
  j["ok"] = r.ok();
  auto v = nlohmann::json::array();
  for (const auto& x : r.violations)
    v.push_back({{"where", x.where},
                 {"subject", x.subject},
                 {"direction", x.direction},
                 {"detail", x.detail}});
  j["violations"] = v;
  j["skipped"] = r.skipped;
  return j.dump(2);
}

bool f_equivalent(const StateClass& S, const SymbolicState& s,
                  const FocusSet& F) {
  for (const auto& f : F) {
    bool in_base = s.members().count(f) > 0;
    for (const auto& est : S.members())
      if (satisfies(est, f) != in_base) return false;
  }
  return true;
}

EquivalenceReport check_bcl_agreement(const StateClass& S,
                                      const SymbolicState& s,
                                      const FocusSet& F, int samples,
                                      unsigned seed) {
  EquivalenceReport report;
  std::vector<Formula> focus(F.begin(), F.end());
  std::mt19937 rng(seed);

  auto draw = [&](auto&& self, int depth) -> Formula {
    std::uniform_int_distribution<int> kind(0, depth > 0 ? 3 : 1);
    switch (kind(rng)) {
      case 0:
        return Formula::top();
      case 1: {
        if (focus.empty()) return Formula::top();
        std::uniform_int_distribution<int> pick(
            0, static_cast<int>(focus.size()) - 1);
        return focus[pick(rng)];
      }
      case 2:
        return Formula::lnot(self(self, depth - 1));
      default:
        return Formula::land(self(self, depth - 1), self(self, depth - 1));
    }
  };

  for (int i = 0; i < samples; ++i) {
    Formula beta = draw(draw, 3);
    bool symbolic = sym_satisfies(s, beta, F);
    ++report.pairs_checked;
    for (const auto& est : S.members()) {
      if (satisfies(est, beta) != symbolic) {
        report.violations.push_back(
            {"state " + canonical_key(est), to_string(beta),
             "member vs knowledge base",
             symbolic ? "symbolic holds, member refutes"
                      : "member satisfies, symbolic refutes"});
        break;
      }
    }
  }
  return report;
}

EquivalenceReport check_simulation(const Configuration& sem,
                                   const SymbolicConfiguration& sym,
                                   const ActionInterpretation& interp,
                                   const RepresentativeTable& t,
                                   const FocusSet& F, int depth,
                                   int max_nodes) {
  EquivalenceReport report;
  if (!f_equivalent(sem.cls, sym.state, F)) {
    report.violations.push_back({"roots", "", "", "roots are not equivalent"});
    return report;
  }

  struct Item {
    Configuration sem;
    SymbolicConfiguration sym;
    int remaining;
  };
  std::deque<Item> queue;
  std::set<std::pair<std::string, std::string>> seen;
  auto key_of = [](const Configuration& c, const SymbolicConfiguration& y) {
    return std::make_pair(to_string(c.ensemble) + "|" + c.cls.key(),
                          to_string(y.ensemble) + "|" + y.state.key());
  };
  queue.push_back({sem, sym, depth});
  seen.insert(key_of(sem, sym));
  int visited = 0;

  while (!queue.empty()) {
    Item item = std::move(queue.front());
    queue.pop_front();
    if (++visited > max_nodes)
      throw Error("simulation check exceeded the node budget");
    if (item.remaining == 0) continue;
    ++report.pairs_checked;

    auto sem_steps = config_step(item.sem, interp);
    auto sym_steps = sym_config_step(item.sym, interp, t, F);
    std::string where = describe(item.sem.ensemble, {}) + " | " +
                        state_brief(item.sym.state);

    for (const auto& [n, sc] : sem_steps) {
      bool matched = false;
      for (const auto& [m, yc] : sym_steps)
        if (m == n && yc.ensemble == sc.ensemble &&
            f_equivalent(sc.cls, yc.state, F)) {
          matched = true;
          if (seen.insert(key_of(sc, yc)).second)
            queue.push_back({sc, yc, item.remaining - 1});
          break;
        }
      if (!matched)
        report.violations.push_back({where, n.name, "semantic->symbolic",
                                     "no matching symbolic step"});
    }
    for (const auto& [n, yc] : sym_steps) {
      bool matched = false;
      for (const auto& [m, sc] : sem_steps)
        if (m == n && sc.ensemble == yc.ensemble &&
            f_equivalent(sc.cls, yc.state, F)) {
          matched = true;
          break;
        }
      if (!matched)
        report.violations.push_back({where, n.name, "symbolic->semantic",
                                     "no matching semantic step"});
    }
  }
  return report;
}

EquivalenceReport differential_check(
    const Configuration& sem, const SymbolicConfiguration& sym,
    const std::vector<std::pair<std::string, EnsembleFormula>>& formulas,
    const ActionInterpretation& interp, const RepresentativeTable& t,
    const FocusSet& F, int max_nodes) {
  EquivalenceReport report;
  if (!f_equivalent(sem.cls, sym.state, F)) {
    report.violations.push_back({"roots", "", "", "roots are not equivalent"});
    return report;
  }
  for (const auto& [name, f] : formulas) {
    ++report.pairs_checked;
    TriBool semantic = model_check(sem, f, interp, max_nodes);
    if (semantic == TriBool::Unknown) {
      report.skipped.push_back(name + ": semantic verdict unknown");
      continue;
    }
    bool symbolic = sym_model_check(sym, f, interp, t, F, max_nodes);
    if ((semantic == TriBool::True) != symbolic)
      report.violations.push_back(
          {"roots", name.empty() ? to_string(f) : name,
           "semantic vs symbolic",
           std::string("semantic=") +
               (semantic == TriBool::True ? "true" : "false") +
               ", symbolic=" + (symbolic ? "true" : "false")});
  }
  return report;
}

}  // namespace eens
