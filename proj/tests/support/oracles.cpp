#include "support/oracles.hpp"

#include <algorithm>
#include <vector>

namespace eens::testing {

namespace {

// All partitions of {0..n-1} as restricted growth strings.
void partitions(int n, std::vector<std::vector<int>>& out) {
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> go = [&](int i, int maxb) {
    if (i == n) {
      out.push_back(rgs);
      return;
    }
    for (int b = 0; b <= maxb; ++b) {
      rgs[i] = b;
      go(i + 1, std::max(maxb, b + 1));
    }
  };
  go(0, 0);
}

}  // namespace

void for_each_s5_state(
    const EnsembleSignature& sig, int max_worlds,
    const std::function<bool(const PointedKripke&)>& visit) {
  std::vector<Prop> props(sig.props.begin(), sig.props.end());
  std::vector<AgentId> agents(sig.agents.begin(), sig.agents.end());
  unsigned n_labels = 1u << props.size();

  for (int n = 1; n <= max_worlds; ++n) {
    std::vector<std::vector<int>> parts;
    partitions(n, parts);

    // Label assignment as a base-n_labels counter over the worlds.
    std::vector<unsigned> labels(n, 0);
    for (;;) {
      // Per-agent partition choice as an index vector.
      std::vector<std::size_t> choice(agents.size(), 0);
      for (;;) {
        KripkeStructure k;
        for (int w = 0; w < n; ++w) {
          k.worlds.push_back("w" + std::to_string(w));
          std::set<Prop> l;
          for (std::size_t i = 0; i < props.size(); ++i)
            if (labels[w] & (1u << i)) l.insert(props[i]);
          k.label.push_back(std::move(l));
        }
        for (std::size_t i = 0; i < agents.size(); ++i) {
          const auto& block = parts[choice[i]];
          auto& rel = k.access[agents[i]];
          for (int w = 0; w < n; ++w)
            for (int v = 0; v < n; ++v)
              if (block[w] == block[v]) rel.insert({w, v});
        }
        for (int point = 0; point < n; ++point)
          if (!visit(PointedKripke{k, point})) return;

        std::size_t i = 0;
        while (i < choice.size() && ++choice[i] == parts.size()) {
          choice[i] = 0;
          ++i;
        }
        if (i == choice.size()) break;
      }
      int w = 0;
      while (w < n && ++labels[w] == n_labels) {
        labels[w] = 0;
        ++w;
      }
      if (w == n) break;
    }
  }
}

std::optional<PointedKripke> oracle_satisfiable(const Formula& f,
                                                const EnsembleSignature& sig,
                                                int max_worlds) {
  std::optional<PointedKripke> found;
  for_each_s5_state(sig, max_worlds, [&](const PointedKripke& s) {
    if (satisfies(s, f)) {
      found = s;
      return false;
    }
    return true;
  });
  return found;
}

bool naive_bisimilar(const PointedKripke& a, const PointedKripke& b) {
  int na = static_cast<int>(a.structure.worlds.size());
  int nb = static_cast<int>(b.structure.worlds.size());
  // Start from label agreement, repeatedly remove pairs whose successor
  // sets cannot be matched, then test the points.
  std::vector<std::vector<bool>> rel(na, std::vector<bool>(nb, false));
  for (int w = 0; w < na; ++w)
    for (int v = 0; v < nb; ++v)
      rel[w][v] = a.structure.label[w] == b.structure.label[v];

  auto agents = a.structure.access;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int w = 0; w < na; ++w)
      for (int v = 0; v < nb; ++v) {
        if (!rel[w][v]) continue;
        bool ok = true;
        for (const auto& [ag, arel] : agents) {
          (void)arel;
          auto asucc = a.structure.successors(ag, w);
          auto bsucc = b.structure.successors(ag, v);
          for (int w2 : asucc) {
            bool matched = false;
            for (int v2 : bsucc)
              if (rel[w2][v2]) {
                matched = true;
                break;
              }
            if (!matched) {
              ok = false;
              break;
            }
          }
          if (ok)
            for (int v2 : bsucc) {
              bool matched = false;
              for (int w2 : asucc)
                if (rel[w2][v2]) {
                  matched = true;
                  break;
                }
              if (!matched) {
                ok = false;
                break;
              }
            }
          if (!ok) break;
        }
        if (!ok) {
          rel[w][v] = false;
          changed = true;
        }
      }
  }
  return rel[a.point][b.point];
}

}  // namespace eens::testing
