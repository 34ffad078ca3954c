#include "eens/process.hpp"

#include <algorithm>
#include <sstream>

#include "eens/error.hpp"

namespace eens {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Process Process::make(Node n) {
  std::size_t h = mix(0x9c, static_cast<std::size_t>(n.kind));
  if (n.kind == Kind::Prefix) h = mix(h, std::hash<std::string>{}(n.sym.name));
  if (n.kind == Kind::Rec || n.kind == Kind::Var)
    h = mix(h, std::hash<std::string>{}(n.var));
  if (n.formula) h = mix(h, n.formula.hash());
  if (n.lhs) h = mix(h, n.lhs.hash());
  if (n.rhs) h = mix(h, n.rhs.hash());
  n.hash = h;
  Process p;
  p.node_ = std::make_shared<const Node>(std::move(n));
  return p;
}

Process Process::nil() { return make({.kind = Kind::Nil}); }

Process Process::prefix(ActionSym n, Process p) {
  return make({.kind = Kind::Prefix, .sym = std::move(n), .lhs = std::move(p)});
}

Process Process::guard(Formula f, Process p) {
  return make(
      {.kind = Kind::Guard, .formula = std::move(f), .lhs = std::move(p)});
}

Process Process::choice(Process a, Process b) {
  return make({.kind = Kind::Choice, .lhs = std::move(a), .rhs = std::move(b)});
}

Process Process::rec(std::string var, Process p) {
  return make({.kind = Kind::Rec, .var = std::move(var), .lhs = std::move(p)});
}

Process Process::var(std::string name) {
  return make({.kind = Kind::Var, .var = std::move(name)});
}

namespace {

int cmp_p(const Process& a, const Process& b) {
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Process::Kind::Nil:
      return 0;
    case Process::Kind::Var:
      return a.var_name().compare(b.var_name());
    case Process::Kind::Prefix: {
      int c = a.sym().name.compare(b.sym().name);
      if (c != 0) return c;
      return cmp_p(a.lhs(), b.lhs());
    }
    case Process::Kind::Guard: {
      if (a.guard_formula() != b.guard_formula())
        return a.guard_formula() < b.guard_formula() ? -1 : 1;
      return cmp_p(a.lhs(), b.lhs());
    }
    case Process::Kind::Choice: {
      int c = cmp_p(a.lhs(), b.lhs());
      if (c != 0) return c;
      return cmp_p(a.rhs(), b.rhs());
    }
    case Process::Kind::Rec: {
      int c = a.var_name().compare(b.var_name());
      if (c != 0) return c;
      return cmp_p(a.lhs(), b.lhs());
    }
  }
  return 0;
}

}  // namespace

bool operator==(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return cmp_p(a, b) == 0;
}

bool operator<(const Process& a, const Process& b) {
  if (a.node_ == b.node_) return false;
  if (!a.node_) return static_cast<bool>(b.node_);
  if (!b.node_) return false;
  return cmp_p(a, b) < 0;
}

namespace {

// Precedence: + lowest; prefix/guard bind tighter; mu extends right.
enum PPrec { P_CHOICE = 0, P_TIGHT = 1 };

void print_p(std::ostream& os, const Process& p, int min_prec) {
  switch (p.kind()) {
    case Process::Kind::Nil:
      os << "nil";
      return;
    case Process::Kind::Var:
      os << p.var_name();
      return;
    case Process::Kind::Prefix:
      os << p.sym().name << " . ";
      print_p(os, p.lhs(), P_TIGHT);
      return;
    case Process::Kind::Guard:
      os << "[" << to_string(p.guard_formula()) << "] ";
      print_p(os, p.lhs(), P_TIGHT);
      return;
    case Process::Kind::Choice: {
      bool paren = min_prec > P_CHOICE;
      if (paren) os << "(";
      print_p(os, p.lhs(), P_CHOICE + 1);
      os << " + ";
      print_p(os, p.rhs(), P_CHOICE);
      if (paren) os << ")";
      return;
    }
    case Process::Kind::Rec:
      if (min_prec > P_CHOICE) {
        os << "(mu " << p.var_name() << " . ";
        print_p(os, p.lhs(), P_CHOICE);
        os << ")";
      } else {
        os << "mu " << p.var_name() << " . ";
        print_p(os, p.lhs(), P_CHOICE);
      }
      return;
  }
}

}  // namespace

std::string to_string(const Process& p) {
  if (!p) return "<null>";
  std::ostringstream os;
  print_p(os, p, P_CHOICE);
  return os.str();
}

namespace {

void collect_free(const Process& p, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (p.kind()) {
    case Process::Kind::Nil:
      return;
    case Process::Kind::Var:
      if (!bound.count(p.var_name())) out.insert(p.var_name());
      return;
    case Process::Kind::Prefix:
    case Process::Kind::Guard:
      collect_free(p.lhs(), bound, out);
      return;
    case Process::Kind::Choice:
      collect_free(p.lhs(), bound, out);
      collect_free(p.rhs(), bound, out);
      return;
    case Process::Kind::Rec: {
      bool fresh = bound.insert(p.var_name()).second;
      collect_free(p.lhs(), bound, out);
      if (fresh) bound.erase(p.var_name());
      return;
    }
  }
}

// Variables of binders in scope that are reachable without passing a
// prefix; a Var hit on such a variable is unguarded.
void find_unguarded(const Process& p, std::set<std::string> exposed,
                    std::vector<std::string>& out) {
  switch (p.kind()) {
    case Process::Kind::Nil:
      return;
    case Process::Kind::Var:
      if (exposed.count(p.var_name())) out.push_back(p.var_name());
      return;
    case Process::Kind::Prefix:
      find_unguarded(p.lhs(), {}, out);
      return;
    case Process::Kind::Guard:
      find_unguarded(p.lhs(), std::move(exposed), out);
      return;
    case Process::Kind::Choice:
      find_unguarded(p.lhs(), exposed, out);
      find_unguarded(p.rhs(), std::move(exposed), out);
      return;
    case Process::Kind::Rec:
      exposed.insert(p.var_name());
      find_unguarded(p.lhs(), std::move(exposed), out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const Process& p) {
  std::set<std::string> bound, out;
  collect_free(p, bound, out);
  return out;
}

bool is_closed(const Process& p) { return free_vars(p).empty(); }

std::vector<std::string> unguarded_vars(const Process& p) {
  std::vector<std::string> out;
  find_unguarded(p, {}, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void check_symbols(const Process& p, const EnsembleSignature& sig) {
  switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Var:
      return;
    case Process::Kind::Prefix:
      if (!sig.has_action(p.sym()))
        throw SignatureError("unknown action symbol '" + p.sym().name + "'");
      check_symbols(p.lhs(), sig);
      return;
    case Process::Kind::Guard:
      check_over_signature(p.guard_formula(), sig);
      check_symbols(p.lhs(), sig);
      return;
    case Process::Kind::Choice:
      check_symbols(p.lhs(), sig);
      check_symbols(p.rhs(), sig);
      return;
    case Process::Kind::Rec:
      check_symbols(p.lhs(), sig);
      return;
  }
}

}  // namespace

void check_process(const Process& p, const EnsembleSignature& sig) {
  auto fv = free_vars(p);
  if (!fv.empty())
    throw Error("process has free variables: " + *fv.begin());
  auto ug = unguarded_vars(p);
  if (!ug.empty())
    throw Error("unguarded recursion through variable " + ug.front());
  check_symbols(p, sig);
}

Process substitute(const Process& p, const std::string& var,
                   const Process& q) {
  switch (p.kind()) {
    case Process::Kind::Nil:
      return p;
    case Process::Kind::Var:
      return p.var_name() == var ? q : p;
    case Process::Kind::Prefix: {
      Process s = substitute(p.lhs(), var, q);
      return s == p.lhs() ? p : Process::prefix(p.sym(), s);
    }
    case Process::Kind::Guard: {
      Process s = substitute(p.lhs(), var, q);
      return s == p.lhs() ? p : Process::guard(p.guard_formula(), s);
    }
    case Process::Kind::Choice: {
      Process l = substitute(p.lhs(), var, q);
      Process r = substitute(p.rhs(), var, q);
      return (l == p.lhs() && r == p.rhs()) ? p : Process::choice(l, r);
    }
    case Process::Kind::Rec: {
      if (p.var_name() == var) return p;  // inner binder shadows
      // q is closed wherever this is used, so no capture can occur.
      Process s = substitute(p.lhs(), var, q);
      return s == p.lhs() ? p : Process::rec(p.var_name(), s);
    }
  }
  return p;
}

namespace {

void derive(const Process& p, std::vector<ProcessTransition>& out) {
  switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Var:
      return;
    case Process::Kind::Prefix:
      out.push_back({Formula::top(), p.sym(), p.lhs()});
      return;
    case Process::Kind::Guard: {
      std::vector<ProcessTransition> inner;
      derive(p.lhs(), inner);
      for (auto& t : inner) {
        Formula g = t.guard.kind() == Formula::Kind::Top
                        ? p.guard_formula()
                        : Formula::land(p.guard_formula(), t.guard);
        out.push_back({std::move(g), t.action, t.target});
      }
      return;
    }
    case Process::Kind::Choice:
      derive(p.lhs(), out);
      derive(p.rhs(), out);
      return;
    case Process::Kind::Rec:
      derive(substitute(p.lhs(), p.var_name(), p), out);
      return;
  }
}

}  // namespace

std::vector<ProcessTransition> derivatives(const Process& p) {
  auto ug = unguarded_vars(p);
  if (!ug.empty())
    throw Error("unguarded recursion through variable " + ug.front());
  std::vector<ProcessTransition> out;
  derive(p, out);
  // Set semantics: drop duplicate derivations.
  std::vector<ProcessTransition> uniq;
  for (auto& t : out)
    if (std::find(uniq.begin(), uniq.end(), t) == uniq.end())
      uniq.push_back(std::move(t));
  return uniq;
}

std::set<AgentId> agents_of_process(const Process& p,
                                    const EnsembleSignature& sig) {
  switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Var:
      return sig.agents;
    case Process::Kind::Prefix: {
      std::set<AgentId> inner = agents_of_process(p.lhs(), sig);
      std::set<AgentId> out;
      AgentId owner = sig.owner(p.sym());
      if (inner.count(owner)) out.insert(owner);
      return out;
    }
    case Process::Kind::Guard: {
      auto ga = agents_of(p.guard_formula(), sig);
      auto pa = agents_of_process(p.lhs(), sig);
      std::set<AgentId> out;
      std::set_intersection(ga.begin(), ga.end(), pa.begin(), pa.end(),
                            std::inserter(out, out.begin()));
      return out;
    }
    case Process::Kind::Choice: {
      auto la = agents_of_process(p.lhs(), sig);
      auto ra = agents_of_process(p.rhs(), sig);
      std::set<AgentId> out;
      std::set_intersection(la.begin(), la.end(), ra.begin(), ra.end(),
                            std::inserter(out, out.begin()));
      return out;
    }
    case Process::Kind::Rec:
      return agents_of_process(p.lhs(), sig);
  }
  return {};
}

}  // namespace eens
