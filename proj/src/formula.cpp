#include "eens/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "eens/error.hpp"

namespace eens {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t str_hash(const std::string& s) {
  return std::hash<std::string>{}(s);
}

}  // namespace

Formula Formula::make(Node n) {
  std::size_t h = mix(0x5151, static_cast<std::size_t>(n.kind));
  if (n.kind == Kind::Atom) h = mix(h, str_hash(n.prop.name));
  if (n.kind == Kind::Knows || n.kind == Kind::Maybe ||
      n.kind == Kind::KnowsWhether)
    h = mix(h, str_hash(n.agent.name));
  if (n.lhs) h = mix(h, n.lhs.hash());
  if (n.rhs) h = mix(h, n.rhs.hash());
  n.hash = h;
  Formula f;
  f.node_ = std::make_shared<const Node>(std::move(n));
  return f;
}

Formula Formula::top() { return make({.kind = Kind::Top}); }
Formula Formula::bottom() { return make({.kind = Kind::Bottom}); }

Formula Formula::atom(Prop p) {
  return make({.kind = Kind::Atom, .prop = std::move(p)});
}

Formula Formula::lnot(Formula f) {
  return make({.kind = Kind::Not, .lhs = std::move(f)});
}

Formula Formula::land(Formula lhs, Formula rhs) {
  return make({.kind = Kind::And, .lhs = std::move(lhs), .rhs = std::move(rhs)});
}

Formula Formula::lor(Formula lhs, Formula rhs) {
  return make({.kind = Kind::Or, .lhs = std::move(lhs), .rhs = std::move(rhs)});
}

Formula Formula::imp(Formula lhs, Formula rhs) {
  return make({.kind = Kind::Imp, .lhs = std::move(lhs), .rhs = std::move(rhs)});
}

Formula Formula::iff(Formula lhs, Formula rhs) {
  return land(imp(lhs, rhs), imp(rhs, lhs));
}

Formula Formula::knows(AgentId a, Formula f) {
  return make({.kind = Kind::Knows, .agent = std::move(a), .lhs = std::move(f)});
}

Formula Formula::maybe(AgentId a, Formula f) {
  return make({.kind = Kind::Maybe, .agent = std::move(a), .lhs = std::move(f)});
}

Formula Formula::knows_whether(AgentId a, Formula f) {
  return make({.kind = Kind::KnowsWhether,
               .agent = std::move(a),
               .lhs = std::move(f)});
}

Formula Formula::conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = land(*it, acc);
  return acc;
}

bool Formula::is_core() const {
  switch (kind()) {
    case Kind::Top:
      return true;
    case Kind::Atom:
      return true;
    case Kind::Not:
      return lhs().is_core();
    case Kind::And:
      return lhs().is_core() && rhs().is_core();
    case Kind::Knows:
      return lhs().is_core();
    default:
      return false;
  }
}

namespace {

int cmp(const Formula& a, const Formula& b) {
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
      return 0;
    case Formula::Kind::Atom:
      return a.prop().name.compare(b.prop().name);
    case Formula::Kind::Knows:
    case Formula::Kind::Maybe:
    case Formula::Kind::KnowsWhether: {
      int c = a.agent().name.compare(b.agent().name);
      if (c != 0) return c;
      return cmp(a.lhs(), b.lhs());
    }
    case Formula::Kind::Not:
      return cmp(a.lhs(), b.lhs());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp: {
      int c = cmp(a.lhs(), b.lhs());
      if (c != 0) return c;
      return cmp(a.rhs(), b.rhs());
    }
  }
  return 0;
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return cmp(a, b) == 0;
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return false;
  if (!a.node_) return static_cast<bool>(b.node_);
  if (!b.node_) return false;
  return cmp(a, b) < 0;
}

Formula desugar(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return f;
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::Not: {
      Formula s = desugar(f.lhs());
      return s == f.lhs() ? f : Formula::lnot(s);
    }
    case Formula::Kind::And: {
      Formula l = desugar(f.lhs());
      Formula r = desugar(f.rhs());
      return (l == f.lhs() && r == f.rhs()) ? f : Formula::land(l, r);
    }
    case Formula::Kind::Knows: {
      Formula s = desugar(f.lhs());
      return s == f.lhs() ? f : Formula::knows(f.agent(), s);
    }
    case Formula::Kind::Bottom:
      return Formula::lnot(Formula::top());
    case Formula::Kind::Or:
      return Formula::lnot(Formula::land(Formula::lnot(desugar(f.lhs())),
                                         Formula::lnot(desugar(f.rhs()))));
    case Formula::Kind::Imp:
      return Formula::lnot(
          Formula::land(desugar(f.lhs()), Formula::lnot(desugar(f.rhs()))));
    case Formula::Kind::Maybe:
      return Formula::lnot(
          Formula::knows(f.agent(), Formula::lnot(desugar(f.lhs()))));
    case Formula::Kind::KnowsWhether: {
      Formula s = desugar(f.lhs());
      Formula k1 = Formula::knows(f.agent(), s);
      Formula k2 = Formula::knows(f.agent(), Formula::lnot(s));
      return Formula::lnot(
          Formula::land(Formula::lnot(k1), Formula::lnot(k2)));
    }
  }
  return f;
}

namespace {

// Printing precedence: ~, K, M, KW bind tightest; & above |; -> loosest.
enum Prec { PREC_IMP = 0, PREC_OR = 1, PREC_AND = 2, PREC_UNARY = 3 };

struct SugarView {
  Formula::Kind kind;
  AgentId agent;  // KW / Maybe
  Formula lhs;
  Formula rhs;
};

// Recognises the desugared images of the surface connectives so that the
// printer can fold them back. Checked most specific first.
SugarView view(const Formula& f) {
  if (f.kind() == Formula::Kind::Not) {
    const Formula& n = f.lhs();
    if (n.kind() == Formula::Kind::Top)
      return {Formula::Kind::Bottom, {}, {}, {}};
    if (n.kind() == Formula::Kind::Knows &&
        n.lhs().kind() == Formula::Kind::Not)
      return {Formula::Kind::Maybe, n.agent(), n.lhs().lhs(), {}};
    if (n.kind() == Formula::Kind::And) {
      const Formula& l = n.lhs();
      const Formula& r = n.rhs();
      if (l.kind() == Formula::Kind::Not && r.kind() == Formula::Kind::Not) {
        const Formula& a = l.lhs();
        const Formula& b = r.lhs();
        if (a.kind() == Formula::Kind::Knows &&
            b.kind() == Formula::Kind::Knows && a.agent() == b.agent() &&
            b.lhs().kind() == Formula::Kind::Not && b.lhs().lhs() == a.lhs())
          return {Formula::Kind::KnowsWhether, a.agent(), a.lhs(), {}};
        return {Formula::Kind::Or, {}, a, b};
      }
      if (r.kind() == Formula::Kind::Not)
        return {Formula::Kind::Imp, {}, l, r.lhs()};
    }
  }
  return {f.kind(), {}, {}, {}};
}

void print(std::ostream& os, const Formula& f, int min_prec) {
  SugarView v = view(f);
  switch (v.kind) {
    case Formula::Kind::Top:
      os << "true";
      return;
    case Formula::Kind::Bottom:
      os << "false";
      return;
    case Formula::Kind::Atom:
      os << f.prop().name;
      return;
    case Formula::Kind::Not:
      os << "~";
      print(os, f.lhs(), PREC_UNARY);
      return;
    case Formula::Kind::Knows:
      os << "K[" << f.agent().name << "] ";
      print(os, f.lhs(), PREC_UNARY);
      return;
    case Formula::Kind::Maybe:
      os << "M[" << v.agent.name << "] ";
      print(os, v.lhs, PREC_UNARY);
      return;
    case Formula::Kind::KnowsWhether:
      os << "KW[" << v.agent.name << "] ";
      print(os, v.lhs, PREC_UNARY);
      return;
    case Formula::Kind::And: {
      bool paren = min_prec > PREC_AND;
      if (paren) os << "(";
      print(os, f.lhs(), PREC_AND + 1);
      os << " & ";
      print(os, f.rhs(), PREC_AND);
      if (paren) os << ")";
      return;
    }
    case Formula::Kind::Or: {
      bool paren = min_prec > PREC_OR;
      if (paren) os << "(";
      print(os, v.lhs, PREC_OR + 1);
      os << " | ";
      print(os, v.rhs, PREC_OR);
      if (paren) os << ")";
      return;
    }
    case Formula::Kind::Imp: {
      bool paren = min_prec > PREC_IMP;
      if (paren) os << "(";
      print(os, v.lhs, PREC_IMP + 1);
      os << " -> ";
      print(os, v.rhs, PREC_IMP);
      if (paren) os << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  if (!f) return "<null>";
  print(os, desugar(f), PREC_IMP);
  return os.str();
}

int modal_depth(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
    case Formula::Kind::Atom:
      return 0;
    case Formula::Kind::Knows:
    case Formula::Kind::Maybe:
      return 1 + modal_depth(f.lhs());
    case Formula::Kind::KnowsWhether:
      return 1 + modal_depth(f.lhs());
    case Formula::Kind::Not:
      return modal_depth(f.lhs());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
  }
  return 0;
}

int formula_size(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
    case Formula::Kind::Atom:
      return 1;
    case Formula::Kind::Not:
    case Formula::Kind::Knows:
    case Formula::Kind::Maybe:
    case Formula::Kind::KnowsWhether:
      return 1 + formula_size(f.lhs());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return 1 + formula_size(f.lhs()) + formula_size(f.rhs());
  }
  return 1;
}

Formula simplify_light(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Atom:
      return f;
    case Formula::Kind::Not: {
      Formula s = simplify_light(f.lhs());
      if (s.kind() == Formula::Kind::Not) return s.lhs();
      return Formula::lnot(s);
    }
    case Formula::Kind::And: {
      Formula l = simplify_light(f.lhs());
      Formula r = simplify_light(f.rhs());
      if (l.kind() == Formula::Kind::Top) return r;
      if (r.kind() == Formula::Kind::Top) return l;
      return Formula::land(l, r);
    }
    case Formula::Kind::Knows:
      return Formula::knows(f.agent(), simplify_light(f.lhs()));
    default:
      return simplify_light(desugar(f));
  }
}

bool EnsembleSignature::has_action(const ActionSym& n) const {
  for (const auto& [a, syms] : action_syms)
    if (syms.count(n)) return true;
  return false;
}

AgentId EnsembleSignature::owner(const ActionSym& n) const {
  for (const auto& [a, syms] : action_syms)
    if (syms.count(n)) return a;
  throw SignatureError("unknown action symbol '" + n.name + "'");
}

std::set<ActionSym> EnsembleSignature::all_action_syms() const {
  std::set<ActionSym> all;
  for (const auto& [a, syms] : action_syms) all.insert(syms.begin(), syms.end());
  return all;
}

void EnsembleSignature::validate() const {
  std::map<ActionSym, AgentId> seen;
  for (const auto& [a, syms] : action_syms) {
    if (!agents.count(a))
      throw SignatureError("action symbols declared for unknown agent '" +
                           a.name + "'");
    for (const auto& n : syms) {
      auto [it, fresh] = seen.emplace(n, a);
      if (!fresh)
        throw SignatureError("action symbol '" + n.name +
                             "' declared for both '" + it->second.name +
                             "' and '" + a.name + "'");
    }
  }
}

void check_over_signature(const Formula& f, const EnsembleSignature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Top:
    case Formula::Kind::Bottom:
      return;
    case Formula::Kind::Atom:
      if (!sig.props.count(f.prop()))
        throw SignatureError("unknown proposition '" + f.prop().name + "'");
      return;
    case Formula::Kind::Knows:
    case Formula::Kind::Maybe:
    case Formula::Kind::KnowsWhether:
      if (!sig.agents.count(f.agent()))
        throw SignatureError("unknown agent '" + f.agent().name + "'");
      check_over_signature(f.lhs(), sig);
      return;
    case Formula::Kind::Not:
      check_over_signature(f.lhs(), sig);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      check_over_signature(f.lhs(), sig);
      check_over_signature(f.rhs(), sig);
      return;
  }
}

namespace {

std::set<AgentId> intersect(const std::set<AgentId>& a,
                            const std::set<AgentId>& b) {
  std::set<AgentId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

std::set<AgentId> agents_of_core(const Formula& f,
                                 const EnsembleSignature& sig) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return sig.agents;
    case Formula::Kind::Atom:
      return {};
    case Formula::Kind::Not:
      return agents_of_core(f.lhs(), sig);
    case Formula::Kind::And:
      return intersect(agents_of_core(f.lhs(), sig),
                       agents_of_core(f.rhs(), sig));
    case Formula::Kind::Knows:
      return {f.agent()};
    default:
      return {};
  }
}

}  // namespace

std::set<AgentId> agents_of(const Formula& f, const EnsembleSignature& sig) {
  check_over_signature(f, sig);
  return agents_of_core(desugar(f), sig);
}

FocusSet::FocusSet(const std::vector<Formula>& fs) {
  for (const auto& f : fs) insert(f);
}

void FocusSet::insert(const Formula& f) { formulas_.insert(desugar(f)); }

bool FocusSet::contains(const Formula& f) const {
  return formulas_.count(desugar(f)) > 0;
}

bool in_boolean_closure(const Formula& f, const FocusSet& F) {
  Formula d = desugar(f);
  if (F.contains(d)) return true;
  switch (d.kind()) {
    case Formula::Kind::Top:
      return true;
    case Formula::Kind::Not:
      return in_boolean_closure(d.lhs(), F);
    case Formula::Kind::And:
      return in_boolean_closure(d.lhs(), F) && in_boolean_closure(d.rhs(), F);
    default:
      return false;
  }
}

}  // namespace eens
