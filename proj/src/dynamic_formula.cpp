#include "eens/dynamic_formula.hpp"

#include <functional>
#include <sstream>

#include "eens/error.hpp"

namespace eens {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

CompoundAction CompoundAction::make(Node n) {
  std::size_t h = mix(0xac7, static_cast<std::size_t>(n.kind));
  if (n.kind == Kind::Atom) h = mix(h, std::hash<std::string>{}(n.sym.name));
  if (n.formula) h = mix(h, n.formula.hash());
  if (n.lhs) h = mix(h, n.lhs.hash());
  if (n.rhs) h = mix(h, n.rhs.hash());
  n.hash = h;
  CompoundAction a;
  a.node_ = std::make_shared<const Node>(std::move(n));
  return a;
}

CompoundAction CompoundAction::atom(ActionSym n) {
  return make({.kind = Kind::Atom, .sym = std::move(n)});
}

CompoundAction CompoundAction::test(Formula f) {
  return make({.kind = Kind::Test, .formula = std::move(f)});
}

CompoundAction CompoundAction::choice(CompoundAction a, CompoundAction b) {
  return make({.kind = Kind::Choice, .lhs = std::move(a), .rhs = std::move(b)});
}

CompoundAction CompoundAction::seq(CompoundAction a, CompoundAction b) {
  return make({.kind = Kind::Seq, .lhs = std::move(a), .rhs = std::move(b)});
}

CompoundAction CompoundAction::star(CompoundAction a) {
  return make({.kind = Kind::Star, .lhs = std::move(a)});
}

namespace {

int cmp_ca(const CompoundAction& a, const CompoundAction& b) {
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case CompoundAction::Kind::Atom:
      return a.sym().name.compare(b.sym().name);
    case CompoundAction::Kind::Test:
      if (a.formula() == b.formula()) return 0;
      return a.formula() < b.formula() ? -1 : 1;
    case CompoundAction::Kind::Star:
      return cmp_ca(a.lhs(), b.lhs());
    case CompoundAction::Kind::Choice:
    case CompoundAction::Kind::Seq: {
      int c = cmp_ca(a.lhs(), b.lhs());
      if (c != 0) return c;
      return cmp_ca(a.rhs(), b.rhs());
    }
  }
  return 0;
}

}  // namespace

bool operator==(const CompoundAction& a, const CompoundAction& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return cmp_ca(a, b) == 0;
}

bool operator<(const CompoundAction& a, const CompoundAction& b) {
  if (a.node_ == b.node_) return false;
  if (!a.node_) return static_cast<bool>(b.node_);
  if (!b.node_) return false;
  return cmp_ca(a, b) < 0;
}

namespace {

// Precedence: * > ; > +
enum CaPrec { CA_CHOICE = 0, CA_SEQ = 1, CA_STAR = 2 };

void print_ca(std::ostream& os, const CompoundAction& a, int min_prec) {
  switch (a.kind()) {
    case CompoundAction::Kind::Atom:
      os << a.sym().name;
      return;
    case CompoundAction::Kind::Test:
      os << to_string(a.formula()) << " ?";
      return;
    case CompoundAction::Kind::Star: {
      bool paren = a.lhs().kind() != CompoundAction::Kind::Atom &&
                   a.lhs().kind() != CompoundAction::Kind::Star;
      if (paren) os << "(";
      print_ca(os, a.lhs(), CA_STAR);
      if (paren) os << ")";
      os << "*";
      return;
    }
    case CompoundAction::Kind::Seq: {
      bool paren = min_prec > CA_SEQ;
      if (paren) os << "(";
      print_ca(os, a.lhs(), CA_SEQ + 1);
      os << " ; ";
      print_ca(os, a.rhs(), CA_SEQ);
      if (paren) os << ")";
      return;
    }
    case CompoundAction::Kind::Choice: {
      bool paren = min_prec > CA_CHOICE;
      if (paren) os << "(";
      print_ca(os, a.lhs(), CA_CHOICE + 1);
      os << " + ";
      print_ca(os, a.rhs(), CA_CHOICE);
      if (paren) os << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const CompoundAction& a) {
  if (!a) return "<null>";
  std::ostringstream os;
  print_ca(os, a, CA_CHOICE);
  return os.str();
}

CompoundAction desugar(const CompoundAction& a, const EnsembleSignature& sig) {
  switch (a.kind()) {
    case CompoundAction::Kind::Atom:
      if (!sig.has_action(a.sym()))
        throw SignatureError("unknown action symbol '" + a.sym().name + "'");
      return a;
    case CompoundAction::Kind::Test: {
      check_over_signature(a.formula(), sig);
      return CompoundAction::test(desugar(a.formula()));
    }
    case CompoundAction::Kind::Star:
      return CompoundAction::star(desugar(a.lhs(), sig));
    case CompoundAction::Kind::Choice:
      return CompoundAction::choice(desugar(a.lhs(), sig),
                                    desugar(a.rhs(), sig));
    case CompoundAction::Kind::Seq:
      return CompoundAction::seq(desugar(a.lhs(), sig), desugar(a.rhs(), sig));
  }
  return a;
}

EnsembleFormula EnsembleFormula::make(Node n) {
  std::size_t h = mix(0xef1, static_cast<std::size_t>(n.kind));
  if (n.formula) h = mix(h, n.formula.hash());
  if (n.action) h = mix(h, n.action.hash());
  if (n.lhs) h = mix(h, n.lhs.hash());
  if (n.rhs) h = mix(h, n.rhs.hash());
  n.hash = h;
  EnsembleFormula f;
  f.node_ = std::make_shared<const Node>(std::move(n));
  return f;
}

EnsembleFormula EnsembleFormula::top() { return make({.kind = Kind::Top}); }
EnsembleFormula EnsembleFormula::bottom() {
  return make({.kind = Kind::Bottom});
}

EnsembleFormula EnsembleFormula::epi(Formula f) {
  return make({.kind = Kind::Epi, .formula = std::move(f)});
}

EnsembleFormula EnsembleFormula::lnot(EnsembleFormula f) {
  return make({.kind = Kind::Not, .lhs = std::move(f)});
}

EnsembleFormula EnsembleFormula::land(EnsembleFormula a, EnsembleFormula b) {
  return make({.kind = Kind::And, .lhs = std::move(a), .rhs = std::move(b)});
}

EnsembleFormula EnsembleFormula::lor(EnsembleFormula a, EnsembleFormula b) {
  return make({.kind = Kind::Or, .lhs = std::move(a), .rhs = std::move(b)});
}

EnsembleFormula EnsembleFormula::imp(EnsembleFormula a, EnsembleFormula b) {
  return make({.kind = Kind::Imp, .lhs = std::move(a), .rhs = std::move(b)});
}

EnsembleFormula EnsembleFormula::box(CompoundAction act, EnsembleFormula f) {
  return make({.kind = Kind::Box, .action = std::move(act), .lhs = std::move(f)});
}

EnsembleFormula EnsembleFormula::diamond(CompoundAction act,
                                         EnsembleFormula f) {
  return make(
      {.kind = Kind::Diamond, .action = std::move(act), .lhs = std::move(f)});
}

namespace {

int cmp_ef(const EnsembleFormula& a, const EnsembleFormula& b) {
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case EnsembleFormula::Kind::Top:
    case EnsembleFormula::Kind::Bottom:
      return 0;
    case EnsembleFormula::Kind::Epi:
      if (a.formula() == b.formula()) return 0;
      return a.formula() < b.formula() ? -1 : 1;
    case EnsembleFormula::Kind::Not:
      return cmp_ef(a.lhs(), b.lhs());
    case EnsembleFormula::Kind::And:
    case EnsembleFormula::Kind::Or:
    case EnsembleFormula::Kind::Imp: {
      int c = cmp_ef(a.lhs(), b.lhs());
      if (c != 0) return c;
      return cmp_ef(a.rhs(), b.rhs());
    }
    case EnsembleFormula::Kind::Box:
    case EnsembleFormula::Kind::Diamond: {
      if (a.action() != b.action()) return a.action() < b.action() ? -1 : 1;
      return cmp_ef(a.lhs(), b.lhs());
    }
  }
  return 0;
}

}  // namespace

bool operator==(const EnsembleFormula& a, const EnsembleFormula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  return cmp_ef(a, b) == 0;
}

namespace {

enum EfPrec { EF_IMP = 0, EF_OR = 1, EF_AND = 2, EF_UNARY = 3 };

void print_ef(std::ostream& os, const EnsembleFormula& f, int min_prec) {
  switch (f.kind()) {
    case EnsembleFormula::Kind::Top:
      os << "true";
      return;
    case EnsembleFormula::Kind::Bottom:
      os << "false";
      return;
    case EnsembleFormula::Kind::Epi:
      os << to_string(f.formula());
      return;
    case EnsembleFormula::Kind::Not:
      os << "~";
      if (f.lhs().kind() == EnsembleFormula::Kind::Epi) {
        os << "(" << to_string(f.lhs().formula()) << ")";
      } else {
        print_ef(os, f.lhs(), EF_UNARY);
      }
      return;
    case EnsembleFormula::Kind::Box:
      os << "[" << to_string(f.action()) << "] ";
      print_ef(os, f.lhs(), EF_UNARY);
      return;
    case EnsembleFormula::Kind::Diamond:
      os << "<" << to_string(f.action()) << "> ";
      print_ef(os, f.lhs(), EF_UNARY);
      return;
    case EnsembleFormula::Kind::And: {
      bool paren = min_prec > EF_AND;
      if (paren) os << "(";
      print_ef(os, f.lhs(), EF_AND + 1);
      os << " & ";
      print_ef(os, f.rhs(), EF_AND);
      if (paren) os << ")";
      return;
    }
    case EnsembleFormula::Kind::Or: {
      bool paren = min_prec > EF_OR;
      if (paren) os << "(";
      print_ef(os, f.lhs(), EF_OR + 1);
      os << " | ";
      print_ef(os, f.rhs(), EF_OR);
      if (paren) os << ")";
      return;
    }
    case EnsembleFormula::Kind::Imp: {
      bool paren = min_prec > EF_IMP;
      if (paren) os << "(";
      print_ef(os, f.lhs(), EF_IMP + 1);
      os << " -> ";
      print_ef(os, f.rhs(), EF_IMP);
      if (paren) os << ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const EnsembleFormula& f) {
  if (!f) return "<null>";
  std::ostringstream os;
  print_ef(os, f, EF_IMP);
  return os.str();
}

namespace {

bool box_free(const EnsembleFormula& f) {
  switch (f.kind()) {
    case EnsembleFormula::Kind::Top:
    case EnsembleFormula::Kind::Bottom:
    case EnsembleFormula::Kind::Epi:
      return true;
    case EnsembleFormula::Kind::Not:
      return box_free(f.lhs());
    case EnsembleFormula::Kind::And:
    case EnsembleFormula::Kind::Or:
    case EnsembleFormula::Kind::Imp:
      return box_free(f.lhs()) && box_free(f.rhs());
    case EnsembleFormula::Kind::Box:
    case EnsembleFormula::Kind::Diamond:
      return false;
  }
  return false;
}

// Fold a box-free ensemble formula into one epistemic formula.
Formula as_epistemic(const EnsembleFormula& f) {
  switch (f.kind()) {
    case EnsembleFormula::Kind::Top:
      return Formula::top();
    case EnsembleFormula::Kind::Bottom:
      return desugar(Formula::bottom());
    case EnsembleFormula::Kind::Epi:
      return desugar(f.formula());
    case EnsembleFormula::Kind::Not:
      return Formula::lnot(as_epistemic(f.lhs()));
    case EnsembleFormula::Kind::And:
      return Formula::land(as_epistemic(f.lhs()), as_epistemic(f.rhs()));
    case EnsembleFormula::Kind::Or:
      return desugar(
          Formula::lor(as_epistemic(f.lhs()), as_epistemic(f.rhs())));
    case EnsembleFormula::Kind::Imp:
      return desugar(
          Formula::imp(as_epistemic(f.lhs()), as_epistemic(f.rhs())));
    default:
      return {};
  }
}

}  // namespace

EnsembleFormula normalize(const EnsembleFormula& f) {
  if (box_free(f)) return EnsembleFormula::epi(as_epistemic(f));
  switch (f.kind()) {
    case EnsembleFormula::Kind::Not:
      return EnsembleFormula::lnot(normalize(f.lhs()));
    case EnsembleFormula::Kind::And:
      return EnsembleFormula::land(normalize(f.lhs()), normalize(f.rhs()));
    case EnsembleFormula::Kind::Or:
      return EnsembleFormula::lnot(
          EnsembleFormula::land(EnsembleFormula::lnot(normalize(f.lhs())),
                                EnsembleFormula::lnot(normalize(f.rhs()))));
    case EnsembleFormula::Kind::Imp:
      return EnsembleFormula::lnot(EnsembleFormula::land(
          normalize(f.lhs()), EnsembleFormula::lnot(normalize(f.rhs()))));
    case EnsembleFormula::Kind::Box:
      return EnsembleFormula::box(f.action(), normalize(f.lhs()));
    case EnsembleFormula::Kind::Diamond:
      return EnsembleFormula::lnot(EnsembleFormula::box(
          f.action(), EnsembleFormula::lnot(normalize(f.lhs()))));
    default:
      return f;  // unreachable: box-free cases handled above
  }
}

bool within_focus(const CompoundAction& a, const FocusSet& F) {
  switch (a.kind()) {
    case CompoundAction::Kind::Atom:
      return true;
    case CompoundAction::Kind::Test:
      return in_boolean_closure(a.formula(), F);
    case CompoundAction::Kind::Star:
      return within_focus(a.lhs(), F);
    case CompoundAction::Kind::Choice:
    case CompoundAction::Kind::Seq:
      return within_focus(a.lhs(), F) && within_focus(a.rhs(), F);
  }
  return false;
}

bool within_focus(const EnsembleFormula& f, const FocusSet& F) {
  switch (f.kind()) {
    case EnsembleFormula::Kind::Top:
    case EnsembleFormula::Kind::Bottom:
      return true;
    case EnsembleFormula::Kind::Epi:
      return in_boolean_closure(f.formula(), F);
    case EnsembleFormula::Kind::Not:
      return within_focus(f.lhs(), F);
    case EnsembleFormula::Kind::And:
    case EnsembleFormula::Kind::Or:
    case EnsembleFormula::Kind::Imp:
      return within_focus(f.lhs(), F) && within_focus(f.rhs(), F);
    case EnsembleFormula::Kind::Box:
    case EnsembleFormula::Kind::Diamond:
      return within_focus(f.action(), F) && within_focus(f.lhs(), F);
  }
  return false;
}

}  // namespace eens
