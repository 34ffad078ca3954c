#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "eens/error.hpp"
#include "eens/problem.hpp"

namespace eens {

namespace {

enum class Tok {
  Ident,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Less,
  Greater,
  Semi,
  Colon,
  Comma,
  Dot,
  Plus,
  Star,
  Question,
  Tilde,
  Amp,
  Bar,
  BarBar,
  Arrow,
  Equals,
  At,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text) {
    out.push_back({k, std::move(text), line, col});
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_'))
        ++j;
      push(Tok::Ident, src.substr(i, j - i));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto two = i + 1 < src.size() ? src.substr(i, 2) : "";
    if (two == "->") {
      push(Tok::Arrow, two);
      i += 2;
      col += 2;
      continue;
    }
    if (two == "||") {
      push(Tok::BarBar, two);
      i += 2;
      col += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '<': k = Tok::Less; break;
      case '>': k = Tok::Greater; break;
      case ';': k = Tok::Semi; break;
      case ':': k = Tok::Colon; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case '+': k = Tok::Plus; break;
      case '*': k = Tok::Star; break;
      case '?': k = Tok::Question; break;
      case '~': k = Tok::Tilde; break;
      case '&': k = Tok::Amp; break;
      case '|': k = Tok::Bar; break;
      case '=': k = Tok::Equals; break;
      case '@': k = Tok::At; break;
      default:
        throw ParseError(line, col,
                         std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c));
    ++i;
    ++col;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const std::string& filename)
      : tokens_(lex(text)), filename_(filename) {}

  ProblemSpec parse_spec() {
    if (peek().kind == Tok::End) fail("empty problem description");
    while (peek().kind != Tok::End) parse_item();
    finish();
    return std::move(spec_);
  }

  // Entry points for standalone fragments.
  Formula parse_formula_only(const EnsembleSignature& sig) {
    spec_.sig = sig;
    Formula f = parse_formula();
    expect(Tok::End, "end of formula");
    check_over_signature(f, spec_.sig);
    return desugar(f);
  }

  EnsembleFormula parse_ensemble_formula_only(const ProblemSpec& spec) {
    spec_ = spec;
    EnsembleFormula f = parse_eformula();
    expect(Tok::End, "end of formula");
    return normalize(f);
  }

  CompoundAction parse_compound_only(const ProblemSpec& spec) {
    spec_ = spec;
    CompoundAction a = parse_compound();
    expect(Tok::End, "end of compound action");
    return desugar(a, spec_.sig);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string filename_;
  ProblemSpec spec_;
  bool saw_ensemble_ = false;

  const Token& peek(int ahead = 0) const {
    std::size_t p = pos_ + ahead;
    return p < tokens_.size() ? tokens_[p] : tokens_.back();
  }

  Token advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.line, t.col, msg + " (at '" +
                                        (t.kind == Tok::End ? "<eof>" : t.text) +
                                        "' in " + filename_ + ")");
  }

  bool accept(Tok k) {
    if (peek().kind != k) return false;
    advance();
    return true;
  }

  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what);
    return advance();
  }

  bool at_word(const std::string& w, int ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
  }

  bool accept_word(const std::string& w) {
    if (!at_word(w)) return false;
    advance();
    return true;
  }

  std::string expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail("expected " + what);
    return advance().text;
  }

  std::vector<std::string> ident_list(const std::string& what) {
    std::vector<std::string> out{expect_ident(what)};
    while (accept(Tok::Comma)) out.push_back(expect_ident(what));
    return out;
  }

  // ---- epistemic formulas ----------------------------------------------

  bool starts_modality() const {
    return peek().kind == Tok::Ident &&
           (peek().text == "K" || peek().text == "M" || peek().text == "KW") &&
           peek(1).kind == Tok::LBracket;
  }

  Formula parse_formula() { return parse_imp(); }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (accept(Tok::Arrow)) return Formula::imp(lhs, parse_imp());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Bar)) f = Formula::lor(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_funary();
    while (accept(Tok::Amp)) f = Formula::land(f, parse_funary());
    return f;
  }

  Formula parse_funary() {
    if (accept(Tok::Tilde)) return Formula::lnot(parse_funary());
    if (starts_modality()) {
      std::string mod = advance().text;
      expect(Tok::LBracket, "'['");
      AgentId a{expect_ident("agent name")};
      expect(Tok::RBracket, "']'");
      Formula arg = parse_funary();
      if (mod == "K") return Formula::knows(a, arg);
      if (mod == "M") return Formula::maybe(a, arg);
      return Formula::knows_whether(a, arg);
    }
    if (accept(Tok::LParen)) {
      Formula f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind == Tok::Ident) {
      if (accept_word("true")) return Formula::top();
      if (accept_word("false")) return Formula::bottom();
      return Formula::atom(Prop{advance().text});
    }
    fail("expected a formula");
  }

  // ---- compound actions --------------------------------------------------

  bool known_action_name(const std::string& name) const {
    return spec_.sig.has_action(ActionSym{name}) ||
           spec_.cactions.count(name) > 0;
  }

  CompoundAction parse_compound() {
    CompoundAction a = parse_cseq();
    while (accept(Tok::Plus)) a = CompoundAction::choice(a, parse_cseq());
    return a;
  }

  CompoundAction parse_cseq() {
    CompoundAction a = parse_cstar();
    while (accept(Tok::Semi)) a = CompoundAction::seq(a, parse_cstar());
    return a;
  }

  CompoundAction parse_cstar() {
    CompoundAction a = parse_cprim();
    while (accept(Tok::Star)) a = CompoundAction::star(a);
    return a;
  }

  CompoundAction parse_test_tail() {
    Formula f = parse_formula();
    expect(Tok::Question, "'?' after test formula");
    return CompoundAction::test(f);
  }

  CompoundAction parse_cprim() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      // Either a grouped compound action or a parenthesised test formula;
      // try the compound reading first and fall back.
      std::size_t snapshot = pos_;
      try {
        advance();
        CompoundAction a = parse_compound();
        expect(Tok::RParen, "')'");
        if (peek().kind == Tok::Question) {
          pos_ = snapshot;
          return parse_test_tail();
        }
        return a;
      } catch (const ParseError&) {
        pos_ = snapshot;
        return parse_test_tail();
      }
    }
    if (t.kind == Tok::Tilde || starts_modality()) return parse_test_tail();
    if (t.kind == Tok::Ident) {
      if (t.text == "true" || t.text == "false") return parse_test_tail();
      if (known_action_name(t.text) && peek(1).kind != Tok::Question &&
          peek(1).kind != Tok::Amp && peek(1).kind != Tok::Bar &&
          peek(1).kind != Tok::Arrow) {
        std::string name = advance().text;
        if (auto it = spec_.cactions.find(name); it != spec_.cactions.end())
          return it->second;
        return CompoundAction::atom(ActionSym{name});
      }
      return parse_test_tail();
    }
    fail("expected a compound action");
  }

  // ---- ensemble formulas --------------------------------------------------

  EnsembleFormula parse_eformula() { return parse_eimp(); }

  EnsembleFormula parse_eimp() {
    EnsembleFormula lhs = parse_eor();
    if (accept(Tok::Arrow)) return EnsembleFormula::imp(lhs, parse_eimp());
    return lhs;
  }

  EnsembleFormula parse_eor() {
    EnsembleFormula f = parse_eand();
    while (accept(Tok::Bar)) f = EnsembleFormula::lor(f, parse_eand());
    return f;
  }

  EnsembleFormula parse_eand() {
    EnsembleFormula f = parse_eunary();
    while (accept(Tok::Amp)) f = EnsembleFormula::land(f, parse_eunary());
    return f;
  }

  EnsembleFormula parse_eunary() {
    if (accept(Tok::Tilde)) return EnsembleFormula::lnot(parse_eunary());
    if (accept(Tok::LBracket)) {
      CompoundAction a = parse_compound();
      expect(Tok::RBracket, "']' after compound action");
      return EnsembleFormula::box(a, parse_eunary());
    }
    if (accept(Tok::Less)) {
      CompoundAction a = parse_compound();
      expect(Tok::Greater, "'>' after compound action");
      return EnsembleFormula::diamond(a, parse_eunary());
    }
    if (starts_modality()) return EnsembleFormula::epi(parse_funary());
    if (accept(Tok::LParen)) {
      EnsembleFormula f = parse_eformula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind == Tok::Ident) {
      if (accept_word("true")) return EnsembleFormula::top();
      if (accept_word("false")) return EnsembleFormula::bottom();
      return EnsembleFormula::epi(Formula::atom(Prop{advance().text}));
    }
    fail("expected a formula");
  }

  // ---- processes ----------------------------------------------------------

  Process parse_process(std::vector<std::string>& bound) {
    Process p = parse_pterm(bound);
    while (accept(Tok::Plus)) p = Process::choice(p, parse_pterm(bound));
    return p;
  }

  Process parse_pterm(std::vector<std::string>& bound) {
    if (accept_word("nil")) return Process::nil();
    if (at_word("mu")) {
      advance();
      std::string var = expect_ident("recursion variable");
      expect(Tok::Dot, "'.' after recursion variable");
      bound.push_back(var);
      Process body = parse_pterm(bound);
      bound.pop_back();
      return Process::rec(var, body);
    }
    if (accept(Tok::LBracket)) {
      Formula g = parse_formula();
      expect(Tok::RBracket, "']' after guard");
      return Process::guard(g, parse_pterm(bound));
    }
    if (accept(Tok::LParen)) {
      Process p = parse_process(bound);
      expect(Tok::RParen, "')'");
      return p;
    }
    if (peek().kind == Tok::Ident) {
      std::string name = advance().text;
      if (peek().kind == Tok::Dot) {
        advance();
        if (!spec_.sig.has_action(ActionSym{name}))
          fail("unknown action symbol '" + name + "'");
        return Process::prefix(ActionSym{name}, parse_pterm(bound));
      }
      if (std::find(bound.begin(), bound.end(), name) != bound.end())
        return Process::var(name);
      if (auto it = spec_.procs.find(name); it != spec_.procs.end())
        return it->second;
      fail("unknown process or variable '" + name + "'");
    }
    fail("expected a process term");
  }

  // ---- action expressions ---------------------------------------------

  std::set<AgentId> parse_agent_group() {
    expect(Tok::LBrace, "'{'");
    std::set<AgentId> group;
    if (peek().kind != Tok::RBrace)
      for (const auto& a : ident_list("agent name")) group.insert(AgentId{a});
    expect(Tok::RBrace, "'}'");
    for (const auto& a : group)
      if (!spec_.sig.agents.count(a)) fail("unknown agent '" + a.name + "'");
    return group;
  }

  std::shared_ptr<const ActionModel> parse_action_model() {
    // model { events e1, e2; pre e1: f; access a { {e1,e2} }; point e1 }
    expect(Tok::LBrace, "'{' after model");
    ActionModel m;
    if (!accept_word("events")) fail("expected 'events'");
    for (const auto& e : ident_list("event name")) m.events.push_back(e);
    expect(Tok::Semi, "';'");
    m.pre.assign(m.events.size(), Formula::top());
    std::vector<bool> seen(m.events.size(), false);
    int point = -1;
    while (peek().kind != Tok::RBrace) {
      if (accept_word("pre")) {
        std::string ev = expect_ident("event name");
        int idx = m.event_index(ev);
        if (idx < 0) fail("unknown event '" + ev + "'");
        expect(Tok::Colon, "':'");
        m.pre[idx] = parse_formula();
        seen[idx] = true;
        expect(Tok::Semi, "';'");
        continue;
      }
      if (accept_word("access")) {
        AgentId a{expect_ident("agent name")};
        if (!spec_.sig.agents.count(a)) fail("unknown agent '" + a.name + "'");
        auto blocks = parse_partition([&](const std::string& name) {
          int idx = m.event_index(name);
          if (idx < 0) fail("unknown event '" + name + "'");
          return idx;
        });
        m.access[a] = partition_to_relation(blocks,
                                            static_cast<int>(m.events.size()));
        accept(Tok::Semi);
        continue;
      }
      if (accept_word("point")) {
        std::string ev = expect_ident("event name");
        point = m.event_index(ev);
        if (point < 0) fail("unknown event '" + ev + "'");
        accept(Tok::Semi);
        continue;
      }
      fail("expected 'pre', 'access' or 'point' in action model");
    }
    expect(Tok::RBrace, "'}'");
    if (point < 0) fail("action model must name a point");
    for (const auto& a : spec_.sig.agents)
      if (!m.access.count(a))
        m.access[a] = partition_to_relation({},
                                            static_cast<int>(m.events.size()));
    for (const auto& f : m.pre) check_over_signature(f, spec_.sig);
    auto bad = validate_action_model(m);
    if (!bad.empty()) fail("invalid action model: " + bad.front());
    point_scratch_ = point;
    return std::make_shared<const ActionModel>(std::move(m));
  }

  int point_scratch_ = 0;

  // Blocks of a partition: { {x, y}, {z} }; unlisted elements become
  // singletons.
  std::vector<std::vector<int>> parse_partition(
      const std::function<int(const std::string&)>& resolve) {
    expect(Tok::LBrace, "'{'");
    std::vector<std::vector<int>> blocks;
    while (peek().kind == Tok::LBrace) {
      advance();
      std::vector<int> block;
      if (peek().kind != Tok::RBrace)
        for (const auto& e : ident_list("element")) block.push_back(resolve(e));
      expect(Tok::RBrace, "'}'");
      blocks.push_back(std::move(block));
      if (!accept(Tok::Comma)) break;
    }
    expect(Tok::RBrace, "'}'");
    return blocks;
  }

  static std::set<std::pair<int, int>> partition_to_relation(
      const std::vector<std::vector<int>>& blocks, int n) {
    std::set<std::pair<int, int>> rel;
    std::vector<bool> listed(n, false);
    for (const auto& block : blocks)
      for (int x : block) {
        listed[x] = true;
        for (int y : block) rel.insert({x, y});
      }
    for (int x = 0; x < n; ++x)
      if (!listed[x]) rel.insert({x, x});
    return rel;
  }

  ChoiceAction parse_action_expr() {
    if (accept_word("lossy")) {
      AgentId from{expect_ident("sender")};
      expect(Tok::Arrow, "'->'");
      AgentId to{expect_ident("recipient")};
      expect(Tok::Colon, "':'");
      Formula f = parse_formula();
      return lossy_send(from, to, f, spec_.sig);
    }
    if (accept_word("reliable")) {
      AgentId from{expect_ident("sender")};
      expect(Tok::Arrow, "'->'");
      AgentId to{expect_ident("recipient")};
      expect(Tok::Colon, "':'");
      Formula f = parse_formula();
      return reliable_send(from, to, f, spec_.sig);
    }
    if (accept_word("announce")) {
      auto group = parse_agent_group();
      expect(Tok::Colon, "':'");
      Formula f = parse_formula();
      auto m = group_announcement(group, f, spec_.sig);
      int point = 0;
      if (accept(Tok::At)) {
        std::string ev = expect_ident("event name");
        point = m->event_index(ev);
        if (point < 0) fail("unknown event '" + ev + "'");
      }
      return ChoiceAction{{{m, point}}};
    }
    if (accept_word("choice")) {
      expect(Tok::LBrace, "'{'");
      ChoiceAction c;
      do {
        if (!accept_word("model")) fail("expected 'model' alternative");
        auto m = parse_action_model();
        c.alternatives.push_back({m, point_scratch_});
      } while (accept(Tok::Comma));
      expect(Tok::RBrace, "'}'");
      return c;
    }
    if (accept_word("model")) {
      auto m = parse_action_model();
      return ChoiceAction{{{m, point_scratch_}}};
    }
    fail("expected 'lossy', 'reliable', 'announce', 'choice' or 'model'");
  }

  // ---- states -------------------------------------------------------------

  PointedKripke parse_state() {
    // state name { worlds { w0 : {x1}, w1 : {} } access a1 { ... } point w0 }
    if (peek().kind == Tok::Ident && !at_word("worlds")) advance();  // name
    expect(Tok::LBrace, "'{' after state");
    if (!accept_word("worlds")) fail("expected 'worlds'");
    expect(Tok::LBrace, "'{'");
    PointedKripke s;
    auto& k = s.structure;
    do {
      std::string w = expect_ident("world name");
      expect(Tok::Colon, "':'");
      expect(Tok::LBrace, "'{'");
      std::set<Prop> props;
      if (peek().kind != Tok::RBrace)
        for (const auto& p : ident_list("proposition")) {
          if (!spec_.sig.props.count(Prop{p}))
            fail("unknown proposition '" + p + "'");
          props.insert(Prop{p});
        }
      expect(Tok::RBrace, "'}'");
      if (k.world_index(w) >= 0) fail("duplicate world '" + w + "'");
      k.worlds.push_back(w);
      k.label.push_back(std::move(props));
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "'}' after worlds");
    int point = -1;
    while (peek().kind != Tok::RBrace) {
      if (accept_word("access")) {
        AgentId a{expect_ident("agent name")};
        if (!spec_.sig.agents.count(a)) fail("unknown agent '" + a.name + "'");
        auto blocks = parse_partition([&](const std::string& name) {
          int idx = k.world_index(name);
          if (idx < 0) fail("unknown world '" + name + "'");
          return idx;
        });
        k.access[a] =
            partition_to_relation(blocks, static_cast<int>(k.worlds.size()));
        continue;
      }
      if (accept_word("point")) {
        std::string w = expect_ident("world name");
        point = k.world_index(w);
        if (point < 0) fail("unknown world '" + w + "'");
        continue;
      }
      fail("expected 'access' or 'point' in state");
    }
    expect(Tok::RBrace, "'}' after state");
    if (point < 0) fail("state must name a point");
    for (const auto& a : spec_.sig.agents)
      if (!k.access.count(a))
        k.access[a] =
            partition_to_relation({}, static_cast<int>(k.worlds.size()));
    s.point = point;
    return s;
  }

  // ---- top-level items ------------------------------------------------

  void parse_item() {
    if (accept_word("agents")) {
      for (const auto& a : ident_list("agent name"))
        spec_.sig.agents.insert(AgentId{a});
      expect(Tok::Semi, "';'");
      return;
    }
    if (accept_word("props")) {
      for (const auto& p : ident_list("proposition name"))
        spec_.sig.props.insert(Prop{p});
      expect(Tok::Semi, "';'");
      return;
    }
    if (at_word("actions")) {
      advance();
      AgentId a{expect_ident("agent name")};
      if (!spec_.sig.agents.count(a)) fail("unknown agent '" + a.name + "'");
      expect(Tok::LBrace, "'{'");
      std::set<ActionSym> syms;
      if (peek().kind != Tok::RBrace)
        for (const auto& n : ident_list("action symbol")) {
          if (spec_.sig.has_action(ActionSym{n}))
            fail("action symbol '" + n +
                 "' already declared; symbol sets must be disjoint");
          syms.insert(ActionSym{n});
        }
      expect(Tok::RBrace, "'}'");
      accept(Tok::Semi);
      auto& target = spec_.sig.action_syms[a];
      target.insert(syms.begin(), syms.end());
      return;
    }
    if (at_word("action")) {
      advance();
      std::string name = expect_ident("action symbol");
      if (!spec_.sig.has_action(ActionSym{name}))
        fail("action symbol '" + name + "' is not declared in the signature");
      expect(Tok::Equals, "'='");
      ChoiceAction c = parse_action_expr();
      expect(Tok::Semi, "';'");
      spec_.interp.map[ActionSym{name}] = std::move(c);
      return;
    }
    if (at_word("proc")) {
      advance();
      std::string name = expect_ident("process name");
      expect(Tok::Equals, "'='");
      std::vector<std::string> bound;
      Process p = parse_process(bound);
      expect(Tok::Semi, "';'");
      check_process(p, spec_.sig);
      spec_.procs[name] = p;
      spec_.proc_names.emplace(p, name);
      return;
    }
    if (at_word("ensemble")) {
      advance();
      if (saw_ensemble_) fail("only one ensemble per problem");
      saw_ensemble_ = true;
      spec_.ensemble_name = expect_ident("ensemble name");
      expect(Tok::Equals, "'='");
      do {
        AgentId a{expect_ident("agent name")};
        expect(Tok::Colon, "':'");
        std::vector<std::string> bound;
        Process p = parse_pterm(bound);
        if (spec_.ensemble.family.count(a))
          fail("agent '" + a.name + "' bound twice in the ensemble");
        spec_.ensemble.family[a] = std::move(p);
      } while (accept(Tok::BarBar));
      expect(Tok::Semi, "';'");
      return;
    }
    if (at_word("focus")) {
      advance();
      expect(Tok::LBrace, "'{'");
      std::vector<Formula> fs;
      while (peek().kind != Tok::RBrace) {
        fs.push_back(parse_formula());
        expect(Tok::Semi, "';' after focus formula");
      }
      expect(Tok::RBrace, "'}'");
      for (const auto& f : fs) check_over_signature(f, spec_.sig);
      spec_.focus = FocusSet(fs);
      spec_.has_focus = true;
      return;
    }
    if (at_word("repr")) {
      advance();
      std::string sym = expect_ident("action symbol");
      expect(Tok::LBracket, "'['");
      std::string event = expect_ident("event name");
      expect(Tok::RBracket, "']'");
      EpistemicAction act = resolve_action_ref(sym, event);
      std::string display = sym + "[" + event + "]";
      expect(Tok::LBrace, "'{'");
      if (!accept_word("pre")) fail("expected 'pre' entry first");
      expect(Tok::Colon, "':'");
      spec_.table.set_pre(act, display, parse_formula());
      expect(Tok::Semi, "';'");
      while (peek().kind != Tok::RBrace) {
        Formula lhs = parse_and();  // avoid consuming the '->' separator
        expect(Tok::Arrow, "'->' between focus formula and representative");
        Formula rho = parse_formula();
        expect(Tok::Semi, "';'");
        spec_.table.set_wlp(act, display, lhs, rho);
      }
      expect(Tok::RBrace, "'}'");
      spec_.has_table = true;
      return;
    }
    if (at_word("init")) {
      advance();
      if (accept_word("semantic")) {
        expect(Tok::LBrace, "'{'");
        while (at_word("state")) {
          advance();
          spec_.init_semantic.push_back(parse_state());
        }
        expect(Tok::RBrace, "'}'");
        if (spec_.init_semantic.empty())
          fail("semantic initialisation needs at least one state");
        return;
      }
      if (accept_word("symbolic")) {
        if (!spec_.has_focus) fail("symbolic initialisation needs a focus set");
        expect(Tok::LBrace, "'{'");
        std::vector<Formula> fs;
        while (peek().kind != Tok::RBrace) {
          fs.push_back(parse_formula());
          expect(Tok::Semi, "';'");
        }
        expect(Tok::RBrace, "'}'");
        try {
          spec_.init_symbolic = SymbolicState(fs, spec_.focus);
        } catch (const FocusError& e) {
          fail(e.what());
        }
        return;
      }
      fail("expected 'semantic' or 'symbolic' after init");
    }
    if (at_word("caction")) {
      advance();
      std::string name = expect_ident("compound action name");
      expect(Tok::Equals, "'='");
      CompoundAction a = parse_compound();
      expect(Tok::Semi, "';'");
      spec_.cactions[name] = desugar(a, spec_.sig);
      return;
    }
    if (at_word("formula")) {
      advance();
      std::string name = expect_ident("formula name");
      expect(Tok::Equals, "'='");
      EnsembleFormula f = parse_eformula();
      expect(Tok::Semi, "';'");
      spec_.formulas.emplace_back(name, normalize(f));
      return;
    }
    fail("expected a declaration");
  }

  EpistemicAction resolve_action_ref(const std::string& sym,
                                     const std::string& event) {
    auto it = spec_.interp.map.find(ActionSym{sym});
    if (it == spec_.interp.map.end())
      fail("action symbol '" + sym + "' has no interpretation yet");
    for (const auto& alt : it->second.alternatives)
      if (alt.model->events[alt.point] == event) return alt;
    // Allow pointing at a non-designated event of the same model.
    for (const auto& alt : it->second.alternatives) {
      int idx = alt.model->event_index(event);
      if (idx >= 0) return alt.at(idx);
    }
    fail("action '" + sym + "' has no event named '" + event + "'");
  }

  void finish() {
    try {
      spec_.sig.validate();
    } catch (const Error& e) {
      fail(e.what());
    }
    if (spec_.sig.agents.empty()) fail("no agents declared");
    auto diags = validate_interpretation(spec_.interp, spec_.sig);
    if (!diags.empty())
      fail("invalid action interpretation: " + diags.front().symbol.name +
           ": " + diags.front().message);
    if (!saw_ensemble_) fail("no ensemble declared");
    try {
      check_ensemble(spec_.ensemble, spec_.sig);
    } catch (const Error& e) {
      fail(e.what());
    }
    if (spec_.init_semantic.empty() && !spec_.init_symbolic)
      fail("no initial environment given (init semantic or init symbolic)");
    for (const auto& s : spec_.init_semantic) {
      auto bad = validate_s5(s.structure);
      if (!bad.empty()) fail("initial state is not S5: " +
                             bad.front().describe(s.structure));
    }
    for (const auto& [name, f] : spec_.formulas) {
      (void)name;
      check_eformula_signature(f);
    }
  }

  void check_eformula_signature(const EnsembleFormula& f) {
    switch (f.kind()) {
      case EnsembleFormula::Kind::Epi:
        check_over_signature(f.formula(), spec_.sig);
        return;
      case EnsembleFormula::Kind::Not:
        check_eformula_signature(f.lhs());
        return;
      case EnsembleFormula::Kind::And:
      case EnsembleFormula::Kind::Or:
      case EnsembleFormula::Kind::Imp:
        check_eformula_signature(f.lhs());
        check_eformula_signature(f.rhs());
        return;
      case EnsembleFormula::Kind::Box:
      case EnsembleFormula::Kind::Diamond:
        desugar(f.action(), spec_.sig);
        check_eformula_signature(f.lhs());
        return;
      default:
        return;
    }
  }
};

}  // namespace

const EnsembleFormula& ProblemSpec::formula_by_name(
    const std::string& name) const {
  for (const auto& [n, f] : formulas)
    if (n == name) return f;
  throw Error("no formula named '" + name + "'");
}

EpistemicAction ProblemSpec::action_ref(const std::string& symbol,
                                        const std::string& event) const {
  auto it = interp.map.find(ActionSym{symbol});
  if (it == interp.map.end())
    throw Error("action symbol '" + symbol + "' has no interpretation");
  for (const auto& alt : it->second.alternatives)
    if (alt.model->events[alt.point] == event) return alt;
  for (const auto& alt : it->second.alternatives) {
    int idx = alt.model->event_index(event);
    if (idx >= 0) return alt.at(idx);
  }
  throw Error("action '" + symbol + "' has no event named '" + event + "'");
}

Configuration ProblemSpec::semantic_root() const {
  if (init_semantic.empty())
    throw Error("problem has no semantic initialisation");
  return {ensemble, StateClass::canonical(init_semantic)};
}

SymbolicConfiguration ProblemSpec::symbolic_root() const {
  if (!init_symbolic)
    throw Error("problem has no symbolic initialisation");
  return {ensemble, *init_symbolic};
}

ProblemSpec parse_problem(const std::string& text,
                          const std::string& filename) {
  Parser p(text, filename);
  return p.parse_spec();
}

Formula parse_formula(const std::string& text, const EnsembleSignature& sig) {
  Parser p(text, "<formula>");
  return p.parse_formula_only(sig);
}

EnsembleFormula parse_ensemble_formula(const std::string& text,
                                       const ProblemSpec& spec) {
  Parser p(text, "<formula>");
  return p.parse_ensemble_formula_only(spec);
}

CompoundAction parse_compound_action(const std::string& text,
                                     const ProblemSpec& spec) {
  Parser p(text, "<compound action>");
  return p.parse_compound_only(spec);
}

}  // namespace eens
