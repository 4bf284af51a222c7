#include "cva/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace cva {

std::string to_string(const diagnostic& d) {
  std::ostringstream os;
  os << (d.level == diagnostic::severity::error ? "error" : "warning") << "[" << d.code << "] "
     << d.line << ":" << d.col << ": " << d.message;
  return os.str();
}

const system_file::named_contract* system_file::find_contract(std::string_view n) const {
  for (const auto& c : contracts)
    if (c.name == n) return &c;
  return nullptr;
}

contract_automaton system_file::effective_contract() const {
  if (conjoin) {
    const auto* a = find_contract(conjoin->first);
    const auto* b = find_contract(conjoin->second);
    if (!a || !b) throw error("conjoin refers to an unknown contract");
    return ca_conjoin(a->automaton, b->automaton);
  }
  if (contracts.size() != 1)
    throw error("system has " + std::to_string(contracts.size()) +
                " contracts and no conjoin directive; select one");
  return contracts.front().automaton;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

struct token {
  enum class kind : unsigned char {
    ident, number, lbrace, rbrace, lparen, rparen, comma, semi, arrow, hash,
    langle, rangle, bang, eof
  };
  kind k = kind::eof;
  std::string text;
  unsigned line = 1, col = 1;
};

class lexer {
public:
  explicit lexer(std::string_view src) : src_(src) {}

  token next() {
    skip_ws();
    token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ident += advance();
      t.k = token::kind::ident;
      t.text = std::move(ident);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        num += advance();
      t.k = token::kind::number;
      t.text = std::move(num);
      return t;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      advance();
      advance();
      t.k = token::kind::arrow;
      t.text = "->";
      return t;
    }
    advance();
    t.text = std::string(1, c);
    switch (c) {
      case '{': t.k = token::kind::lbrace; break;
      case '}': t.k = token::kind::rbrace; break;
      case '(': t.k = token::kind::lparen; break;
      case ')': t.k = token::kind::rparen; break;
      case ',': t.k = token::kind::comma; break;
      case ';': t.k = token::kind::semi; break;
      case '#': t.k = token::kind::hash; break;
      case '<': t.k = token::kind::langle; break;
      case '>': t.k = token::kind::rangle; break;
      case '!': t.k = token::kind::bang; break;
      default:
        t.k = token::kind::eof;
        t.text = std::string("unexpected character '") + c + "'";
        bad_ = true;
    }
    return t;
  }

  bool bad() const { return bad_; }

private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  unsigned line_ = 1, col_ = 1;
  bool bad_ = false;
};

// ---------------------------------------------------------------------------
// Parse tree (unresolved names; resolution happens after the whole file is in)
// ---------------------------------------------------------------------------

struct raw_guard {
  enum class kind : unsigned char { contains, neg, conj, disj };
  kind k = kind::contains;
  std::string action;
  unsigned line = 0, col = 0;
  std::vector<raw_guard> children;
};

struct raw_clause {
  std::string mod;  // "O", "P", "F"
  unsigned party_idx = 1;
  bool negated = false;
  std::string action;
  unsigned line = 0, col = 0;
};

struct raw_party_state {
  std::string name;
  unsigned line = 0, col = 0;
  struct edge {
    std::vector<std::string> label;
    std::string target;
    unsigned line = 0, col = 0;
  };
  std::vector<edge> edges;
};

struct raw_contract_state {
  std::string name;
  unsigned line = 0, col = 0;
  std::vector<raw_clause> clauses;
  struct arm {
    std::optional<raw_guard> when;  // nullopt: else
    std::string target;
    unsigned line = 0, col = 0;
  };
  std::vector<arm> arms;
};

struct raw_automaton {
  std::string name;
  unsigned line = 0, col = 0;
  std::string initial;
  unsigned initial_line = 0, initial_col = 0;
  std::vector<raw_party_state> party_states;      // for party blocks
  std::vector<raw_contract_state> contract_states;  // for contract blocks
};

struct raw_file {
  std::string name;
  std::vector<std::string> actions;
  unsigned alphabet_line = 0, alphabet_col = 0;
  std::vector<std::pair<std::string, unsigned>> sync;  // name, line
  std::vector<std::tuple<std::string, std::string, unsigned, unsigned>> mutex;
  std::vector<raw_automaton> parties;
  std::vector<raw_automaton> contracts;
  std::optional<std::pair<std::string, std::string>> conjoin;
  unsigned conjoin_line = 0, conjoin_col = 0;
};

class parser {
public:
  parser(std::string_view src, std::vector<diagnostic>& diags) : lex_(src), diags_(diags) {
    cur_ = lex_.next();
  }

  std::optional<raw_file> parse() {
    raw_file f;
    if (!eat_keyword("system")) return std::nullopt;
    if (!expect_ident(f.name, "system name")) return std::nullopt;
    if (!expect(token::kind::lbrace, "'{'")) return std::nullopt;
    while (cur_.k != token::kind::rbrace && cur_.k != token::kind::eof) {
      if (is_keyword("alphabet")) {
        f.alphabet_line = cur_.line;
        f.alphabet_col = cur_.col;
        bump();
        if (!name_list_block(f.actions)) return std::nullopt;
      } else if (is_keyword("sync")) {
        bump();
        std::vector<std::string> names;
        unsigned line = cur_.line;
        if (!name_list_block(names)) return std::nullopt;
        for (auto& n : names) f.sync.emplace_back(std::move(n), line);
      } else if (is_keyword("mutex")) {
        bump();
        if (!mutex_block(f)) return std::nullopt;
      } else if (is_keyword("party")) {
        raw_automaton a;
        if (!party_block(a)) return std::nullopt;
        f.parties.push_back(std::move(a));
      } else if (is_keyword("contract")) {
        raw_automaton a;
        if (!contract_block(a)) return std::nullopt;
        f.contracts.push_back(std::move(a));
      } else if (is_keyword("conjoin")) {
        f.conjoin_line = cur_.line;
        f.conjoin_col = cur_.col;
        bump();
        std::string a, b;
        if (!expect_ident(a, "contract name")) return std::nullopt;
        if (!expect_ident(b, "contract name")) return std::nullopt;
        f.conjoin = {a, b};
      } else {
        err("P001", "expected a block (alphabet, sync, mutex, party, contract, conjoin)");
        return std::nullopt;
      }
    }
    if (!expect(token::kind::rbrace, "'}'")) return std::nullopt;
    return f;
  }

private:
  void bump() { cur_ = lex_.next(); }

  bool is_keyword(std::string_view kw) const {
    return cur_.k == token::kind::ident && cur_.text == kw;
  }

  bool eat_keyword(std::string_view kw) {
    if (!is_keyword(kw)) {
      err("P001", "expected '" + std::string(kw) + "'");
      return false;
    }
    bump();
    return true;
  }

  bool expect(token::kind k, const std::string& what) {
    if (cur_.k != k) {
      err("P001", "expected " + what);
      return false;
    }
    bump();
    return true;
  }

  bool expect_ident(std::string& out, const std::string& what) {
    if (cur_.k != token::kind::ident) {
      err("P001", "expected " + what);
      return false;
    }
    out = cur_.text;
    bump();
    return true;
  }

  void err(const std::string& code, const std::string& msg) {
    diags_.push_back({diagnostic::severity::error, cur_.line, cur_.col, code, msg});
  }

  bool name_list_block(std::vector<std::string>& out) {
    if (!expect(token::kind::lbrace, "'{'")) return false;
    while (cur_.k == token::kind::ident) {
      out.push_back(cur_.text);
      bump();
      if (cur_.k == token::kind::comma) bump();
    }
    return expect(token::kind::rbrace, "'}'");
  }

  bool mutex_block(raw_file& f) {
    if (!expect(token::kind::lbrace, "'{'")) return false;
    while (cur_.k == token::kind::ident) {
      std::string a = cur_.text;
      unsigned line = cur_.line, col = cur_.col;
      bump();
      if (!expect(token::kind::hash, "'#'")) return false;
      std::string b;
      if (!expect_ident(b, "action name")) return false;
      f.mutex.emplace_back(a, b, line, col);
      if (cur_.k == token::kind::comma) bump();
    }
    return expect(token::kind::rbrace, "'}'");
  }

  bool action_set_literal(std::vector<std::string>& out) {
    if (!expect(token::kind::lbrace, "'{'")) return false;
    while (cur_.k == token::kind::ident) {
      out.push_back(cur_.text);
      bump();
      if (cur_.k == token::kind::comma) bump();
    }
    return expect(token::kind::rbrace, "'}'");
  }

  bool init_clause(raw_automaton& a) {
    a.initial_line = cur_.line;
    a.initial_col = cur_.col;
    bump();
    if (!a.initial.empty()) {
      diags_.push_back({diagnostic::severity::error, a.initial_line, a.initial_col, "P002",
                        "more than one initial state declared"});
      return false;
    }
    if (!expect_ident(a.initial, "initial state name")) return false;
    return expect(token::kind::semi, "';'");
  }

  bool party_block(raw_automaton& a) {
    a.line = cur_.line;
    a.col = cur_.col;
    bump();
    if (!expect_ident(a.name, "party name")) return false;
    if (!expect(token::kind::lbrace, "'{'")) return false;
    while (cur_.k != token::kind::rbrace && cur_.k != token::kind::eof) {
      if (is_keyword("init")) {
        if (!init_clause(a)) return false;
      } else if (is_keyword("state")) {
        raw_party_state st;
        st.line = cur_.line;
        st.col = cur_.col;
        bump();
        if (!expect_ident(st.name, "state name")) return false;
        if (!expect(token::kind::lbrace, "'{'")) return false;
        while (is_keyword("on")) {
          raw_party_state::edge e;
          e.line = cur_.line;
          e.col = cur_.col;
          bump();
          if (!action_set_literal(e.label)) return false;
          if (!expect(token::kind::arrow, "'->'")) return false;
          if (!expect_ident(e.target, "target state")) return false;
          if (!expect(token::kind::semi, "';'")) return false;
          st.edges.push_back(std::move(e));
        }
        if (!expect(token::kind::rbrace, "'}'")) return false;
        a.party_states.push_back(std::move(st));
      } else {
        err("P001", "expected 'init' or 'state' in party block");
        return false;
      }
    }
    return expect(token::kind::rbrace, "'}'");
  }

  bool clause_literal(raw_clause& c) {
    c.line = cur_.line;
    c.col = cur_.col;
    if (cur_.k != token::kind::ident ||
        (cur_.text != "O" && cur_.text != "P" && cur_.text != "F")) {
      err("P003", "expected a clause (O<p>(x), P<p>(x) or F<p>(x))");
      return false;
    }
    c.mod = cur_.text;
    bump();
    if (!expect(token::kind::langle, "'<'")) return false;
    if (cur_.k != token::kind::number) {
      err("P003", "expected party index 1 or 2");
      return false;
    }
    c.party_idx = static_cast<unsigned>(std::stoul(cur_.text));
    bump();
    if (!expect(token::kind::rangle, "'>'")) return false;
    if (!expect(token::kind::lparen, "'('")) return false;
    if (cur_.k == token::kind::bang) {
      c.negated = true;
      bump();
    }
    if (!expect_ident(c.action, "action name")) return false;
    return expect(token::kind::rparen, "')'");
  }

  // or-expression with standard precedence: or < and < not < atom
  bool guard_expr(raw_guard& g) {
    if (!guard_and(g)) return false;
    while (is_keyword("or")) {
      bump();
      raw_guard rhs;
      if (!guard_and(rhs)) return false;
      raw_guard parent;
      parent.k = raw_guard::kind::disj;
      parent.children = {std::move(g), std::move(rhs)};
      g = std::move(parent);
    }
    return true;
  }

  bool guard_and(raw_guard& g) {
    if (!guard_atom(g)) return false;
    while (is_keyword("and")) {
      bump();
      raw_guard rhs;
      if (!guard_atom(rhs)) return false;
      raw_guard parent;
      parent.k = raw_guard::kind::conj;
      parent.children = {std::move(g), std::move(rhs)};
      g = std::move(parent);
    }
    return true;
  }

  bool guard_atom(raw_guard& g) {
    if (is_keyword("not")) {
      bump();
      raw_guard inner;
      if (!guard_atom(inner)) return false;
      g.k = raw_guard::kind::neg;
      g.children = {std::move(inner)};
      return true;
    }
    if (is_keyword("contains")) {
      g.line = cur_.line;
      g.col = cur_.col;
      bump();
      if (!expect(token::kind::lparen, "'('")) return false;
      g.k = raw_guard::kind::contains;
      if (!expect_ident(g.action, "action name")) return false;
      return expect(token::kind::rparen, "')'");
    }
    if (cur_.k == token::kind::lparen) {
      bump();
      if (!guard_expr(g)) return false;
      return expect(token::kind::rparen, "')'");
    }
    err("P004", "expected a guard: contains(a), not/and/or, or parentheses");
    return false;
  }

  bool contract_block(raw_automaton& a) {
    a.line = cur_.line;
    a.col = cur_.col;
    bump();
    if (!expect_ident(a.name, "contract name")) return false;
    if (!expect(token::kind::lbrace, "'{'")) return false;
    while (cur_.k != token::kind::rbrace && cur_.k != token::kind::eof) {
      if (is_keyword("init")) {
        if (!init_clause(a)) return false;
      } else if (is_keyword("state")) {
        raw_contract_state st;
        st.line = cur_.line;
        st.col = cur_.col;
        bump();
        if (!expect_ident(st.name, "state name")) return false;
        if (!expect(token::kind::lbrace, "'{'")) return false;
        while (cur_.k != token::kind::rbrace && cur_.k != token::kind::eof) {
          if (is_keyword("clauses")) {
            bump();
            if (!expect(token::kind::lbrace, "'{'")) return false;
            while (cur_.k != token::kind::rbrace) {
              raw_clause c;
              if (!clause_literal(c)) return false;
              st.clauses.push_back(std::move(c));
              if (cur_.k == token::kind::comma) bump();
            }
            if (!expect(token::kind::rbrace, "'}'")) return false;
          } else if (is_keyword("on")) {
            raw_contract_state::arm arm;
            arm.line = cur_.line;
            arm.col = cur_.col;
            bump();
            raw_guard g;
            if (!guard_expr(g)) return false;
            arm.when = std::move(g);
            if (!expect(token::kind::arrow, "'->'")) return false;
            if (!expect_ident(arm.target, "target state")) return false;
            if (!expect(token::kind::semi, "';'")) return false;
            st.arms.push_back(std::move(arm));
          } else if (is_keyword("else")) {
            raw_contract_state::arm arm;
            arm.line = cur_.line;
            arm.col = cur_.col;
            bump();
            if (!expect(token::kind::arrow, "'->'")) return false;
            if (!expect_ident(arm.target, "target state")) return false;
            if (!expect(token::kind::semi, "';'")) return false;
            st.arms.push_back(std::move(arm));
          } else {
            err("P001", "expected 'clauses', 'on' or 'else' in contract state");
            return false;
          }
        }
        if (!expect(token::kind::rbrace, "'}'")) return false;
        a.contract_states.push_back(std::move(st));
      } else {
        err("P001", "expected 'init' or 'state' in contract block");
        return false;
      }
    }
    return expect(token::kind::rbrace, "'}'");
  }

  lexer lex_;
  token cur_;
  std::vector<diagnostic>& diags_;
};

// ---------------------------------------------------------------------------
// Resolution: names to ids, invariant checks, construction of core types.
// ---------------------------------------------------------------------------

class resolver {
public:
  resolver(const raw_file& raw, std::vector<diagnostic>& diags) : raw_(raw), diags_(diags) {}

  std::optional<system_file> run() {
    if (raw_.actions.empty()) {
      error(raw_.alphabet_line ? raw_.alphabet_line : 1, raw_.alphabet_col ? raw_.alphabet_col : 1,
            "S001", "alphabet must declare at least one action");
      return std::nullopt;
    }
    std::optional<alphabet> sigma;
    try {
      sigma.emplace(raw_.actions);
    } catch (const cva::error& e) {
      error(raw_.alphabet_line, raw_.alphabet_col, "S001", e.what());
      return std::nullopt;
    }

    action_set gmask = 0;
    for (const auto& [name, line] : raw_.sync) {
      auto id = sigma->find(name);
      if (!id) {
        error(line, 1, "S002", "sync action '" + name + "' is not declared in the alphabet");
        continue;
      }
      gmask = with(gmask, *id);
    }

    std::vector<std::pair<action_id, action_id>> mpairs;
    for (const auto& [a, b, line, col] : raw_.mutex) {
      auto ia = sigma->find(a), ib = sigma->find(b);
      if (!ia || !ib) {
        error(line, col, "S002", "mutex pair references an undeclared action");
        continue;
      }
      if (*ia == *ib) {
        error(line, col, "S003", "mutex relation must be irreflexive");
        continue;
      }
      if (contains(gmask, *ia) || contains(gmask, *ib))
        error(line, col, "S004",
              "mutually exclusive actions may not appear in the synchronization set");
      mpairs.emplace_back(*ia, *ib);
    }

    if (raw_.parties.size() != 2) {
      error(1, 1, "S005",
            "a system needs exactly two party blocks, found " +
                std::to_string(raw_.parties.size()));
      return std::nullopt;
    }
    if (raw_.contracts.empty()) {
      error(1, 1, "S006", "a system needs at least one contract block");
      return std::nullopt;
    }

    mutex_relation mutex(*sigma, mpairs);

    std::vector<system_file::named_party> parties;
    for (const auto& rp : raw_.parties) {
      auto aut = build_party(*sigma, mutex, rp);
      if (!aut) return std::nullopt;
      parties.push_back({rp.name, std::move(*aut)});
    }

    std::vector<system_file::named_contract> contracts;
    for (const auto& rc : raw_.contracts) {
      auto ca = build_contract(*sigma, rc);
      if (!ca) return std::nullopt;
      contracts.push_back({rc.name, std::move(*ca)});
    }

    if (raw_.conjoin) {
      for (const auto& n : {raw_.conjoin->first, raw_.conjoin->second}) {
        bool found = false;
        for (const auto& c : contracts) found = found || c.name == n;
        if (!found)
          error(raw_.conjoin_line, raw_.conjoin_col, "S007",
                "conjoin refers to unknown contract '" + n + "'");
      }
    }

    if (has_errors()) return std::nullopt;
    sync_set g(*sigma, gmask);
    return system_file{raw_.name,        std::move(*sigma),  g,
                       std::move(mutex), std::move(parties), std::move(contracts),
                       raw_.conjoin};
  }

private:
  void error(unsigned line, unsigned col, const std::string& code, const std::string& msg) {
    diags_.push_back({diagnostic::severity::error, line, col, code, msg});
  }

  bool has_errors() const {
    for (const auto& d : diags_)
      if (d.level == diagnostic::severity::error) return true;
    return false;
  }

  std::optional<action_set> resolve_label(const alphabet& sigma,
                                          const std::vector<std::string>& names, unsigned line,
                                          unsigned col) {
    action_set s = 0;
    bool ok = true;
    for (const auto& n : names) {
      auto id = sigma.find(n);
      if (!id) {
        error(line, col, "S002", "action '" + n + "' is not declared in the alphabet");
        ok = false;
        continue;
      }
      s = with(s, *id);
    }
    if (!ok) return std::nullopt;
    return s;
  }

  std::optional<multi_action_automaton> build_party(const alphabet& sigma,
                                                    const mutex_relation& mutex,
                                                    const raw_automaton& rp) {
    std::vector<std::string> names;
    std::map<std::string, state_id> index;
    for (const auto& st : rp.party_states) {
      if (!index.emplace(st.name, static_cast<state_id>(names.size())).second) {
        error(st.line, st.col, "S008", "duplicate state id '" + st.name + "'");
        return std::nullopt;
      }
      names.push_back(st.name);
    }
    if (rp.initial.empty()) {
      error(rp.line, rp.col, "S009", "party '" + rp.name + "' declares no initial state");
      return std::nullopt;
    }
    if (!index.count(rp.initial)) {
      error(rp.initial_line, rp.initial_col, "S010",
            "initial state '" + rp.initial + "' is not declared");
      return std::nullopt;
    }
    std::vector<transition> edges;
    for (const auto& st : rp.party_states)
      for (const auto& e : st.edges) {
        auto label = resolve_label(sigma, e.label, e.line, e.col);
        if (!label) continue;
        if (!mutex.label_ok(*label)) {
          error(e.line, e.col, "S011",
                "label " + sigma.set_to_string(*label) + " contains a mutually exclusive pair");
          continue;
        }
        auto target = index.find(e.target);
        if (target == index.end()) {
          error(e.line, e.col, "S010", "target state '" + e.target + "' is not declared");
          continue;
        }
        edges.push_back({index.at(st.name), *label, target->second});
      }
    if (has_errors()) return std::nullopt;
    return multi_action_automaton(sigma, names, rp.initial, edges);
  }

  std::optional<guard> resolve_guard(const alphabet& sigma, const raw_guard& g) {
    switch (g.k) {
      case raw_guard::kind::contains: {
        auto id = sigma.find(g.action);
        if (!id) {
          error(g.line, g.col, "S002",
                "action '" + g.action + "' is not declared in the alphabet");
          return std::nullopt;
        }
        return guard::contains(*id);
      }
      case raw_guard::kind::neg: {
        auto inner = resolve_guard(sigma, g.children[0]);
        if (!inner) return std::nullopt;
        return guard::neg(std::move(*inner));
      }
      case raw_guard::kind::conj:
      case raw_guard::kind::disj: {
        auto lhs = resolve_guard(sigma, g.children[0]);
        auto rhs = resolve_guard(sigma, g.children[1]);
        if (!lhs || !rhs) return std::nullopt;
        return g.k == raw_guard::kind::conj ? guard::conj(std::move(*lhs), std::move(*rhs))
                                            : guard::disj(std::move(*lhs), std::move(*rhs));
      }
    }
    return std::nullopt;
  }

  std::optional<contract_automaton> build_contract(const alphabet& sigma,
                                                   const raw_automaton& rc) {
    std::vector<std::string> names;
    std::map<std::string, state_id> index;
    for (const auto& st : rc.contract_states) {
      if (!index.emplace(st.name, static_cast<state_id>(names.size())).second) {
        error(st.line, st.col, "S008", "duplicate state id '" + st.name + "'");
        return std::nullopt;
      }
      names.push_back(st.name);
    }
    if (rc.initial.empty()) {
      error(rc.line, rc.col, "S009", "contract '" + rc.name + "' declares no initial state");
      return std::nullopt;
    }
    if (!index.count(rc.initial)) {
      error(rc.initial_line, rc.initial_col, "S010",
            "initial state '" + rc.initial + "' is not declared");
      return std::nullopt;
    }
    std::vector<std::vector<guard_arm>> arms(names.size());
    std::vector<std::vector<clause>> labels(names.size());
    for (const auto& st : rc.contract_states) {
      const state_id q = index.at(st.name);
      bool past_else = false;
      for (const auto& arm : st.arms) {
        if (past_else)
          diags_.push_back({diagnostic::severity::warning, arm.line, arm.col, "W001",
                            "arm after 'else' can never match"});
        auto target = index.find(arm.target);
        if (target == index.end()) {
          error(arm.line, arm.col, "S010", "target state '" + arm.target + "' is not declared");
          continue;
        }
        if (!arm.when) {
          arms[q].push_back({std::nullopt, target->second});
          past_else = true;
          continue;
        }
        auto g = resolve_guard(sigma, *arm.when);
        if (!g) continue;
        arms[q].push_back({std::move(*g), target->second});
      }
      for (const auto& rcl : st.clauses) {
        if (rcl.party_idx != 1 && rcl.party_idx != 2) {
          error(rcl.line, rcl.col, "S012", "party index must be 1 or 2");
          continue;
        }
        auto id = sigma.find(rcl.action);
        if (!id) {
          error(rcl.line, rcl.col, "S002",
                "action '" + rcl.action + "' is not declared in the alphabet");
          continue;
        }
        const party p = party_from_index(rcl.party_idx);
        const action_literal lit{*id, rcl.negated};
        if (rcl.mod == "F")
          labels[q].push_back(desugar_prohibition(p, lit));  // normalized at parse time
        else
          labels[q].push_back(
              {rcl.mod == "O" ? modality::obligation : modality::permission, p, lit});
      }
    }
    if (has_errors()) return std::nullopt;
    return contract_automaton(sigma, names, rc.initial, std::move(arms), std::move(labels));
  }

  const raw_file& raw_;
  std::vector<diagnostic>& diags_;
};

}  // namespace

parse_result parse_system(std::string_view text) {
  parse_result out;
  parser p(text, out.diagnostics);
  auto raw = p.parse();
  if (!raw) {
    if (out.diagnostics.empty())
      out.diagnostics.push_back({diagnostic::severity::error, 1, 1, "P001", "parse failed"});
    return out;
  }
  resolver r(*raw, out.diagnostics);
  out.file = r.run();
  return out;
}

// ---------------------------------------------------------------------------
// Pretty-printer
// ---------------------------------------------------------------------------

namespace {

std::string label_literal(const alphabet& sigma, action_set s) {
  return sigma.set_to_string(s);
}

void print_guard_arms(std::ostringstream& os, const system_file& f,
                      const contract_automaton& ca, state_id q) {
  for (const auto& arm : ca.arms_of(q)) {
    if (arm.when)
      os << "      on " << arm.when->to_string(f.sigma) << " -> " << ca.state_name(arm.target)
         << ";\n";
    else
      os << "      else -> " << ca.state_name(arm.target) << ";\n";
  }
}

}  // namespace

std::string pretty_print(const system_file& f) {
  std::ostringstream os;
  os << "system " << f.name << " {\n";
  os << "  alphabet {";
  for (std::size_t i = 0; i < f.sigma.size(); ++i)
    os << (i ? ", " : " ") << f.sigma.name(static_cast<action_id>(i));
  os << " }\n";
  os << "  sync " << label_literal(f.sigma, f.g.mask()) << "\n";
  os << "  mutex {";
  for (std::size_t i = 0; i < f.mutex.pairs().size(); ++i) {
    auto [a, b] = f.mutex.pairs()[i];
    os << (i ? ", " : " ") << f.sigma.name(a) << "#" << f.sigma.name(b);
  }
  os << (f.mutex.pairs().empty() ? "}" : " }") << "\n";
  for (const auto& p : f.parties) {
    os << "  party " << p.name << " {\n";
    os << "    init " << p.automaton.state_name(p.automaton.initial()) << ";\n";
    for (state_id q = 0; q < p.automaton.state_count(); ++q) {
      os << "    state " << p.automaton.state_name(q) << " {\n";
      for (const auto& [label, target] : p.automaton.next_of(q))
        os << "      on " << label_literal(f.sigma, label) << " -> "
           << p.automaton.state_name(target) << ";\n";
      os << "    }\n";
    }
    os << "  }\n";
  }
  for (const auto& c : f.contracts) {
    os << "  contract " << c.name << " {\n";
    os << "    init " << c.automaton.state_name(c.automaton.initial()) << ";\n";
    for (state_id q = 0; q < c.automaton.state_count(); ++q) {
      os << "    state " << c.automaton.state_name(q) << " {\n";
      const auto& clauses = c.automaton.contract_of(q);
      if (!clauses.empty()) {
        os << "      clauses {";
        for (std::size_t i = 0; i < clauses.size(); ++i)
          os << (i ? ", " : " ") << clause_to_string(clauses[i], f.sigma);
        os << " }\n";
      }
      print_guard_arms(os, f, c.automaton, q);
      os << "    }\n";
    }
    os << "  }\n";
  }
  if (f.conjoin) os << "  conjoin " << f.conjoin->first << " " << f.conjoin->second << "\n";
  os << "}\n";
  return os.str();
}

clause parse_clause(std::string_view text, const alphabet& sigma) {
  std::string s(text);
  std::vector<diagnostic> diags;
  // Reuse the lexer through a tiny standalone scan.
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip();
  if (i >= s.size() || (s[i] != 'O' && s[i] != 'P' && s[i] != 'F'))
    throw error("clause must start with O, P or F: '" + s + "'");
  char mod = s[i++];
  skip();
  if (i >= s.size() || s[i] != '<') throw error("expected '<party>' in clause '" + s + "'");
  ++i;
  skip();
  if (i >= s.size() || (s[i] != '1' && s[i] != '2'))
    throw error("party index must be 1 or 2 in clause '" + s + "'");
  party p = party_from_index(static_cast<unsigned>(s[i] - '0'));
  ++i;
  skip();
  if (i >= s.size() || s[i] != '>') throw error("expected '>' in clause '" + s + "'");
  ++i;
  skip();
  if (i >= s.size() || s[i] != '(') throw error("expected '(' in clause '" + s + "'");
  ++i;
  skip();
  bool neg = false;
  if (i < s.size() && s[i] == '!') {
    neg = true;
    ++i;
  }
  std::string name;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
    name += s[i++];
  skip();
  if (i >= s.size() || s[i] != ')') throw error("expected ')' in clause '" + s + "'");
  ++i;
  skip();
  if (i != s.size()) throw error("trailing input after clause '" + s + "'");
  const action_literal lit{sigma.id(name), neg};
  if (mod == 'F') return desugar_prohibition(p, lit);
  return {mod == 'O' ? modality::obligation : modality::permission, p, lit};
}

}  // namespace cva
