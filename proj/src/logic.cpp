#include "dombi/logic.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <optional>
#include <sstream>

namespace dombi {

ParseError::ParseError(const std::string& what, std::size_t pos)
    : std::runtime_error(what + " at offset " + std::to_string(pos)), pos_(pos) {}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
  explicit Parser(std::string_view text) : s_(text) {}

  FormulaPtr parse_all() {
    auto f = parse_formula();
    skip_ws();
    if (i_ != s_.size()) fail("unexpected input");
    return f;
  }

private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i_); }

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }

  bool looking_at(std::string_view tok) {
    skip_ws();
    return s_.substr(i_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!looking_at(tok)) return false;
    i_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = i_;
    while (i_ < s_.size() && is_ident_char(s_[i_])) ++i_;
    if (start == i_) fail("expected identifier");
    return std::string(s_.substr(start, i_ - start));
  }

  std::string variable() {
    skip_ws();
    if (i_ >= s_.size() || !is_lower(s_[i_])) fail("expected variable name");
    return identifier();
  }

  static FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

  FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b, std::size_t pos) {
    Formula f;
    f.kind = k;
    f.lhs = std::move(a);
    f.rhs = std::move(b);
    f.pos = pos;
    return node(std::move(f));
  }

  FormulaPtr parse_formula() {
    auto lhs = parse_implies();
    while (true) {
      const std::size_t pos = (skip_ws(), i_);
      if (!accept("<=>")) return lhs;
      lhs = binary(Formula::Kind::Iff, lhs, parse_implies(), pos);
    }
  }

  FormulaPtr parse_implies() {
    auto lhs = parse_or();
    const std::size_t pos = (skip_ws(), i_);
    if (accept("=>")) return binary(Formula::Kind::Implies, lhs, parse_implies(), pos);
    return lhs;
  }

  FormulaPtr parse_or() {
    auto lhs = parse_and();
    while (true) {
      const std::size_t pos = (skip_ws(), i_);
      if (!accept("|")) return lhs;
      lhs = binary(Formula::Kind::Or, lhs, parse_and(), pos);
    }
  }

  FormulaPtr parse_and() {
    auto lhs = parse_unary();
    while (true) {
      const std::size_t pos = (skip_ws(), i_);
      if (!accept("&")) return lhs;
      lhs = binary(Formula::Kind::And, lhs, parse_unary(), pos);
    }
  }

  bool at_quantifier() {
    skip_ws();
    if (i_ + 1 >= s_.size()) return false;
    const char q = s_[i_];
    const char n = s_[i_ + 1];
    return (q == 'E' || q == 'A') && (is_lower(n) || n == ' ' || n == '\t');
  }

  FormulaPtr parse_unary() {
    skip_ws();
    const std::size_t pos = i_;
    if (accept("~")) {
      Formula f;
      f.kind = Formula::Kind::Not;
      f.lhs = parse_unary();
      f.pos = pos;
      return node(std::move(f));
    }
    if (at_quantifier()) {
      Formula f;
      f.kind = s_[i_] == 'E' ? Formula::Kind::Exists : Formula::Kind::Forall;
      f.pos = pos;
      ++i_;
      f.vars.push_back(variable());
      while (accept(",")) f.vars.push_back(variable());
      f.lhs = parse_formula();
      return node(std::move(f));
    }
    return parse_primary();
  }

  FormulaPtr parse_primary() {
    skip_ws();
    const std::size_t pos = i_;
    if (peek() == '(') {
      try {
        ++i_;
        auto inner = parse_formula();
        expect(")");
        return inner;
      } catch (const ParseError&) {
        i_ = pos;  // not a parenthesized formula; retry as a term relation
      }
    }
    if (accept("$")) {
      Formula f;
      f.kind = Formula::Kind::Predicate;
      f.pos = pos;
      f.name = identifier();
      expect("(");
      f.terms.push_back(parse_term());
      while (accept(",")) f.terms.push_back(parse_term());
      expect(")");
      return node(std::move(f));
    }
    if (is_upper(peek())) {
      Formula f;
      f.kind = Formula::Kind::SeqValue;
      f.pos = pos;
      f.name = identifier();
      expect("[");
      f.terms.push_back(parse_term());
      expect("]");
      if (accept("!=")) {
        f.rel = Rel::Ne;
      } else if (!looking_at("=>") && accept("=")) {
        f.rel = Rel::Eq;
      } else {
        fail("expected '=' or '!=' after sequence index");
      }
      expect("@");
      skip_ws();
      const std::size_t start = i_;
      if (i_ < s_.size() && s_[i_] == '-') ++i_;
      while (i_ < s_.size() && is_digit(s_[i_])) ++i_;
      if (i_ == start || s_.substr(start, i_ - start) == "-") fail("expected integer after '@'");
      f.value = std::stoll(std::string(s_.substr(start, i_ - start)));
      return node(std::move(f));
    }
    Formula f;
    f.kind = Formula::Kind::Rel;
    f.pos = pos;
    f.terms.push_back(parse_term());
    f.rel = parse_rel();
    f.terms.push_back(parse_term());
    return node(std::move(f));
  }

  Rel parse_rel() {
    if (looking_at("<=>") || looking_at("=>")) fail("expected relation");
    if (accept("!=")) return Rel::Ne;
    if (accept("<=")) return Rel::Le;
    if (accept(">=")) return Rel::Ge;
    if (accept("<")) return Rel::Lt;
    if (accept(">")) return Rel::Gt;
    if (accept("=")) return Rel::Eq;
    fail("expected relation");
  }

  static TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

  TermPtr parse_term() {
    auto lhs = parse_product();
    while (true) {
      if (accept("+")) {
        Term t;
        t.kind = Term::Kind::Add;
        t.lhs = lhs;
        t.rhs = parse_product();
        lhs = make(std::move(t));
      } else if (accept("-")) {
        auto rhs = parse_product();
        if (rhs->kind != Term::Kind::Const) fail("subtraction needs a constant right operand");
        Term t;
        t.kind = Term::Kind::Sub;
        t.lhs = lhs;
        t.value = rhs->value;
        lhs = make(std::move(t));
      } else {
        return lhs;
      }
    }
  }

  TermPtr parse_product() {
    auto lhs = parse_atom();
    while (true) {
      if (accept("/")) {
        auto rhs = parse_atom();
        if (rhs->kind != Term::Kind::Const || rhs->value == 0) fail("division needs a positive constant divisor");
        Term t;
        t.kind = Term::Kind::Div;
        t.lhs = lhs;
        t.value = rhs->value;
        lhs = make(std::move(t));
      } else if (accept("*")) {
        auto rhs = parse_atom();
        Term t;
        t.kind = Term::Kind::Mul;
        if (lhs->kind == Term::Kind::Const) {
          t.value = lhs->value;
          t.lhs = rhs;
        } else if (rhs->kind == Term::Kind::Const) {
          t.value = rhs->value;
          t.lhs = lhs;
        } else {
          fail("multiplication needs a constant operand");
        }
        lhs = make(std::move(t));
      } else {
        return lhs;
      }
    }
  }

  TermPtr parse_atom() {
    const char c = peek();
    if (c == '(') {
      ++i_;
      auto t = parse_term();
      expect(")");
      return t;
    }
    if (is_digit(c)) {
      const std::size_t start = i_;
      while (i_ < s_.size() && is_digit(s_[i_])) ++i_;
      Term t;
      t.kind = Term::Kind::Const;
      t.value = Natural(std::string(s_.substr(start, i_ - start)));
      return make(std::move(t));
    }
    if (is_lower(c)) {
      Term t;
      t.kind = Term::Kind::Var;
      t.name = identifier();
      return make(std::move(t));
    }
    fail("expected term");
  }
};

void collect_free(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  if (t.lhs) collect_free(*t.lhs, out);
  if (t.rhs) collect_free(*t.rhs, out);
}

std::string term_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var: return t.name;
    case Term::Kind::Const: return t.value.get_str();
    case Term::Kind::Add: return "(" + term_string(*t.lhs) + "+" + term_string(*t.rhs) + ")";
    case Term::Kind::Sub: return "(" + term_string(*t.lhs) + "-" + t.value.get_str() + ")";
    case Term::Kind::Mul: return "(" + t.value.get_str() + "*" + term_string(*t.lhs) + ")";
    case Term::Kind::Div: return "(" + term_string(*t.lhs) + "/" + t.value.get_str() + ")";
  }
  return {};
}

const char* rel_string(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Ne: return "!=";
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Gt: return ">";
    case Rel::Ge: return ">=";
  }
  return "?";
}

}  // namespace

FormulaPtr parse(std::string_view text) { return Parser(text).parse_all(); }

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  for (const auto& t : f.terms) collect_free(*t, out);
  if (f.lhs) {
    auto inner = free_variables(*f.lhs);
    if (f.kind == Formula::Kind::Exists || f.kind == Formula::Kind::Forall) {
      for (const auto& v : f.vars) inner.erase(v);
    }
    out.insert(inner.begin(), inner.end());
  }
  if (f.rhs) {
    auto inner = free_variables(*f.rhs);
    out.insert(inner.begin(), inner.end());
  }
  return out;
}

std::string to_string(const Formula& f) {
  auto join_vars = [&] {
    std::string s;
    for (std::size_t i = 0; i < f.vars.size(); ++i) s += (i ? "," : "") + f.vars[i];
    return s;
  };
  switch (f.kind) {
    case Formula::Kind::Rel: return term_string(*f.terms[0]) + rel_string(f.rel) + term_string(*f.terms[1]);
    case Formula::Kind::SeqValue:
      return f.name + "[" + term_string(*f.terms[0]) + "]" + rel_string(f.rel) + "@" + std::to_string(f.value);
    case Formula::Kind::Predicate: {
      std::string s = "$" + f.name + "(";
      for (std::size_t i = 0; i < f.terms.size(); ++i) s += (i ? "," : "") + term_string(*f.terms[i]);
      return s + ")";
    }
    case Formula::Kind::Not: return "~(" + to_string(*f.lhs) + ")";
    case Formula::Kind::And: return "(" + to_string(*f.lhs) + " & " + to_string(*f.rhs) + ")";
    case Formula::Kind::Or: return "(" + to_string(*f.lhs) + " | " + to_string(*f.rhs) + ")";
    case Formula::Kind::Implies: return "(" + to_string(*f.lhs) + " => " + to_string(*f.rhs) + ")";
    case Formula::Kind::Iff: return "(" + to_string(*f.lhs) + " <=> " + to_string(*f.rhs) + ")";
    case Formula::Kind::Exists: return "(E" + join_vars() + " " + to_string(*f.lhs) + ")";
    case Formula::Kind::Forall: return "(A" + join_vars() + " " + to_string(*f.lhs) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::string>> split_rules(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> rules;
  std::istringstream in{std::string(text)};
  for (std::string tok; in >> tok;) {
    const auto arrow = tok.find("->");
    if (arrow == std::string::npos || arrow == 0) throw std::invalid_argument("malformed morphism rule: " + tok);
    rules.emplace_back(tok.substr(0, arrow), tok.substr(arrow + 2));
  }
  return rules;
}

}  // namespace

Morphism Morphism::parse(std::string_view rules, std::string_view coding) {
  Morphism m;
  for (auto& [lhs, rhs] : split_rules(rules)) {
    if (lhs.size() != 1) throw std::invalid_argument("morphism letters must be single characters");
    if (m.images.contains(lhs[0])) throw std::invalid_argument("duplicate morphism rule for " + lhs);
    m.letters.push_back(lhs[0]);
    m.images[lhs[0]] = rhs;
  }
  if (m.letters.empty()) throw std::invalid_argument("empty morphism");
  if (coding.empty()) {
    for (char c : m.letters) {
      if (!is_digit(c)) throw std::invalid_argument("identity coding needs digit letters");
      m.coding[c] = c - '0';
    }
  } else {
    for (auto& [lhs, rhs] : split_rules(coding)) {
      if (lhs.size() != 1) throw std::invalid_argument("coding letters must be single characters");
      m.coding[lhs[0]] = std::stoll(rhs);
    }
  }
  return m;
}

std::size_t Morphism::uniform_length() const {
  if (letters.empty()) throw std::invalid_argument("empty morphism");
  const std::size_t u = images.at(letters.front()).size();
  for (const auto& [c, img] : images) {
    if (img.size() != u) throw std::invalid_argument("morphism is not uniform");
  }
  return u;
}

Dfao fixed_point_dfao(const Morphism& m) {
  const std::size_t u = m.uniform_length();
  if (u != 2) throw std::invalid_argument("base-2 sequences need a 2-uniform morphism");
  const char first = m.letters.front();
  if (m.images.at(first).front() != first) throw std::invalid_argument("morphism is not prolongable on its first letter");
  std::map<char, StateId> id;
  for (std::size_t i = 0; i < m.letters.size(); ++i) id[m.letters[i]] = static_cast<StateId>(i);
  std::vector<std::int64_t> out;
  std::vector<StateId> delta;
  for (char c : m.letters) {
    const auto cod = m.coding.find(c);
    if (cod == m.coding.end()) throw std::invalid_argument(std::string("coding is missing letter ") + c);
    out.push_back(cod->second);
    for (char target : m.images.at(c)) {
      const auto it = id.find(target);
      if (it == id.end()) throw std::invalid_argument(std::string("image uses unknown letter ") + target);
      delta.push_back(it->second);
    }
  }
  return Dfao(1, 0, std::move(out), std::move(delta));
}

Dfa dfao_predicate(const Dfao& d, std::int64_t value) {
  std::vector<bool> acc(d.size());
  for (StateId s = 0; s < d.size(); ++s) acc[s] = d.output(s) == value;
  return minimize(zero_saturate(Dfa(d.tracks(), d.initial(), std::move(acc), d.transitions())));
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

void Registry::add_sequence(const std::string& name, Dfao d) {
  if (name.empty() || !is_upper(name[0])) throw std::invalid_argument("sequence names start with an uppercase letter: " + name);
  sequences_.insert_or_assign(name, std::move(d));
}

void Registry::add_predicate(const std::string& name, NamedDfa d) {
  if (name.empty() || !is_lower(name[0])) throw std::invalid_argument("predicate names start with a lowercase letter: " + name);
  predicates_.insert_or_assign(name, std::move(d));
}

const Dfao* Registry::sequence(const std::string& name) const {
  const auto it = sequences_.find(name);
  return it == sequences_.end() ? nullptr : &it->second;
}

const NamedDfa* Registry::predicate(const std::string& name) const {
  const auto it = predicates_.find(name);
  return it == predicates_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Compiler
// ---------------------------------------------------------------------------

namespace {

// Partial result: an automaton over sorted variables, or a truth value when
// every variable has been quantified away.
struct Part {
  std::vector<std::string> vars;
  std::optional<Dfa> dfa;
  bool truth = false;

  bool closed() const { return !dfa.has_value(); }
};

Part constant_part(bool truth) {
  Part p;
  p.truth = truth;
  return p;
}

Part lift(const Part& p, const std::vector<std::string>& vars) {
  const auto k = static_cast<unsigned>(vars.size());
  if (p.closed()) return Part{vars, p.truth ? universal_dfa(k) : empty_dfa(k)};
  if (p.vars == vars) return p;
  std::vector<unsigned> pos;
  for (const auto& v : p.vars) pos.push_back(static_cast<unsigned>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin()));
  return Part{vars, remap_tracks(*p.dfa, k, pos)};
}

Part combine(const Part& a, const Part& b, BoolOp op) {
  if (a.closed() && b.closed()) return constant_part(apply(op, a.truth, b.truth));
  std::vector<std::string> vars;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(vars));
  if (vars.size() > kMaxTracks) throw CompileError("too many simultaneous variables");
  const Part la = lift(a, vars);
  const Part lb = lift(b, vars);
  return Part{vars, minimize(product(*la.dfa, *lb.dfa, op))};
}

Part negate(const Part& p) {
  if (p.closed()) return constant_part(!p.truth);
  return Part{p.vars, complement(*p.dfa)};
}

Part exists(const Part& p, const std::string& var) {
  if (p.closed()) return p;
  const auto it = std::find(p.vars.begin(), p.vars.end(), var);
  if (it == p.vars.end()) return p;
  if (p.vars.size() == 1) return constant_part(!is_empty(*p.dfa));
  Part out;
  out.vars = p.vars;
  out.vars.erase(out.vars.begin() + (it - p.vars.begin()));
  out.dfa = project_exists(*p.dfa, static_cast<unsigned>(it - p.vars.begin()));
  return out;
}

class Compiler {
public:
  explicit Compiler(const Registry& registry) : registry_(registry) {}

  Part formula(const Formula& f) {
    switch (f.kind) {
      case Formula::Kind::Rel: return relation(f);
      case Formula::Kind::SeqValue: return sequence_value(f);
      case Formula::Kind::Predicate: return predicate(f);
      case Formula::Kind::Not: return negate(formula(*f.lhs));
      case Formula::Kind::And: return combine(formula(*f.lhs), formula(*f.rhs), BoolOp::And);
      case Formula::Kind::Or: return combine(formula(*f.lhs), formula(*f.rhs), BoolOp::Or);
      case Formula::Kind::Implies: return combine(formula(*f.lhs), formula(*f.rhs), BoolOp::Implies);
      case Formula::Kind::Iff: return combine(formula(*f.lhs), formula(*f.rhs), BoolOp::Iff);
      case Formula::Kind::Exists: {
        Part p = formula(*f.lhs);
        for (auto it = f.vars.rbegin(); it != f.vars.rend(); ++it) p = exists(p, *it);
        return p;
      }
      case Formula::Kind::Forall: {
        Part p = negate(formula(*f.lhs));
        for (auto it = f.vars.rbegin(); it != f.vars.rend(); ++it) p = exists(p, *it);
        return negate(p);
      }
    }
    throw CompileError("unknown formula node");
  }

  // Instantiates `base` with argument variables (repeats allowed).
  Part instance(const Dfa& base, std::vector<std::string> args) {
    if (args.size() != base.tracks()) throw CompileError("arity mismatch");
    std::vector<Part> equalities;
    std::vector<std::string> temps;
    for (std::size_t t = 0; t < args.size(); ++t) {
      for (std::size_t u = 0; u < t; ++u) {
        if (args[u] == args[t]) {
          const std::string f = fresh();
          equalities.push_back(simple(builtin_eq(), {args[t], f}));
          temps.push_back(f);
          args[t] = f;
          break;
        }
      }
    }
    Part p = simple(base, args);
    for (const auto& e : equalities) p = combine(p, e, BoolOp::And);
    for (const auto& v : temps) p = exists(p, v);
    return p;
  }

  std::string fresh() { return "#" + std::to_string(counter_++); }

private:
  const Registry& registry_;
  int counter_ = 0;
  std::map<std::pair<std::string, std::int64_t>, Dfa> seq_cache_;

  // Distinct argument names only.
  static Part simple(const Dfa& base, const std::vector<std::string>& args) {
    std::vector<std::string> vars = args;
    std::sort(vars.begin(), vars.end());
    std::vector<unsigned> pos;
    for (const auto& a : args) pos.push_back(static_cast<unsigned>(std::lower_bound(vars.begin(), vars.end(), a) - vars.begin()));
    return Part{vars, remap_tracks(base, static_cast<unsigned>(vars.size()), pos)};
  }

  struct Bound {
    std::vector<Part> constraints;
    std::vector<std::string> temps;
  };

  // Names the variable carrying the value of `t`, adding side constraints.
  // A compound term stores its value in `target` when one is given.
  std::string bind(const Term& t, Bound& b, const std::string& target = {}) {
    auto out = [&] {
      if (!target.empty()) return target;
      b.temps.push_back(fresh());
      return b.temps.back();
    };
    switch (t.kind) {
      case Term::Kind::Var: return t.name;
      case Term::Kind::Const: {
        const std::string v = out();
        b.constraints.push_back(instance(builtin_const(t.value), {v}));
        return v;
      }
      case Term::Kind::Add: {
        const std::string x = bind(*t.lhs, b);
        const std::string y = bind(*t.rhs, b);
        const std::string v = out();
        b.constraints.push_back(instance(builtin_add(), {x, y, v}));
        return v;
      }
      case Term::Kind::Sub: {
        const std::string x = bind(*t.lhs, b);
        const std::string v = out();
        b.constraints.push_back(instance(sub_const_dfa(t.value), {x, v}));
        return v;
      }
      case Term::Kind::Mul: {
        const std::string x = bind(*t.lhs, b);
        const std::string v = out();
        b.constraints.push_back(instance(mul_const_dfa(t.value), {x, v}));
        return v;
      }
      case Term::Kind::Div: {
        const std::string x = bind(*t.lhs, b);
        const std::string v = out();
        b.constraints.push_back(instance(div_const_dfa(t.value), {x, v}));
        return v;
      }
    }
    throw CompileError("unknown term node");
  }

  Part close(Part p, Bound& b) {
    for (const auto& c : b.constraints) p = combine(p, c, BoolOp::And);
    for (auto it = b.temps.rbegin(); it != b.temps.rend(); ++it) p = exists(p, *it);
    return p;
  }

  Part relation(const Formula& f) {
    Bound b;
    const Term& l = *f.terms[0];
    const Term& r = *f.terms[1];
    const bool l_var = l.kind == Term::Kind::Var;
    const bool r_var = r.kind == Term::Kind::Var;
    if (f.rel == Rel::Eq && l_var != r_var) {
      // x = compound: let the compound term write straight into x.
      const Term& var = l_var ? l : r;
      const Term& compound = l_var ? r : l;
      bind(compound, b, var.name);
      return close(constant_part(true), b);
    }
    const std::string x = bind(l, b);
    const std::string y = bind(r, b);
    Part p = [&] {
      switch (f.rel) {
        case Rel::Eq: return instance(builtin_eq(), {x, y});
        case Rel::Ne: return negate(instance(builtin_eq(), {x, y}));
        case Rel::Lt: return instance(builtin_lt(), {x, y});
        case Rel::Le: return negate(instance(builtin_lt(), {y, x}));
        case Rel::Gt: return instance(builtin_lt(), {y, x});
        case Rel::Ge: return negate(instance(builtin_lt(), {x, y}));
      }
      throw CompileError("unknown relation");
    }();
    return close(p, b);
  }

  Part sequence_value(const Formula& f) {
    const Dfao* seq = registry_.sequence(f.name);
    if (!seq) throw CompileError("unregistered automatic sequence: " + f.name);
    if (seq->tracks() != 1) throw CompileError("sequence " + f.name + " must read one track");
    auto key = std::make_pair(f.name, f.value);
    auto it = seq_cache_.find(key);
    if (it == seq_cache_.end()) it = seq_cache_.emplace(key, dfao_predicate(*seq, f.value)).first;
    Bound b;
    const std::string x = bind(*f.terms[0], b);
    Part p = instance(it->second, {x});
    if (f.rel == Rel::Ne) p = negate(p);
    return close(p, b);
  }

  Part predicate(const Formula& f) {
    const NamedDfa* pred = registry_.predicate(f.name);
    if (!pred) throw CompileError("unregistered predicate: " + f.name);
    if (pred->vars.size() != f.terms.size()) {
      throw CompileError("predicate " + f.name + " expects " + std::to_string(pred->vars.size()) + " arguments");
    }
    Bound b;
    std::vector<std::string> args;
    for (const auto& t : f.terms) args.push_back(bind(*t, b));
    return close(instance(pred->dfa, args), b);
  }
};

NamedDfa finish(const Part& p, const std::set<std::string>& free) {
  std::vector<std::string> vars(free.begin(), free.end());
  if (vars.size() > kMaxTracks) throw CompileError("too many free variables");
  Part full = lift(p, vars);
  return NamedDfa{vars, minimize(*full.dfa)};
}

template <typename Build>
const Dfa& memoized(std::map<Natural, Dfa>& cache, const Natural& c, Build build) {
  static std::recursive_mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find(c);
  if (it == cache.end()) it = cache.emplace(c, build()).first;
  return it->second;
}

}  // namespace

NamedDfa compile(const Formula& f, const Registry& registry) {
  const auto free = free_variables(f);
  if (free.empty()) throw CompileError("formula has no free variables");
  Compiler c(registry);
  return finish(c.formula(f), free);
}

NamedDfa compile(std::string_view text, const Registry& registry) { return compile(*parse(text), registry); }

Dfa mul_const_dfa(const Natural& c) {
  static std::map<Natural, Dfa> cache;
  return memoized(cache, c, [&] {
    const Registry none;
    Compiler comp(none);
    Part p;
    if (c == 0) {
      p = combine(comp.instance(builtin_const(0), {"y"}), Part{{"x"}, universal_dfa(1)}, BoolOp::And);
    } else if (c == 1) {
      p = comp.instance(builtin_eq(), {"x", "y"});
    } else {
      // c*x = 2*(c/2)*x [+ x], one doubling per binary digit.
      const Dfa half = mul_const_dfa(c / 2);
      Part z = comp.instance(half, {"x", "z"});
      Part dbl = comp.instance(builtin_add(), {"z", "z", c % 2 == 0 ? "y" : "t"});
      p = exists(combine(z, dbl, BoolOp::And), "z");
      if (c % 2 != 0) p = exists(combine(p, comp.instance(builtin_add(), {"t", "x", "y"}), BoolOp::And), "t");
    }
    return finish(p, {"x", "y"}).dfa;
  });
}

Dfa div_const_dfa(const Natural& c) {
  if (c <= 0) throw std::invalid_argument("divisor must be positive");
  static std::map<Natural, Dfa> cache;
  return memoized(cache, c, [&] {
    const Registry none;
    Compiler comp(none);
    // y = floor(x / c)  <=>  E m, r: m = c*y & x = m + r & r < c
    Part m = comp.instance(mul_const_dfa(c), {"y", "m"});
    Part sum = comp.instance(builtin_add(), {"m", "r", "x"});
    Part bound = exists(combine(comp.instance(builtin_lt(), {"r", "k"}), comp.instance(builtin_const(c), {"k"}), BoolOp::And), "k");
    Part p = exists(exists(combine(combine(m, sum, BoolOp::And), bound, BoolOp::And), "m"), "r");
    return finish(p, {"x", "y"}).dfa;
  });
}

Dfa sub_const_dfa(const Natural& c) {
  static std::map<Natural, Dfa> cache;
  return memoized(cache, c, [&] {
    const Registry none;
    Compiler comp(none);
    // y + c = x
    Part p = exists(combine(comp.instance(builtin_add(), {"y", "k", "x"}), comp.instance(builtin_const(c), {"k"}), BoolOp::And), "k");
    return finish(p, {"x", "y"}).dfa;
  });
}

// ---------------------------------------------------------------------------
// Sessions
// ---------------------------------------------------------------------------

std::vector<SessionEntry> parse_session(std::string_view text) {
  std::vector<SessionEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("session line " + std::to_string(lineno) + ": expected 'name = definition'");
    SessionEntry e;
    e.name = trim(line.substr(0, eq));
    std::string def = trim(line.substr(eq + 1));
    if (e.name.empty() || !std::all_of(e.name.begin(), e.name.end(), is_ident_char)) {
      throw std::invalid_argument("session line " + std::to_string(lineno) + ": bad name");
    }
    if (!def.empty() && def.front() == '"') {
      if (def.size() < 2 || def.back() != '"') throw std::invalid_argument("session line " + std::to_string(lineno) + ": unterminated formula");
      e.definition = def.substr(1, def.size() - 2);
      e.is_sequence = false;
    } else {
      e.definition = def;
      e.is_sequence = true;
    }
    out.push_back(std::move(e));
  }
  return out;
}

Registry build_registry(const std::vector<SessionEntry>& entries) {
  Registry reg;
  for (const auto& e : entries) {
    if (e.is_sequence) {
      const auto slash = e.definition.find('/');
      const std::string rules = e.definition.substr(0, slash);
      const std::string coding = slash == std::string::npos ? std::string{} : e.definition.substr(slash + 1);
      reg.add_sequence(e.name, fixed_point_dfao(Morphism::parse(rules, coding)));
    } else {
      reg.add_predicate(e.name, compile(e.definition, reg));
    }
  }
  return reg;
}

}  // namespace dombi
