#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dombi/automata.hpp"
#include "dombi/dfao.hpp"

namespace dombi {

// ---------------------------------------------------------------------------
// Formula syntax
//
//   formula := iff
//   iff     := implies ('<=>' implies)*
//   implies := or ('=>' implies)?
//   or      := and ('|' and)*
//   and     := unary ('&' unary)*
//   unary   := '~' unary | ('E'|'A') var (',' var)* formula | primary
//   primary := '(' formula ')' | '$' name '(' term, ... ')'
//            | NAME '[' term ']' ('='|'!=') '@' int | term rel term
//   term    := product (('+'|'-') product)*
//   product := atom (('/'|'*') atom)*
//   atom    := number | var | '(' term ')'
//
// Variables start with a lowercase letter, automatic sequences with an
// uppercase one. `E`/`A` directly followed by a lowercase letter or a space
// open a quantifier whose scope extends as far right as possible.
// ---------------------------------------------------------------------------

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Const, Add, Sub, Mul, Div };
  Kind kind = Kind::Var;
  std::string name;  // Var
  Natural value;     // Const, and the constant operand of Sub/Mul/Div
  TermPtr lhs, rhs;  // Add: both; Sub/Div/Mul: lhs only
};

enum class Rel { Eq, Ne, Lt, Le, Gt, Ge };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Rel, SeqValue, Predicate, Not, And, Or, Implies, Iff, Exists, Forall };
  Kind kind = Kind::Rel;
  Rel rel = Rel::Eq;                 // Rel; SeqValue uses Eq/Ne only
  std::vector<TermPtr> terms;        // Rel: lhs, rhs; SeqValue: index; Predicate: arguments
  std::string name;                  // SeqValue / Predicate
  std::int64_t value = 0;            // SeqValue
  FormulaPtr lhs, rhs;               // connectives and quantifier body (lhs)
  std::vector<std::string> vars;     // quantified variables
  std::size_t pos = 0;               // source offset
};

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t pos);
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

class CompileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

FormulaPtr parse(std::string_view text);
std::set<std::string> free_variables(const Formula& f);
std::string to_string(const Formula& f);

// ---------------------------------------------------------------------------
// Automatic sequences from uniform morphisms
// ---------------------------------------------------------------------------

/// A uniform morphism on single-character letters plus a coding to integers.
/// The first rule's letter seeds the fixed point.
struct Morphism {
  std::vector<char> letters;
  std::map<char, std::string> images;
  std::map<char, std::int64_t> coding;

  /// Rules in the form "0->01 1->23 ..." and "0->0 1->0 3->1 ...".
  static Morphism parse(std::string_view rules, std::string_view coding = {});
  std::size_t uniform_length() const;
};

/// One state per letter; digit d follows the d-th letter of the image.
Dfao fixed_point_dfao(const Morphism& m);

/// Accepts enc(n) iff the sequence has value `value` at n. Minimal.
Dfa dfao_predicate(const Dfao& d, std::int64_t value);

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

/// Automaton whose track t carries variable vars[t]; vars sorted by name.
struct NamedDfa {
  std::vector<std::string> vars;
  Dfa dfa;

  bool holds(const std::vector<std::uint64_t>& values) const { return accepts(dfa, encode_tuple(values)); }
};

class Registry {
public:
  void add_sequence(const std::string& name, Dfao d);
  void add_predicate(const std::string& name, NamedDfa d);

  const Dfao* sequence(const std::string& name) const;
  const NamedDfa* predicate(const std::string& name) const;

  const std::map<std::string, Dfao>& sequences() const { return sequences_; }
  const std::map<std::string, NamedDfa>& predicates() const { return predicates_; }

private:
  std::map<std::string, Dfao> sequences_;
  std::map<std::string, NamedDfa> predicates_;
};

/// Compiles a formula with at least one free variable to a minimal
/// zero-saturated automaton over its free variables in name order.
NamedDfa compile(const Formula& f, const Registry& registry);
NamedDfa compile(std::string_view text, const Registry& registry);

// Auxiliary two-track automata over (x, y), built through the compiler.
Dfa mul_const_dfa(const Natural& c);   // y = c * x
Dfa div_const_dfa(const Natural& c);   // y = floor(x / c)
Dfa sub_const_dfa(const Natural& c);   // y + c = x

// ---------------------------------------------------------------------------
// Session files
//
//   # comment
//   NAME = <morphism rules> / <coding rules>
//   name = "formula"
// ---------------------------------------------------------------------------

struct SessionEntry {
  std::string name;
  std::string definition;
  bool is_sequence = false;
};

std::vector<SessionEntry> parse_session(std::string_view text);
/// Builds every entry in order; formulas may use earlier entries.
Registry build_registry(const std::vector<SessionEntry>& entries);

}  // namespace dombi
