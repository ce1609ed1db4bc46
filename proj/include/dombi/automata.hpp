#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dombi/numeration.hpp"

namespace dombi {

using StateId = std::uint32_t;

/// Complete deterministic automaton over the k-track binary alphabet.
///
/// Transitions are stored row-major: state s on letter a goes to
/// delta[s * 2^k + a]. Instances are immutable once constructed.
class Dfa {
public:
  /// One rejecting state over one track.
  Dfa() : Dfa(1, 0, {false}, {0, 0}) {}
  Dfa(unsigned tracks, StateId initial, std::vector<bool> accepting, std::vector<StateId> delta);

  unsigned tracks() const { return tracks_; }
  std::size_t alphabet_size() const { return std::size_t{1} << tracks_; }
  std::size_t size() const { return accepting_.size(); }
  StateId initial() const { return initial_; }
  bool accepting(StateId s) const { return accepting_[s]; }
  StateId next(StateId s, Letter a) const { return delta_[s * alphabet_size() + a]; }

  const std::vector<bool>& accepting_states() const { return accepting_; }
  const std::vector<StateId>& transitions() const { return delta_; }

  /// State reached from the initial state on w (track count must match).
  StateId run(const Word& w) const;

  friend bool operator==(const Dfa&, const Dfa&) = default;

private:
  unsigned tracks_;
  StateId initial_;
  std::vector<bool> accepting_;
  std::vector<StateId> delta_;
};

/// Nondeterministic automaton; only an intermediate of projection and reversal.
struct Nfa {
  unsigned tracks = 1;
  std::vector<StateId> initial;
  std::vector<bool> accepting;
  // successors[s * 2^k + a]
  std::vector<std::vector<StateId>> successors;

  std::size_t size() const { return accepting.size(); }
  std::size_t alphabet_size() const { return std::size_t{1} << tracks; }
};

enum class BoolOp { And, Or, Implies, Iff, Xor, AndNot };

bool apply(BoolOp op, bool a, bool b);

bool accepts(const Dfa& a, const Word& w);
/// Acceptance of the aligned canonical encodings of `values`, one per track.
bool accepts_values(const Dfa& a, std::span<const std::uint64_t> values);

/// Synchronous product restricted to reachable pairs. Not minimized.
Dfa product(const Dfa& a, const Dfa& b, BoolOp op);
Dfa complement(const Dfa& a);

Nfa to_nfa(const Dfa& a);
Nfa reverse(const Dfa& a);
/// Subset construction over reachable subsets.
Dfa determinize(const Nfa& n);

/// Accepts w iff `a` accepts 0^j w for some j >= 0.
Dfa zero_saturate(const Dfa& a);

/// Erases a track, determinizes, zero-saturates and minimizes.
Dfa project_exists(const Dfa& a, unsigned track);

/// Minimal complete automaton with states numbered in breadth-first order
/// (letters ascending) from the initial state.
Dfa minimize(const Dfa& a);

bool is_empty(const Dfa& a);
bool is_universal(const Dfa& a);
bool equivalent(const Dfa& a, const Dfa& b);

/// Reachable states from which no accepting state is reachable.
std::vector<bool> dead_states(const Dfa& a);

/// Re-embeds `a` into `tracks` tracks: old track t becomes track position[t];
/// tracks not named in `position` are unconstrained.
Dfa remap_tracks(const Dfa& a, unsigned tracks, std::span<const unsigned> position);

Dfa empty_dfa(unsigned tracks);
Dfa universal_dfa(unsigned tracks);

// Value-semantics primitives; every one is complete, minimal and invariant
// under leading all-zero tuples.
Dfa builtin_add();  // tracks (x, y, z): x + y = z
Dfa builtin_eq();   // (x, y): x = y
Dfa builtin_lt();   // (x, y): x < y
Dfa builtin_const(const Natural& c);

/// Text form:
///   optional "# tracks: <names>" comment
///   <k>
///   <state> <0|1>            one per state
///   <src> <tuple> <dst>      one per transition, tuple as k binary digits
std::string to_text(const Dfa& a, std::span<const std::string> track_names = {});
Dfa dfa_from_text(const std::string& text);
std::string to_dot(const Dfa& a, std::span<const std::string> track_names = {});

}  // namespace dombi
