#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dombi/automata.hpp"

namespace dombi {

/// Deterministic automaton with an integer output on every state.
class Dfao {
public:
  /// One state with output 0 over one track.
  Dfao() : Dfao(1, 0, {0}, {0, 0}) {}
  Dfao(unsigned tracks, StateId initial, std::vector<std::int64_t> output, std::vector<StateId> delta);

  unsigned tracks() const { return tracks_; }
  std::size_t alphabet_size() const { return std::size_t{1} << tracks_; }
  std::size_t size() const { return output_.size(); }
  StateId initial() const { return initial_; }
  std::int64_t output(StateId s) const { return output_[s]; }
  StateId next(StateId s, Letter a) const { return delta_[s * alphabet_size() + a]; }
  const std::vector<std::int64_t>& outputs() const { return output_; }
  const std::vector<StateId>& transitions() const { return delta_; }

  StateId run(const Word& w) const;
  std::int64_t value(const Word& w) const { return output_[run(w)]; }
  std::int64_t value(std::uint64_t n) const { return value(encode_canonical(n)); }

private:
  unsigned tracks_;
  StateId initial_;
  std::vector<std::int64_t> output_;
  std::vector<StateId> delta_;
};

/// Same layout as the Dfa text form, with `<state> <output>` lines in place
/// of accepting flags.
std::string to_text(const Dfao& d);
Dfao dfao_from_text(const std::string& text);
std::string to_dot(const Dfao& d);

}  // namespace dombi
