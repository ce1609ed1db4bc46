#pragma once

#include <random>
#include <vector>

#include "dombi/automata.hpp"

namespace testing_support {

// Complete automaton with random transitions and accepting states.
inline dombi::Dfa random_dfa(std::mt19937& rng, unsigned tracks, unsigned states) {
  std::vector<bool> acc(states);
  for (unsigned s = 0; s < states; ++s) acc[s] = rng() % 3 == 0;
  std::vector<dombi::StateId> delta(states << tracks);
  for (auto& d : delta) d = rng() % states;
  return dombi::Dfa(tracks, 0, acc, delta);
}

// Every word of the given track count with length <= max_len.
inline std::vector<dombi::Word> all_words(unsigned tracks, unsigned max_len) {
  std::vector<dombi::Word> out{dombi::Word(tracks)};
  std::size_t begin = 0;
  for (unsigned len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (dombi::Letter a = 0; a < (dombi::Letter{1} << tracks); ++a) {
        dombi::Word w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

}  // namespace testing_support
