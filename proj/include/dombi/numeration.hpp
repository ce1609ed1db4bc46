#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace dombi {

using Natural = mpz_class;

// One input symbol: a k-tuple of binary digits packed into an integer.
// Track 0 is the most significant bit, so printing the letter with k binary
// digits lists the tracks left to right.
using Letter = std::uint32_t;

inline constexpr unsigned kMaxTracks = 16;

inline unsigned letter_digit(Letter letter, unsigned track, unsigned tracks) {
  return (letter >> (tracks - 1 - track)) & 1u;
}

inline Letter with_digit(Letter letter, unsigned track, unsigned tracks, unsigned digit) {
  const Letter bit = Letter{1} << (tracks - 1 - track);
  return digit ? (letter | bit) : (letter & ~bit);
}

std::string letter_string(Letter letter, unsigned tracks);

/// A word over the k-track binary alphabet, read most significant digit first.
class Word {
public:
  explicit Word(unsigned tracks = 1);
  Word(unsigned tracks, std::vector<Letter> letters);

  /// Parses a 1-track word such as "1101".
  static Word from_bits(std::string_view bits);

  unsigned tracks() const { return tracks_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  void push_back(Letter letter);
  /// Prepends `count` all-zero tuples.
  Word padded(std::size_t count) const;
  /// Digits of one track as a 1-track word.
  Word track(unsigned t) const;

  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;

private:
  unsigned tracks_;
  std::vector<Letter> letters_;
};

/// MSD-first binary digits without leading zeros; zero encodes as "0".
Word encode_canonical(const Natural& n);
Word encode_canonical(std::uint64_t n);

/// Value of a 1-track word; leading zeros are ignored and "" is 0.
Natural decode(const Word& w);

/// Left-pads every 1-track word to the common length and zips them.
Word align(const std::vector<Word>& words);

/// align() applied to canonical encodings of the given values.
Word encode_tuple(const std::vector<Natural>& values);
Word encode_tuple(const std::vector<std::uint64_t>& values);

}  // namespace dombi
