#include "dombi/numeration.hpp"

#include <algorithm>
#include <stdexcept>

namespace dombi {

std::string letter_string(Letter letter, unsigned tracks) {
  std::string out(tracks, '0');
  for (unsigned t = 0; t < tracks; ++t) {
    if (letter_digit(letter, t, tracks)) out[t] = '1';
  }
  return out;
}

Word::Word(unsigned tracks) : tracks_(tracks) {
  if (tracks == 0 || tracks > kMaxTracks) throw std::invalid_argument("word track count out of range");
}

Word::Word(unsigned tracks, std::vector<Letter> letters) : Word(tracks) {
  for (Letter l : letters) push_back(l);
}

Word Word::from_bits(std::string_view bits) {
  Word w(1);
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("binary word expected");
    w.push_back(c == '1' ? 1u : 0u);
  }
  return w;
}

void Word::push_back(Letter letter) {
  if (letter >= (Letter{1} << tracks_)) throw std::invalid_argument("letter outside the tuple alphabet");
  letters_.push_back(letter);
}

Word Word::padded(std::size_t count) const {
  Word out(tracks_);
  out.letters_.assign(count, 0);
  out.letters_.insert(out.letters_.end(), letters_.begin(), letters_.end());
  return out;
}

Word Word::track(unsigned t) const {
  if (t >= tracks_) throw std::out_of_range("track index");
  Word out(1);
  out.letters_.reserve(letters_.size());
  for (Letter l : letters_) out.letters_.push_back(letter_digit(l, t, tracks_));
  return out;
}

std::string Word::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (tracks_ > 1 && i) out += ' ';
    out += letter_string(letters_[i], tracks_);
  }
  return out;
}

Word encode_canonical(const Natural& n) {
  if (n < 0) throw std::invalid_argument("negative value");
  if (n == 0) return Word(1, {0});
  return Word::from_bits(n.get_str(2));
}

Word encode_canonical(std::uint64_t n) {
  Word w(1);
  if (n == 0) {
    w.push_back(0);
    return w;
  }
  int top = 63;
  while (((n >> top) & 1u) == 0) --top;
  for (int b = top; b >= 0; --b) w.push_back(static_cast<Letter>((n >> b) & 1u));
  return w;
}

Natural decode(const Word& w) {
  if (w.tracks() != 1) throw std::invalid_argument("decode expects a 1-track word");
  Natural value = 0;
  for (Letter l : w.letters()) value = value * 2 + l;
  return value;
}

Word align(const std::vector<Word>& words) {
  if (words.empty()) throw std::invalid_argument("align needs at least one word");
  if (words.size() > kMaxTracks) throw std::invalid_argument("too many tracks");
  std::size_t len = 0;
  for (const Word& w : words) {
    if (w.tracks() != 1) throw std::invalid_argument("align expects 1-track words");
    len = std::max(len, w.size());
  }
  const auto k = static_cast<unsigned>(words.size());
  std::vector<Letter> letters(len, 0);
  for (unsigned t = 0; t < k; ++t) {
    const Word& w = words[t];
    const std::size_t offset = len - w.size();
    for (std::size_t i = 0; i < w.size(); ++i) letters[offset + i] = with_digit(letters[offset + i], t, k, w[i]);
  }
  return Word(k, std::move(letters));
}

Word encode_tuple(const std::vector<Natural>& values) {
  std::vector<Word> words;
  words.reserve(values.size());
  for (const auto& v : values) words.push_back(encode_canonical(v));
  return align(words);
}

Word encode_tuple(const std::vector<std::uint64_t>& values) {
  std::vector<Word> words;
  words.reserve(values.size());
  for (auto v : values) words.push_back(encode_canonical(v));
  return align(words);
}

}  // namespace dombi
