#include "dombi/dfao.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace dombi {

Dfao::Dfao(unsigned tracks, StateId initial, std::vector<std::int64_t> output, std::vector<StateId> delta)
    : tracks_(tracks), initial_(initial), output_(std::move(output)), delta_(std::move(delta)) {
  if (tracks_ == 0 || tracks_ > kMaxTracks) throw std::invalid_argument("dfao track count out of range");
  if (output_.empty()) throw std::invalid_argument("dfao needs at least one state");
  if (initial_ >= output_.size()) throw std::invalid_argument("dfao initial state out of range");
  if (delta_.size() != output_.size() * alphabet_size()) throw std::invalid_argument("dfao transition table is not complete");
  for (StateId t : delta_) {
    if (t >= output_.size()) throw std::invalid_argument("dfao transition target out of range");
  }
}

StateId Dfao::run(const Word& w) const {
  if (w.tracks() != tracks_) throw std::invalid_argument("word track count does not match automaton");
  StateId s = initial_;
  for (Letter x : w.letters()) s = next(s, x);
  return s;
}

std::string to_text(const Dfao& d) {
  auto id = [&](StateId s) -> StateId {
    if (s == d.initial()) return 0;
    if (s == 0) return d.initial();
    return s;
  };
  std::vector<StateId> order(d.size());
  for (StateId s = 0; s < d.size(); ++s) order[id(s)] = s;
  std::ostringstream out;
  out << d.tracks() << '\n';
  for (StateId i = 0; i < d.size(); ++i) out << i << ' ' << d.output(order[i]) << '\n';
  for (StateId i = 0; i < d.size(); ++i) {
    for (Letter x = 0; x < d.alphabet_size(); ++x) {
      out << i << ' ' << letter_string(x, d.tracks()) << ' ' << id(d.next(order[i], x)) << '\n';
    }
  }
  return out.str();
}

Dfao dfao_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  unsigned tracks = 0;
  std::vector<std::int64_t> out;
  std::vector<std::tuple<StateId, Letter, StateId>> edges;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tracks == 0) {
      tracks = static_cast<unsigned>(std::stoul(tok[0]));
      continue;
    }
    if (tok.size() == 2) {
      if (std::stoul(tok[0]) != out.size()) throw std::invalid_argument("dfao text: states must be listed in order");
      out.push_back(std::stoll(tok[1]));
    } else if (tok.size() == 3) {
      if (tok[1].size() != tracks) throw std::invalid_argument("dfao text: tuple width mismatch");
      Letter x = 0;
      for (unsigned t = 0; t < tracks; ++t) x = with_digit(x, t, tracks, tok[1][t] == '1');
      edges.emplace_back(static_cast<StateId>(std::stoul(tok[0])), x, static_cast<StateId>(std::stoul(tok[2])));
    } else {
      throw std::invalid_argument("dfao text: malformed line: " + line);
    }
  }
  if (tracks == 0 || tracks > kMaxTracks) throw std::invalid_argument("dfao text: missing or bad header");
  const std::size_t sigma = std::size_t{1} << tracks;
  constexpr StateId kUnset = ~StateId{0};
  std::vector<StateId> delta(out.size() * sigma, kUnset);
  for (auto [s, x, t] : edges) {
    if (s >= out.size()) throw std::invalid_argument("dfao text: unknown state");
    delta[s * sigma + x] = t;
  }
  for (StateId t : delta) {
    if (t == kUnset) throw std::invalid_argument("dfao text: incomplete transition table");
  }
  return Dfao(tracks, 0, std::move(out), std::move(delta));
}

std::string to_dot(const Dfao& d) {
  std::ostringstream out;
  out << "digraph dfao {\n  rankdir=LR;\n  node [shape=circle];\n  start [shape=point];\n  start -> " << d.initial() << ";\n";
  for (StateId s = 0; s < d.size(); ++s) out << "  " << s << " [label=\"" << s << "/" << d.output(s) << "\"];\n";
  for (StateId s = 0; s < d.size(); ++s) {
    std::map<StateId, std::string> labels;
    for (Letter x = 0; x < d.alphabet_size(); ++x) {
      auto& l = labels[d.next(s, x)];
      if (!l.empty()) l += ", ";
      l += letter_string(x, d.tracks());
    }
    for (const auto& [t, l] : labels) out << "  " << s << " -> " << t << " [label=\"" << l << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace dombi
