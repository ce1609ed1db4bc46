#include "dombi/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dombi {

namespace {

void check_same_tracks(const Dfa& a, const Dfa& b) {
  if (a.tracks() != b.tracks()) throw std::invalid_argument("automata have different track counts");
}

// Breadth-first renumbering from the initial state; unreachable states vanish.
Dfa canonical_bfs(const Dfa& a) {
  const std::size_t sigma = a.alphabet_size();
  constexpr StateId kUnset = ~StateId{0};
  std::vector<StateId> order;
  std::vector<StateId> id(a.size(), kUnset);
  id[a.initial()] = 0;
  order.push_back(a.initial());
  for (std::size_t head = 0; head < order.size(); ++head) {
    const StateId s = order[head];
    for (Letter x = 0; x < sigma; ++x) {
      const StateId t = a.next(s, x);
      if (id[t] == kUnset) {
        id[t] = static_cast<StateId>(order.size());
        order.push_back(t);
      }
    }
  }
  std::vector<bool> acc(order.size());
  std::vector<StateId> delta(order.size() * sigma);
  for (std::size_t i = 0; i < order.size(); ++i) {
    acc[i] = a.accepting(order[i]);
    for (Letter x = 0; x < sigma; ++x) delta[i * sigma + x] = id[a.next(order[i], x)];
  }
  return Dfa(a.tracks(), 0, std::move(acc), std::move(delta));
}

Dfa from_table(unsigned tracks, const std::vector<std::vector<StateId>>& table, const std::vector<bool>& acc) {
  const std::size_t sigma = std::size_t{1} << tracks;
  std::vector<StateId> delta;
  delta.reserve(table.size() * sigma);
  for (const auto& row : table) delta.insert(delta.end(), row.begin(), row.end());
  return Dfa(tracks, 0, acc, std::move(delta));
}

}  // namespace

Dfa::Dfa(unsigned tracks, StateId initial, std::vector<bool> accepting, std::vector<StateId> delta)
    : tracks_(tracks), initial_(initial), accepting_(std::move(accepting)), delta_(std::move(delta)) {
  if (tracks_ == 0 || tracks_ > kMaxTracks) throw std::invalid_argument("dfa track count out of range");
  if (accepting_.empty()) throw std::invalid_argument("dfa needs at least one state");
  if (initial_ >= accepting_.size()) throw std::invalid_argument("dfa initial state out of range");
  if (delta_.size() != accepting_.size() * alphabet_size()) throw std::invalid_argument("dfa transition table is not complete");
  for (StateId t : delta_) {
    if (t >= accepting_.size()) throw std::invalid_argument("dfa transition target out of range");
  }
}

StateId Dfa::run(const Word& w) const {
  if (w.tracks() != tracks_) throw std::invalid_argument("word track count does not match automaton");
  StateId s = initial_;
  for (Letter x : w.letters()) s = next(s, x);
  return s;
}

bool apply(BoolOp op, bool a, bool b) {
  switch (op) {
    case BoolOp::And: return a && b;
    case BoolOp::Or: return a || b;
    case BoolOp::Implies: return !a || b;
    case BoolOp::Iff: return a == b;
    case BoolOp::Xor: return a != b;
    case BoolOp::AndNot: return a && !b;
  }
  return false;
}

bool accepts(const Dfa& a, const Word& w) { return a.accepting(a.run(w)); }

bool accepts_values(const Dfa& a, std::span<const std::uint64_t> values) {
  const unsigned k = a.tracks();
  if (values.size() != k) throw std::invalid_argument("value count does not match automaton tracks");
  std::uint64_t all = 0;
  for (auto v : values) all |= v;
  int top = 0;
  while (top < 63 && (all >> (top + 1)) != 0) ++top;
  StateId s = a.initial();
  for (int b = top; b >= 0; --b) {
    Letter x = 0;
    for (unsigned t = 0; t < k; ++t) x = (x << 1) | static_cast<Letter>((values[t] >> b) & 1u);
    s = a.next(s, x);
  }
  return a.accepting(s);
}

Dfa product(const Dfa& a, const Dfa& b, BoolOp op) {
  check_same_tracks(a, b);
  const std::size_t sigma = a.alphabet_size();
  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<std::pair<StateId, StateId>> pairs;
  auto intern = [&](StateId p, StateId q) {
    const std::uint64_t key = (std::uint64_t{p} << 32) | q;
    auto [it, fresh] = ids.try_emplace(key, static_cast<StateId>(pairs.size()));
    if (fresh) pairs.emplace_back(p, q);
    return it->second;
  };
  intern(a.initial(), b.initial());
  std::vector<StateId> delta;
  for (std::size_t head = 0; head < pairs.size(); ++head) {
    const auto [p, q] = pairs[head];
    for (Letter x = 0; x < sigma; ++x) delta.push_back(intern(a.next(p, x), b.next(q, x)));
  }
  std::vector<bool> acc(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) acc[i] = apply(op, a.accepting(pairs[i].first), b.accepting(pairs[i].second));
  return Dfa(a.tracks(), 0, std::move(acc), std::move(delta));
}

Dfa complement(const Dfa& a) {
  std::vector<bool> acc = a.accepting_states();
  acc.flip();
  return Dfa(a.tracks(), a.initial(), std::move(acc), a.transitions());
}

Nfa to_nfa(const Dfa& a) {
  Nfa n;
  n.tracks = a.tracks();
  n.initial = {a.initial()};
  n.accepting = a.accepting_states();
  n.successors.resize(a.transitions().size());
  for (std::size_t i = 0; i < a.transitions().size(); ++i) n.successors[i] = {a.transitions()[i]};
  return n;
}

Nfa reverse(const Dfa& a) {
  Nfa n;
  n.tracks = a.tracks();
  n.accepting.assign(a.size(), false);
  n.accepting[a.initial()] = true;
  for (StateId s = 0; s < a.size(); ++s) {
    if (a.accepting(s)) n.initial.push_back(s);
  }
  const std::size_t sigma = a.alphabet_size();
  n.successors.resize(a.size() * sigma);
  for (StateId s = 0; s < a.size(); ++s) {
    for (Letter x = 0; x < sigma; ++x) n.successors[a.next(s, x) * sigma + x].push_back(s);
  }
  return n;
}

Dfa determinize(const Nfa& n) {
  const std::size_t sigma = n.alphabet_size();
  std::map<std::vector<StateId>, StateId> ids;
  std::vector<std::vector<StateId>> subsets;
  auto intern = [&](std::vector<StateId> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    auto [it, fresh] = ids.try_emplace(set, static_cast<StateId>(subsets.size()));
    if (fresh) subsets.push_back(std::move(set));
    return it->second;
  };
  intern(n.initial);
  std::vector<StateId> delta;
  std::vector<StateId> scratch;
  for (std::size_t head = 0; head < subsets.size(); ++head) {
    for (Letter x = 0; x < sigma; ++x) {
      scratch.clear();
      for (StateId s : subsets[head]) {
        const auto& succ = n.successors[s * sigma + x];
        scratch.insert(scratch.end(), succ.begin(), succ.end());
      }
      delta.push_back(intern(scratch));
    }
  }
  std::vector<bool> acc(subsets.size(), false);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (StateId s : subsets[i]) {
      if (n.accepting[s]) {
        acc[i] = true;
        break;
      }
    }
  }
  return Dfa(n.tracks, 0, std::move(acc), std::move(delta));
}

namespace {

// Closes the initial set of `n` under the all-zero letter.
void saturate_initial(Nfa& n) {
  const std::size_t sigma = n.alphabet_size();
  std::vector<bool> seen(n.size(), false);
  std::vector<StateId> stack = n.initial;
  for (StateId s : stack) seen[s] = true;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (StateId t : n.successors[s * sigma]) {
      if (!seen[t]) {
        seen[t] = true;
        n.initial.push_back(t);
        stack.push_back(t);
      }
    }
  }
}

}  // namespace

Dfa zero_saturate(const Dfa& a) {
  Nfa n = to_nfa(a);
  saturate_initial(n);
  return determinize(n);
}

Dfa project_exists(const Dfa& a, unsigned track) {
  const unsigned k = a.tracks();
  if (k < 2) throw std::invalid_argument("projection needs at least two tracks");
  if (track >= k) throw std::invalid_argument("projection track out of range");
  Nfa n;
  n.tracks = k - 1;
  n.initial = {a.initial()};
  n.accepting = a.accepting_states();
  const std::size_t sigma = n.alphabet_size();
  n.successors.resize(a.size() * sigma);
  for (StateId s = 0; s < a.size(); ++s) {
    for (Letter x = 0; x < sigma; ++x) {
      // Reinsert the erased digit at `track`.
      Letter wide = 0;
      unsigned src = 0;
      for (unsigned t = 0; t < k; ++t) {
        if (t == track) continue;
        wide = with_digit(wide, t, k, letter_digit(x, src++, k - 1));
      }
      auto& succ = n.successors[s * sigma + x];
      succ.push_back(a.next(s, with_digit(wide, track, k, 0)));
      succ.push_back(a.next(s, with_digit(wide, track, k, 1)));
    }
  }
  saturate_initial(n);
  return minimize(determinize(n));
}

Dfa minimize(const Dfa& input) {
  const Dfa a = canonical_bfs(input);
  const std::size_t n = a.size();
  const std::size_t sigma = a.alphabet_size();
  std::vector<StateId> cls(n);
  for (StateId s = 0; s < n; ++s) cls[s] = a.accepting(s) ? 1 : 0;
  std::size_t classes = 0;
  {
    std::vector<bool> used(2, false);
    for (StateId c : cls) used[c] = true;
    classes = static_cast<std::size_t>(used[0]) + static_cast<std::size_t>(used[1]);
  }
  // Moore refinement: split by (class, successor classes) until stable.
  std::vector<StateId> sig(sigma + 1);
  while (true) {
    std::map<std::vector<StateId>, StateId> ids;
    std::vector<StateId> next_cls(n);
    for (StateId s = 0; s < n; ++s) {
      sig[0] = cls[s];
      for (Letter x = 0; x < sigma; ++x) sig[x + 1] = cls[a.next(s, x)];
      auto [it, fresh] = ids.try_emplace(sig, static_cast<StateId>(ids.size()));
      next_cls[s] = it->second;
    }
    cls.swap(next_cls);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  std::vector<bool> acc(classes, false);
  std::vector<StateId> delta(classes * sigma);
  for (StateId s = 0; s < n; ++s) {
    acc[cls[s]] = a.accepting(s);
    for (Letter x = 0; x < sigma; ++x) delta[cls[s] * sigma + x] = cls[a.next(s, x)];
  }
  return canonical_bfs(Dfa(a.tracks(), cls[a.initial()], std::move(acc), std::move(delta)));
}

bool is_empty(const Dfa& a) {
  const std::size_t sigma = a.alphabet_size();
  std::vector<bool> seen(a.size(), false);
  std::vector<StateId> stack{a.initial()};
  seen[a.initial()] = true;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    if (a.accepting(s)) return false;
    for (Letter x = 0; x < sigma; ++x) {
      const StateId t = a.next(s, x);
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  return true;
}

bool is_universal(const Dfa& a) { return is_empty(complement(a)); }

bool equivalent(const Dfa& a, const Dfa& b) { return is_empty(product(a, b, BoolOp::Xor)); }

std::vector<bool> dead_states(const Dfa& a) {
  const Nfa rev = reverse(a);
  const std::size_t sigma = a.alphabet_size();
  std::vector<bool> live(a.size(), false);
  std::vector<StateId> stack;
  for (StateId s = 0; s < a.size(); ++s) {
    if (a.accepting(s)) {
      live[s] = true;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (Letter x = 0; x < sigma; ++x) {
      for (StateId t : rev.successors[s * sigma + x]) {
        if (!live[t]) {
          live[t] = true;
          stack.push_back(t);
        }
      }
    }
  }
  live.flip();
  return live;
}

Dfa remap_tracks(const Dfa& a, unsigned tracks, std::span<const unsigned> position) {
  if (position.size() != a.tracks()) throw std::invalid_argument("track map size mismatch");
  if (tracks == 0 || tracks > kMaxTracks) throw std::invalid_argument("track count out of range");
  std::vector<bool> used(tracks, false);
  for (unsigned p : position) {
    if (p >= tracks || used[p]) throw std::invalid_argument("track map is not injective");
    used[p] = true;
  }
  const std::size_t sigma = std::size_t{1} << tracks;
  std::vector<Letter> old_letter(sigma);
  for (Letter x = 0; x < sigma; ++x) {
    Letter y = 0;
    for (unsigned t = 0; t < a.tracks(); ++t) y = with_digit(y, t, a.tracks(), letter_digit(x, position[t], tracks));
    old_letter[x] = y;
  }
  std::vector<StateId> delta(a.size() * sigma);
  for (StateId s = 0; s < a.size(); ++s) {
    for (Letter x = 0; x < sigma; ++x) delta[s * sigma + x] = a.next(s, old_letter[x]);
  }
  return Dfa(tracks, a.initial(), a.accepting_states(), std::move(delta));
}

Dfa empty_dfa(unsigned tracks) {
  return Dfa(tracks, 0, {false}, std::vector<StateId>(std::size_t{1} << tracks, 0));
}

Dfa universal_dfa(unsigned tracks) { return complement(empty_dfa(tracks)); }

Dfa builtin_add() {
  // Least significant digit first: state = carry, 2 = reject sink.
  std::vector<std::vector<StateId>> table(3, std::vector<StateId>(8, 2));
  for (StateId carry = 0; carry < 2; ++carry) {
    for (Letter x = 0; x < 8; ++x) {
      const unsigned sum = letter_digit(x, 0, 3) + letter_digit(x, 1, 3) + carry;
      if ((sum & 1u) == letter_digit(x, 2, 3)) table[carry][x] = sum >> 1;
    }
  }
  const Dfa lsd = from_table(3, table, {true, false, false});
  return minimize(zero_saturate(determinize(reverse(lsd))));
}

Dfa builtin_eq() {
  // 0: equal so far, 1: reject sink
  std::vector<std::vector<StateId>> table = {{0, 1, 1, 0}, {1, 1, 1, 1}};
  return minimize(from_table(2, table, {true, false}));
}

Dfa builtin_lt() {
  // 0: equal so far, 1: x < y decided, 2: x > y decided
  std::vector<std::vector<StateId>> table = {{0, 1, 2, 0}, {1, 1, 1, 1}, {2, 2, 2, 2}};
  return minimize(from_table(2, table, {false, true, false}));
}

Dfa builtin_const(const Natural& c) {
  if (c < 0) throw std::invalid_argument("negative constant");
  const std::string bits = c.get_str(2);
  const auto m = static_cast<StateId>(bits.size());
  // State i < m: first i digits matched (state 0 absorbs leading zeros);
  // state m: all matched; state m + 1: reject sink.
  const StateId sink = m + 1;
  std::vector<std::vector<StateId>> table(m + 2, std::vector<StateId>(2, sink));
  table[0][0] = 0;
  for (StateId i = 0; i < m; ++i) table[i][bits[i] - '0'] = i + 1;
  if (c == 0) table[0][0] = 0;
  std::vector<bool> acc(m + 2, false);
  acc[m] = true;
  if (c == 0) acc[0] = true;
  return minimize(from_table(1, table, acc));
}

std::string to_text(const Dfa& a, std::span<const std::string> track_names) {
  // Print with the initial state as state 0.
  auto id = [&](StateId s) -> StateId {
    if (s == a.initial()) return 0;
    if (s == 0) return a.initial();
    return s;
  };
  std::vector<StateId> order(a.size());
  for (StateId s = 0; s < a.size(); ++s) order[id(s)] = s;
  std::ostringstream out;
  if (!track_names.empty()) {
    out << "# tracks:";
    for (const auto& n : track_names) out << ' ' << n;
    out << '\n';
  }
  out << a.tracks() << '\n';
  for (StateId i = 0; i < a.size(); ++i) out << i << ' ' << (a.accepting(order[i]) ? 1 : 0) << '\n';
  for (StateId i = 0; i < a.size(); ++i) {
    for (Letter x = 0; x < a.alphabet_size(); ++x) {
      out << i << ' ' << letter_string(x, a.tracks()) << ' ' << id(a.next(order[i], x)) << '\n';
    }
  }
  return out.str();
}

Dfa dfa_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  unsigned tracks = 0;
  std::vector<bool> acc;
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
      const auto s = static_cast<StateId>(std::stoul(tok[0]));
      if (s != acc.size()) throw std::invalid_argument("dfa text: states must be listed in order");
      acc.push_back(tok[1] == "1");
    } else if (tok.size() == 3) {
      if (tok[1].size() != tracks) throw std::invalid_argument("dfa text: tuple width mismatch");
      Letter x = 0;
      for (unsigned t = 0; t < tracks; ++t) x = with_digit(x, t, tracks, tok[1][t] == '1');
      edges.emplace_back(static_cast<StateId>(std::stoul(tok[0])), x, static_cast<StateId>(std::stoul(tok[2])));
    } else {
      throw std::invalid_argument("dfa text: malformed line: " + line);
    }
  }
  if (tracks == 0 || tracks > kMaxTracks) throw std::invalid_argument("dfa text: missing or bad header");
  const std::size_t sigma = std::size_t{1} << tracks;
  constexpr StateId kUnset = ~StateId{0};
  std::vector<StateId> delta(acc.size() * sigma, kUnset);
  for (auto [s, x, t] : edges) {
    if (s >= acc.size()) throw std::invalid_argument("dfa text: unknown state");
    delta[s * sigma + x] = t;
  }
  for (StateId t : delta) {
    if (t == kUnset) throw std::invalid_argument("dfa text: incomplete transition table");
  }
  return Dfa(tracks, 0, std::move(acc), std::move(delta));
}

std::string to_dot(const Dfa& a, std::span<const std::string> track_names) {
  std::ostringstream out;
  out << "digraph dfa {\n  rankdir=LR;\n";
  if (!track_names.empty()) {
    out << "  label=\"tracks:";
    for (const auto& n : track_names) out << ' ' << n;
    out << "\";\n";
  }
  out << "  start [shape=point];\n  start -> " << a.initial() << ";\n";
  for (StateId s = 0; s < a.size(); ++s) {
    out << "  " << s << " [shape=" << (a.accepting(s) ? "doublecircle" : "circle") << "];\n";
  }
  for (StateId s = 0; s < a.size(); ++s) {
    std::map<StateId, std::string> labels;
    for (Letter x = 0; x < a.alphabet_size(); ++x) {
      auto& l = labels[a.next(s, x)];
      if (!l.empty()) l += ", ";
      l += letter_string(x, a.tracks());
    }
    for (const auto& [t, l] : labels) out << "  " << s << " -> " << t << " [label=\"" << l << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace dombi
