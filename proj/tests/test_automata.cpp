#include "doctest.h"

#include <random>
#include <set>

#include "dombi/automata.hpp"
#include "dombi/verify.hpp"
#include "helpers.hpp"

using namespace dombi;
using testing_support::all_words;
using testing_support::random_dfa;

namespace {

bool accepts_bits(const Dfa& a, const char* bits) { return accepts(a, Word::from_bits(bits)); }

Dfa word_dfa(const char* bits) {
  // Accepts exactly one word.
  const std::string s(bits);
  const StateId sink = static_cast<StateId>(s.size() + 1);
  std::vector<bool> acc(s.size() + 2, false);
  acc[s.size()] = true;
  std::vector<StateId> delta((s.size() + 2) * 2, sink);
  for (std::size_t i = 0; i < s.size(); ++i) delta[i * 2 + (s[i] - '0')] = static_cast<StateId>(i + 1);
  return Dfa(1, 0, acc, delta);
}

void check_complete(const Dfa& a) {
  CHECK(a.transitions().size() == a.size() * a.alphabet_size());
  for (StateId t : a.transitions()) CHECK(t < a.size());
}

}  // namespace

TEST_CASE("accepts on the F automaton") {
  const Dfa f = set_F_automaton();
  CHECK(accepts_bits(f, "11"));
  CHECK_FALSE(accepts_bits(f, "100"));
  CHECK(accepts_bits(f, "1100"));
  CHECK_THROWS(accepts(f, encode_tuple(std::vector<std::uint64_t>{1, 2})));
}

TEST_CASE("product") {
  std::mt19937 rng(1);
  for (int t = 0; t < 30; ++t) {
    const Dfa a = random_dfa(rng, 1 + t % 2, 2 + t % 5);
    CHECK(equivalent(product(a, a, BoolOp::And), a));
    CHECK(is_empty(product(a, complement(a), BoolOp::And)));
    CHECK(is_universal(product(a, complement(a), BoolOp::Or)));
    check_complete(product(a, a, BoolOp::Xor));
  }
  CHECK_THROWS(product(builtin_eq(), builtin_const(1), BoolOp::And));
}

TEST_CASE("complement") {
  std::mt19937 rng(2);
  for (int t = 0; t < 20; ++t) {
    const Dfa a = random_dfa(rng, 2, 4);
    CHECK(equivalent(complement(complement(a)), a));
  }
  CHECK_FALSE(accepts_bits(complement(set_F_automaton()), "11"));
  CHECK(equivalent(complement(empty_dfa(2)), universal_dfa(2)));
}

TEST_CASE("project_exists") {
  CHECK(is_universal(project_exists(builtin_eq(), 1)));
  CHECK(is_universal(project_exists(builtin_add(), 2)));

  // x + y = 3, project y away.
  const std::vector<unsigned> to_z{2};
  const Dfa sum3 = minimize(product(builtin_add(), remap_tracks(builtin_const(3), 3, to_z), BoolOp::And));
  const Dfa xs = project_exists(project_exists(sum3, 2), 1);
  for (std::uint64_t x = 0; x <= 8; ++x) {
    bool witness = false;
    for (std::uint64_t y = 0; y <= 8; ++y) witness = witness || x + y == 3;
    const std::uint64_t v[] = {x};
    CHECK(accepts_values(xs, v) == witness);
  }
  CHECK_THROWS(project_exists(builtin_const(3), 0));
  CHECK_THROWS(project_exists(builtin_eq(), 2));
}

TEST_CASE("project_exists agrees with brute force on small automata") {
  std::mt19937 rng(3);
  for (int t = 0; t < 200; ++t) {
    const Dfa a = zero_saturate(random_dfa(rng, 2, 1 + t % 6));
    const Dfa p = project_exists(a, 1);
    for (std::uint64_t x = 0; x < 64; ++x) {
      bool witness = false;
      // Cutting loops out of the zero-padded prefix of x keeps a witness, so
      // one exists with at most |enc x| + 6 digits.
      for (std::uint64_t y = 0; y < 4096 && !witness; ++y) {
        const std::uint64_t v[] = {x, y};
        witness = accepts_values(a, v);
      }
      const std::uint64_t v[] = {x};
      if (accepts_values(p, v) != witness) FAIL("projection mismatch at x=" << x << " trial " << t);
    }
  }
}

TEST_CASE("zero_saturate") {
  const Dfa f = set_F_automaton();
  CHECK(equivalent(zero_saturate(f), f));
  const Dfa s = zero_saturate(word_dfa("01"));
  CHECK(accepts_bits(s, "1"));
  CHECK(accepts_bits(s, "01"));
  CHECK_FALSE(accepts_bits(s, "10"));
  // Saturation only removes leading zeros; "001" was never accepted.
  CHECK_FALSE(accepts_bits(s, "001"));

  std::mt19937 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Dfa raw = random_dfa(rng, 1 + t % 3, 2 + t % 5);
    const Dfa a = zero_saturate(raw);
    CHECK(equivalent(zero_saturate(a), a));
    for (const Word& w : all_words(a.tracks(), 4)) {
      bool expect = false;
      for (std::size_t j = 0; j <= raw.size(); ++j) expect = expect || accepts(raw, w.padded(j));
      CHECK(accepts(a, w) == expect);
      // Closed under removing leading zeros.
      if (accepts(a, w.padded(1))) CHECK(accepts(a, w));
    }
  }
}

TEST_CASE("minimize") {
  const Dfa f = set_F_automaton();
  CHECK(minimize(f).size() == 5);
  CHECK(minimize(f) == f);
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Dfa a = random_dfa(rng, 1 + t % 3, 1 + t % 9);
    const Dfa m = minimize(a);
    CHECK(equivalent(a, m));
    CHECK(minimize(m) == m);
    CHECK(minimize(product(a, a, BoolOp::And)) == m);
    check_complete(m);
    // Brute-force minimality: states pairwise distinguishable on short words.
    std::set<std::vector<bool>> signatures;
    const unsigned bits = m.tracks() * static_cast<unsigned>(m.size());
    if (bits > 12) continue;
    const auto words = all_words(m.tracks(), static_cast<unsigned>(m.size()));
    for (StateId s = 0; s < m.size(); ++s) {
      std::vector<bool> sig;
      for (const Word& w : words) {
        StateId q = s;
        for (Letter l : w.letters()) q = m.next(q, l);
        sig.push_back(m.accepting(q));
      }
      signatures.insert(sig);
    }
    CHECK(signatures.size() == m.size());
  }
}

TEST_CASE("equivalent") {
  const Dfa f = set_F_automaton();
  CHECK(equivalent(f, f));
  CHECK_FALSE(equivalent(f, complement(f)));
  CHECK_THROWS(equivalent(builtin_eq(), builtin_add()));
}

TEST_CASE("De Morgan") {
  std::mt19937 rng(6);
  for (int t = 0; t < 50; ++t) {
    const Dfa a = random_dfa(rng, 2, 2 + t % 4), b = random_dfa(rng, 2, 2 + t % 3);
    CHECK(equivalent(complement(product(a, b, BoolOp::And)), product(complement(a), complement(b), BoolOp::Or)));
  }
}

TEST_CASE("builtins follow arithmetic") {
  const Dfa add = builtin_add(), eq = builtin_eq(), lt = builtin_lt();
  const std::uint64_t one_one_two[] = {1, 1, 2};
  CHECK(accepts_values(add, one_one_two));
  for (std::uint64_t x = 0; x <= 64; ++x) {
    for (std::uint64_t y = 0; y <= 64; ++y) {
      const std::uint64_t xy[] = {x, y};
      CHECK(accepts_values(eq, xy) == (x == y));
      CHECK(accepts_values(lt, xy) == (x < y));
      for (std::uint64_t z = 0; z <= 130; ++z) {
        const std::uint64_t xyz[] = {x, y, z};
        if (accepts_values(add, xyz) != (x + y == z)) FAIL("add mismatch at " << x << "," << y << "," << z);
      }
    }
  }
  const Dfa c3 = builtin_const(3);
  for (const Word& w : all_words(1, 8)) {
    const std::string s = w.to_string();
    const bool zeros_then_11 = s.size() >= 2 && s.substr(s.size() - 2) == "11" && s.find('1') == s.size() - 2;
    CHECK(accepts(c3, w) == zeros_then_11);
  }
  for (const Dfa* a : {&add, &eq, &lt, &c3}) {
    CHECK(minimize(*a) == *a);
    CHECK(equivalent(zero_saturate(*a), *a));
  }
}

TEST_CASE("remap_tracks") {
  // Old track 0 of x<y becomes track 2 and old track 1 becomes track 0.
  const std::vector<unsigned> position{2, 0};
  const Dfa r = remap_tracks(builtin_lt(), 3, position);
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = 0; b < 8; ++b) {
      for (std::uint64_t c = 0; c < 8; ++c) {
        const std::uint64_t v[] = {a, b, c};
        CHECK(accepts_values(r, v) == (c < a));
      }
    }
  }
}

TEST_CASE("text and dot serialization") {
  const Dfa add = builtin_add();
  const std::vector<std::string> names{"x", "y", "z"};
  const std::string text = to_text(add, names);
  CHECK(text.rfind("# tracks: x y z\n3\n", 0) == 0);
  CHECK(dfa_from_text(text) == add);
  CHECK(to_text(dfa_from_text(text), names) == text);
  CHECK(dfa_from_text(to_text(set_F_automaton())) == set_F_automaton());
  CHECK_THROWS(dfa_from_text("1\n0 1\n0 2 0\n"));
  CHECK_THROWS(dfa_from_text("garbage"));
  const std::string dot = to_dot(set_F_automaton());
  CHECK(dot.find("3 [shape=doublecircle]") != std::string::npos);
  CHECK(dot == to_dot(set_F_automaton()));
}

TEST_CASE("dead_states") {
  const auto dead = dead_states(set_F_automaton());
  CHECK(dead == std::vector<bool>{false, false, true, false, false});
}
