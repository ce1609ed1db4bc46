#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dombi/automata.hpp"
#include "dombi/dfao.hpp"
#include "dombi/linrep.hpp"

namespace dombi {

// ---------------------------------------------------------------------------
// The set F: naturals whose binary expansion has even length and starts 11.
// Three independent membership tests.
// ---------------------------------------------------------------------------

bool member_F(std::uint64_t n);
/// Hand-built five-state automaton: 0 initial, 3 the only accepting state.
Dfa set_F_automaton();
bool member_F_automaton(std::uint64_t n);
/// Coded fixed point of 0->01 1->23 2->22 3->44 4->33, coding 3->1 else 0.
Dfao characteristic_F_dfao();
bool member_F_sequence(std::uint64_t n);

std::vector<bool> characteristic_prefix(std::uint64_t count);
/// |F ∩ [0, n)| by counting whole binary-length blocks.
std::uint64_t count_F_below(std::uint64_t n);

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

struct DensityRow {
  unsigned k = 0;
  std::uint64_t n = 0;        // 3*4^k for the lower sequence, 4^k for the upper
  std::uint64_t count = 0;    // |F ∩ [0, n)|
  Rational density;           // count / n
  Rational expected;          // (4^k - 1) / (9 * 4^k) or (4^k - 1) / (3 * 4^k)
  bool pass = false;
};

struct DensityReport {
  std::vector<DensityRow> lower;  // -> 1/9
  std::vector<DensityRow> upper;  // -> 1/3
  bool lower_monotone = false;
  bool upper_monotone = false;

  bool pass() const;
};

DensityReport density_report(unsigned depth);

// ---------------------------------------------------------------------------
// Brute-force representation counts for A = N \ F
// ---------------------------------------------------------------------------

struct RepCountTable {
  std::uint64_t limit = 0;
  std::vector<std::int64_t> r3;  // r(3, A, n)
  std::vector<std::int64_t> d;   // r3(n) - r3(n - 1), with r3(-1) = 0

  std::int64_t r3_at(std::int64_t n) const { return n < 0 ? 0 : r3.at(static_cast<std::size_t>(n)); }
};

/// Two self-convolutions of the characteristic array of A; no automata.
RepCountTable oracle_r3(std::uint64_t limit);
/// f(n) = d(n) - 4 d(floor(n / 4)) for 0 <= n < table.limit.
std::vector<std::int64_t> oracle_f(const RepCountTable& table);
std::vector<std::int64_t> oracle_f(std::uint64_t limit);

}  // namespace dombi
