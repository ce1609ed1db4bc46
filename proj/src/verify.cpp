#include "dombi/verify.hpp"

#include <stdexcept>

#include "dombi/logic.hpp"

namespace dombi {

bool member_F(std::uint64_t n) {
  if (n == 0) return false;
  int length = 64;
  while (((n >> (length - 1)) & 1u) == 0) --length;
  return length % 2 == 0 && (n >> (length - 2)) == 3;
}

Dfa set_F_automaton() {
  // 0: leading zeros, 1: read "1", 2: read "10..." (reject), 3: even length
  // starting 11, 4: odd length starting 11.
  return Dfa(1, 0, {false, false, false, true, false}, {0, 1, 2, 3, 2, 2, 4, 4, 3, 3});
}

bool member_F_automaton(std::uint64_t n) {
  static const Dfa a = set_F_automaton();
  const std::uint64_t v[] = {n};
  return accepts_values(a, v);
}

Dfao characteristic_F_dfao() {
  return fixed_point_dfao(Morphism::parse("0->01 1->23 2->22 3->44 4->33", "0->0 1->0 2->0 3->1 4->0"));
}

bool member_F_sequence(std::uint64_t n) {
  static const Dfao ff = characteristic_F_dfao();
  return ff.value(n) == 1;
}

std::vector<bool> characteristic_prefix(std::uint64_t count) {
  std::vector<bool> out(count);
  for (std::uint64_t n = 0; n < count; ++n) out[n] = member_F(n);
  return out;
}

std::uint64_t count_F_below(std::uint64_t n) {
  // Members of even length L >= 2 fill [3 * 2^(L-2), 2^L).
  std::uint64_t total = 0;
  for (unsigned L = 2; L < 64; L += 2) {
    const std::uint64_t lo = std::uint64_t{3} << (L - 2);
    const std::uint64_t hi = std::uint64_t{1} << L;
    if (n <= lo) break;
    total += std::min(n, hi) - lo;
  }
  return total;
}

bool DensityReport::pass() const {
  if (!lower_monotone || !upper_monotone) return false;
  for (const auto& r : lower) {
    if (!r.pass) return false;
  }
  for (const auto& r : upper) {
    if (!r.pass) return false;
  }
  return true;
}

DensityReport density_report(unsigned depth) {
  if (depth == 0) throw std::invalid_argument("density depth must be positive");
  if (depth > 30) throw std::invalid_argument("density depth too large");
  DensityReport rep;
  for (unsigned k = 1; k <= depth; ++k) {
    const std::uint64_t pow4 = std::uint64_t{1} << (2 * k);
    for (int upper = 0; upper < 2; ++upper) {
      DensityRow row;
      row.k = k;
      row.n = upper ? pow4 : 3 * pow4;
      row.count = count_F_below(row.n);
      row.density = Rational(mpz_class(row.count), mpz_class(row.n));
      row.density.canonicalize();
      row.expected = Rational(mpz_class(pow4 - 1), mpz_class(upper ? 3 * pow4 : 9 * pow4));
      row.expected.canonicalize();
      row.pass = row.density == row.expected;
      (upper ? rep.upper : rep.lower).push_back(std::move(row));
    }
  }
  auto increasing_to = [](const std::vector<DensityRow>& rows, const Rational& limit) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].density >= limit) return false;
      if (i > 0 && rows[i].density <= rows[i - 1].density) return false;
    }
    return true;
  };
  rep.lower_monotone = increasing_to(rep.lower, Rational(1, 9));
  rep.upper_monotone = increasing_to(rep.upper, Rational(1, 3));
  return rep;
}

RepCountTable oracle_r3(std::uint64_t limit) {
  RepCountTable t;
  t.limit = limit;
  const std::size_t n = limit;
  std::vector<std::int64_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = member_F(i) ? 0 : 1;
  auto convolve = [n](const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y) {
    std::vector<std::int64_t> out(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; i + j < n; ++j) out[i + j] += x[i] * y[j];
    }
    return out;
  };
  t.r3 = convolve(convolve(a, a), a);
  t.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.d[i] = t.r3[i] - (i ? t.r3[i - 1] : 0);
  return t;
}

std::vector<std::int64_t> oracle_f(const RepCountTable& table) {
  std::vector<std::int64_t> f(table.limit);
  for (std::size_t n = 0; n < table.limit; ++n) f[n] = table.d[n] - 4 * table.d[n / 4];
  return f;
}

std::vector<std::int64_t> oracle_f(std::uint64_t limit) { return oracle_f(oracle_r3(limit)); }

}  // namespace dombi
