#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "dombi/automata.hpp"

namespace dombi {

/// Exact rational; GMP keeps every result in lowest terms with a positive
/// denominator.
using Rational = mpq_class;
using Vector = std::vector<Rational>;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);

/// Square matrix stored as sparse rows (column-sorted, no explicit zeros).
class Matrix {
public:
  using Entry = std::pair<std::uint32_t, Rational>;

  explicit Matrix(std::size_t n = 0) : rows_(n) {}

  std::size_t size() const { return rows_.size(); }
  const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }
  Rational at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Rational& value);
  void add(std::size_t i, std::size_t j, const Rational& value);
  /// Replaces row i; entries must be column-sorted and nonzero.
  void set_row(std::size_t i, std::vector<Entry> entries);

  std::size_t nonzeros() const;
  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::vector<std::vector<Entry>> rows_;
};

/// Row vector times matrix.
Vector operator*(const Vector& x, const Matrix& m);
Rational dot(const Vector& a, const Vector& b);

/// Linear representation: f(x) = v * gamma(x_1) * ... * gamma(x_n) * w.
struct LinRep {
  Vector v;
  std::array<Matrix, 2> gamma;
  Vector w;

  std::size_t rank() const { return v.size(); }
  /// Throws unless all dimensions agree.
  void validate() const;
};

/// Counts, for each value of the kept track, the accepted assignments of the
/// other tracks. `a` must be invariant under leading zeros. Dead states are
/// dropped, so the rank is the number of live states.
LinRep count_rep(const Dfa& a, unsigned kept_track);

Rational evaluate(const LinRep& rep, const Word& word);
Rational evaluate(const LinRep& rep, const Natural& n);
Rational evaluate(const LinRep& rep, std::uint64_t n);
/// evaluate(rep, n) for 0 <= n < count, sharing work between prefixes.
std::vector<Rational> evaluate_prefix(const LinRep& rep, std::uint64_t count);

/// Block-diagonal sum: evaluates to sum of coefficient * term.
LinRep combine(const std::vector<std::pair<long, LinRep>>& terms);

/// Restriction to the span of the reachable row vectors {v * gamma(x)}.
LinRep reduce_reachable(const LinRep& rep);
/// Swaps v and w and transposes every gamma; evaluates on reversed words.
LinRep transpose(const LinRep& rep);
/// Minimal representation of the same word function (rank may be 0).
LinRep minimize_rep(const LinRep& rep);

/// Text form: rank line, v line, rank lines per digit matrix, w line.
std::string to_text(const LinRep& rep);
LinRep linrep_from_text(const std::string& text);

}  // namespace dombi
