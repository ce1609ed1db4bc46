#include "dombi/linrep.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace dombi {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  q.canonicalize();
  return q;
}

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

Rational Matrix::at(std::size_t i, std::size_t j) const {
  const auto& r = rows_.at(i);
  const auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
  return it != r.end() && it->first == j ? it->second : Rational(0);
}

void Matrix::set(std::size_t i, std::size_t j, const Rational& value) {
  if (j >= rows_.size()) throw std::out_of_range("matrix column");
  auto& r = rows_.at(i);
  auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
  if (it != r.end() && it->first == j) {
    if (value == 0) {
      r.erase(it);
    } else {
      it->second = value;
    }
  } else if (value != 0) {
    r.insert(it, Entry(static_cast<std::uint32_t>(j), value));
  }
}

void Matrix::add(std::size_t i, std::size_t j, const Rational& value) { set(i, j, at(i, j) + value); }

void Matrix::set_row(std::size_t i, std::vector<Entry> entries) { rows_.at(i) = std::move(entries); }

std::size_t Matrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

Matrix Matrix::transposed() const {
  Matrix t(size());
  for (std::size_t i = 0; i < size(); ++i) {
    for (const auto& [j, x] : rows_[i]) t.rows_[j].emplace_back(static_cast<std::uint32_t>(i), x);
  }
  return t;
}

Vector operator*(const Vector& x, const Matrix& m) {
  if (x.size() != m.size()) throw std::invalid_argument("vector/matrix dimension mismatch");
  Vector out(m.size());
  Rational tmp;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (const auto& [j, a] : m.row(i)) {
      tmp = x[i] * a;
      out[j] += tmp;
    }
  }
  return out;
}

Rational dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

void LinRep::validate() const {
  const std::size_t r = v.size();
  if (w.size() != r || gamma[0].size() != r || gamma[1].size() != r) throw std::invalid_argument("linear representation dimensions disagree");
}

// ---------------------------------------------------------------------------
// Construction and evaluation
// ---------------------------------------------------------------------------

LinRep count_rep(const Dfa& a, unsigned kept_track) {
  const unsigned k = a.tracks();
  if (kept_track >= k) throw std::invalid_argument("kept track out of range");
  if (minimize(a).next(0, 0) != 0) throw std::invalid_argument("count_rep needs an automaton invariant under leading zeros");
  const auto dead = dead_states(a);
  std::vector<std::int64_t> id(a.size(), -1);
  std::size_t rank = 0;
  for (StateId s = 0; s < a.size(); ++s) {
    if (!dead[s]) id[s] = static_cast<std::int64_t>(rank++);
  }
  LinRep rep;
  rep.v.assign(rank, 0);
  rep.w.assign(rank, 0);
  rep.gamma = {Matrix(rank), Matrix(rank)};
  if (dead[a.initial()]) return rep;  // empty language: zero function
  rep.v[id[a.initial()]] = 1;
  for (StateId s = 0; s < a.size(); ++s) {
    if (dead[s]) continue;
    if (a.accepting(s)) rep.w[id[s]] = 1;
    std::array<std::vector<std::int64_t>, 2> counts{std::vector<std::int64_t>(rank, 0), std::vector<std::int64_t>(rank, 0)};
    for (Letter x = 0; x < a.alphabet_size(); ++x) {
      const StateId t = a.next(s, x);
      if (!dead[t]) ++counts[letter_digit(x, kept_track, k)][id[t]];
    }
    for (unsigned d = 0; d < 2; ++d) {
      std::vector<Matrix::Entry> row;
      for (std::size_t j = 0; j < rank; ++j) {
        if (counts[d][j] != 0) row.emplace_back(static_cast<std::uint32_t>(j), Rational(static_cast<long>(counts[d][j])));
      }
      rep.gamma[d].set_row(id[s], std::move(row));
    }
  }
  return rep;
}

Rational evaluate(const LinRep& rep, const Word& word) {
  if (word.tracks() != 1) throw std::invalid_argument("linear representations read 1-track words");
  Vector x = rep.v;
  for (Letter d : word.letters()) x = x * rep.gamma[d];
  return dot(x, rep.w);
}

Rational evaluate(const LinRep& rep, const Natural& n) { return evaluate(rep, encode_canonical(n)); }
Rational evaluate(const LinRep& rep, std::uint64_t n) { return evaluate(rep, encode_canonical(n)); }

namespace {

void evaluate_subtree(const LinRep& rep, std::uint64_t n, const Vector& prefix, std::uint64_t count, std::vector<Rational>& out) {
  out[n] = dot(prefix, rep.w);
  for (unsigned d = 0; d < 2; ++d) {
    const std::uint64_t child = 2 * n + d;
    if (child < count) evaluate_subtree(rep, child, prefix * rep.gamma[d], count, out);
  }
}

}  // namespace

std::vector<Rational> evaluate_prefix(const LinRep& rep, std::uint64_t count) {
  std::vector<Rational> out(count);
  if (count == 0) return out;
  out[0] = evaluate(rep, std::uint64_t{0});
  if (count > 1) evaluate_subtree(rep, 1, rep.v * rep.gamma[1], count, out);
  return out;
}

LinRep combine(const std::vector<std::pair<long, LinRep>>& terms) {
  if (terms.empty()) throw std::invalid_argument("combine needs at least one term");
  std::size_t rank = 0;
  for (const auto& [c, rep] : terms) {
    rep.validate();
    rank += rep.rank();
  }
  LinRep out;
  out.gamma = {Matrix(rank), Matrix(rank)};
  std::size_t offset = 0;
  for (const auto& [c, rep] : terms) {
    for (const auto& x : rep.v) out.v.push_back(x * c);
    out.w.insert(out.w.end(), rep.w.begin(), rep.w.end());
    for (unsigned d = 0; d < 2; ++d) {
      for (std::size_t i = 0; i < rep.rank(); ++i) {
        std::vector<Matrix::Entry> row;
        for (const auto& [j, x] : rep.gamma[d].row(i)) row.emplace_back(static_cast<std::uint32_t>(j + offset), x);
        out.gamma[d].set_row(i + offset, std::move(row));
      }
    }
    offset += rep.rank();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimization
// ---------------------------------------------------------------------------

namespace {

using IntVector = std::vector<mpz_class>;

void make_primitive(IntVector& u) {
  mpz_class g = 0;
  for (const auto& x : u) {
    if (sgn(x) != 0) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      if (g == 1) return;
    }
  }
  if (g > 1) {
    for (auto& x : u) {
      if (sgn(x) != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
  }
}

IntVector integer_multiple(const Vector& x) {
  mpz_class l = 1;
  for (const auto& q : x) {
    if (sgn(q) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  }
  IntVector u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) != 0) u[i] = x[i].get_num() * (l / x[i].get_den());
  }
  make_primitive(u);
  return u;
}

// Row echelon basis kept as primitive integer vectors; elimination is
// fraction-free (cross-multiplication followed by content removal).
class Echelon {
public:
  explicit Echelon(std::size_t dim) : dim_(dim) {}

  // Reduces u against the basis; appends it and returns true when independent.
  bool insert(IntVector u) {
    mpz_class a, c, g;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t p = pivots_[i];
      if (sgn(u[p]) == 0) continue;
      const IntVector& b = rows_[i];
      mpz_gcd(g.get_mpz_t(), b[p].get_mpz_t(), u[p].get_mpz_t());
      a = b[p] / g;
      c = u[p] / g;
      if (a != 1) {
        for (auto& x : u) {
          if (sgn(x) != 0) x *= a;
        }
      }
      for (std::size_t j : support_[i]) u[j] -= c * b[j];
      make_primitive(u);
    }
    const auto it = std::find_if(u.begin(), u.end(), [](const mpz_class& x) { return sgn(x) != 0; });
    if (it == u.end()) return false;
    pivots_.push_back(static_cast<std::size_t>(it - u.begin()));
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (sgn(u[j]) != 0) support.push_back(j);
    }
    support_.push_back(std::move(support));
    rows_.push_back(std::move(u));
    return true;
  }

  std::size_t size() const { return rows_.size(); }

  Vector row(std::size_t i) const {
    Vector out(dim_);
    for (std::size_t j : support_[i]) out[j] = rows_[i][j];
    return out;
  }

  // Coordinates of x (which must lie in the span) in the basis.
  Vector coordinates(Vector x) const {
    Vector c(rows_.size());
    Rational t;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::size_t p = pivots_[i];
      if (sgn(x[p]) == 0) continue;
      c[i] = x[p] / Rational(rows_[i][p]);
      for (std::size_t j : support_[i]) {
        t = c[i] * rows_[i][j];
        x[j] -= t;
      }
    }
    for (const auto& r : x) {
      if (sgn(r) != 0) throw std::logic_error("vector outside the reachable span");
    }
    return c;
  }

private:
  std::size_t dim_;
  std::vector<IntVector> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<std::size_t>> support_;
};

}  // namespace

LinRep reduce_reachable(const LinRep& rep) {
  rep.validate();
  const std::size_t r = rep.rank();
  Echelon basis(r);
  if (r > 0) basis.insert(integer_multiple(rep.v));
  // The span is closed once every basis vector has been pushed through both digits.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Vector b = basis.row(i);
    for (unsigned d = 0; d < 2; ++d) basis.insert(integer_multiple(b * rep.gamma[d]));
  }
  const std::size_t m = basis.size();
  LinRep out;
  out.gamma = {Matrix(m), Matrix(m)};
  out.v = m ? basis.coordinates(rep.v) : Vector{};
  out.w.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vector b = basis.row(i);
    out.w[i] = dot(b, rep.w);
    for (unsigned d = 0; d < 2; ++d) {
      const Vector c = basis.coordinates(b * rep.gamma[d]);
      std::vector<Matrix::Entry> row;
      for (std::size_t j = 0; j < m; ++j) {
        if (sgn(c[j]) != 0) row.emplace_back(static_cast<std::uint32_t>(j), c[j]);
      }
      out.gamma[d].set_row(i, std::move(row));
    }
  }
  return out;
}

LinRep transpose(const LinRep& rep) {
  LinRep out;
  out.v = rep.w;
  out.w = rep.v;
  out.gamma = {rep.gamma[0].transposed(), rep.gamma[1].transposed()};
  return out;
}

LinRep minimize_rep(const LinRep& rep) { return transpose(reduce_reachable(transpose(reduce_reachable(rep)))); }

// ---------------------------------------------------------------------------
// Text form
// ---------------------------------------------------------------------------

namespace {

void write_row(std::ostringstream& out, const Vector& x) {
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? " " : "") << x[i].get_str();
  out << '\n';
}

}  // namespace

std::string to_text(const LinRep& rep) {
  rep.validate();
  std::ostringstream out;
  out << rep.rank() << '\n';
  write_row(out, rep.v);
  for (unsigned d = 0; d < 2; ++d) {
    for (std::size_t i = 0; i < rep.rank(); ++i) {
      Vector row(rep.rank());
      for (const auto& [j, x] : rep.gamma[d].row(i)) row[j] = x;
      write_row(out, row);
    }
  }
  write_row(out, rep.w);
  return out.str();
}

LinRep linrep_from_text(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tok;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream ls(line);
    for (std::string t; ls >> t;) tok.push_back(t);
  }
  if (tok.empty()) throw std::invalid_argument("linrep text: missing rank");
  const std::size_t r = std::stoul(tok[0]);
  if (tok.size() != 1 + 2 * r + 2 * r * r) throw std::invalid_argument("linrep text: wrong number of entries");
  std::size_t at = 1;
  LinRep rep;
  for (std::size_t i = 0; i < r; ++i) rep.v.push_back(parse_rational(tok[at++]));
  rep.gamma = {Matrix(r), Matrix(r)};
  for (unsigned d = 0; d < 2; ++d) {
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<Matrix::Entry> row;
      for (std::size_t j = 0; j < r; ++j) {
        Rational x = parse_rational(tok[at++]);
        if (sgn(x) != 0) row.emplace_back(static_cast<std::uint32_t>(j), std::move(x));
      }
      rep.gamma[d].set_row(i, std::move(row));
    }
  }
  for (std::size_t i = 0; i < r; ++i) rep.w.push_back(parse_rational(tok[at++]));
  return rep;
}

}  // namespace dombi
