#ifndef JETS_LINALG_HPP
#define JETS_LINALG_HPP

// Fraction-free row echelon forms.
//
// The same routine serves two coefficient domains: Q itself, and the
// polynomial ring Q[x, jets], whose fraction field is the "generic point"
// over which all ranks and row spaces are computed. Bareiss elimination keeps
// every intermediate entry a minor of the input, so the division by the
// previous pivot is always exact in the ring.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <jets/diffpoly.hpp>
#include <jets/error.hpp>

namespace jets {

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(const DiffPolynomial& p) { return p.is_zero(); }

inline Rational exact_div(const Rational& a, const Rational& b) { return a / b; }
inline DiffPolynomial exact_div(const DiffPolynomial& a, const DiffPolynomial& b) {
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("fraction-free elimination: inexact division");
  return *std::move(q);
}

template <class T>
using Row = std::vector<T>;

template <class T>
struct Echelon {
  std::vector<Row<T>> rows;          // nonzero rows, one per pivot
  std::vector<std::size_t> pivots;   // pivot column of each row
  std::size_t columns = 0;

  std::size_t rank() const noexcept { return rows.size(); }
};

namespace detail {

template <class T>
std::optional<std::size_t> leading_column(const Row<T>& row) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!is_zero(row[j])) return j;
  }
  return std::nullopt;
}

inline void make_primitive(Row<Rational>& row) {
  auto lead = leading_column(row);
  if (!lead) return;
  Rational s = Rational(1) / row[*lead];
  for (auto& e : row) e *= s;
}

/// Scale a polynomial row by a nonzero element of Q(x) to a canonical
/// representative: divide by the leading entry when that is exact, strip
/// common monomial factors, and make the leading coefficient of the leading
/// entry 1.
inline void make_primitive(Row<DiffPolynomial>& row) {
  auto lead = leading_column(row);
  if (!lead) return;
  const DiffPolynomial pivot = row[*lead];
  if (!pivot.is_constant()) {
    Row<DiffPolynomial> divided;
    divided.reserve(row.size());
    bool ok = true;
    for (const auto& e : row) {
      if (e.is_zero()) {
        divided.emplace_back();
        continue;
      }
      auto q = e.divide_exact(pivot);
      if (!q) {
        ok = false;
        break;
      }
      divided.push_back(*std::move(q));
    }
    if (ok) row = std::move(divided);
  }
  // Common monomial factor.
  std::optional<Monomial> common;
  for (const auto& e : row) {
    for (const auto& [m, c] : e.terms()) {
      if (!common) {
        common = m;
        continue;
      }
      Monomial g;
      for (const auto& [gen, exp] : common->factors()) {
        unsigned k = std::min(exp, m.degree_in(gen));
        if (k > 0) g = g * Monomial(gen, k);
      }
      common = g;
    }
  }
  if (common && !common->is_one()) {
    DiffPolynomial d(*common, Rational(1));
    for (auto& e : row) {
      if (!e.is_zero()) e = exact_div(e, d);
    }
  }
  const Rational scale = Rational(1) / row[*lead].leading_term().second;
  for (auto& e : row) e *= scale;
}

}  // namespace detail

/// Row echelon form by fraction-free elimination. Columns are taken in the
/// given order (column 0 first); the pivot for each column is the first
/// remaining row with a nonzero entry there, and no column pivoting is done.
/// With `reduce`, rows above each pivot are eliminated in the same Bareiss
/// step (fraction-free Gauss-Jordan), so every entry stays a minor of the
/// input and no division is inexact. Returned rows are scaled to canonical
/// representatives.
template <class T>
Echelon<T> echelon_form(std::vector<Row<T>> m, std::size_t columns, bool reduce = false) {
  for (const auto& row : m) {
    if (row.size() != columns) throw Error(ErrorKind::InvalidArgument, "ragged matrix");
  }
  Echelon<T> out;
  out.columns = columns;
  T prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < columns && r < m.size(); ++c) {
    std::size_t i = r;
    while (i < m.size() && is_zero(m[i][c])) ++i;
    if (i == m.size()) continue;
    std::rotate(m.begin() + r, m.begin() + i, m.begin() + i + 1);
    const T piv = m[r][c];
    for (std::size_t k = reduce ? 0 : r + 1; k < m.size(); ++k) {
      if (k == r) continue;
      const T factor = m[k][c];
      // Rows above the pivot may hold entries left of c.
      for (std::size_t j = k < r ? 0 : c + 1; j < columns; ++j) {
        if (j == c) continue;
        if (is_zero(factor)) {
          if (is_zero(m[k][j])) continue;
          m[k][j] = exact_div(piv * m[k][j], prev);
        } else if (is_zero(m[k][j])) {
          if (is_zero(m[r][j])) continue;
          m[k][j] = exact_div(-(factor * m[r][j]), prev);
        } else {
          m[k][j] = exact_div(piv * m[k][j] - factor * m[r][j], prev);
        }
      }
      m[k][c] = T();
    }
    prev = piv;
    out.pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  for (auto& row : m) detail::make_primitive(row);
  out.rows = std::move(m);
  return out;
}

template <class T>
std::size_t rank_of_matrix(std::vector<Row<T>> m, std::size_t columns) {
  return echelon_form(std::move(m), columns).rank();
}

/// Generic rank over Q(x, jets). A specialization never has larger rank, so
/// when one point already reaches min(rows, columns) that value is exact and
/// the symbolic elimination is skipped.
inline std::size_t rank_of_matrix(std::vector<Row<DiffPolynomial>> m, std::size_t columns) {
  const std::size_t bound = std::min(m.size(), columns);
  if (bound == 0) return 0;
  std::map<Generator, Rational> point;
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  std::vector<Row<Rational>> numeric;
  numeric.reserve(m.size());
  for (const auto& row : m) {
    Row<Rational> r;
    r.reserve(row.size());
    for (const auto& e : row) {
      for (const auto& g : e.generators()) {
        if (point.count(g)) continue;
        // Fixed pseudo-random integers in [2, 1001]; any choice is sound.
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        point.emplace(g, Rational(static_cast<long>(2 + (state >> 33) % 1000)));
      }
      r.push_back(e.eval(point));
    }
    numeric.push_back(std::move(r));
  }
  if (echelon_form(std::move(numeric), columns).rank() == bound) return bound;
  return echelon_form(std::move(m), columns).rank();
}

/// Remainder of `row` after eliminating every pivot column of `e` from it.
/// Zero iff the row lies in the row space of `e`.
template <class T>
Row<T> reduce_row(Row<T> row, const Echelon<T>& e) {
  for (std::size_t t = 0; t < e.rows.size(); ++t) {
    const std::size_t c = e.pivots[t];
    if (is_zero(row[c])) continue;
    const T a = e.rows[t][c];
    const T b = row[c];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (is_zero(e.rows[t][j]) && is_zero(row[j])) continue;
      row[j] = a * row[j] - b * e.rows[t][j];
    }
    detail::make_primitive(row);
  }
  return row;
}

template <class T>
bool row_is_zero(const Row<T>& row) {
  return std::all_of(row.begin(), row.end(), [](const T& e) { return is_zero(e); });
}

/// Incrementally maintained reduced echelon form over Q for an affine system
/// sum_j a_j y_j + b = 0. The last column holds b and is never a pivot.
class AffineSolver {
 public:
  enum class Status { independent, dependent, inconsistent };

  explicit AffineSolver(std::size_t unknowns) : unknowns_(unknowns) {}

  std::size_t unknowns() const noexcept { return unknowns_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// `row` has unknowns()+1 entries. Inconsistent rows are not stored.
  Status add(Row<Rational> row) {
    if (row.size() != unknowns_ + 1) throw Error(ErrorKind::InvalidArgument, "affine row size mismatch");
    for (std::size_t t = 0; t < rows_.size(); ++t) {
      const Rational f = row[pivots_[t]];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j <= unknowns_; ++j) {
        if (sgn(rows_[t][j]) != 0) row[j] -= f * rows_[t][j];
      }
    }
    std::optional<std::size_t> lead;
    for (std::size_t j = 0; j < unknowns_; ++j) {
      if (sgn(row[j]) != 0) {
        lead = j;
        break;
      }
    }
    if (!lead) return sgn(row[unknowns_]) == 0 ? Status::dependent : Status::inconsistent;
    const Rational inv = Rational(1) / row[*lead];
    for (auto& e : row) e *= inv;
    for (auto& other : rows_) {
      const Rational f = other[*lead];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j <= unknowns_; ++j) {
        if (sgn(row[j]) != 0) other[j] -= f * row[j];
      }
    }
    // Keep rows sorted by pivot column.
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), *lead) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, *lead);
    rows_.insert(rows_.begin() + pos, std::move(row));
    return Status::independent;
  }

  /// Solution with every non-pivot unknown set to zero.
  std::vector<Rational> particular_solution() const {
    std::vector<Rational> x(unknowns_, Rational(0));
    for (std::size_t t = 0; t < rows_.size(); ++t) x[pivots_[t]] = -rows_[t][unknowns_];
    return x;
  }

 private:
  std::size_t unknowns_;
  std::vector<Row<Rational>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace jets

#endif  // JETS_LINALG_HPP
