#ifndef JETS_SYSTEM_HPP
#define JETS_SYSTEM_HPP

// Systems of differential equations as finite equation sets of declared
// order: prolongation, projection, Jacobi matrices, generic ranks and
// integrability conditions.
//
// Every rank and row space here is taken over the field of rational
// functions in the coordinates (and, for Jacobians of nonlinear systems, in
// the jet variables too). Rank drops at special points are not tracked.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <jets/diffpoly.hpp>
#include <jets/error.hpp>
#include <jets/jetcore.hpp>
#include <jets/linalg.hpp>

namespace jets {

class DiffSystem;

/// Records that a system is the k-th prolongation of `base`.
struct Provenance {
  std::shared_ptr<const DiffSystem> base;
  unsigned prolonged_by = 0;
};

class DiffSystem {
 public:
  DiffSystem(BundleSignature sig, std::vector<DiffPolynomial> equations, unsigned order,
             std::optional<Provenance> provenance = std::nullopt)
      : sig_(std::move(sig)),
        equations_(std::move(equations)),
        order_(order),
        provenance_(std::move(provenance)) {}

  const BundleSignature& signature() const noexcept { return sig_; }
  const std::vector<DiffPolynomial>& equations() const noexcept { return equations_; }
  unsigned order() const noexcept { return order_; }
  std::size_t size() const noexcept { return equations_.size(); }
  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }

  bool is_linear() const {
    return std::all_of(equations_.begin(), equations_.end(),
                       [](const DiffPolynomial& f) { return f.is_linear(); });
  }

  /// Jet variables occurring in some equation, greatest first.
  std::vector<JetVariable> jet_variables() const {
    std::set<JetVariable, std::greater<>> all;
    for (const auto& f : equations_) {
      auto vs = f.jet_variables();
      all.insert(vs.begin(), vs.end());
    }
    return {all.begin(), all.end()};
  }

  /// Same equations in the same order (provenance is not compared).
  friend bool operator==(const DiffSystem& a, const DiffSystem& b) {
    return a.sig_ == b.sig_ && a.order_ == b.order_ && a.equations_ == b.equations_;
  }

 private:
  BundleSignature sig_;
  std::vector<DiffPolynomial> equations_;
  unsigned order_;
  std::optional<Provenance> provenance_;
};

// ---------------------------------------------------------------------------
// Affine rows

/// A linear equation sum coeff(v) v + constant, coefficients in Q[x].
struct AffineRow {
  std::map<JetVariable, DiffPolynomial, std::greater<>> coefficients;
  DiffPolynomial constant;

  DiffPolynomial to_polynomial() const {
    DiffPolynomial f = constant;
    for (const auto& [v, c] : coefficients) f += c * DiffPolynomial::jet(v);
    return f;
  }
};

namespace detail {

inline void require_linear(const DiffPolynomial& f) {
  if (!f.is_linear()) throw Error(ErrorKind::NonLinearSystem, "equation is not linear in the jet variables");
}

inline void require_linear(const DiffSystem& s) {
  if (!s.is_linear()) throw Error(ErrorKind::NonLinearSystem, "system is not linear in the jet variables");
}

/// Row of an affine polynomial over `cols` followed by the constant column.
inline Row<DiffPolynomial> affine_row(const DiffPolynomial& f, const std::vector<JetVariable>& cols) {
  Row<DiffPolynomial> row;
  row.reserve(cols.size() + 1);
  for (const auto& v : cols) row.push_back(f.coefficient_of(v));
  row.push_back(f.jet_free_part());
  return row;
}

inline DiffPolynomial row_polynomial(const Row<DiffPolynomial>& row, const std::vector<JetVariable>& cols) {
  DiffPolynomial f = row.back();
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!row[j].is_zero()) f += row[j] * DiffPolynomial::jet(cols[j]);
  }
  return f;
}

inline std::vector<JetVariable> union_columns(const std::vector<const DiffPolynomial*>& eqs) {
  std::set<JetVariable, std::greater<>> all;
  for (const auto* f : eqs) {
    auto vs = f->jet_variables();
    all.insert(vs.begin(), vs.end());
  }
  return {all.begin(), all.end()};
}

inline std::vector<JetVariable> columns_of(const std::vector<DiffPolynomial>& a,
                                           const std::vector<DiffPolynomial>& b = {}) {
  std::vector<const DiffPolynomial*> ptrs;
  for (const auto& f : a) ptrs.push_back(&f);
  for (const auto& f : b) ptrs.push_back(&f);
  return union_columns(ptrs);
}

inline Echelon<DiffPolynomial> affine_echelon(const std::vector<DiffPolynomial>& eqs,
                                              const std::vector<JetVariable>& cols, bool reduce) {
  std::vector<Row<DiffPolynomial>> m;
  m.reserve(eqs.size());
  for (const auto& f : eqs) m.push_back(affine_row(f, cols));
  return echelon_form(std::move(m), cols.size() + 1, reduce);
}

inline void check_generators(const DiffPolynomial& f, const BundleSignature& sig) {
  for (const auto& g : f.generators()) {
    if (g.is_coordinate()) {
      if (g.position() >= sig.p()) throw Error(ErrorKind::SignatureMismatch, "coordinate outside the signature");
    } else {
      const auto& v = g.jet_variable();
      if (v.dependent >= sig.q() || v.index.size() != sig.p()) {
        throw Error(ErrorKind::SignatureMismatch, "jet variable outside the signature");
      }
    }
  }
}

}  // namespace detail

/// Canonical scaling of a single equation: linear equations are divided by
/// their leading coefficient when it divides the rest, then every equation is
/// scaled so its greatest term has coefficient 1.
inline DiffPolynomial normalize_equation(const DiffPolynomial& f) {
  if (f.is_zero()) return f;
  if (f.is_linear() && !f.is_jet_free()) {
    auto cols = detail::columns_of({f});
    auto row = detail::affine_row(f, cols);
    detail::make_primitive(row);
    return detail::row_polynomial(row, cols);
  }
  return f * (Rational(1) / f.leading_term().second);
}

/// Validated, canonical system: equations normalized, zero equations dropped,
/// duplicates removed (first occurrence kept).
inline DiffSystem make_system(const BundleSignature& sig, const std::vector<DiffPolynomial>& equations,
                              unsigned declared_order, std::optional<Provenance> provenance = std::nullopt) {
  std::vector<DiffPolynomial> out;
  for (const auto& f : equations) {
    detail::check_generators(f, sig);
    if (f.is_zero()) continue;
    if (auto o = f.order(); o && *o > declared_order) {
      throw Error(ErrorKind::OrderViolation, "equation of order " + std::to_string(*o) +
                                                 " exceeds declared order " + std::to_string(declared_order));
    }
    DiffPolynomial g = normalize_equation(f);
    if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
  }
  if (out.empty()) throw Error(ErrorKind::EmptySystem, "a system needs at least one nonzero equation");
  return {sig, std::move(out), declared_order, std::move(provenance)};
}

inline std::vector<AffineRow> to_affine_rows(const DiffSystem& s) {
  std::vector<AffineRow> rows;
  for (const auto& f : s.equations()) {
    detail::require_linear(f);
    AffineRow r;
    for (const auto& v : f.jet_variables()) r.coefficients.emplace(v, f.coefficient_of(v));
    r.constant = f.jet_free_part();
    rows.push_back(std::move(r));
  }
  return rows;
}

struct GenericEchelon {
  std::vector<AffineRow> rows;
  std::vector<std::optional<JetVariable>> pivots;  // nullopt: the constant column
  std::size_t rank = 0;
};

/// Fraction-free echelon of affine rows over Q(x) with the given column
/// order (greatest first); the constant column comes last.
inline GenericEchelon echelon_generic(const std::vector<AffineRow>& rows, const std::vector<JetVariable>& column_order,
                                      bool reduce = false) {
  std::vector<Row<DiffPolynomial>> m;
  for (const auto& r : rows) {
    Row<DiffPolynomial> row;
    for (const auto& v : column_order) {
      auto it = r.coefficients.find(v);
      row.push_back(it == r.coefficients.end() ? DiffPolynomial() : it->second);
    }
    for (const auto& [v, c] : r.coefficients) {
      if (!c.is_zero() && std::find(column_order.begin(), column_order.end(), v) == column_order.end()) {
        throw Error(ErrorKind::InvalidArgument, "row has a jet variable missing from the column order");
      }
    }
    row.push_back(r.constant);
    m.push_back(std::move(row));
  }
  auto e = echelon_form(std::move(m), column_order.size() + 1, reduce);
  GenericEchelon out;
  out.rank = e.rank();
  for (std::size_t t = 0; t < e.rows.size(); ++t) {
    AffineRow r;
    for (std::size_t j = 0; j < column_order.size(); ++j) {
      if (!e.rows[t][j].is_zero()) r.coefficients.emplace(column_order[j], e.rows[t][j]);
    }
    r.constant = e.rows[t].back();
    out.rows.push_back(std::move(r));
    const std::size_t c = e.pivots[t];
    out.pivots.push_back(c < column_order.size() ? std::optional(column_order[c]) : std::nullopt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prolongation and projection

/// All D_J Delta with |J| ≤ k: highest-order derivatives first, equations in
/// input order, derivatives within an order in increasing column rank.
inline DiffSystem prolong(const DiffSystem& s, unsigned k) {
  if (k == 0) return s;
  const std::size_t p = s.signature().p();
  std::vector<DiffPolynomial> eqs;
  for (unsigned m = k + 1; m-- > 0;) {
    auto indices = enumerate_multi_indices(p, m);
    std::reverse(indices.begin(), indices.end());
    for (const auto& f : s.equations()) {
      for (const auto& J : indices) eqs.push_back(f.formal_derivative(J));
    }
  }
  Provenance prov;
  if (s.provenance()) {
    prov = *s.provenance();
    prov.prolonged_by += k;
  } else {
    prov.base = std::make_shared<const DiffSystem>(s);
    prov.prolonged_by = k;
  }
  return make_system(s.signature(), eqs, s.order() + k, std::move(prov));
}

/// Keeps the equations of order ≤ n - j (and jet-free ones). Exact for
/// systems known to be prolongations; in general only a subset of the
/// geometric projection.
inline DiffSystem syntactic_project(const DiffSystem& s, unsigned j) {
  if (j > s.order()) throw Error(ErrorKind::InvalidArgument, "cannot project below order 0");
  if (j == 0) return s;
  const unsigned target = s.order() - j;
  std::vector<DiffPolynomial> kept;
  for (const auto& f : s.equations()) {
    auto o = f.order();
    if (!o || *o <= target) kept.push_back(f);
  }
  if (kept.empty()) {
    throw Error(ErrorKind::EmptyProjection, "projection imposes no equations on the order-" +
                                                std::to_string(target) + " jet space");
  }
  return make_system(s.signature(), kept, target);
}

/// Equations of the row space of a linear system that are independent of
/// every jet variable of order > n - j, as a reduced echelon basis.
inline DiffSystem project_linear(const DiffSystem& s, unsigned j) {
  detail::require_linear(s);
  if (j > s.order()) throw Error(ErrorKind::InvalidArgument, "cannot project below order 0");
  const unsigned target = s.order() - j;
  auto cols = s.jet_variables();
  // Rows pivoting at order <= target vanish on every higher column, so they
  // already span the projection. They are interreduced only when every pivot
  // is a constant; otherwise back-substitution multiplies minors together and
  // the echelon rows are returned as they are.
  auto e = detail::affine_echelon(s.equations(), cols, /*reduce=*/false);
  std::vector<DiffPolynomial> kept;
  bool constant_pivots = true;
  for (std::size_t t = 0; t < e.rows.size(); ++t) {
    const std::size_t c = e.pivots[t];
    if (c == cols.size() || cols[c].order() <= target) {
      kept.push_back(detail::row_polynomial(e.rows[t], cols));
      constant_pivots = constant_pivots && e.rows[t][c].is_constant();
    }
  }
  if (!kept.empty() && constant_pivots) {
    auto r = detail::affine_echelon(kept, cols, /*reduce=*/true);
    kept.clear();
    for (const auto& row : r.rows) kept.push_back(detail::row_polynomial(row, cols));
  }
  if (kept.empty()) {
    throw Error(ErrorKind::EmptyProjection, "projection imposes no equations on the order-" +
                                                std::to_string(target) + " jet space");
  }
  return make_system(s.signature(), kept, target);
}

/// Generic row-space equality of two linear systems.
inline bool equals_generic(const DiffSystem& a, const DiffSystem& b) {
  detail::require_linear(a);
  detail::require_linear(b);
  if (!(a.signature() == b.signature())) throw Error(ErrorKind::SignatureMismatch, "systems over different bundles");
  auto cols = detail::columns_of(a.equations(), b.equations());
  auto ra = detail::affine_echelon(a.equations(), cols, false).rank();
  auto rb = detail::affine_echelon(b.equations(), cols, false).rank();
  if (ra != rb) return false;
  std::vector<DiffPolynomial> both = a.equations();
  both.insert(both.end(), b.equations().begin(), b.equations().end());
  return detail::affine_echelon(both, cols, false).rank() == ra;
}

/// Reduces each equation of `eqs` modulo the row space of `base`. The
/// nonzero remainders, interreduced and normalized, are returned.
inline std::vector<DiffPolynomial> remainders_modulo(const std::vector<DiffPolynomial>& eqs,
                                                     const std::vector<DiffPolynomial>& base) {
  auto cols = detail::columns_of(eqs, base);
  auto e = detail::affine_echelon(base, cols, true);
  std::vector<DiffPolynomial> rems;
  for (const auto& f : eqs) {
    auto r = reduce_row(detail::affine_row(f, cols), e);
    if (!row_is_zero(r)) rems.push_back(detail::row_polynomial(r, cols));
  }
  if (rems.empty()) return rems;
  auto re = detail::affine_echelon(rems, cols, true);
  std::vector<DiffPolynomial> out;
  for (const auto& row : re.rows) out.push_back(normalize_equation(detail::row_polynomial(row, cols)));
  return out;
}

/// Equations of the first prolongation projected back to order n that are
/// not already consequences of the system itself.
inline std::vector<DiffPolynomial> integrability_conditions(const DiffSystem& s) {
  detail::require_linear(s);
  auto projected = project_linear(prolong(s, 1), 1);
  return remainders_modulo(projected.equations(), s.equations());
}

// ---------------------------------------------------------------------------
// Jacobi matrix and ranks

struct JacobiBlocks {
  struct RowLabel {
    std::size_t equation = 0;
    std::optional<std::size_t> derivative;  // D_i applied, or nullopt for the original
  };

  unsigned order = 0;  // n; columns of order n+1 form the right-hand block
  std::vector<RowLabel> rows;
  std::vector<JetVariable> columns;
  std::vector<Row<DiffPolynomial>> entries;

  bool is_upper(std::size_t row) const { return rows.at(row).derivative.has_value(); }
  bool is_right(std::size_t col) const { return columns.at(col).order() == order + 1; }

  /// Entries of one of the four blocks, row-major.
  std::vector<Row<DiffPolynomial>> block(bool upper, bool right) const {
    std::vector<Row<DiffPolynomial>> out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (is_upper(r) != upper) continue;
      Row<DiffPolynomial> row;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (is_right(c) == right) row.push_back(entries[r][c]);
      }
      out.push_back(std::move(row));
    }
    return out;
  }
};

/// Partial derivatives of {D_i Delta_nu} followed by {Delta_nu} with respect
/// to every jet variable of order ≤ n+1, columns greatest first.
inline JacobiBlocks jacobi_matrix(const DiffSystem& s) {
  JacobiBlocks jb;
  jb.order = s.order();
  jb.columns = jet_variables_up_to(s.signature(), s.order() + 1);
  std::vector<DiffPolynomial> row_eqs;
  for (std::size_t nu = 0; nu < s.size(); ++nu) {
    for (std::size_t i = 0; i < s.signature().p(); ++i) {
      jb.rows.push_back({nu, i});
      row_eqs.push_back(s.equations()[nu].formal_derivative(i));
    }
  }
  for (std::size_t nu = 0; nu < s.size(); ++nu) {
    jb.rows.push_back({nu, std::nullopt});
    row_eqs.push_back(s.equations()[nu]);
  }
  for (const auto& f : row_eqs) {
    Row<DiffPolynomial> row;
    for (const auto& v : jb.columns) row.push_back(f.partial_jet(v));
    jb.entries.push_back(std::move(row));
  }
  return jb;
}

/// Generic rank of the Jacobian with respect to the jet variables.
inline std::size_t rank_of(const DiffSystem& s) {
  auto cols = s.jet_variables();
  std::vector<Row<DiffPolynomial>> m;
  for (const auto& f : s.equations()) {
    Row<DiffPolynomial> row;
    for (const auto& v : cols) row.push_back(f.partial_jet(v));
    m.push_back(std::move(row));
  }
  return rank_of_matrix(std::move(m), cols.size());
}

inline std::uint64_t dim_of(const DiffSystem& s) {
  return jet_dim(s.signature().p(), s.signature().q(), s.order()) - rank_of(s);
}

// ---------------------------------------------------------------------------
// Linear coordinate changes

using RationalMatrix = std::vector<std::vector<Rational>>;

inline RationalMatrix identity_matrix(std::size_t n) {
  RationalMatrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = k == 0 ? 0 : b[0].size();
  RationalMatrix r(n, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < k; ++l) {
      if (sgn(a[i][l]) == 0) continue;
      for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    }
  }
  return r;
}

inline RationalMatrix inverse(const RationalMatrix& a) {
  const std::size_t n = a.size();
  for (const auto& row : a) {
    if (row.size() != n) throw Error(ErrorKind::InvalidArgument, "matrix is not square");
  }
  RationalMatrix m = a;
  RationalMatrix inv = identity_matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t r = c;
    while (r < n && sgn(m[r][c]) == 0) ++r;
    if (r == n) throw Error(ErrorKind::SingularMatrix, "coordinate change matrix is singular");
    std::swap(m[r], m[c]);
    std::swap(inv[r], inv[c]);
    const Rational s = Rational(1) / m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] *= s;
      inv[c][j] *= s;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (k == c || sgn(m[k][c]) == 0) continue;
      const Rational f = m[k][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[k][j] -= f * m[c][j];
        inv[k][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

/// Matrix of x'_k = x_{perm[k]}.
inline RationalMatrix permutation_matrix(const std::vector<std::size_t>& perm) {
  RationalMatrix m(perm.size(), std::vector<Rational>(perm.size(), Rational(0)));
  for (std::size_t k = 0; k < perm.size(); ++k) m[k].at(perm[k]) = 1;
  return m;
}

/// The system written in coordinates x' = A x. By the chain rule
/// d/dx^i = sum_k A[k][i] d/dx'^k, so u_J becomes the product of those
/// operators applied to u'; coefficients are composed with x = A^{-1} x'.
/// `new_names` relabels the independent coordinates (default: unchanged).
inline DiffSystem change_coordinates(const DiffSystem& s, const RationalMatrix& a,
                                     std::optional<std::vector<std::string>> new_names = std::nullopt) {
  detail::require_linear(s);
  const std::size_t p = s.signature().p();
  if (a.size() != p) throw Error(ErrorKind::InvalidArgument, "coordinate change has the wrong size");
  const RationalMatrix ainv = inverse(a);

  std::map<Generator, DiffPolynomial> repl;
  for (std::size_t i = 0; i < p; ++i) {
    DiffPolynomial xi;
    for (std::size_t k = 0; k < p; ++k) xi += ainv[i][k] * DiffPolynomial::coordinate(k);
    repl.emplace(Generator::coordinate(i), std::move(xi));
  }
  for (const auto& v : s.jet_variables()) {
    // Expand prod_i (sum_k A[k][i] d'_k)^{j_i} as a map K -> coefficient.
    std::map<MultiIndex, Rational, std::greater<>> op{{MultiIndex(p), Rational(1)}};
    for (std::size_t i = 0; i < p; ++i) {
      for (unsigned rep = 0; rep < v.index[i]; ++rep) {
        std::map<MultiIndex, Rational, std::greater<>> next;
        for (const auto& [K, c] : op) {
          for (std::size_t k = 0; k < p; ++k) {
            if (sgn(a[k][i]) == 0) continue;
            next[K.increment(k)] += c * a[k][i];
          }
        }
        op.clear();
        for (auto& [K, c] : next) {
          if (sgn(c) != 0) op.emplace(K, c);
        }
      }
    }
    DiffPolynomial image;
    for (const auto& [K, c] : op) image += c * DiffPolynomial::jet(v.dependent, K);
    repl.emplace(Generator::jet(v), std::move(image));
  }
  std::vector<DiffPolynomial> eqs;
  for (const auto& f : s.equations()) eqs.push_back(f.substitute(repl));
  BundleSignature sig = s.signature();
  if (new_names) sig = BundleSignature(*new_names, s.signature().dependent());
  return make_system(sig, eqs, s.order());
}

}  // namespace jets

#endif  // JETS_SYSTEM_HPP
