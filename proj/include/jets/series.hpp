#ifndef JETS_SERIES_HPP
#define JETS_SERIES_HPP

// Truncated formal power-series solutions built order by order at a point,
// and exact verification of polynomial solutions.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <jets/diffpoly.hpp>
#include <jets/error.hpp>
#include <jets/jetcore.hpp>
#include <jets/linalg.hpp>
#include <jets/system.hpp>

namespace jets {

/// u^alpha = f^alpha(x), one jet-free polynomial per dependent variable.
struct PolynomialFunction {
  std::vector<DiffPolynomial> components;

  /// d_J f^alpha
  DiffPolynomial derivative(std::size_t dependent, const MultiIndex& J) const {
    DiffPolynomial f = components.at(dependent);
    for (std::size_t i = 0; i < J.size(); ++i) {
      for (unsigned k = 0; k < J[i]; ++k) f = f.partial_x(i);
    }
    return f;
  }
};

namespace detail {

inline void require_jet_free(const PolynomialFunction& f, const BundleSignature& sig) {
  if (f.components.size() != sig.q()) {
    throw Error(ErrorKind::SignatureMismatch, "function needs one component per dependent variable");
  }
  for (const auto& c : f.components) {
    if (!c.is_jet_free()) throw Error(ErrorKind::InvalidArgument, "function components must not contain jet variables");
  }
}

/// Every equation with u^a_J replaced by d_J f^a.
inline std::vector<DiffPolynomial> substitute_function(const DiffSystem& s, const PolynomialFunction& f,
                                                       std::map<Generator, DiffPolynomial> repl = {}) {
  for (const auto& v : s.jet_variables()) repl.emplace(Generator::jet(v), f.derivative(v.dependent, v.index));
  std::vector<DiffPolynomial> out;
  for (const auto& eq : s.equations()) out.push_back(eq.substitute(repl));
  return out;
}

}  // namespace detail

/// True when every equation vanishes identically on the prolonged graph of f.
inline bool check_solution(const DiffSystem& s, const PolynomialFunction& f) {
  detail::require_jet_free(f, s.signature());
  auto residuals = detail::substitute_function(s, f);
  return std::all_of(residuals.begin(), residuals.end(), [](const DiffPolynomial& r) { return r.is_zero(); });
}

struct OrderPartition {
  std::vector<JetVariable> principal;
  std::vector<JetVariable> parametric;
};

struct SeriesSolution {
  BundleSignature signature;
  std::vector<Rational> point;
  unsigned truncation = 0;
  /// coefficients[alpha][J] = a^alpha_J = u^alpha_J at the point.
  std::vector<std::map<MultiIndex, Rational, std::greater<>>> coefficients;
  /// partition[m] for every order m ≤ truncation.
  std::vector<OrderPartition> partition;

  Rational coefficient(const JetVariable& v) const {
    const auto& c = coefficients.at(v.dependent);
    auto it = c.find(v.index);
    return it == c.end() ? Rational(0) : it->second;
  }
};

using JetAssignment = std::map<JetVariable, Rational, std::greater<>>;

namespace detail {

/// Equations D_J Delta whose order is exactly m, i.e. each equation of order
/// r ≤ m differentiated by every J with |J| = m - r. Jet-free equations count
/// as order 0.
class DerivativeLadder {
 public:
  explicit DerivativeLadder(const DiffSystem& s) : sys_(s), cache_(s.size()) {}

  std::vector<DiffPolynomial> at_order(unsigned m) {
    std::vector<DiffPolynomial> out;
    for (std::size_t nu = 0; nu < sys_.size(); ++nu) {
      const unsigned r = sys_.equations()[nu].order().value_or(0);
      if (r > m) continue;
      for (const auto& J : enumerate_multi_indices(sys_.signature().p(), m - r)) out.push_back(get(nu, J));
    }
    return out;
  }

 private:
  const DiffPolynomial& get(std::size_t nu, const MultiIndex& J) {
    auto& cache = cache_[nu];
    if (auto it = cache.find(J); it != cache.end()) return it->second;
    DiffPolynomial value;
    if (J.is_zero()) {
      value = sys_.equations()[nu];
    } else {
      const std::size_t i = J.cls() - 1;
      value = get(nu, J.decrement(i)).formal_derivative(i);
    }
    return cache.emplace(J, std::move(value)).first->second;
  }

  const DiffSystem& sys_;
  std::vector<std::map<MultiIndex, DiffPolynomial>> cache_;
};

inline std::map<Generator, DiffPolynomial> point_substitution(const std::vector<Rational>& point) {
  std::map<Generator, DiffPolynomial> repl;
  for (std::size_t i = 0; i < point.size(); ++i) repl.emplace(Generator::coordinate(i), DiffPolynomial(point[i]));
  return repl;
}

/// Affine row over `unknowns` (plus constant) of a polynomial in those jets.
inline std::optional<Row<Rational>> rational_row(const DiffPolynomial& f, const std::vector<JetVariable>& unknowns,
                                                 const std::map<JetVariable, std::size_t>& column) {
  Row<Rational> row(unknowns.size() + 1, Rational(0));
  for (const auto& [m, c] : f.terms()) {
    if (m.is_one()) {
      row.back() += c;
      continue;
    }
    if (m.factors().size() != 1 || m.factors()[0].second != 1 || !m.factors()[0].first.is_jet()) return std::nullopt;
    auto it = column.find(m.factors()[0].first.jet_variable());
    if (it == column.end()) return std::nullopt;
    row[it->second] += c;
  }
  return row;
}

inline bool unknowns_absent(const Row<Rational>& row) {
  return std::all_of(row.begin(), row.end() - 1, [](const Rational& r) { return sgn(r) == 0; });
}

inline void check_point(const DiffSystem& s, const std::vector<Rational>& point) {
  if (point.size() != s.signature().p()) {
    throw Error(ErrorKind::InvalidArgument, "expansion point needs one value per independent variable");
  }
}

inline std::string jet_label(const JetVariable& v, const BundleSignature& sig) { return jet_name(v, sig); }

inline OrderPartition split_by_pivots(const std::vector<JetVariable>& unknowns, const std::vector<std::size_t>& pivots,
                                      unsigned m) {
  OrderPartition part;
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    if (unknowns[j].order() != m) continue;
    bool principal = std::binary_search(pivots.begin(), pivots.end(), j);
    (principal ? part.principal : part.parametric).push_back(unknowns[j]);
  }
  return part;
}

struct LinearRun {
  std::vector<OrderPartition> partition;
  std::optional<std::vector<Rational>> values;
  std::vector<JetVariable> unknowns;
};

/// Linear systems: every order-m equation at the point is affine in the
/// coefficients of order ≤ m, so the whole table is one affine system. It is
/// grown one order at a time; `constraints` (user values) join at their own
/// order. Without constraints only the partition is computed.
inline LinearRun run_linear(const DiffSystem& s, const std::vector<Rational>& point, unsigned truncation,
                            const JetAssignment* constraints) {
  LinearRun run;
  run.unknowns = jet_variables_up_to(s.signature(), truncation);
  std::map<JetVariable, std::size_t> column;
  for (std::size_t j = 0; j < run.unknowns.size(); ++j) column.emplace(run.unknowns[j], j);

  AffineSolver structure(run.unknowns.size());
  AffineSolver solver(run.unknowns.size());
  DerivativeLadder ladder(s);
  const auto at_point = point_substitution(point);
  for (unsigned m = 0; m <= truncation; ++m) {
    for (const auto& eq : ladder.at_order(m)) {
      auto row = rational_row(eq.substitute(at_point), run.unknowns, column);
      if (!row) throw Error(ErrorKind::NonLinearSystem, "equation is not affine at the expansion point");
      if (unknowns_absent(*row) && sgn(row->back()) != 0) {
        throw Error(ErrorKind::InconsistentAtPoint, "an equation reduces to a nonzero constant at the expansion point");
      }
      structure.add(*row);
      if (constraints && solver.add(*std::move(row)) == AffineSolver::Status::inconsistent) {
        throw InconsistentOrderError(m, "no coefficients of order " + std::to_string(m) +
                                            " satisfy the equations; the system is not formally integrable "
                                            "with these values (run `complete` first)");
      }
    }
    if (constraints) {
      for (const auto& [v, value] : *constraints) {
        if (v.order() != m) continue;
        Row<Rational> row(run.unknowns.size() + 1, Rational(0));
        row[column.at(v)] = 1;
        row.back() = -value;
        if (solver.add(std::move(row)) == AffineSolver::Status::inconsistent) {
          throw InconsistentOrderError(m, "the value given for " + jet_label(v, s.signature()) +
                                              " contradicts the equations at order " + std::to_string(m));
        }
      }
    }
  }
  for (unsigned m = 0; m <= truncation; ++m) run.partition.push_back(split_by_pivots(run.unknowns, structure.pivots(), m));
  if (constraints) run.values = solver.particular_solution();
  return run;
}

inline void check_assignment(const JetAssignment& values, const BundleSignature& sig, unsigned truncation) {
  for (const auto& [v, value] : values) {
    if (v.dependent >= sig.q() || v.index.size() != sig.p()) {
      throw Error(ErrorKind::SignatureMismatch, "assigned jet variable outside the signature");
    }
    if (v.order() > truncation) {
      throw Error(ErrorKind::InvalidArgument, "assigned jet variable " + jet_label(v, sig) +
                                                  " is above the truncation order");
    }
  }
}

}  // namespace detail

/// Principal (pivot) and parametric jet coefficients for every order ≤ N.
inline std::vector<OrderPartition> partition_derivatives(const DiffSystem& s, const std::vector<Rational>& point,
                                                         unsigned truncation) {
  detail::require_linear(s);
  detail::check_point(s, point);
  return detail::run_linear(s, point, truncation, nullptr).partition;
}

/// Builds the coefficients a^alpha_J, |J| ≤ N, at `point`.
///
/// Linear systems: the order-m equations at the point are added order by
/// order together with the given values; unspecified free coefficients are
/// zero. Values may also be given for principal coefficients as long as they
/// are consistent.
///
/// Nonlinear systems need `seed`, a value for every coefficient of order
/// ≤ n that satisfies the equations at the point. Each higher order is then
/// an affine solve, since the top-order jets enter D_J Delta linearly.
inline SeriesSolution solve_series(const DiffSystem& s, const std::vector<Rational>& point, unsigned truncation,
                                   const JetAssignment& parametric_values = {},
                                   const std::optional<JetAssignment>& seed = std::nullopt) {
  detail::check_point(s, point);
  const BundleSignature& sig = s.signature();
  JetAssignment given = parametric_values;
  if (seed) {
    for (const auto& [v, value] : *seed) {
      auto [it, inserted] = given.emplace(v, value);
      if (!inserted && it->second != value) {
        throw Error(ErrorKind::InvalidArgument, "conflicting values for " + detail::jet_label(v, sig));
      }
    }
  }
  detail::check_assignment(given, sig, truncation);

  SeriesSolution sol;
  sol.signature = sig;
  sol.point = point;
  sol.truncation = truncation;
  sol.coefficients.resize(sig.q());

  if (s.is_linear()) {
    auto run = detail::run_linear(s, point, truncation, &given);
    for (std::size_t j = 0; j < run.unknowns.size(); ++j) {
      sol.coefficients[run.unknowns[j].dependent][run.unknowns[j].index] = (*run.values)[j];
    }
    sol.partition = std::move(run.partition);
    return sol;
  }

  if (!seed) throw Error(ErrorKind::NonLinearSystem, "a nonlinear system needs a seed jet up to its order");
  for (const auto& v : jet_variables_up_to(sig, std::min(s.order(), truncation))) {
    if (!seed->count(v)) {
      throw Error(ErrorKind::NonLinearSystem, "seed jet is missing a value for " + detail::jet_label(v, sig));
    }
  }

  std::map<Generator, DiffPolynomial> known = detail::point_substitution(point);
  detail::DerivativeLadder ladder(s);
  for (unsigned m = 0; m <= truncation; ++m) {
    auto unknowns = jet_variables_of_order(sig, m);
    if (m <= s.order()) {
      for (const auto& v : unknowns) known.emplace(Generator::jet(v), DiffPolynomial(given.at(v)));
      for (const auto& eq : ladder.at_order(m)) {
        DiffPolynomial r = eq.substitute(known);
        if (!r.is_zero()) {
          throw Error(ErrorKind::InconsistentSeed, "the seed jet violates an equation at the expansion point");
        }
      }
      sol.partition.push_back({{}, unknowns});
      continue;
    }
    std::map<JetVariable, std::size_t> column;
    for (std::size_t j = 0; j < unknowns.size(); ++j) column.emplace(unknowns[j], j);
    AffineSolver structure(unknowns.size());
    AffineSolver solver(unknowns.size());
    for (const auto& eq : ladder.at_order(m)) {
      auto row = detail::rational_row(eq.substitute(known), unknowns, column);
      if (!row) throw Error(ErrorKind::NonLinearSystem, "order-" + std::to_string(m) + " equation is not affine");
      structure.add(*row);
      if (solver.add(*std::move(row)) == AffineSolver::Status::inconsistent) {
        throw InconsistentOrderError(m, "no coefficients of order " + std::to_string(m) +
                                            " satisfy the equations (run `complete` first)");
      }
    }
    for (const auto& [v, value] : given) {
      if (v.order() != m) continue;
      Row<Rational> row(unknowns.size() + 1, Rational(0));
      row[column.at(v)] = 1;
      row.back() = -value;
      if (solver.add(std::move(row)) == AffineSolver::Status::inconsistent) {
        throw InconsistentOrderError(m, "the value given for " + detail::jet_label(v, sig) +
                                            " contradicts the equations at order " + std::to_string(m));
      }
    }
    sol.partition.push_back(detail::split_by_pivots(unknowns, structure.pivots(), m));
    auto values = solver.particular_solution();
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      known.emplace(Generator::jet(unknowns[j]), DiffPolynomial(values[j]));
    }
  }
  for (const auto& [g, value] : known) {
    if (g.is_jet()) sol.coefficients[g.jet_variable().dependent][g.jet_variable().index] = value.constant_value();
  }
  return sol;
}

/// Sum over |J| ≤ N of a_J / J! (x - x0)^J for each dependent variable.
inline std::vector<Rational> series_eval(const SeriesSolution& sol, const std::vector<Rational>& x) {
  if (x.size() != sol.point.size()) throw Error(ErrorKind::InvalidArgument, "evaluation point has the wrong size");
  std::vector<Rational> out;
  for (const auto& coeffs : sol.coefficients) {
    Rational sum = 0;
    for (const auto& [J, a] : coeffs) {
      if (sgn(a) == 0) continue;
      Rational t = a / Rational(J.factorial<Integer>());
      for (std::size_t i = 0; i < J.size(); ++i) {
        Rational h = x[i] - sol.point[i];
        for (unsigned k = 0; k < J[i]; ++k) t *= h;
      }
      sum += t;
    }
    out.push_back(sum);
  }
  return out;
}

namespace detail {

/// Truncated series in the shift variables h = x - x0 (stored as the
/// coordinate generators).
inline PolynomialFunction shifted_series(const SeriesSolution& sol) {
  PolynomialFunction f;
  for (const auto& coeffs : sol.coefficients) {
    DiffPolynomial c;
    for (const auto& [J, a] : coeffs) {
      if (sgn(a) == 0) continue;
      Monomial m;
      for (std::size_t i = 0; i < J.size(); ++i) {
        if (J[i] > 0) m = m * Monomial(Generator::coordinate(i), J[i]);
      }
      c += DiffPolynomial(m, a / Rational(J.factorial<Integer>()));
    }
    f.components.push_back(std::move(c));
  }
  return f;
}

}  // namespace detail

/// The truncated series as a polynomial in the original coordinates.
inline PolynomialFunction to_polynomial(const SeriesSolution& sol) {
  std::map<Generator, DiffPolynomial> shift;
  for (std::size_t i = 0; i < sol.point.size(); ++i) {
    shift.emplace(Generator::coordinate(i), DiffPolynomial::coordinate(i) - DiffPolynomial(sol.point[i]));
  }
  PolynomialFunction f = detail::shifted_series(sol);
  for (auto& c : f.components) c = c.substitute(shift);
  return f;
}

/// For each equation, the lowest total degree in (x - x0) of the residual
/// left by the truncated series; nullopt when the residual vanishes
/// identically.
inline std::vector<std::optional<unsigned>> residual_order(const DiffSystem& s, const SeriesSolution& sol) {
  std::map<Generator, DiffPolynomial> shift;
  for (std::size_t i = 0; i < sol.point.size(); ++i) {
    shift.emplace(Generator::coordinate(i), DiffPolynomial(sol.point[i]) + DiffPolynomial::coordinate(i));
  }
  std::vector<std::optional<unsigned>> out;
  for (const auto& r : detail::substitute_function(s, detail::shifted_series(sol), shift)) {
    std::optional<unsigned> low;
    for (const auto& [m, c] : r.terms()) low = std::min(low.value_or(m.degree()), m.degree());
    out.push_back(low);
  }
  return out;
}

}  // namespace jets

#endif  // JETS_SERIES_HPP
