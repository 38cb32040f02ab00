#ifndef JETS_SYMBOL_HPP
#define JETS_SYMBOL_HPP

// Symbol matrices, class counting and the finite involution test for the
// symbol, with coordinate retries for delta-regular coordinates.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <jets/diffpoly.hpp>
#include <jets/jetcore.hpp>
#include <jets/linalg.hpp>
#include <jets/system.hpp>

namespace jets {

/// Top-order block of the Jacobian: one row per equation, one column per jet
/// variable of the declared order (greatest first).
struct SymbolMatrix {
  unsigned order = 0;
  std::vector<JetVariable> columns;
  std::vector<Row<DiffPolynomial>> rows;
  Echelon<DiffPolynomial> echelon;
  /// Some entry depends on jet variables; the echelon then treats them as
  /// indeterminates, so the result holds only at generic jets.
  bool generic = false;

  std::size_t rank() const noexcept { return echelon.rank(); }
};

inline SymbolMatrix symbol_of(const DiffSystem& s) {
  SymbolMatrix sm;
  sm.order = s.order();
  sm.columns = jet_variables_of_order(s.signature(), s.order());
  for (const auto& f : s.equations()) {
    Row<DiffPolynomial> row;
    row.reserve(sm.columns.size());
    for (const auto& v : sm.columns) {
      row.push_back(f.partial_jet(v));
      if (!row.back().is_jet_free()) sm.generic = true;
    }
    sm.rows.push_back(std::move(row));
  }
  sm.echelon = echelon_form(sm.rows, sm.columns.size());
  return sm;
}

/// Row of a symbol matrix as a linear form in its column jets.
inline DiffPolynomial symbol_form(const Row<DiffPolynomial>& row, const std::vector<JetVariable>& columns) {
  DiffPolynomial f;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (!row[j].is_zero()) f += row[j] * DiffPolynomial::jet(columns[j]);
  }
  return f;
}

/// Class counts of the echelon rows of the symbol.
struct ClassSignature {
  std::vector<std::size_t> beta;  // beta[k-1] = number of rows of class k
  std::size_t sum_k_beta = 0;
  std::size_t rank = 0;
  bool generic = false;
};

/// Class of an echelon row with the given pivot column. For order-0 symbols
/// every variable is multiplicative, so those rows count as class p.
inline std::size_t pivot_class(const JetVariable& pivot) {
  return pivot.index.is_zero() ? pivot.index.size() : pivot.index.cls();
}

inline ClassSignature class_signature(const SymbolMatrix& sm, std::size_t p) {
  ClassSignature cs;
  cs.beta.assign(p, 0);
  cs.rank = sm.rank();
  cs.generic = sm.generic;
  for (std::size_t c : sm.echelon.pivots) {
    const std::size_t k = pivot_class(sm.columns[c]);
    ++cs.beta[k - 1];
    cs.sum_k_beta += k;
  }
  return cs;
}

inline ClassSignature class_signature(const DiffSystem& s) {
  return class_signature(symbol_of(s), s.signature().p());
}

/// Variables x^1..x^k of a row of class k, as 0-based positions.
inline std::vector<std::size_t> multiplicative_vars(std::size_t cls, std::size_t p) {
  if (cls < 1 || cls > p) throw Error(ErrorKind::InvalidArgument, "class out of range");
  std::vector<std::size_t> out(cls);
  std::iota(out.begin(), out.end(), std::size_t{0});
  return out;
}

struct SymbolVerdict {
  bool involutive = false;
  std::size_t sum_k_beta = 0;
  std::size_t rank_prolonged_symbol = 0;
  /// Set whenever the test fails: another coordinate frame might raise
  /// sum_k_beta up to the prolonged rank.
  bool delta_suspect = false;
  ClassSignature signature;
};

/// The symbol is involutive when rank Sym I^(1) equals sum_k k beta_k.
inline SymbolVerdict symbol_involutive(const DiffSystem& s) {
  SymbolVerdict v;
  v.signature = class_signature(s);
  v.sum_k_beta = v.signature.sum_k_beta;
  v.rank_prolonged_symbol = symbol_of(prolong(s, 1)).rank();
  // Prolonging each echelon row by its multiplicative variables gives
  // distinct pivots, so this can only fail through an ordering bug.
  if (v.rank_prolonged_symbol < v.sum_k_beta) {
    throw std::logic_error("rank of prolonged symbol below sum k*beta_k (" +
                           std::to_string(v.rank_prolonged_symbol) + " < " + std::to_string(v.sum_k_beta) + ")");
  }
  v.involutive = v.rank_prolonged_symbol == v.sum_k_beta;
  v.delta_suspect = !v.involutive;
  return v;
}

// ---------------------------------------------------------------------------
// Coordinate retries

enum class DeltaStrategy {
  none,           // never change coordinates
  permutation,    // best coordinate permutation (random changes when p > 4)
  random_linear,  // seeded unimodular integer changes
  automatic,      // permutation first, then random changes
};

struct DeltaRetryResult {
  RationalMatrix transform;  // x' = transform * x
  DiffSystem system;
  SymbolVerdict verdict;
};

namespace detail {

inline std::vector<std::string> permuted_names(const std::vector<std::string>& names,
                                               const std::vector<std::size_t>& perm) {
  std::vector<std::string> out;
  for (std::size_t k : perm) out.push_back(names.at(k));
  return out;
}

/// Unit lower times unit upper triangular with entries in [-2, 2]; the
/// determinant is 1 and the inverse is integral.
inline RationalMatrix random_unimodular(std::size_t p, std::mt19937_64& rng) {
  auto draw = [&rng] { return Rational(static_cast<long>(rng() % 5) - 2); };
  RationalMatrix lower = identity_matrix(p);
  RationalMatrix upper = identity_matrix(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) lower[i][j] = draw();
    for (std::size_t j = i + 1; j < p; ++j) upper[i][j] = draw();
  }
  return multiply(lower, upper);
}

inline bool better(const SymbolVerdict& a, const SymbolVerdict& b) {
  if (a.involutive != b.involutive) return a.involutive;
  return a.sum_k_beta > b.sum_k_beta;
}

}  // namespace detail

/// Number of random frames tried per retry.
inline constexpr int kRandomFrameAttempts = 8;

/// Searches coordinate frames for one in which sum_k_beta is as large as
/// possible, stopping at the first frame whose symbol is involutive. Ties keep
/// the earliest candidate; the identity is always the first candidate.
inline DeltaRetryResult delta_retry(const DiffSystem& s, DeltaStrategy strategy, std::uint64_t seed = 1) {
  detail::require_linear(s);
  const std::size_t p = s.signature().p();
  DeltaRetryResult best{identity_matrix(p), s, symbol_involutive(s)};
  if (best.verdict.involutive || strategy == DeltaStrategy::none) return best;

  auto consider = [&best](RationalMatrix a, DiffSystem t) {
    SymbolVerdict v = symbol_involutive(t);
    if (detail::better(v, best.verdict)) best = {std::move(a), std::move(t), std::move(v)};
    return best.verdict.involutive;
  };

  const bool try_perms = (strategy == DeltaStrategy::permutation || strategy == DeltaStrategy::automatic) && p <= 4;
  if (try_perms) {
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    while (std::next_permutation(perm.begin(), perm.end())) {
      auto a = permutation_matrix(perm);
      auto t = change_coordinates(s, a, detail::permuted_names(s.signature().independent(), perm));
      if (consider(std::move(a), std::move(t))) return best;
    }
    if (strategy == DeltaStrategy::permutation) return best;
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kRandomFrameAttempts; ++attempt) {
    auto a = detail::random_unimodular(p, rng);
    auto t = change_coordinates(s, a);
    if (consider(std::move(a), std::move(t))) return best;
  }
  return best;
}

}  // namespace jets

#endif  // JETS_SYMBOL_HPP
