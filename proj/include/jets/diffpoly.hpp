#ifndef JETS_DIFFPOLY_HPP
#define JETS_DIFFPOLY_HPP

// Exact sparse polynomials over Q in the independent variables and the jet
// variables, with the formal (total) derivative.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include <jets/error.hpp>
#include <jets/jetcore.hpp>

namespace jets {

using Rational = mpq_class;
using Integer = mpz_class;

/// A polynomial generator: either an independent coordinate x^i or a jet
/// variable u^alpha_J. Jets rank above coordinates; coordinates with lower
/// position rank higher; jets follow the column ranking of JetVariable.
class Generator {
 public:
  static Generator coordinate(std::size_t position) {
    Generator g;
    g.position_ = position;
    return g;
  }
  static Generator jet(JetVariable v) {
    Generator g;
    g.jet_ = std::move(v);
    return g;
  }

  bool is_jet() const noexcept { return jet_.has_value(); }
  bool is_coordinate() const noexcept { return !jet_.has_value(); }
  std::size_t position() const noexcept { return position_; }
  const JetVariable& jet_variable() const { return *jet_; }

  friend std::strong_ordering operator<=>(const Generator& a, const Generator& b) {
    if (a.is_jet() != b.is_jet()) {
      return a.is_jet() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (a.is_jet()) return *a.jet_ <=> *b.jet_;
    return b.position_ <=> a.position_;
  }
  friend bool operator==(const Generator& a, const Generator& b) {
    return a.position_ == b.position_ && a.jet_ == b.jet_;
  }

 private:
  std::size_t position_ = 0;
  std::optional<JetVariable> jet_;
};

/// Power product of generators. Factors are kept sorted, greatest generator
/// first, with no zero exponents. Comparison is lexicographic in that
/// generator order, which is a term order.
class Monomial {
 public:
  using Factor = std::pair<Generator, unsigned>;

  Monomial() = default;
  explicit Monomial(const Generator& g, unsigned e = 1) {
    if (e > 0) factors_.emplace_back(g, e);
  }

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  bool is_one() const noexcept { return factors_.empty(); }

  unsigned degree() const noexcept {
    unsigned d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
  }
  unsigned degree_in(const Generator& g) const {
    for (const auto& f : factors_) {
      if (f.first == g) return f.second;
    }
    return 0;
  }
  /// Total degree in jet variables.
  unsigned jet_degree() const noexcept {
    unsigned d = 0;
    for (const auto& f : factors_) {
      if (f.first.is_jet()) d += f.second;
    }
    return d;
  }
  /// Highest |J| among jet variables present, if any.
  std::optional<unsigned> jet_order() const {
    std::optional<unsigned> r;
    for (const auto& f : factors_) {
      if (f.first.is_jet()) r = std::max(r.value_or(0), f.first.jet_variable().order());
    }
    return r;
  }
  bool is_jet_free() const noexcept {
    return std::none_of(factors_.begin(), factors_.end(),
                        [](const Factor& f) { return f.first.is_jet(); });
  }

  /// Split into (coordinate part, jet part).
  std::pair<Monomial, Monomial> split() const {
    Monomial xs;
    Monomial js;
    for (const auto& f : factors_) (f.first.is_jet() ? js : xs).factors_.push_back(f);
    return {xs, js};
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
      auto c = i->first <=> j->first;
      if (c > 0) {
        r.factors_.push_back(*i++);
      } else if (c < 0) {
        r.factors_.push_back(*j++);
      } else {
        r.factors_.emplace_back(i->first, i->second + j->second);
        ++i;
        ++j;
      }
    }
    r.factors_.insert(r.factors_.end(), i, a.factors_.end());
    r.factors_.insert(r.factors_.end(), j, b.factors_.end());
    return r;
  }

  bool divides(const Monomial& m) const {
    for (const auto& f : factors_) {
      if (m.degree_in(f.first) < f.second) return false;
    }
    return true;
  }

  /// m / this; requires divides(m).
  Monomial quotient_of(const Monomial& m) const {
    Monomial r;
    for (const auto& f : m.factors_) {
      unsigned e = f.second - degree_in(f.first);
      if (e > 0) r.factors_.emplace_back(f.first, e);
    }
    return r;
  }

  /// This monomial with the exponent of g lowered by one; requires g present.
  Monomial lowered(const Generator& g) const {
    Monomial r = *this;
    for (auto it = r.factors_.begin(); it != r.factors_.end(); ++it) {
      if (it->first == g) {
        if (--it->second == 0) r.factors_.erase(it);
        return r;
      }
    }
    throw Error(ErrorKind::InvalidArgument, "generator not present in monomial");
  }

  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    std::size_t n = std::min(a.factors_.size(), b.factors_.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (auto c = a.factors_[k].first <=> b.factors_[k].first; c != 0) return c;
      if (auto c = a.factors_[k].second <=> b.factors_[k].second; c != 0) return c;
    }
    return a.factors_.size() <=> b.factors_.size();
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Factor> factors_;
};

/// Exact polynomial in coordinates and jet variables over Q. Terms are kept
/// greatest-monomial first; zero coefficients are never stored.
class DiffPolynomial {
 public:
  using TermMap = std::map<Monomial, Rational, std::greater<>>;

  DiffPolynomial() = default;
  DiffPolynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (sgn(c) != 0) terms_.emplace(Monomial(), c);
  }
  DiffPolynomial(long c) : DiffPolynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  DiffPolynomial(const Monomial& m, const Rational& c) {
    if (sgn(c) != 0) terms_.emplace(m, c);
  }

  static DiffPolynomial coordinate(std::size_t position) {
    return {Monomial(Generator::coordinate(position)), Rational(1)};
  }
  static DiffPolynomial jet(std::size_t dependent, MultiIndex index) {
    return {Monomial(Generator::jet({dependent, std::move(index)})), Rational(1)};
  }
  static DiffPolynomial jet(const JetVariable& v) { return jet(v.dependent, v.index); }
  static DiffPolynomial generator(const Generator& g) { return {Monomial(g), Rational(1)}; }

  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }
  Rational constant_value() const {
    auto it = terms_.find(Monomial());
    return it == terms_.end() ? Rational(0) : it->second;
  }
  bool is_jet_free() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.is_jet_free(); });
  }

  /// Greatest term; requires a nonzero polynomial.
  const std::pair<const Monomial, Rational>& leading_term() const {
    if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no leading term");
    return *terms_.begin();
  }

  /// Highest |J| over jet variables present; nullopt for jet-free input.
  std::optional<unsigned> order() const {
    std::optional<unsigned> r;
    for (const auto& [m, c] : terms_) {
      if (auto o = m.jet_order()) r = std::max(r.value_or(0), *o);
    }
    return r;
  }

  /// Affine in the jet variables (coefficients may depend on coordinates).
  bool is_linear() const noexcept {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& t) { return t.first.jet_degree() <= 1; });
  }

  unsigned total_degree() const noexcept {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  std::set<Generator, std::greater<>> generators() const {
    std::set<Generator, std::greater<>> out;
    for (const auto& [m, c] : terms_) {
      for (const auto& f : m.factors()) out.insert(f.first);
    }
    return out;
  }

  std::set<JetVariable, std::greater<>> jet_variables() const {
    std::set<JetVariable, std::greater<>> out;
    for (const auto& [m, c] : terms_) {
      for (const auto& f : m.factors()) {
        if (f.first.is_jet()) out.insert(f.first.jet_variable());
      }
    }
    return out;
  }

  DiffPolynomial& operator+=(const DiffPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  DiffPolynomial& operator-=(const DiffPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  DiffPolynomial& operator*=(const Rational& s) {
    if (sgn(s) == 0) {
      terms_.clear();
    } else {
      for (auto& [m, c] : terms_) c *= s;
    }
    return *this;
  }
  friend DiffPolynomial operator+(DiffPolynomial a, const DiffPolynomial& b) { return a += b; }
  friend DiffPolynomial operator-(DiffPolynomial a, const DiffPolynomial& b) { return a -= b; }
  friend DiffPolynomial operator-(DiffPolynomial a) { return a *= Rational(-1); }
  friend DiffPolynomial operator*(DiffPolynomial a, const Rational& s) { return a *= s; }
  friend DiffPolynomial operator*(const Rational& s, DiffPolynomial a) { return a *= s; }

  friend DiffPolynomial operator*(const DiffPolynomial& a, const DiffPolynomial& b) {
    DiffPolynomial r;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    }
    return r;
  }
  DiffPolynomial& operator*=(const DiffPolynomial& o) { return *this = *this * o; }

  DiffPolynomial pow(unsigned e) const {
    DiffPolynomial r(1);
    DiffPolynomial base = *this;
    while (e > 0) {
      if (e & 1u) r *= base;
      e >>= 1;
      if (e > 0) base *= base;
    }
    return r;
  }

  friend bool operator==(const DiffPolynomial&, const DiffPolynomial&) = default;

  /// Formal partial derivative with respect to one generator; all other
  /// generators are held constant.
  DiffPolynomial partial(const Generator& g) const {
    DiffPolynomial r;
    for (const auto& [m, c] : terms_) {
      if (unsigned e = m.degree_in(g); e > 0) r.add_term(m.lowered(g), c * e);
    }
    return r;
  }
  DiffPolynomial partial_x(std::size_t position) const { return partial(Generator::coordinate(position)); }
  DiffPolynomial partial_jet(const JetVariable& v) const { return partial(Generator::jet(v)); }

  /// D_i F = dF/dx^i + sum over jets u^a_J present of (dF/du^a_J) u^a_{J,i}.
  DiffPolynomial formal_derivative(std::size_t position) const {
    DiffPolynomial r;
    for (const auto& [m, c] : terms_) {
      for (const auto& [g, e] : m.factors()) {
        Monomial rest = m.lowered(g);
        if (g.is_coordinate()) {
          if (g.position() == position) r.add_term(rest, c * e);
        } else {
          const JetVariable& v = g.jet_variable();
          if (position >= v.index.size()) {
            throw Error(ErrorKind::InvalidArgument, "coordinate position out of range");
          }
          JetVariable w{v.dependent, v.index.increment(position)};
          r.add_term(rest * Monomial(Generator::jet(std::move(w))), c * e);
        }
      }
    }
    return r;
  }

  /// D_J = D_1^{j_1} ... D_p^{j_p}.
  DiffPolynomial formal_derivative(const MultiIndex& J) const {
    DiffPolynomial r = *this;
    for (std::size_t i = 0; i < J.size(); ++i) {
      for (unsigned k = 0; k < J[i]; ++k) r = r.formal_derivative(i);
    }
    return r;
  }

  /// Exact evaluation. Throws MissingAssignment when a generator present in
  /// the polynomial has no value.
  Rational eval(const std::map<Generator, Rational>& point) const {
    Rational sum = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (const auto& [g, e] : m.factors()) {
        auto it = point.find(g);
        if (it == point.end()) throw Error(ErrorKind::MissingAssignment, "no value for a generator");
        Rational v = it->second;
        for (unsigned k = 0; k < e; ++k) t *= v;
      }
      sum += t;
    }
    return sum;
  }

  /// Replace generators by polynomials; generators without a replacement
  /// are kept.
  DiffPolynomial substitute(const std::map<Generator, DiffPolynomial>& repl) const {
    DiffPolynomial r;
    std::map<std::pair<Generator, unsigned>, DiffPolynomial> powers;
    for (const auto& [m, c] : terms_) {
      DiffPolynomial t(c);
      Monomial kept;
      for (const auto& [g, e] : m.factors()) {
        auto it = repl.find(g);
        if (it == repl.end()) {
          kept = kept * Monomial(g, e);
          continue;
        }
        auto key = std::make_pair(g, e);
        auto pit = powers.find(key);
        if (pit == powers.end()) pit = powers.emplace(key, it->second.pow(e)).first;
        t *= pit->second;
      }
      if (!kept.is_one()) t *= DiffPolynomial(kept, Rational(1));
      r += t;
    }
    return r;
  }

  /// Coefficient of a jet variable in an affine polynomial.
  DiffPolynomial coefficient_of(const JetVariable& v) const { return partial_jet(v); }

  /// The jet-free part.
  DiffPolynomial jet_free_part() const {
    DiffPolynomial r;
    for (const auto& [m, c] : terms_) {
      if (m.is_jet_free()) r.terms_.emplace(m, c);
    }
    return r;
  }

  /// Exact quotient this / d if d divides this in Q[generators].
  std::optional<DiffPolynomial> divide_exact(const DiffPolynomial& d) const {
    if (d.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero polynomial");
    if (d.is_constant()) return *this * (Rational(1) / d.constant_value());
    const auto& [dm, dc] = d.leading_term();
    DiffPolynomial q;
    DiffPolynomial r = *this;
    while (!r.is_zero()) {
      const auto& [rm, rc] = r.leading_term();
      if (!dm.divides(rm)) return std::nullopt;
      DiffPolynomial t(dm.quotient_of(rm), rc / dc);
      q += t;
      r -= t * d;
    }
    return q;
  }

  /// Positive rational c with this/c having coprime integer coefficients.
  Rational content() const {
    if (terms_.empty()) return 1;
    Integer num = 0;
    Integer den = 1;
    for (const auto& [m, c] : terms_) {
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    return Rational(num, den);
  }

 private:
  void add_term(const Monomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  TermMap terms_;
};

}  // namespace jets

#endif  // JETS_DIFFPOLY_HPP
