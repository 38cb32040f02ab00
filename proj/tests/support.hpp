#ifndef JETS_TESTS_SUPPORT_HPP
#define JETS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <jets/parser.hpp>
#include <jets/printer.hpp>
#include <jets/system.hpp>

namespace jets::testing {

inline DiffSystem sys(const std::string& text) { return parse_system(text); }

inline BundleSignature xyz() { return BundleSignature({"x", "y", "z"}, {"u"}); }
inline BundleSignature xy() { return BundleSignature({"x", "y"}, {"u"}); }

inline DiffPolynomial P(const BundleSignature& sig, const std::string& text) { return parse_expression(text, sig); }

inline std::vector<DiffPolynomial> Ps(const BundleSignature& sig, const std::vector<std::string>& texts) {
  std::vector<DiffPolynomial> out;
  for (const auto& t : texts) out.push_back(normalize_equation(P(sig, t)));
  return out;
}

inline DiffSystem of(const BundleSignature& sig, const std::vector<std::string>& texts, unsigned order) {
  return make_system(sig, Ps(sig, texts), order);
}

/// Equations as a sorted list of printed lines; order-independent comparison.
inline std::vector<std::string> lines(const DiffSystem& s) {
  std::vector<std::string> out;
  for (const auto& f : s.equations()) out.push_back(format_equation(f, s.signature()));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> lines(const std::vector<DiffPolynomial>& eqs, const BundleSignature& sig) {
  std::vector<std::string> out;
  for (const auto& f : eqs) out.push_back(format_equation(normalize_equation(f), sig));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(JETS_DATA_DIR) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> files{"ex8.pde",  "wave.pde",     "heat.pde", "sec6.pde",
                                              "uxy.pde",  "exp.pde",      "sec6_sub.pde",
                                              "cauchy_riemann.pde", "multi_letter.pde"};
  return files;
}

// ---------------------------------------------------------------------------
// Random generators

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational small_rational(Rng& rng) {
  const long num = uniform(rng, -3, 3);
  const long den = uniform(rng, 1, 2);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline BundleSignature random_signature(Rng& rng, std::size_t max_p = 3, std::size_t max_q = 2) {
  static const char* xs[] = {"x", "y", "z", "w"};
  static const char* us[] = {"u", "v", "s"};
  const auto p = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_p)));
  const auto q = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_q)));
  std::vector<std::string> ind(xs, xs + p);
  std::vector<std::string> dep(us, us + q);
  return {ind, dep};
}

inline JetVariable random_jet(Rng& rng, const BundleSignature& sig, unsigned max_order) {
  MultiIndex J(sig.p());
  const auto order = static_cast<unsigned>(uniform(rng, 0, max_order));
  for (unsigned k = 0; k < order; ++k) J = J.increment(static_cast<std::size_t>(uniform(rng, 0, sig.p() - 1)));
  return {static_cast<std::size_t>(uniform(rng, 0, sig.q() - 1)), J};
}

/// Polynomial in the coordinates of degree ≤ `degree`.
inline DiffPolynomial random_coefficient(Rng& rng, const BundleSignature& sig, unsigned degree) {
  DiffPolynomial c(small_rational(rng));
  for (std::size_t i = 0; i < sig.p() && degree > 0; ++i) {
    if (uniform(rng, 0, 2) == 0) c += small_rational(rng) * DiffPolynomial::coordinate(i);
  }
  return c;
}

/// Linear equation of order ≤ max_order with coefficients of degree ≤ coeff_degree.
inline DiffPolynomial random_linear_equation(Rng& rng, const BundleSignature& sig, unsigned max_order,
                                             unsigned coeff_degree = 1) {
  DiffPolynomial f;
  const long terms = uniform(rng, 1, 4);
  for (long t = 0; t < terms; ++t) f += random_coefficient(rng, sig, coeff_degree) * DiffPolynomial::jet(random_jet(rng, sig, max_order));
  if (uniform(rng, 0, 3) == 0) f += random_coefficient(rng, sig, coeff_degree);
  return f;
}

/// Random linear system; retries until at least one equation survives.
inline DiffSystem random_linear_system(Rng& rng, std::size_t max_p = 3, std::size_t max_q = 2, unsigned max_order = 2,
                                       unsigned coeff_degree = 1) {
  while (true) {
    BundleSignature sig = random_signature(rng, max_p, max_q);
    std::vector<DiffPolynomial> eqs;
    const long count = uniform(rng, 1, 3);
    unsigned order = 0;
    for (long k = 0; k < count; ++k) {
      DiffPolynomial f = random_linear_equation(rng, sig, max_order, coeff_degree);
      if (f.is_zero()) continue;
      order = std::max(order, f.order().value_or(0));
      eqs.push_back(std::move(f));
    }
    if (eqs.empty()) continue;
    return make_system(sig, eqs, order);
  }
}

/// Arbitrary (possibly nonlinear) differential polynomial.
inline DiffPolynomial random_polynomial(Rng& rng, const BundleSignature& sig, unsigned max_order = 2) {
  DiffPolynomial f;
  const long terms = uniform(rng, 0, 4);
  for (long t = 0; t < terms; ++t) {
    Monomial m;
    const long factors = uniform(rng, 0, 3);
    for (long k = 0; k < factors; ++k) {
      if (uniform(rng, 0, 2) == 0) {
        m = m * Monomial(Generator::coordinate(static_cast<std::size_t>(uniform(rng, 0, sig.p() - 1))));
      } else {
        m = m * Monomial(Generator::jet(random_jet(rng, sig, max_order)));
      }
    }
    f += DiffPolynomial(m, small_rational(rng));
  }
  return f;
}

inline DiffSystem random_system(Rng& rng, std::size_t max_p = 3, std::size_t max_q = 2) {
  while (true) {
    BundleSignature sig = random_signature(rng, max_p, max_q);
    std::vector<DiffPolynomial> eqs;
    unsigned order = 0;
    const long count = uniform(rng, 1, 3);
    for (long k = 0; k < count; ++k) {
      DiffPolynomial f = random_polynomial(rng, sig);
      if (f.is_zero()) continue;
      order = std::max(order, f.order().value_or(0));
      eqs.push_back(std::move(f));
    }
    if (eqs.empty()) continue;
    return make_system(sig, eqs, order + static_cast<unsigned>(uniform(rng, 0, 1)));
  }
}

}  // namespace jets::testing

#endif  // JETS_TESTS_SUPPORT_HPP
