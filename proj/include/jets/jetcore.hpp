#ifndef JETS_JETCORE_HPP
#define JETS_JETCORE_HPP

// Multi-index calculus, bundle signatures and jet-variable identity.
//
// Coordinate positions are 0-based throughout the library. The class of a
// multi-index is reported 1-based (class k means the first nonzero entry is
// at position k-1), matching the usual "class 1..p" convention.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <jets/error.hpp>

namespace jets {

/// Names of the independent (base) and dependent (fibre) coordinates of a
/// trivial bundle. The order of the independent names defines classes.
class BundleSignature {
 public:
  BundleSignature() = default;
  BundleSignature(std::vector<std::string> independent, std::vector<std::string> dependent)
      : independent_(std::move(independent)), dependent_(std::move(dependent)) {
    if (independent_.empty()) {
      throw Error(ErrorKind::InvalidArgument, "at least one independent variable is required");
    }
    if (dependent_.empty()) {
      throw Error(ErrorKind::InvalidArgument, "at least one dependent variable is required");
    }
    std::set<std::string> seen;
    for (const auto* list : {&independent_, &dependent_}) {
      for (const auto& name : *list) {
        if (name.empty()) throw Error(ErrorKind::InvalidArgument, "empty variable name");
        if (!seen.insert(name).second) {
          throw Error(ErrorKind::InvalidArgument, "duplicate variable name '" + name + "'");
        }
      }
    }
  }

  std::size_t p() const noexcept { return independent_.size(); }
  std::size_t q() const noexcept { return dependent_.size(); }
  const std::vector<std::string>& independent() const noexcept { return independent_; }
  const std::vector<std::string>& dependent() const noexcept { return dependent_; }

  /// True when every independent name is a single character, which makes the
  /// `u_xy` subscript shorthand unambiguous.
  bool single_letter_coordinates() const noexcept {
    return std::all_of(independent_.begin(), independent_.end(),
                       [](const std::string& s) { return s.size() == 1; });
  }

  std::ptrdiff_t independent_position(std::string_view name) const noexcept {
    auto it = std::find(independent_.begin(), independent_.end(), name);
    return it == independent_.end() ? -1 : it - independent_.begin();
  }
  std::ptrdiff_t dependent_position(std::string_view name) const noexcept {
    auto it = std::find(dependent_.begin(), dependent_.end(), name);
    return it == dependent_.end() ? -1 : it - dependent_.begin();
  }

  friend bool operator==(const BundleSignature&, const BundleSignature&) = default;

 private:
  std::vector<std::string> independent_;
  std::vector<std::string> dependent_;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

enum class Ordering { less, equal, greater };

/// Exponent p-tuple [j_1, ..., j_p] indexing a derivative.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t p) : exps_(p, 0) {}
  MultiIndex(std::initializer_list<unsigned> exps) : exps_(exps) {}
  explicit MultiIndex(std::vector<unsigned> exps) : exps_(std::move(exps)) {}

  static MultiIndex unit(std::size_t p, std::size_t position) {
    MultiIndex r(p);
    r.exps_.at(position) = 1;
    return r;
  }

  std::size_t size() const noexcept { return exps_.size(); }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<unsigned>& exponents() const noexcept { return exps_; }

  /// |J|
  unsigned order() const noexcept { return std::accumulate(exps_.begin(), exps_.end(), 0u); }
  bool is_zero() const noexcept { return order() == 0; }

  /// J,i: the index with entry i raised by one.
  MultiIndex increment(std::size_t position) const {
    if (position >= exps_.size()) {
      throw Error(ErrorKind::InvalidArgument, "coordinate position out of range");
    }
    MultiIndex r = *this;
    ++r.exps_[position];
    return r;
  }

  MultiIndex decrement(std::size_t position) const {
    if (position >= exps_.size() || exps_[position] == 0) {
      throw Error(ErrorKind::InvalidArgument, "cannot decrement multi-index at this position");
    }
    MultiIndex r = *this;
    --r.exps_[position];
    return r;
  }

  /// 1-based position of the first nonzero entry.
  std::size_t cls() const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (exps_[i] != 0) return i + 1;
    }
    throw Error(ErrorKind::InvalidArgument, "the zero multi-index has no class");
  }

  /// J! = j_1! j_2! ... j_p!
  template <class Integer = std::uint64_t>
  Integer factorial() const {
    Integer r = 1;
    for (unsigned e : exps_) {
      for (unsigned k = 2; k <= e; ++k) r *= k;
    }
    return r;
  }

  MultiIndex operator+(const MultiIndex& o) const {
    check_same_size(o);
    MultiIndex r = *this;
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] += o.exps_[i];
    return r;
  }

  /// True when every entry of `o` is ≤ the matching entry here.
  bool contains(const MultiIndex& o) const {
    check_same_size(o);
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (o.exps_[i] > exps_[i]) return false;
    }
    return true;
  }

  MultiIndex operator-(const MultiIndex& o) const {
    if (!contains(o)) throw Error(ErrorKind::InvalidArgument, "multi-index difference would be negative");
    MultiIndex r = *this;
    for (std::size_t i = 0; i < exps_.size(); ++i) r.exps_[i] -= o.exps_[i];
    return r;
  }

  /// Ranking used for symbol columns and echelon pivots: higher order is
  /// greater; within an order the higher class is greater; ties on class c
  /// recurse on J - e_c.
  friend Ordering compare(const MultiIndex& a, const MultiIndex& b) {
    a.check_same_size(b);
    unsigned oa = a.order();
    unsigned ob = b.order();
    if (oa != ob) return oa < ob ? Ordering::less : Ordering::greater;
    std::vector<unsigned> x = a.exps_;
    std::vector<unsigned> y = b.exps_;
    std::size_t i = 0;
    std::size_t k = 0;
    for (unsigned left = oa; left > 0; --left) {
      while (x[i] == 0) ++i;
      while (y[k] == 0) ++k;
      if (i != k) return i < k ? Ordering::less : Ordering::greater;
      --x[i];
      --y[k];
    }
    return Ordering::equal;
  }

  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    switch (compare(a, b)) {
      case Ordering::less: return std::strong_ordering::less;
      case Ordering::greater: return std::strong_ordering::greater;
      default: return std::strong_ordering::equal;
    }
  }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exps_ == b.exps_; }

 private:
  void check_same_size(const MultiIndex& o) const {
    if (o.exps_.size() != exps_.size()) {
      throw Error(ErrorKind::SignatureMismatch, "multi-indices of different length");
    }
  }

  std::vector<unsigned> exps_;
};

/// All multi-indices of length p and order exactly n, greatest first.
inline std::vector<MultiIndex> enumerate_multi_indices(std::size_t p, unsigned n) {
  if (p == 0) throw Error(ErrorKind::InvalidArgument, "p must be at least 1");
  std::vector<MultiIndex> out;
  std::vector<unsigned> cur(p, 0);
  // Compositions of n into p parts.
  auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
    if (pos + 1 == p) {
      cur[pos] = left;
      out.emplace_back(cur);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, n);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Number of coordinates on the n-th jet bundle: p + q * C(n+p, p).
inline std::uint64_t jet_dim(std::uint64_t p, std::uint64_t q, std::uint64_t n) {
  return p + q * binomial(n + p, p);
}

/// u^alpha_J. Order-0 jet variables are the dependent variables themselves.
struct JetVariable {
  std::size_t dependent = 0;
  MultiIndex index;

  unsigned order() const noexcept { return index.order(); }

  /// Column ranking: by multi-index first, then lower dependent index is
  /// greater.
  friend std::strong_ordering operator<=>(const JetVariable& a, const JetVariable& b) {
    if (auto c = a.index <=> b.index; c != 0) return c;
    return b.dependent <=> a.dependent;
  }
  friend bool operator==(const JetVariable&, const JetVariable&) = default;
};

/// All jet variables of order exactly n, greatest first.
inline std::vector<JetVariable> jet_variables_of_order(const BundleSignature& sig, unsigned n) {
  std::vector<JetVariable> out;
  for (const auto& J : enumerate_multi_indices(sig.p(), n)) {
    for (std::size_t a = 0; a < sig.q(); ++a) out.push_back({a, J});
  }
  return out;
}

/// All jet variables of order ≤ n, greatest first.
inline std::vector<JetVariable> jet_variables_up_to(const BundleSignature& sig, unsigned n) {
  std::vector<JetVariable> out;
  for (unsigned m = n + 1; m-- > 0;) {
    auto level = jet_variables_of_order(sig, m);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

/// Repeated-index notation, e.g. [1,2,0] over (x,y,z) -> "xyy".
inline std::string repeated_index(const MultiIndex& J, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < J.size(); ++i) {
    for (unsigned k = 0; k < J[i]; ++k) s += names.at(i);
  }
  return s;
}

/// Inverse of repeated_index for single-character coordinate names. Letters
/// may appear in any order.
inline MultiIndex parse_repeated_index(std::string_view letters, const BundleSignature& sig) {
  if (!sig.single_letter_coordinates()) {
    throw Error(ErrorKind::InvalidArgument, "repeated-index notation needs single-letter coordinates");
  }
  MultiIndex J(sig.p());
  for (char c : letters) {
    auto pos = sig.independent_position(std::string_view(&c, 1));
    if (pos < 0) {
      throw Error(ErrorKind::InvalidArgument, std::string("unknown coordinate '") + c + "'");
    }
    J = J.increment(static_cast<std::size_t>(pos));
  }
  return J;
}

inline std::string jet_name(const JetVariable& v, const BundleSignature& sig) {
  const std::string& u = sig.dependent().at(v.dependent);
  if (v.index.is_zero()) return u;
  if (sig.single_letter_coordinates()) return u + "_" + repeated_index(v.index, sig.independent());
  std::string s = "d(" + u;
  for (std::size_t i = 0; i < v.index.size(); ++i) {
    for (unsigned k = 0; k < v.index[i]; ++k) s += "," + sig.independent()[i];
  }
  return s + ")";
}

}  // namespace jets

#endif  // JETS_JETCORE_HPP
