#ifndef JETS_PRINTER_HPP
#define JETS_PRINTER_HPP

// Text and JSON renderings of polynomials and systems. Text output parses
// back to the same system.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include <jets/diffpoly.hpp>
#include <jets/jetcore.hpp>
#include <jets/system.hpp>

namespace jets {

inline constexpr int kFormatVersion = 1;

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline std::string generator_name(const Generator& g, const BundleSignature& sig) {
  if (g.is_coordinate()) return sig.independent().at(g.position());
  return jet_name(g.jet_variable(), sig);
}

/// Coordinates first (in declaration order), then jets greatest first.
inline std::string format_monomial(const Monomial& m, const BundleSignature& sig) {
  std::vector<std::string> parts;
  auto emit = [&](const Generator& g, unsigned e) {
    std::string s = generator_name(g, sig);
    if (e != 1) s += "^" + std::to_string(e);
    parts.push_back(std::move(s));
  };
  for (const auto& [g, e] : m.factors()) {
    if (g.is_coordinate()) emit(g, e);
  }
  for (const auto& [g, e] : m.factors()) {
    if (g.is_jet()) emit(g, e);
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
  return out;
}

inline std::string format_polynomial(const DiffPolynomial& f, const BundleSignature& sig) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    const bool negative = sgn(c) < 0;
    const Rational mag = abs(c);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += format_monomial(m, sig);
    } else {
      out += to_string(mag) + "*" + format_monomial(m, sig);
    }
  }
  return out;
}

inline std::string format_equation(const DiffPolynomial& f, const BundleSignature& sig) {
  return format_polynomial(f, sig) + " = 0";
}

/// One "F = 0" line per equation, no trailing newline.
inline std::string format_equations(const DiffSystem& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += "\n";
    out += format_equation(s.equations()[i], s.signature());
  }
  return out;
}

/// Complete `.pde` document; the order directive is always written.
inline std::string print_document(const DiffSystem& s) {
  const auto& sig = s.signature();
  std::string out = "independent";
  for (const auto& n : sig.independent()) out += " " + n;
  out += ";\ndependent";
  for (const auto& n : sig.dependent()) out += " " + n;
  out += ";\norder " + std::to_string(s.order()) + ";\n";
  for (const auto& f : s.equations()) out += "eq " + format_equation(f, sig) + ";\n";
  return out;
}

// ---------------------------------------------------------------------------
// JSON

using Json = nlohmann::ordered_json;

inline Json to_json(const MultiIndex& J) {
  Json a = Json::array();
  for (unsigned e : J.exponents()) a.push_back(e);
  return a;
}

inline Json to_json(const JetVariable& v, const BundleSignature& sig) {
  return Json{{"dependent", v.dependent}, {"name", jet_name(v, sig)}, {"index", to_json(v.index)}};
}

/// Term list: each term has a rational coefficient (as a string), the
/// exponent array of the coordinates and the jet factors with powers.
inline Json to_json(const DiffPolynomial& f, const BundleSignature& sig) {
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) {
    std::vector<unsigned> x(sig.p(), 0);
    Json jets = Json::array();
    for (const auto& [g, e] : m.factors()) {
      if (g.is_coordinate()) {
        x[g.position()] = e;
      } else {
        Json j = to_json(g.jet_variable(), sig);
        j["power"] = e;
        jets.push_back(std::move(j));
      }
    }
    terms.push_back(Json{{"coefficient", to_string(c)}, {"x", x}, {"jets", std::move(jets)}});
  }
  return terms;
}

inline Json equation_json(const DiffPolynomial& f, const BundleSignature& sig) {
  Json o{{"text", format_equation(f, sig)}};
  if (auto n = f.order()) {
    o["order"] = *n;
  } else {
    o["order"] = nullptr;
  }
  o["linear"] = f.is_linear();
  o["terms"] = to_json(f, sig);
  return o;
}

inline Json to_json(const DiffSystem& s) {
  Json eqs = Json::array();
  for (const auto& f : s.equations()) eqs.push_back(equation_json(f, s.signature()));
  return Json{{"independent", s.signature().independent()},
              {"dependent", s.signature().dependent()},
              {"order", s.order()},
              {"equations", std::move(eqs)}};
}

/// Top-level structured document for a single system.
inline Json structured_document(const DiffSystem& s) {
  Json o{{"format_version", kFormatVersion}};
  o["system"] = to_json(s);
  return o;
}

inline std::string print_system(const DiffSystem& s, bool structured = false) {
  return structured ? structured_document(s).dump(2) : format_equations(s);
}

}  // namespace jets

#endif  // JETS_PRINTER_HPP
