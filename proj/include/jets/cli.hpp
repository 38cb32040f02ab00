#ifndef JETS_CLI_HPP
#define JETS_CLI_HPP

// Subcommand dispatch for the `jets` executable. Exit status: 0 success,
// 1 domain error, 2 usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <jets/completion.hpp>
#include <jets/error.hpp>
#include <jets/parser.hpp>
#include <jets/printer.hpp>
#include <jets/series.hpp>
#include <jets/symbol.hpp>
#include <jets/system.hpp>

namespace jets::cli {

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

inline std::string matrix_text(const RationalMatrix& a) {
  std::string out = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < a[i].size(); ++j) out += (j ? ", " : "") + a[i][j].get_str();
    out += "]";
  }
  return out + "]";
}

inline Json matrix_json(const RationalMatrix& a) {
  Json m = Json::array();
  for (const auto& row : a) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(e.get_str());
    m.push_back(std::move(r));
  }
  return m;
}

inline Json equations_json(const std::vector<DiffPolynomial>& eqs, const BundleSignature& sig) {
  Json a = Json::array();
  for (const auto& f : eqs) a.push_back(equation_json(f, sig));
  return a;
}

inline void print_lines(std::ostream& out, const std::vector<DiffPolynomial>& eqs, const BundleSignature& sig,
                        const std::string& indent = "") {
  for (const auto& f : eqs) out << indent << format_equation(f, sig) << "\n";
}

inline Json verdict_json(const SymbolVerdict& v) {
  return Json{{"involutive", v.involutive},
              {"sum_k_beta", v.sum_k_beta},
              {"rank_prolonged_symbol", v.rank_prolonged_symbol},
              {"delta_suspect", v.delta_suspect},
              {"beta", v.signature.beta},
              {"generic", v.signature.generic}};
}

/// "y,x" or "1,0": the new coordinate k is the old coordinate perm[k].
inline std::vector<std::size_t> parse_permutation(const std::string& text, const BundleSignature& sig) {
  std::vector<std::size_t> perm;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw UsageError("--coords: empty entry");
    item = item.substr(first, last - first + 1);
    auto pos = sig.independent_position(item);
    if (pos < 0) {
      if (item.find_first_not_of("0123456789") != std::string::npos || item.size() > 6) {
        throw UsageError("--coords: unknown coordinate '" + item + "'");
      }
      pos = std::stol(item);
    }
    perm.push_back(static_cast<std::size_t>(pos));
  }
  std::vector<bool> seen(sig.p(), false);
  for (std::size_t k : perm) {
    if (k >= sig.p() || seen[k]) throw UsageError("--coords: not a permutation of the coordinates");
    seen[k] = true;
  }
  if (perm.size() != sig.p()) throw UsageError("--coords: not a permutation of the coordinates");
  return perm;
}

inline std::uint64_t default_seed() {
  const char* env = std::getenv("JETS_SEED");
  if (!env || !*env) return 1;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("JETS_SEED is not a non-negative integer: '") + env + "'");
  }
}

inline JetAssignment jet_assignment(const std::string& text, const BundleSignature& sig, const char* flag) {
  JetAssignment out;
  for (const auto& [g, value] : parse_assignments(text, sig)) {
    if (!g.is_jet()) throw Error(ErrorKind::InvalidArgument, std::string(flag) + " assigns jet variables only");
    out.emplace(g.jet_variable(), value);
  }
  return out;
}

inline std::vector<Rational> point_assignment(const std::string& text, const BundleSignature& sig) {
  auto values = parse_assignments(text, sig);
  std::vector<Rational> point(sig.p());
  for (std::size_t i = 0; i < sig.p(); ++i) {
    auto it = values.find(Generator::coordinate(i));
    if (it == values.end()) {
      throw Error(ErrorKind::InvalidArgument, "--point has no value for '" + sig.independent()[i] + "'");
    }
    point[i] = it->second;
    values.erase(it);
  }
  if (!values.empty()) throw Error(ErrorKind::InvalidArgument, "--point assigns independent variables only");
  return point;
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jet-bundle tools for systems of polynomial PDEs", "jets"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "structured output");

  std::string file;
  auto add_file = [&file](CLI::App* sub) { sub->add_option("FILE", file, "system file ('-' for stdin)")->required(); };

  auto* check = app.add_subcommand("check", "parse and report orders and dimensions");
  add_file(check);

  unsigned k = 1;
  auto* prolong_cmd = app.add_subcommand("prolong", "prolong the system k times");
  prolong_cmd->add_option("-k", k, "number of prolongations")->required();
  add_file(prolong_cmd);

  unsigned j = 1;
  bool linear = false;
  bool syntactic = false;
  auto* project_cmd = app.add_subcommand("project", "project the system j orders down");
  project_cmd->add_option("-j", j, "number of orders to drop")->required();
  auto* lin_flag = project_cmd->add_flag("--linear", linear, "row-reduce before projecting");
  project_cmd->add_flag("--syntactic", syntactic, "keep equations of low enough order")->excludes(lin_flag);
  add_file(project_cmd);

  auto* symbol_cmd = app.add_subcommand("symbol", "symbol matrix and class counts");
  add_file(symbol_cmd);

  auto* involutive_cmd = app.add_subcommand("involutive", "involution test");
  add_file(involutive_cmd);

  unsigned max_iter = 10;
  std::string coords;
  std::uint64_t random_seed = 0;
  bool minimize = false;
  auto* complete_cmd = app.add_subcommand("complete", "complete to an involutive system");
  complete_cmd->add_option("--max-iter", max_iter, "prolongation and projection rounds")->check(CLI::PositiveNumber);
  auto* coords_opt = complete_cmd->add_option("--coords", coords, "coordinate permutation, e.g. y,x");
  complete_cmd->add_option("--random-coords", random_seed, "seeded random coordinate changes")->excludes(coords_opt);
  complete_cmd->add_flag("--minimize-order", minimize, "present the result at the lowest involutive order");
  add_file(complete_cmd);

  std::string point_text;
  unsigned truncation = 0;
  std::string set_text;
  std::string seed_text;
  bool list_parametric = false;
  auto* solve_cmd = app.add_subcommand("solve", "formal power series solution");
  solve_cmd->add_option("--point", point_text, "expansion point, e.g. x=0,t=0")->required();
  solve_cmd->add_option("--order", truncation, "truncation order")->required();
  solve_cmd->add_option("--set", set_text, "parametric values, e.g. u_xx=2");
  solve_cmd->add_option("--seed-jet", seed_text, "complete jet up to the system order (nonlinear systems)");
  solve_cmd->add_flag("--list-parametric", list_parametric, "list principal and parametric coefficients");
  add_file(solve_cmd);

  auto* info_cmd = app.add_subcommand("info", "jet bundle coordinates");
  add_file(info_cmd);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  Json report{{"format_version", kFormatVersion}};
  std::ostringstream text;
  try {
    const SystemDocument doc = parse_document(detail::read_file(file));
    const DiffSystem& sys = doc.system;
    const BundleSignature& sig = sys.signature();

    if (check->parsed()) {
      const auto rank = rank_of(sys);
      const auto dim = dim_of(sys);
      const auto jd = jet_dim(sig.p(), sig.q(), sys.order());
      report["command"] = "check";
      report["p"] = sig.p();
      report["q"] = sig.q();
      report["order"] = sys.order();
      report["equations"] = sys.size();
      report["linear"] = sys.is_linear();
      report["jet_dim"] = jd;
      report["rank"] = rank;
      report["dim"] = dim;
      report["system"] = to_json(sys);
      Json locs = Json::array();
      for (const auto& l : doc.locations) locs.push_back(Json{{"line", l.line}, {"column", l.column}});
      report["locations"] = std::move(locs);
      text << "independent: " << sig.p() << ", dependent: " << sig.q() << ", order: " << sys.order() << "\n"
           << "equations: " << sys.size() << (sys.is_linear() ? " (linear)" : " (nonlinear)") << "\n"
           << "jet_dim: " << jd << ", rank: " << rank << ", dim: " << dim << "\n";
      for (std::size_t i = 0; i < sys.size(); ++i) {
        const auto& f = sys.equations()[i];
        text << "  line " << doc.locations[i].line << ": " << format_equation(f, sig) << "   (order "
             << f.order().value_or(0) << ")\n";
      }
    } else if (prolong_cmd->parsed()) {
      DiffSystem r = prolong(sys, k);
      report["command"] = "prolong";
      report["k"] = k;
      report["system"] = to_json(r);
      text << format_equations(r) << "\n";
    } else if (project_cmd->parsed()) {
      const bool use_linear = linear || (!syntactic && sys.is_linear());
      DiffSystem r = use_linear ? project_linear(sys, j) : syntactic_project(sys, j);
      report["command"] = "project";
      report["j"] = j;
      report["mode"] = use_linear ? "linear" : "syntactic";
      report["system"] = to_json(r);
      text << format_equations(r) << "\n";
    } else if (symbol_cmd->parsed()) {
      SymbolMatrix sm = symbol_of(sys);
      SymbolVerdict v = symbol_involutive(sys);
      report["command"] = "symbol";
      Json cols = Json::array();
      for (const auto& c : sm.columns) cols.push_back(to_json(c, sig));
      report["columns"] = std::move(cols);
      Json rows = Json::array();
      text << "symbol of order " << sm.order << ", rank " << sm.rank() << (sm.generic ? " (generic jets)" : "")
           << "\n";
      for (std::size_t t = 0; t < sm.echelon.rows.size(); ++t) {
        const JetVariable& pv = sm.columns[sm.echelon.pivots[t]];
        DiffPolynomial form = symbol_form(sm.echelon.rows[t], sm.columns);
        rows.push_back(Json{{"pivot", to_json(pv, sig)}, {"class", pivot_class(pv)}, {"terms", to_json(form, sig)}});
        text << "  class " << pivot_class(pv) << ": " << format_polynomial(form, sig) << "\n";
      }
      report["echelon"] = std::move(rows);
      report["verdict"] = detail::verdict_json(v);
      text << "beta:";
      for (auto b : v.signature.beta) text << " " << b;
      text << "\nsum_k_beta: " << v.sum_k_beta << ", rank_prolonged_symbol: " << v.rank_prolonged_symbol
           << ", involutive: " << detail::bool_text(v.involutive) << "\n";
    } else if (involutive_cmd->parsed()) {
      InvolutionReport r = is_involutive(sys);
      report["command"] = "involutive";
      report["involutive"] = r.involutive;
      report["symbol"] = detail::verdict_json(r.symbol);
      report["projection_equal"] = r.projection_equal;
      report["integrability_conditions"] = detail::equations_json(r.integrability_conditions, sig);
      text << "involutive: " << detail::bool_text(r.involutive) << ", sum_k_beta: " << r.symbol.sum_k_beta
           << ", rank_prolonged_symbol: " << r.symbol.rank_prolonged_symbol << "\n"
           << "symbol involutive: " << detail::bool_text(r.symbol.involutive) << "\n";
      if (r.integrability_conditions.empty()) {
        text << "integrability conditions: none\n";
      } else {
        text << "integrability conditions:\n";
        detail::print_lines(text, r.integrability_conditions, sig, "  ");
      }
    } else if (complete_cmd->parsed()) {
      CompletionOptions opts;
      opts.max_iterations = max_iter;
      opts.minimize_order = minimize;
      opts.seed = detail::default_seed();
      DiffSystem start = sys;
      std::optional<RationalMatrix> initial;
      if (!coords.empty()) {
        auto perm = detail::parse_permutation(coords, sig);
        std::vector<std::string> names;
        for (auto idx : perm) names.push_back(sig.independent()[idx]);
        initial = permutation_matrix(perm);
        start = change_coordinates(sys, *initial, names);
        opts.delta = DeltaStrategy::none;
      } else if (complete_cmd->count("--random-coords")) {
        opts.delta = DeltaStrategy::random_linear;
        opts.seed = random_seed;
      }
      report["command"] = "complete";
      Json steps = Json::array();
      auto emit_trace = [&](const CompletionTrace& trace, const BundleSignature& s) {
        std::size_t n = 0;
        for (const auto& st : trace.steps) {
          Json o{{"action", to_string(st.action)},
                 {"order_before", st.order_before},
                 {"order_after", st.order_after},
                 {"rank_before", st.rank_before},
                 {"rank_after", st.rank_after}};
          text << "step " << ++n << ": " << to_string(st.action) << ", order " << st.order_before << " -> "
               << st.order_after << ", rank " << st.rank_before << " -> " << st.rank_after << "\n";
          if (!st.new_conditions.empty()) {
            o["new_conditions"] = detail::equations_json(st.new_conditions, s);
            detail::print_lines(text, st.new_conditions, s, "  new: ");
          }
          if (st.transform) {
            o["transform"] = detail::matrix_json(*st.transform);
            text << "  x' = A x with A = " << detail::matrix_text(*st.transform) << "\n";
          }
          steps.push_back(std::move(o));
        }
      };
      try {
        CompletionResult r = complete(start, opts);
        RationalMatrix total = initial ? multiply(r.transform, *initial) : r.transform;
        if (initial) text << "initial permutation: " << detail::matrix_text(*initial) << "\n";
        emit_trace(r.trace, start.signature());
        InvolutionReport check_r = is_involutive(r.result);
        report["trace"] = std::move(steps);
        report["transform"] = detail::matrix_json(total);
        report["involutive"] = check_r.involutive;
        report["system"] = to_json(r.result);
        text << "result (order " << r.result.order() << ", " << r.result.size()
             << (r.result.size() == 1 ? " equation" : " equations")
             << ", involutive: " << detail::bool_text(check_r.involutive) << "):\n";
        detail::print_lines(text, r.result.equations(), r.result.signature(), "  ");
      } catch (const CompletionError& e) {
        emit_trace(e.trace(), start.signature());
        report["trace"] = std::move(steps);
        err << text.str();
        throw;
      }
    } else if (solve_cmd->parsed()) {
      auto point = detail::point_assignment(point_text, sig);
      report["command"] = "solve";
      if (list_parametric) {
        auto parts = partition_derivatives(sys, point, truncation);
        Json orders = Json::array();
        for (std::size_t m = 0; m < parts.size(); ++m) {
          Json pr = Json::array();
          Json pa = Json::array();
          text << "order " << m << ":\n  principal:";
          for (const auto& v : parts[m].principal) {
            pr.push_back(jet_name(v, sig));
            text << " " << jet_name(v, sig);
          }
          text << "\n  parametric:";
          for (const auto& v : parts[m].parametric) {
            pa.push_back(jet_name(v, sig));
            text << " " << jet_name(v, sig);
          }
          text << "\n";
          orders.push_back(Json{{"order", m}, {"principal", std::move(pr)}, {"parametric", std::move(pa)}});
        }
        report["partition"] = std::move(orders);
      } else {
        JetAssignment given;
        if (!set_text.empty()) given = detail::jet_assignment(set_text, sig, "--set");
        std::optional<JetAssignment> seed;
        if (!seed_text.empty()) seed = detail::jet_assignment(seed_text, sig, "--seed-jet");
        SeriesSolution sol = solve_series(sys, point, truncation, given, seed);
        PolynomialFunction poly = to_polynomial(sol);
        auto residuals = residual_order(sys, sol);
        Json coeffs = Json::array();
        text << "coefficients (derivative values at the point):\n";
        for (const auto& v : jet_variables_up_to(sig, truncation)) {
          const Rational c = sol.coefficient(v);
          coeffs.push_back(Json{{"jet", to_json(v, sig)}, {"value", c.get_str()}});
          text << "  " << jet_name(v, sig) << " = " << c.get_str() << "\n";
        }
        Json series = Json::array();
        for (std::size_t a = 0; a < sig.q(); ++a) {
          series.push_back(Json{{"dependent", sig.dependent()[a]},
                                {"text", format_polynomial(poly.components[a], sig)},
                                {"terms", to_json(poly.components[a], sig)}});
          text << "series: " << sig.dependent()[a] << " = " << format_polynomial(poly.components[a], sig) << "\n";
        }
        Json res = Json::array();
        text << "residual orders:";
        for (const auto& r : residuals) {
          if (r) {
            res.push_back(*r);
            text << " " << *r;
          } else {
            res.push_back("exact");
            text << " exact";
          }
        }
        text << "\n";
        report["truncation"] = truncation;
        report["coefficients"] = std::move(coeffs);
        report["series"] = std::move(series);
        report["residual_orders"] = std::move(res);
      }
    } else if (info_cmd->parsed()) {
      report["command"] = "info";
      report["independent"] = sig.independent();
      report["dependent"] = sig.dependent();
      report["order"] = sys.order();
      Json orders = Json::array();
      text << "coordinates: " << sig.p() << " independent, " << sig.q() << " dependent\n";
      for (unsigned m = 0; m <= sys.order(); ++m) {
        Json indices = Json::array();
        Json names = Json::array();
        text << "order " << m << ":";
        for (const auto& J : enumerate_multi_indices(sig.p(), m)) indices.push_back(to_json(J));
        for (const auto& v : jet_variables_of_order(sig, m)) {
          names.push_back(jet_name(v, sig));
          text << " " << jet_name(v, sig);
        }
        text << "\n";
        orders.push_back(Json{{"order", m},
                              {"jet_dim", jet_dim(sig.p(), sig.q(), m)},
                              {"multi_indices", std::move(indices)},
                              {"jets", std::move(names)}});
      }
      text << "jet_dim: " << jet_dim(sig.p(), sig.q(), sys.order()) << "\n";
      report["levels"] = std::move(orders);
    }
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    Json ej{{"category", std::string(e.category())}, {"message", e.what()}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
      ej["message"] = pe->message();
      ej["line"] = pe->line();
      ej["column"] = pe->column();
    }
    if (const auto* ie = dynamic_cast<const InconsistentOrderError*>(&e)) ej["order"] = ie->order();
    if (json) {
      Json o{{"format_version", kFormatVersion}, {"error", std::move(ej)}};
      if (report.contains("trace")) o["trace"] = report["trace"];
      out << o.dump(2) << "\n";
    }
    err << "error[" << e.category() << "]: " << e.what() << "\n";
    return 1;
  }

  if (json) {
    out << report.dump(2) << "\n";
  } else {
    out << text.str();
  }
  return 0;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace jets::cli

#endif  // JETS_CLI_HPP
