#ifndef JETS_COMPLETION_HPP
#define JETS_COMPLETION_HPP

// Involution test and the Cartan-Kuranishi completion loop for linear
// systems.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <jets/error.hpp>
#include <jets/symbol.hpp>
#include <jets/system.hpp>

namespace jets {

struct InvolutionReport {
  bool involutive = false;
  SymbolVerdict symbol;
  /// I^(1)_1 = I
  bool projection_equal = false;
  std::vector<DiffPolynomial> integrability_conditions;
};

/// A system is involutive iff its symbol is involutive and projecting its
/// first prolongation gives back the system.
inline InvolutionReport is_involutive(const DiffSystem& s) {
  if (!s.is_linear()) {
    throw Error(ErrorKind::NonLinearSystem,
                "involution test needs a linear system; use the symbol diagnostics for nonlinear input");
  }
  InvolutionReport r;
  r.symbol = symbol_involutive(s);
  r.integrability_conditions = integrability_conditions(s);
  r.projection_equal = r.integrability_conditions.empty();
  r.involutive = r.symbol.involutive && r.projection_equal;
  return r;
}

struct CompletionStep {
  enum class Action { prolonged, projected, coordinate_changed };

  Action action = Action::prolonged;
  unsigned order_before = 0;
  unsigned order_after = 0;
  std::size_t rank_before = 0;
  std::size_t rank_after = 0;
  std::vector<DiffPolynomial> new_conditions;
  std::optional<RationalMatrix> transform;
  std::optional<DiffSystem> system_after;
};

inline const char* to_string(CompletionStep::Action a) {
  switch (a) {
    case CompletionStep::Action::prolonged: return "prolonged";
    case CompletionStep::Action::projected: return "projected";
    case CompletionStep::Action::coordinate_changed: return "coordinate-changed";
  }
  return "?";
}

struct CompletionTrace {
  std::vector<CompletionStep> steps;

  std::size_t count(CompletionStep::Action a) const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.action == a;
    return n;
  }
};

struct CompletionOptions {
  unsigned max_iterations = 10;  // prolongation and projection rounds combined
  DeltaStrategy delta = DeltaStrategy::automatic;
  std::uint64_t seed = 1;
  bool minimize_order = false;
};

struct CompletionResult {
  DiffSystem result;
  CompletionTrace trace;
  /// Product of every coordinate change applied: x' = transform * x.
  RationalMatrix transform;
};

/// Completion failure that carries the trace recorded so far.
class CompletionError : public Error {
 public:
  CompletionError(ErrorKind kind, const std::string& what, CompletionTrace trace)
      : Error(kind, what), trace_(std::move(trace)) {}
  const CompletionTrace& trace() const noexcept { return trace_; }

 private:
  CompletionTrace trace_;
};

/// Prolongs while the symbol is not involutive, then projects while
/// I != I^(1)_1, until both hold. Before a symbol verdict triggers a
/// prolongation, other coordinate frames are tried per `opts.delta`; a frame
/// is adopted only if it makes the symbol involutive.
inline CompletionResult complete(const DiffSystem& input, const CompletionOptions& opts = {}) {
  if (!input.is_linear()) throw Error(ErrorKind::NonLinearSystem, "completion needs a linear system");
  if (opts.max_iterations < 1) throw Error(ErrorKind::InvalidArgument, "max_iterations must be at least 1");

  const std::size_t p = input.signature().p();
  CompletionResult out{input, {}, identity_matrix(p)};
  DiffSystem& sys = out.result;
  unsigned rounds = 0;
  std::uint64_t retries = 0;

  auto record = [&](CompletionStep::Action action, const DiffSystem& before, const DiffSystem& after,
                    std::vector<DiffPolynomial> conditions = {}, std::optional<RationalMatrix> transform = {}) {
    CompletionStep step;
    step.action = action;
    step.order_before = before.order();
    step.order_after = after.order();
    step.rank_before = rank_of(before);
    step.rank_after = rank_of(after);
    step.new_conditions = std::move(conditions);
    step.transform = std::move(transform);
    step.system_after = after;
    out.trace.steps.push_back(std::move(step));
  };
  auto guard = [&](bool in_symbol_loop) {
    if (++rounds <= opts.max_iterations) return;
    const bool tried_random =
        opts.delta == DeltaStrategy::random_linear || opts.delta == DeltaStrategy::automatic || p > 4;
    if (in_symbol_loop && (opts.delta == DeltaStrategy::none || !tried_random)) {
      throw CompletionError(ErrorKind::DeltaSingularUnresolved,
                            "symbol never became involutive within " + std::to_string(opts.max_iterations) +
                                " rounds; the coordinates may be delta-singular (try random coordinates)",
                            out.trace);
    }
    throw CompletionError(ErrorKind::MaxIterationsExceeded,
                          "completion did not finish within " + std::to_string(opts.max_iterations) + " rounds",
                          out.trace);
  };

  while (true) {
    while (true) {
      SymbolVerdict v = symbol_involutive(sys);
      if (v.involutive) break;
      if (opts.delta != DeltaStrategy::none) {
        auto r = delta_retry(sys, opts.delta, opts.seed + retries++);
        if (r.verdict.involutive) {
          DiffSystem before = sys;
          sys = std::move(r.system);
          out.transform = multiply(r.transform, out.transform);
          record(CompletionStep::Action::coordinate_changed, before, sys, {}, r.transform);
          continue;
        }
      }
      guard(true);
      DiffSystem next = prolong(sys, 1);
      record(CompletionStep::Action::prolonged, sys, next);
      sys = std::move(next);
    }
    bool projected = false;
    while (true) {
      DiffSystem next = project_linear(prolong(sys, 1), 1);
      auto conditions = remainders_modulo(next.equations(), sys.equations());
      if (conditions.empty()) break;
      guard(false);
      record(CompletionStep::Action::projected, sys, next, std::move(conditions));
      sys = std::move(next);
      projected = true;
    }
    if (!projected) break;
  }

  if (opts.minimize_order) {
    // Lowest order first: the largest projection that still presents an
    // involutive system with the same prolongation.
    for (unsigned j = sys.order(); j >= 1; --j) {
      std::optional<DiffSystem> lower;
      try {
        lower = syntactic_project(sys, j);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::EmptyProjection) throw;
        continue;
      }
      if (!equals_generic(prolong(*lower, j), sys) || !is_involutive(*lower).involutive) continue;
      DiffSystem before = sys;
      record(CompletionStep::Action::projected, before, *lower);
      sys = *std::move(lower);
      break;
    }
  }
  return out;
}

/// Checks I^(k+1)_1 = I^(k) for k = 0..depth.
inline bool formally_integrable_up_to(const DiffSystem& s, unsigned depth) {
  if (!s.is_linear()) throw Error(ErrorKind::NonLinearSystem, "formal integrability check needs a linear system");
  for (unsigned k = 0; k <= depth; ++k) {
    DiffSystem prolonged = prolong(s, k);
    if (!equals_generic(project_linear(prolong(s, k + 1), 1), prolonged)) return false;
  }
  return true;
}

/// True when every equation of `eqs` lies in the generic row space of `base`.
inline bool in_row_space(const std::vector<DiffPolynomial>& eqs, const DiffSystem& base) {
  return remainders_modulo(eqs, base.equations()).empty();
}

}  // namespace jets

#endif  // JETS_COMPLETION_HPP
