#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bbpa/consistency.hpp"
#include "bbpa/game.hpp"
#include "bbpa/norm.hpp"

namespace bbpa {

struct SynthesisOptions {
    GameBounds bounds;
    std::size_t candidate_cap = 20000; // enumerated outputs per table entry
    std::size_t node_budget = 200000;  // search nodes plus game queries
};

/// One table decision of the search.
struct TraceEntry {
    enum class Kind { Redundant, Chosen, Forced };

    StateId state;
    Var variable;
    Kind kind;
    VarString output;
    std::vector<std::pair<VarString, std::string>> pruned; // alternative, reason
};

/// A synthesized transducer. State labels are the redundancy sets.
struct CanonicalCandidate {
    Transducer transducer;
    std::vector<TraceEntry> trace; // in (state, variable) order
};

/// Searches for the canonical transducer of a normed system.
///
/// States are redundancy sets discovered from the initial set by reading
/// single variables; membership is judged by the bounded game in the
/// relative system of the current set. Outputs are tried longest first,
/// then by rtl_lex_less, restricted to redundancy-free strings reaching
/// the right state with the variable's visible norm. A complete table is
/// kept only if it is nfc and consistent; otherwise the search backtracks.
///
/// Throws UnnormedError for an unnormed system and SearchExhausted when
/// the caps are hit or no table survives.
CanonicalCandidate synthesize(const BpaSystem& system, const SynthesisOptions& options = {});

/// One line per decision: state, label, variable, output, pruned alternatives.
std::string format_trace(const BpaSystem& system, const CanonicalCandidate& candidate);

/// Label of the state reached by reading `gamma` from the initial state.
/// Throws Error if that state is unlabelled.
std::vector<Var> redundant_set(const CanonicalCandidate& candidate, const VarString& gamma);

struct CcNormCaps {
    std::size_t max_length = 0;      // 0: max(|α|, ‖α‖)
    std::size_t max_states = 200000; // distinct strings visited
};

struct CcNorm {
    std::uint64_t value = 0;
    bool exact = false;
};

/// Fewest class-changing steps from α to a string translating to ε, in the
/// relative system of `context`. Classes are read off the candidate state
/// labelled with `context` (Error if there is none). Edges cost 1 iff the
/// translations of source and target differ. The result never exceeds ‖α‖.
CcNorm cc_norm(const CanonicalCandidate& candidate, const BpaSystem& system, const VarString& alpha,
               const RedundancyContext& context, const CcNormCaps& caps = {});

struct CanonicityViolation {
    enum class Clause { Nfc, Consistency, Equivalence, RedundancyFree, LongestLexSmallest };

    Clause clause;
    std::string detail;
};

std::string to_string(CanonicityViolation::Clause c);

struct CanonicityReport {
    std::vector<CanonicityViolation> violations;
    bool no_violation_found() const { return violations.empty(); }
};

/// Best-effort audit. Always checks nfc, consistency, redundancy-freeness of
/// each output (δXβ is flagged when X is erased at the state reached on β)
/// and the output length bound. Each fact (α, β) must be reflected
/// (T(α) = T(β)); a redundancy-free side of a reflected fact that is
/// longer, or as long and rtl_lex_less, than the common normal form is a
/// longest/lex-smallest violation.
CanonicityReport verify_canonicity(const Transducer& candidate, const BpaSystem& system,
                                   const std::vector<std::pair<VarString, VarString>>& facts);

/// T(αγ) == T_q(α)·T(γ) with q the state reached on γ.
bool composition_check(const Transducer& t, const VarString& alpha, const VarString& gamma);

} // namespace bbpa
