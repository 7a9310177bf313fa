#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bbpa/system.hpp"
#include "bbpa/transducer.hpp"

namespace bbpa {

/// Per state q: eImage_q = {X | T_q(X) = ε} and the silently q-erasable
/// variables Eras_q ⊆ eImage_q (least set with X -τ-> γ, γ ∈ Eras_q*).
struct ErasableSets {
    std::vector<std::vector<bool>> erased_image;
    std::vector<std::vector<bool>> erasable;

    bool in_image(StateId q, Var a) const { return erased_image.at(index(q)).at(index(a)); }
    bool contains(StateId q, Var a) const { return erasable.at(index(q)).at(index(a)); }
    std::vector<Var> members(StateId q) const;
};

ErasableSets erasable_sets(const Transducer& t, const BpaSystem& system);

/// The deduction rules generating long moves α ⇒a_q β.
enum class DeductionRule {
    TauAxiom,     // α ⇒τ_q T_q(α)
    RuleAxiom,    // A -a-> δ gives A ⇒a_q T_q(δ)
    SilentStep,   // A -τ-> δ, T_q(A) = T_q(δ), δ ⇒a_q β gives A ⇒a_q β
    LeftContext,  // A ⇒a_q' β gives Aγ ⇒a_q β·T_q(γ), q' reached on γ
    Erasure,      // A ∈ Eras_q', T_q'(A) = ε, γ ⇒a_q β gives Aγ ⇒a_q β
};

std::string to_string(DeductionRule r);

struct MoveKey {
    ActionId label;
    VarString target;

    auto operator<=>(const MoveKey&) const = default;
    bool operator==(const MoveKey&) const = default;
};

/// How a basic move was first derived. Premises refer to other basic moves.
struct Derivation {
    DeductionRule rule;
    std::optional<std::size_t> grammar_rule; // for RuleAxiom and SilentStep
    std::size_t premise_source = 0;          // basic-string id
    StateId premise_state{0};
    std::optional<MoveKey> premise;
};

struct LongMove {
    VarString source;
    StateId state;
    ActionId label;
    VarString target;

    auto operator<=>(const LongMove&) const = default;
    bool operator==(const LongMove&) const = default;
};

/// Least fixpoint of the deduction rules restricted to basic strings: single
/// variables and suffixes of right-hand sides (ε included).
class LongMoveTable {
public:
    using MoveMap = std::map<MoveKey, Derivation>;

    const std::vector<VarString>& basic_strings() const { return basic_; }
    std::optional<std::size_t> basic_id(const VarString& s) const;
    const MoveMap& moves(std::size_t basic_id, StateId q) const { return moves_.at(basic_id * num_states_ + index(q)); }
    std::size_t num_states() const { return num_states_; }
    const ErasableSets& erasable() const { return erasable_; }

    std::vector<LongMove> all_moves() const;
    std::size_t move_count() const;

    /// Human-readable derivation, conclusion first.
    std::vector<std::string> derivation_chain(const BpaSystem& system, std::size_t basic_id, StateId q,
                                              const MoveKey& key) const;

private:
    friend LongMoveTable basic_moves(const Transducer& t, const BpaSystem& system);

    std::vector<VarString> basic_;
    std::map<VarString, std::size_t> ids_;
    std::size_t num_states_ = 0;
    std::vector<MoveMap> moves_;
    ErasableSets erasable_;
};

/// Worklist fixpoint of the deduction rules. Precondition: `t` is nfc
/// (throws NotNfcError otherwise). Every stored move is checked against the
/// target-shape invariant; a breach throws std::logic_error.
LongMoveTable basic_moves(const Transducer& t, const BpaSystem& system);

using MoveSet = std::map<ActionId, std::set<VarString>>;

/// All long moves of an arbitrary subject at q, assembled from basic moves
/// by peeling the leftmost variable (LeftContext plus the Erasure disjunct).
MoveSet long_moves_of(const LongMoveTable& table, const Transducer& t, const BpaSystem& system,
                      const VarString& subject, StateId q);

struct ConsistencyViolation {
    int condition;             // 1, 2 or 3
    StateId state;
    std::vector<Var> variables; // A, or (A, C) for condition 3
    VarString left;             // the compared subjects
    VarString right;
    ActionId action;
    bool witness_on_left;       // which side has the move
    VarString witness_target;
    std::vector<std::string> chain;
};

struct ConsistencyReport {
    std::vector<ConsistencyViolation> violations;
    bool consistent() const { return violations.empty(); }
};

/// Compares long-move sets at the pairs the consistency conditions name:
/// (A, ε) at the initial state when A is erased there, (A, T_q(A)) when
/// the output is non-empty, and (AC, C) when C is q-prime and A is erased at
/// the state reached on C. Throws NotNfcError if `t` is not nfc.
ConsistencyReport check_consistency(const Transducer& t, const BpaSystem& system);

/// {"verdict": ..., "violations": [...]}
std::string report_to_json(const BpaSystem& system, const Transducer& t, const ConsistencyReport& report);

/// A transducer that passed check_consistency against a system.
class CertifiedTransducer {
public:
    /// nullopt when inconsistent; `report` receives the check result.
    static std::optional<CertifiedTransducer> certify(const Transducer& t, const BpaSystem& system,
                                                      ConsistencyReport* report = nullptr);

    const Transducer& transducer() const { return transducer_; }

private:
    explicit CertifiedTransducer(Transducer t) : transducer_(std::move(t)) {}
    Transducer transducer_;
};

enum class Decision { Proved, Unknown };

/// Proved iff both strings have the same normal form; Proved implies the
/// strings are branching bisimilar.
Decision decide(const CertifiedTransducer& ct, const VarString& a, const VarString& b);

/// Certifies first; throws NotConsistentError when the check fails.
Decision decide(const Transducer& t, const BpaSystem& system, const VarString& a, const VarString& b);

} // namespace bbpa
