#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bbpa/system.hpp"

namespace bbpa {

/// One table entry: reading a variable moves to `target` and writes `output`.
struct Step {
    StateId target;
    VarString output;

    bool operator==(const Step&) const = default;
};

struct TranslationResult {
    StateId end_state;
    VarString output;

    bool operator==(const TranslationResult&) const = default;
};

/// Deterministic transducer reading and writing right to left. The table is
/// total on states × variables. A state may carry a label (a set of
/// variables); labels are carried, not interpreted.
class Transducer {
public:
    using Label = std::optional<std::vector<Var>>;

    /// `delta[q][A]` is the step for state q and variable A. Throws Error if
    /// the table is not total or refers to unknown states/variables.
    Transducer(std::size_t num_variables, std::vector<Label> labels, std::vector<std::vector<Step>> delta,
               StateId initial);

    /// Single state, every variable written unchanged.
    static Transducer identity(std::size_t num_variables);

    std::size_t num_states() const { return delta_.size(); }
    std::size_t num_variables() const { return num_variables_; }
    StateId initial() const { return initial_; }
    const Label& label(StateId q) const { return labels_.at(index(q)); }
    const Step& step(StateId q, Var a) const { return delta_.at(index(q)).at(index(a)); }
    bool has_state(StateId q) const { return index(q) < delta_.size(); }

    /// Sum of output lengths plus the number of entries.
    std::size_t size() const;

    bool operator==(const Transducer&) const = default;

private:
    std::size_t num_variables_;
    std::vector<Label> labels_;
    std::vector<std::vector<Step>> delta_;
    StateId initial_;
};

/// Consumes `s` right to left from `q`. Throws Error on an unknown state.
TranslationResult translate(const Transducer& t, StateId q, const VarString& s);

/// State reached from `q` after reading `s` (right to left).
StateId reach(const Transducer& t, StateId q, const VarString& s);

inline VarString translate_output(const Transducer& t, const VarString& s)
{
    return translate(t, t.initial(), s).output;
}

bool is_q_prime(const Transducer& t, StateId q, Var a);

/// Every symbol, read right to left from q, is written unchanged.
bool is_normal_form(const Transducer& t, StateId q, const VarString& s);

struct NfcViolation {
    StateId state;
    Var input;
    std::string reason;
};

struct NfcReport {
    std::vector<NfcViolation> violations;
    bool passed() const { return violations.empty(); }
};

/// Checks that each output is a normal form at its source state and that
/// reading the output leads to the same target as reading the input.
NfcReport check_nfc(const Transducer& t);

/// Same normal form from the initial state.
bool equiv(const Transducer& t, const VarString& a, const VarString& b);

/// The document format:
///
///     {
///       "states": [[], ["F_B"]],
///       "initial": 0,
///       "delta": [
///         {"from":0,"input":"A","to":0,"output":["A"]},
///         ...
///       ]
///     }
///
/// `null` in "states" is an unlabelled state. Serialisation is canonical:
/// parse followed by serialise reproduces a canonical document byte for byte.
std::string serialize_transducer(const BpaSystem& system, const Transducer& t);
Transducer parse_transducer(const BpaSystem& system, const std::string& text);
Transducer load_transducer(const BpaSystem& system, const std::string& path);

} // namespace bbpa
