#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bbpa/types.hpp"

namespace bbpa {

struct Rule {
    Var head;
    ActionId label;
    VarString rhs;

    auto operator<=>(const Rule&) const = default;
    bool operator==(const Rule&) const = default;
};

/// A BPA system in Greibach form: ordered variables, actions (index 0 is
/// `tau`) and a duplicate-free rule set. Immutable once built.
class BpaSystem {
public:
    /// Builds a system from already-resolved parts. Rules are sorted and
    /// deduplicated; throws Error if a rule refers to an undeclared symbol.
    BpaSystem(std::vector<std::string> variables, std::vector<std::string> visible_actions,
              std::vector<Rule> rules);

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_actions() const { return actions_.size(); }

    const std::string& name(Var v) const { return variables_.at(index(v)); }
    const std::string& name(ActionId a) const { return actions_.at(index(a)); }
    const std::vector<std::string>& variable_names() const { return variables_; }
    /// All actions, `tau` first.
    const std::vector<std::string>& action_names() const { return actions_; }

    std::optional<Var> find_variable(std::string_view name) const;
    std::optional<ActionId> find_action(std::string_view name) const;

    /// Sorted by (head, label, rhs).
    const std::vector<Rule>& rules() const { return rules_; }
    /// Indices into rules() of the rules rewriting `head`.
    std::span<const std::size_t> rules_of(Var head) const;

    /// Total size: number of rules plus the summed right-hand-side lengths.
    std::size_t size() const;

    bool operator==(const BpaSystem& other) const;

private:
    std::vector<std::string> variables_;
    std::vector<std::string> actions_;
    std::vector<Rule> rules_;
    std::vector<std::vector<std::size_t>> by_head_;
};

/// Reads the line-oriented system format:
///
///     vars A B C          # declaration order is the linear order
///     actions a b         # optional; tau is implicit and reserved
///     A a -> B B
///     B tau ->
///
/// Without an `actions` line, actions are declared by first use.
BpaSystem parse_system(std::string_view text);

BpaSystem load_system(const std::string& path);

/// Inverse of parse_system (always emits an `actions` line when there are
/// visible actions).
std::string serialize_system(const BpaSystem& system);

/// Space-separated variable names; the empty string is epsilon.
VarString parse_string(const BpaSystem& system, std::string_view text);

/// Space-separated names, or "ε" for the empty string.
std::string format_string(const BpaSystem& system, const VarString& s);

/// Like format_string but renders epsilon as "" (used in machine-readable output).
std::string format_string_plain(const BpaSystem& system, const VarString& s);

} // namespace bbpa
