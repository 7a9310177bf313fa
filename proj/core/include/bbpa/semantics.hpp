#pragma once

#include <set>
#include <vector>

#include "bbpa/system.hpp"

namespace bbpa {

struct Transition {
    VarString source;
    ActionId label;
    VarString target;

    auto operator<=>(const Transition&) const = default;
    bool operator==(const Transition&) const = default;
};

/// A set R of variables whose strings R* are declared silent: in the
/// relative transition system they have no outgoing transitions.
class RedundancyContext {
public:
    RedundancyContext() = default;
    RedundancyContext(std::size_t num_variables, const std::vector<Var>& members);
    explicit RedundancyContext(std::vector<bool> members) : members_(std::move(members)) {}

    bool contains(Var v) const { return index(v) < members_.size() && members_[index(v)]; }
    bool empty() const;
    std::vector<Var> members() const;
    const std::vector<bool>& mask() const { return members_; }

    bool operator==(const RedundancyContext& other) const;

private:
    std::vector<bool> members_;
};

bool is_silent_relative(const VarString& s, const RedundancyContext& context);

/// One transition per rule of the leftmost variable, or none when `s` is ε
/// or a silent state of the relative system. Ordered by rule order.
std::vector<Transition> transitions(const BpaSystem& system, const VarString& s,
                                    const RedundancyContext& context = {});

struct GameBounds {
    unsigned depth = 8;         // attacker rounds
    unsigned tau_bound = 4;     // longest silent prefix of a defender answer
    std::size_t len_cap = 16;   // longest string the search may visit
};

/// Strings reachable from `s` by at most `bounds.tau_bound` silent steps
/// without exceeding `bounds.len_cap`.
std::set<VarString> silent_reach(const BpaSystem& system, const VarString& s, const RedundancyContext& context,
                                 const GameBounds& bounds);

} // namespace bbpa
