#include "bbpa/semantics.hpp"

#include <algorithm>
#include <deque>

namespace bbpa {

RedundancyContext::RedundancyContext(std::size_t num_variables, const std::vector<Var>& members)
    : members_(num_variables, false)
{
    for (Var v : members) members_.at(index(v)) = true;
}

bool RedundancyContext::empty() const
{
    return std::none_of(members_.begin(), members_.end(), [](bool b) { return b; });
}

std::vector<Var> RedundancyContext::members() const
{
    std::vector<Var> out;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i]) out.push_back(Var{static_cast<std::uint32_t>(i)});
    }
    return out;
}

bool RedundancyContext::operator==(const RedundancyContext& other) const
{
    // trailing `false` entries are insignificant
    std::size_t n = std::max(members_.size(), other.members_.size());
    for (std::size_t i = 0; i < n; ++i) {
        bool a = i < members_.size() && members_[i];
        bool b = i < other.members_.size() && other.members_[i];
        if (a != b) return false;
    }
    return true;
}

bool is_silent_relative(const VarString& s, const RedundancyContext& context)
{
    return std::all_of(s.begin(), s.end(), [&](Var v) { return context.contains(v); });
}

std::vector<Transition> transitions(const BpaSystem& system, const VarString& s, const RedundancyContext& context)
{
    std::vector<Transition> out;
    if (s.empty() || is_silent_relative(s, context)) return out;
    const auto& rules = system.rules();
    for (std::size_t ri : system.rules_of(s.front())) {
        const Rule& r = rules[ri];
        VarString target;
        target.reserve(r.rhs.size() + s.size() - 1);
        target.insert(target.end(), r.rhs.begin(), r.rhs.end());
        target.insert(target.end(), s.begin() + 1, s.end());
        out.push_back(Transition{s, r.label, std::move(target)});
    }
    return out;
}

std::set<VarString> silent_reach(const BpaSystem& system, const VarString& s, const RedundancyContext& context,
                                 const GameBounds& bounds)
{
    std::set<VarString> seen{s};
    std::deque<std::pair<VarString, unsigned>> frontier{{s, 0}};
    while (!frontier.empty()) {
        auto [cur, dist] = std::move(frontier.front());
        frontier.pop_front();
        if (dist >= bounds.tau_bound) continue;
        for (Transition& t : transitions(system, cur, context)) {
            if (!is_silent(t.label) || t.target.size() > bounds.len_cap) continue;
            if (seen.insert(t.target).second) frontier.emplace_back(std::move(t.target), dist + 1);
        }
    }
    return seen;
}

} // namespace bbpa
