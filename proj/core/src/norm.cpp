#include "bbpa/norm.hpp"

#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace bbpa {

Norm operator+(Norm a, Norm b)
{
    if (a.is_omega() || b.is_omega()) return Norm::omega();
    std::uint64_t x = a.value();
    std::uint64_t y = b.value();
    if (x > std::numeric_limits<std::uint64_t>::max() - y) throw std::overflow_error("norm exceeds 64 bits");
    return Norm(x + y);
}

std::string Norm::to_string() const
{
    return is_finite() ? std::to_string(*value_) : std::string("omega");
}

std::ostream& operator<<(std::ostream& os, const Norm& n)
{
    return os << n.to_string();
}

namespace {

// Generalised Dijkstra over rules: a rule becomes usable once every variable
// of its right-hand side is settled; its head is then offered at
// cost(label) + norm(rhs). The cheapest offered variable is settled next.
NormTable shortest_erasure(const BpaSystem& system, const std::function<std::uint64_t(ActionId)>& cost)
{
    const std::size_t n = system.num_variables();
    const auto& rules = system.rules();

    std::vector<Norm> norm(n, Norm::omega());
    std::vector<bool> settled(n, false);
    std::vector<std::size_t> pending(rules.size());
    std::vector<Norm> rhs_sum(rules.size());
    std::vector<std::vector<std::size_t>> occurs_in(n);

    using Offer = std::pair<std::uint64_t, std::uint32_t>;
    std::priority_queue<Offer, std::vector<Offer>, std::greater<>> queue;

    auto offer = [&](std::size_t ri) {
        const Rule& r = rules[ri];
        if (settled[index(r.head)]) return;
        Norm total = Norm(cost(r.label)) + rhs_sum[ri];
        if (total < norm[index(r.head)]) {
            norm[index(r.head)] = total;
            queue.emplace(total.value(), index(r.head));
        }
    };

    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
        pending[ri] = rules[ri].rhs.size();
        for (Var v : rules[ri].rhs) occurs_in[index(v)].push_back(ri);
        if (pending[ri] == 0) offer(ri);
    }

    while (!queue.empty()) {
        auto [value, vi] = queue.top();
        queue.pop();
        if (settled[vi] || norm[vi] != Norm(value)) continue;
        settled[vi] = true;
        // one decrement per occurrence, so repeated variables are handled
        for (std::size_t ri : occurs_in[vi]) {
            rhs_sum[ri] += norm[vi];
            if (--pending[ri] == 0) offer(ri);
        }
    }
    return NormTable(std::move(norm));
}

} // namespace

NormTable compute_norms(const BpaSystem& system)
{
    return shortest_erasure(system, [](ActionId) { return std::uint64_t{1}; });
}

NormTable compute_visible_norms(const BpaSystem& system)
{
    return shortest_erasure(system, [](ActionId a) { return is_silent(a) ? std::uint64_t{0} : std::uint64_t{1}; });
}

Norm norm_of_string(const VarString& s, const NormTable& table)
{
    Norm total;
    for (Var v : s) total += table[v];
    return total;
}

bool is_normed(const BpaSystem& system)
{
    const NormTable table = compute_norms(system);
    for (const Norm& n : table.values()) {
        if (n.is_omega()) return false;
    }
    return true;
}

std::vector<bool> silently_erasable(const BpaSystem& system)
{
    std::vector<bool> erasable(system.num_variables(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Rule& r : system.rules()) {
            if (!is_silent(r.label) || erasable[index(r.head)]) continue;
            bool all = true;
            for (Var v : r.rhs) all = all && erasable[index(v)];
            if (all) {
                erasable[index(r.head)] = true;
                changed = true;
            }
        }
    }
    return erasable;
}

} // namespace bbpa
