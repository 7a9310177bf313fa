#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bbpa/system.hpp"

namespace bbpa {

/// A value in N ∪ {ω}. ω absorbs addition. Finite values that would not fit
/// in 64 bits raise std::overflow_error.
class Norm {
public:
    constexpr Norm() = default; // 0
    constexpr explicit Norm(std::uint64_t v) : value_(v) {}
    static constexpr Norm omega()
    {
        Norm n;
        n.value_.reset();
        return n;
    }

    constexpr bool is_finite() const { return value_.has_value(); }
    constexpr bool is_omega() const { return !value_.has_value(); }
    /// Precondition: is_finite().
    std::uint64_t value() const { return value_.value(); }

    friend Norm operator+(Norm a, Norm b);
    Norm& operator+=(Norm other) { return *this = *this + other; }

    /// Finite values are ordered numerically, ω is the greatest element.
    friend constexpr auto operator<=>(const Norm& a, const Norm& b)
    {
        if (a.is_omega() || b.is_omega()) return a.is_omega() <=> b.is_omega();
        return *a.value_ <=> *b.value_;
    }
    friend constexpr bool operator==(const Norm&, const Norm&) = default;

    /// Decimal digits, or "omega".
    std::string to_string() const;

private:
    std::optional<std::uint64_t> value_{std::uint64_t{0}};
};

std::ostream& operator<<(std::ostream& os, const Norm& n);

/// Per-variable norms, indexed by Var.
class NormTable {
public:
    NormTable() = default;
    explicit NormTable(std::vector<Norm> per_variable) : per_variable_(std::move(per_variable)) {}

    const Norm& operator[](Var v) const { return per_variable_.at(index(v)); }
    std::size_t size() const { return per_variable_.size(); }
    const std::vector<Norm>& values() const { return per_variable_; }

private:
    std::vector<Norm> per_variable_;
};

/// Length of a shortest erasing word for each variable, by the usual
/// "settle the cheapest pending variable" dynamic programme. Runs in time
/// polynomial in the system size even when the values are exponential.
NormTable compute_norms(const BpaSystem& system);

/// Like compute_norms but silent steps cost nothing: the least number of
/// visible actions needed to reach the empty process. This quantity is
/// preserved by branching bisimilarity on normed systems.
NormTable compute_visible_norms(const BpaSystem& system);

Norm norm_of_string(const VarString& s, const NormTable& table);

bool is_normed(const BpaSystem& system);

/// Variables that can reach ε by silent steps alone.
std::vector<bool> silently_erasable(const BpaSystem& system);

} // namespace bbpa
