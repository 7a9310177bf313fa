#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbpa {

/// Index of a declared variable. The numeric value is the declaration
/// position, which is also the linear order used for lexicographic
/// comparison of strings.
enum class Var : std::uint32_t {};

/// Index into a system's action table; index 0 is always the silent action.
enum class ActionId : std::uint32_t {};

/// Opaque transducer state index.
enum class StateId : std::uint32_t {};

inline constexpr ActionId kTau{0};

constexpr std::uint32_t index(Var v) { return static_cast<std::uint32_t>(v); }
constexpr std::uint32_t index(ActionId a) { return static_cast<std::uint32_t>(a); }
constexpr std::uint32_t index(StateId q) { return static_cast<std::uint32_t>(q); }

constexpr bool is_silent(ActionId a) { return a == kTau; }

/// A process: a finite string of variables, leftmost symbol first.
using VarString = std::vector<Var>;

/// Lexicographic order reflecting right-to-left reading: a proper suffix is
/// smaller, otherwise the first position from the right where the strings
/// differ decides.
bool rtl_lex_less(const VarString& a, const VarString& b);

/// Longest-first, then rtl_lex_less. This is the preference order used when
/// choosing canonical outputs.
bool longest_then_lex_less(const VarString& a, const VarString& b);

VarString concat(const VarString& a, const VarString& b);

struct VarStringHash {
    std::size_t operator()(const VarString& s) const noexcept
    {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (Var v : s) {
            h ^= index(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h ^ s.size();
    }
};

struct VarStringPairHash {
    std::size_t operator()(const std::pair<VarString, VarString>& p) const noexcept
    {
        VarStringHash h;
        return h(p.first) * 1000003u ^ h(p.second);
    }
};

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed system, string or transducer document. `line` is 1-based, 0
/// when the error has no single source line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what);
    /// Same error, message prefixed with the source document name.
    ParseError in_file(const std::string& path) const;
    std::size_t line() const noexcept { return line_; }

private:
    struct Verbatim {};
    ParseError(Verbatim, std::size_t line, const std::string& what) : Error(what), line_(line) {}
    std::size_t line_;
};

class NotNfcError : public Error {
public:
    using Error::Error;
};

class NotConsistentError : public Error {
public:
    using Error::Error;
};

class UnnormedError : public Error {
public:
    using Error::Error;
};

class SearchExhausted : public Error {
public:
    using Error::Error;
};

} // namespace bbpa
