#include "bbpa/types.hpp"

namespace bbpa {

bool rtl_lex_less(const VarString& a, const VarString& b)
{
    auto ia = a.rbegin();
    auto ib = b.rbegin();
    for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib) {
        if (*ia != *ib) return *ia < *ib;
    }
    // one is a suffix of the other
    return a.size() < b.size();
}

bool longest_then_lex_less(const VarString& a, const VarString& b)
{
    if (a.size() != b.size()) return a.size() > b.size();
    return rtl_lex_less(a, b);
}

VarString concat(const VarString& a, const VarString& b)
{
    VarString out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

ParseError ParseError::in_file(const std::string& path) const
{
    return ParseError(Verbatim{}, line_, path + ": " + what());
}

} // namespace bbpa
