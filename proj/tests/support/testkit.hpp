#pragma once

// Shared fixtures for the test binaries: corpus access, seeded generators
// and brute-force oracles that do not share code with the library.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bbpa/bbpa.hpp"

namespace testkit {

using namespace bbpa;

inline std::string corpus(const std::string& file) { return std::string(BBPA_CORPUS_DIR) + "/" + file; }

inline BpaSystem corpus_system(const std::string& file) { return load_system(corpus(file)); }

inline VarString str(const BpaSystem& g, const std::string& text) { return parse_string(g, text); }

inline const std::vector<std::string>& corpus_systems()
{
    static const std::vector<std::string> names{"sys_fb.bpa", "sys_g1.bpa", "sys_sil.bpa", "sys_id.bpa",
                                                "sys_unnormed.bpa", "sys_expn10.bpa"};
    return names;
}

/// Normed corpus systems paired with transducers known to pass check_nfc.
inline std::vector<std::pair<std::string, std::string>> nfc_corpus_pairs()
{
    return {{"sys_fb.bpa", "fb.canonical.json"}, {"sys_fb.bpa", "fb.identity.json"},
            {"sys_g1.bpa", "g1.identity.json"},  {"sys_sil.bpa", "sil.eraser.json"},
            {"sys_sil.bpa", "sil.identity.json"}, {"sys_id.bpa", "id.identity.json"},
            {"sys_id.bpa", "id.erase_u.json"},   {"sys_expn10.bpa", "expn10.identity.json"}};
}

inline std::string expn_text(unsigned n)
{
    std::string s = "vars";
    for (unsigned i = 1; i <= n; ++i) s += " A" + std::to_string(i);
    s += "\nA1 a ->\n";
    for (unsigned i = 1; i < n; ++i) {
        s += "A" + std::to_string(i + 1) + " a -> A" + std::to_string(i) + " A" + std::to_string(i) + "\n";
    }
    return s;
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    VarString string(std::size_t num_vars, std::size_t max_len)
    {
        VarString s(below(max_len + 1));
        for (Var& v : s) v = Var{static_cast<std::uint32_t>(below(num_vars))};
        return s;
    }

    VarString string_over(const std::vector<Var>& alphabet, std::size_t max_len)
    {
        VarString s(below(max_len + 1));
        for (Var& v : s) v = alphabet[below(alphabet.size())];
        return s;
    }

    /// A normed system: variable i always has a rule whose right-hand side
    /// uses only variables below i. Silent rules appear with probability
    /// `tau`.
    BpaSystem normed_system(std::size_t num_vars, std::size_t num_actions, double tau = 0.25)
    {
        std::vector<std::string> vars;
        for (std::size_t i = 0; i < num_vars; ++i) vars.push_back("V" + std::to_string(i));
        std::vector<std::string> acts;
        for (std::size_t i = 0; i < num_actions; ++i) acts.push_back(std::string(1, static_cast<char>('a' + i)));
        std::vector<Rule> rules;
        auto label = [&] {
            return coin(tau) ? kTau : ActionId{static_cast<std::uint32_t>(1 + below(num_actions))};
        };
        for (std::size_t i = 0; i < num_vars; ++i) {
            VarString base;
            if (i > 0) {
                std::size_t len = below(3);
                for (std::size_t k = 0; k < len; ++k) base.push_back(Var{static_cast<std::uint32_t>(below(i))});
            }
            rules.push_back(Rule{Var{static_cast<std::uint32_t>(i)}, label(), base});
            std::size_t extra = below(3);
            for (std::size_t k = 0; k < extra; ++k) {
                rules.push_back(Rule{Var{static_cast<std::uint32_t>(i)}, label(), string(num_vars, 2)});
            }
        }
        return BpaSystem(vars, acts, rules);
    }

    /// Single-state transducer erasing a random subset of variables. Always nfc.
    Transducer eraser(std::size_t num_vars)
    {
        std::vector<Step> row;
        std::vector<Var> label;
        for (std::uint32_t i = 0; i < num_vars; ++i) {
            bool erase = coin(0.3);
            row.push_back(Step{StateId{0}, erase ? VarString{} : VarString{Var{i}}});
            if (erase) label.push_back(Var{i});
        }
        return Transducer(num_vars, {Transducer::Label{label}}, {row}, StateId{0});
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Shortest erasing word by breadth-first search over strings. Returns
/// nullopt if none of length <= `limit` exists.
inline std::optional<std::uint64_t> bfs_norm(const BpaSystem& g, Var v, std::uint64_t limit)
{
    std::set<VarString> seen{{v}};
    std::vector<VarString> layer{{v}};
    for (std::uint64_t d = 0; d <= limit; ++d) {
        std::vector<VarString> next;
        for (const VarString& s : layer) {
            if (s.empty()) return d;
            // every symbol needs at least one more step
            for (const Rule& r : g.rules()) {
                if (r.head != s.front()) continue;
                VarString t(r.rhs);
                t.insert(t.end(), s.begin() + 1, s.end());
                if (t.size() > limit - d) continue;
                if (seen.insert(t).second) next.push_back(std::move(t));
            }
        }
        layer = std::move(next);
    }
    return std::nullopt;
}

/// Renames variables by a permutation; declaration order is permuted too.
inline BpaSystem permute(const BpaSystem& g, const std::vector<std::uint32_t>& perm)
{
    std::vector<std::string> vars(g.num_variables());
    for (std::uint32_t i = 0; i < g.num_variables(); ++i) vars[perm[i]] = g.name(Var{i});
    std::vector<std::string> acts(g.action_names().begin() + 1, g.action_names().end());
    std::vector<Rule> rules;
    for (const Rule& r : g.rules()) {
        VarString rhs;
        for (Var v : r.rhs) rhs.push_back(Var{perm[index(v)]});
        rules.push_back(Rule{Var{perm[index(r.head)]}, r.label, rhs});
    }
    return BpaSystem(vars, acts, rules);
}

inline VarString permute(const VarString& s, const std::vector<std::uint32_t>& perm)
{
    VarString out;
    for (Var v : s) out.push_back(Var{perm[index(v)]});
    return out;
}

inline Transducer permute(const Transducer& t, const std::vector<std::uint32_t>& perm)
{
    std::vector<Transducer::Label> labels;
    std::vector<std::vector<Step>> delta(t.num_states());
    for (std::uint32_t q = 0; q < t.num_states(); ++q) {
        const auto& l = t.label(StateId{q});
        if (l) {
            labels.emplace_back(permute(*l, perm));
        } else {
            labels.emplace_back(std::nullopt);
        }
        delta[q].resize(t.num_variables());
        for (std::uint32_t a = 0; a < t.num_variables(); ++a) {
            const Step& st = t.step(StateId{q}, Var{a});
            delta[q][perm[a]] = Step{st.target, permute(st.output, perm)};
        }
    }
    return Transducer(t.num_variables(), labels, delta, t.initial());
}

inline std::vector<std::uint32_t> random_permutation(Gen& gen, std::size_t n)
{
    std::vector<std::uint32_t> p(n);
    for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), gen.engine());
    return p;
}

/// Long moves straight from their definition: silent steps that keep the
/// translation at q, then one a-step (or none for τ), result translated.
/// Strings longer than `len_cap` are not explored; `closed` reports whether
/// that ever happened.
struct SemanticMoves {
    std::set<std::pair<ActionId, VarString>> moves;
    bool closed = true;
};

inline SemanticMoves semantic_moves(const BpaSystem& g, const Transducer& t, const VarString& alpha, StateId q,
                                    std::size_t len_cap)
{
    SemanticMoves out;
    const VarString image = translate(t, q, alpha).output;
    out.moves.insert({kTau, image});
    std::set<VarString> seen{alpha};
    std::deque<VarString> work{alpha};
    while (!work.empty()) {
        VarString s = work.front();
        work.pop_front();
        for (const Transition& tr : transitions(g, s)) {
            VarString ti = translate(t, q, tr.target).output;
            out.moves.insert({tr.label, ti});
            if (!is_silent(tr.label) || ti != image) continue;
            if (tr.target.size() > len_cap) {
                out.closed = false;
                continue;
            }
            if (seen.insert(tr.target).second) work.push_back(tr.target);
        }
    }
    return out;
}

} // namespace testkit
