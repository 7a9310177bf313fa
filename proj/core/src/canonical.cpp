#include "bbpa/canonical.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace bbpa {

namespace {

using Label = std::vector<bool>;

std::string format_label(const BpaSystem& system, const std::vector<Var>& vars)
{
    std::string s = "{";
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (i) s += ",";
        s += system.name(vars[i]);
    }
    return s + "}";
}

std::vector<Var> members(const Label& l)
{
    std::vector<Var> out;
    for (std::uint32_t i = 0; i < l.size(); ++i) {
        if (l[i]) out.push_back(Var{i});
    }
    return out;
}

class Synthesizer {
public:
    Synthesizer(const BpaSystem& system, const SynthesisOptions& options)
        : system_(system), options_(options), nv_(system.num_variables()), norms_(compute_norms(system)),
          visible_(compute_visible_norms(system)), silent_(silently_erasable(system))
    {
        min_visible_ = ~std::uint64_t{0};
        for (const Norm& n : visible_.values()) min_visible_ = std::min(min_visible_, n.value());
    }

    CanonicalCandidate run()
    {
        discover_states();
        for (std::size_t q = 0; q < labels_.size(); ++q) {
            for (std::uint32_t a = 0; a < nv_; ++a) {
                if (!labels_[q][a]) entries_.push_back({q, Var{a}});
            }
        }
        assigned_.assign(labels_.size(), std::vector<std::optional<VarString>>(nv_));
        decisions_.assign(labels_.size(), std::vector<TraceEntry>(nv_));
        for (std::size_t q = 0; q < labels_.size(); ++q) {
            for (std::uint32_t a = 0; a < nv_; ++a) {
                if (labels_[q][a]) {
                    assigned_[q][a] = VarString{};
                    decisions_[q][a] = TraceEntry{StateId{static_cast<std::uint32_t>(q)}, Var{a},
                                                  TraceEntry::Kind::Redundant, {}, {}};
                }
            }
        }
        if (!search(0)) {
            throw SearchExhausted("no consistent table survives the search" +
                                  (last_failure_.empty() ? std::string() : "; last failure: " + last_failure_));
        }
        CanonicalCandidate c{build(), {}};
        for (const auto& row : decisions_) c.trace.insert(c.trace.end(), row.begin(), row.end());
        return c;
    }

private:
    struct Entry {
        std::size_t state;
        Var var;
    };

    void spend()
    {
        if (++spent_ > options_.node_budget) {
            throw SearchExhausted("node budget of " + std::to_string(options_.node_budget) + " exhausted" +
                                  (last_failure_.empty() ? std::string() : "; last failure: " + last_failure_));
        }
    }

    BoundedGame& game(const Label& context)
    {
        auto it = games_.find(context);
        if (it == games_.end()) {
            it = games_.emplace(context, BoundedGame(system_, RedundancyContext(context), options_.bounds)).first;
        }
        return it->second;
    }

    bool distinguished(const Label& context, const VarString& l, const VarString& r)
    {
        spend();
        return game(context).play(l, r).distinguished;
    }

    // Redundancy set of `suffix` given the set R of the string it precedes:
    // {X silently erasable : X·suffix not distinguished from suffix in R}.
    Label redundancy(const Label& context, const VarString& suffix)
    {
        Label out(nv_, false);
        for (std::uint32_t x = 0; x < nv_; ++x) {
            if (!silent_[x]) continue;
            VarString lhs{Var{x}};
            lhs.insert(lhs.end(), suffix.begin(), suffix.end());
            out[x] = !distinguished(context, lhs, suffix);
        }
        return out;
    }

    std::size_t state_of(const Label& l)
    {
        auto [it, fresh] = index_.emplace(l, labels_.size());
        if (fresh) labels_.push_back(l);
        return it->second;
    }

    void discover_states()
    {
        state_of(redundancy(Label(nv_, false), {}));
        for (std::size_t q = 0; q < labels_.size(); ++q) {
            targets_.emplace_back(nv_);
            for (std::uint32_t a = 0; a < nv_; ++a) {
                const Label here = labels_[q];
                targets_[q][a] = here[a] ? q : state_of(redundancy(here, {Var{a}}));
            }
        }
    }

    // Outputs for (q, A) in preference order: redundancy-free at q, reaching
    // the target of A, with A's visible norm.
    const std::vector<VarString>& candidates(const Entry& e)
    {
        auto key = std::make_pair(e.state, index(e.var));
        if (auto it = candidate_cache_.find(key); it != candidate_cache_.end()) return it->second;
        std::vector<VarString> out;
        const std::uint64_t want = visible_[e.var].value();
        const std::uint64_t max_len = norms_[e.var].value();
        const std::size_t goal = targets_[e.state][index(e.var)];
        std::size_t enumerated = 0;
        for (std::uint64_t len = max_len; len >= 1; --len) {
            VarString s(len);
            std::function<void(std::size_t, std::size_t, std::uint64_t)> fill = [&](std::size_t pos, std::size_t q,
                                                                                    std::uint64_t budget) {
                if (pos == 0) {
                    if (budget == 0 && q == goal) {
                        if (++enumerated > options_.candidate_cap) {
                            throw SearchExhausted("more than " + std::to_string(options_.candidate_cap) +
                                                  " candidate outputs for " + system_.name(e.var));
                        }
                        out.push_back(s);
                    }
                    return;
                }
                // pos symbols remain, each needs at least min_visible_
                if (budget < min_visible_ * (pos)) return;
                for (std::uint32_t y = 0; y < nv_; ++y) {
                    if (labels_[q][y]) continue;
                    std::uint64_t v = visible_[Var{y}].value();
                    if (v > budget) continue;
                    spend();
                    s[pos - 1] = Var{y};
                    fill(pos - 1, targets_[q][y], budget - v);
                }
            };
            fill(static_cast<std::size_t>(len), e.state, want);
        }
        return candidate_cache_.emplace(key, std::move(out)).first->second;
    }

    // The entries an output forces to be prime, with their outputs.
    std::vector<std::pair<Entry, VarString>> forced_by(std::size_t q, const VarString& out) const
    {
        std::vector<std::pair<Entry, VarString>> forced;
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            forced.push_back({Entry{q, *it}, VarString{*it}});
            q = targets_[q][index(*it)];
        }
        return forced;
    }

    bool search(std::size_t i)
    {
        spend();
        if (i == entries_.size()) return accept();
        const Entry e = entries_[i];
        if (assigned_[e.state][index(e.var)]) return search(i + 1);

        TraceEntry& trace = decisions_[e.state][index(e.var)];
        trace = TraceEntry{StateId{static_cast<std::uint32_t>(e.state)}, e.var, TraceEntry::Kind::Chosen, {}, {}};
        std::vector<std::pair<VarString, std::string>> pruned;
        const Label& context = labels_[e.state];
        for (const VarString& out : candidates(e)) {
            auto forced = forced_by(e.state, out);
            bool clash = false;
            for (const auto& [f, v] : forced) {
                const auto& cur = assigned_[f.state][index(f.var)];
                bool self = f.state == e.state && f.var == e.var;
                if ((cur && *cur != v) || (self && out != v)) clash = true;
            }
            if (clash) {
                pruned.emplace_back(out, "prime conflict");
                continue;
            }
            if (distinguished(context, out, VarString{e.var})) {
                pruned.emplace_back(out, "distinguished");
                continue;
            }
            std::vector<Entry> newly;
            for (const auto& [f, v] : forced) {
                auto& slot = assigned_[f.state][index(f.var)];
                if (slot) continue;
                slot = v;
                newly.push_back(f);
                if (f.state != e.state || f.var != e.var) {
                    decisions_[f.state][index(f.var)] =
                        TraceEntry{StateId{static_cast<std::uint32_t>(f.state)}, f.var, TraceEntry::Kind::Forced, v, {}};
                }
            }
            assigned_[e.state][index(e.var)] = out;
            decisions_[e.state][index(e.var)] =
                TraceEntry{StateId{static_cast<std::uint32_t>(e.state)}, e.var, TraceEntry::Kind::Chosen, out, pruned};
            if (search(i + 1)) return true;
            for (const Entry& f : newly) assigned_[f.state][index(f.var)].reset();
            assigned_[e.state][index(e.var)].reset();
            pruned.emplace_back(out, "backtracked");
        }
        return false;
    }

    Transducer build() const
    {
        std::vector<Transducer::Label> labels;
        std::vector<std::vector<Step>> delta(labels_.size());
        for (std::size_t q = 0; q < labels_.size(); ++q) {
            labels.emplace_back(members(labels_[q]));
            for (std::uint32_t a = 0; a < nv_; ++a) {
                delta[q].push_back(Step{StateId{static_cast<std::uint32_t>(targets_[q][a])}, *assigned_[q][a]});
            }
        }
        return Transducer(nv_, std::move(labels), std::move(delta), StateId{0});
    }

    bool accept()
    {
        Transducer t = build();
        NfcReport nfc = check_nfc(t);
        if (!nfc.passed()) {
            last_failure_ = "not nfc at q" + std::to_string(index(nfc.violations.front().state));
            return false;
        }
        ConsistencyReport report = check_consistency(t, system_);
        if (!report.consistent()) {
            const ConsistencyViolation& v = report.violations.front();
            last_failure_ = "consistency condition " + std::to_string(v.condition) + " fails at q" +
                            std::to_string(index(v.state)) + " for " + format_string(system_, v.left);
            return false;
        }
        return true;
    }

    const BpaSystem& system_;
    SynthesisOptions options_;
    std::size_t nv_;
    NormTable norms_;
    NormTable visible_;
    std::vector<bool> silent_;
    std::uint64_t min_visible_;
    std::size_t spent_ = 0;
    std::string last_failure_;

    std::map<Label, BoundedGame> games_;
    std::vector<Label> labels_;
    std::map<Label, std::size_t> index_;
    std::vector<std::vector<std::size_t>> targets_;
    std::vector<Entry> entries_;
    std::vector<std::vector<std::optional<VarString>>> assigned_;
    std::vector<std::vector<TraceEntry>> decisions_;
    std::map<std::pair<std::size_t, std::uint32_t>, std::vector<VarString>> candidate_cache_;
};

std::optional<StateId> state_labelled(const Transducer& t, const std::vector<Var>& label)
{
    for (std::uint32_t q = 0; q < t.num_states(); ++q) {
        if (t.label(StateId{q}) && *t.label(StateId{q}) == label) return StateId{q};
    }
    return std::nullopt;
}

// Position of the first symbol (from the right) that is erased at the state
// reached on the part to its right, if any.
std::optional<std::size_t> redundant_position(const Transducer& t, StateId q, const VarString& s)
{
    for (std::size_t i = s.size(); i-- > 0;) {
        const Step& st = t.step(q, s[i]);
        if (st.output.empty()) return i;
        q = st.target;
    }
    return std::nullopt;
}

} // namespace

CanonicalCandidate synthesize(const BpaSystem& system, const SynthesisOptions& options)
{
    if (!is_normed(system)) throw UnnormedError("system is not normed; synthesis needs finite norms");
    CanonicalCandidate c = Synthesizer(system, options).run();

    const Transducer& t = c.transducer;
    if (!check_nfc(t).passed() || !check_consistency(t, system).consistent()) {
        throw std::logic_error("synthesized table failed its own acceptance checks");
    }
    NormTable norms = compute_norms(system);
    if (system.num_variables() < 64 && t.num_states() > (std::uint64_t{1} << system.num_variables())) {
        throw std::logic_error("synthesized transducer has more states than variable subsets");
    }
    for (std::uint32_t q = 0; q < t.num_states(); ++q) {
        for (std::uint32_t a = 0; a < system.num_variables(); ++a) {
            if (t.step(StateId{q}, Var{a}).output.size() > norms[Var{a}].value()) {
                throw std::logic_error("synthesized output longer than the variable's norm");
            }
        }
    }
    return c;
}

std::string format_trace(const BpaSystem& system, const CanonicalCandidate& candidate)
{
    std::ostringstream out;
    for (const TraceEntry& e : candidate.trace) {
        const auto& label = candidate.transducer.label(e.state);
        out << 'q' << index(e.state) << ' ' << format_label(system, label ? *label : std::vector<Var>{}) << ' '
            << system.name(e.variable) << " -> " << format_string(system, e.output);
        switch (e.kind) {
        case TraceEntry::Kind::Redundant: out << " (redundant)"; break;
        case TraceEntry::Kind::Forced: out << " (forced prime)"; break;
        case TraceEntry::Kind::Chosen: break;
        }
        if (!e.pruned.empty()) {
            out << " | pruned:";
            for (const auto& [alt, why] : e.pruned) out << ' ' << format_string(system, alt) << " [" << why << ']';
        }
        out << '\n';
    }
    return out.str();
}

std::vector<Var> redundant_set(const CanonicalCandidate& candidate, const VarString& gamma)
{
    const Transducer& t = candidate.transducer;
    StateId q = reach(t, t.initial(), gamma);
    if (!t.label(q)) throw Error("state q" + std::to_string(index(q)) + " carries no label");
    return *t.label(q);
}

CcNorm cc_norm(const CanonicalCandidate& candidate, const BpaSystem& system, const VarString& alpha,
               const RedundancyContext& context, const CcNormCaps& caps)
{
    const Transducer& t = candidate.transducer;
    std::vector<Var> label = context.members();
    auto q = state_labelled(t, label);
    if (!q) throw Error("no candidate state is labelled " + format_label(system, label));

    const Norm syntactic = norm_of_string(alpha, compute_norms(system));
    const std::uint64_t upper = syntactic.is_finite() ? syntactic.value() : ~std::uint64_t{0};
    const std::size_t max_length =
        caps.max_length ? caps.max_length : std::max<std::size_t>(alpha.size(), static_cast<std::size_t>(std::min<std::uint64_t>(upper, 1u << 20)));

    auto image = [&](const VarString& s) { return translate(t, *q, s).output; };

    std::unordered_map<VarString, std::uint64_t, VarStringHash> dist;
    std::deque<VarString> work;
    dist[alpha] = 0;
    work.push_back(alpha);
    std::uint64_t skipped_at = ~std::uint64_t{0}; // least distance at which a cap cut the search
    std::optional<std::uint64_t> found;
    std::unordered_map<VarString, VarString, VarStringHash> images;
    auto cached_image = [&](const VarString& s) -> const VarString& {
        auto it = images.find(s);
        if (it == images.end()) it = images.emplace(s, image(s)).first;
        return it->second;
    };
    std::unordered_map<VarString, bool, VarStringHash> done;

    while (!work.empty()) {
        VarString s = std::move(work.front());
        work.pop_front();
        if (done[s]) continue;
        done[s] = true;
        const std::uint64_t d = dist[s];
        if (cached_image(s).empty()) {
            found = d;
            break;
        }
        for (const Transition& tr : transitions(system, s, context)) {
            std::uint64_t w = cached_image(tr.source) == cached_image(tr.target) ? 0 : 1;
            if (tr.target.size() > max_length || (dist.size() >= caps.max_states && !dist.count(tr.target))) {
                skipped_at = std::min(skipped_at, d + w);
                continue;
            }
            auto it = dist.find(tr.target);
            if (it != dist.end() && it->second <= d + w) continue;
            dist[tr.target] = d + w;
            if (w == 0) {
                work.push_front(tr.target);
            } else {
                work.push_back(tr.target);
            }
        }
    }

    CcNorm r;
    if (found) {
        r.value = std::min(*found, upper);
        r.exact = skipped_at >= *found;
    } else {
        r.value = upper;
        r.exact = false;
    }
    return r;
}

std::string to_string(CanonicityViolation::Clause c)
{
    switch (c) {
    case CanonicityViolation::Clause::Nfc: return "nfc";
    case CanonicityViolation::Clause::Consistency: return "consistency";
    case CanonicityViolation::Clause::Equivalence: return "a";
    case CanonicityViolation::Clause::RedundancyFree: return "b";
    case CanonicityViolation::Clause::LongestLexSmallest: return "c";
    }
    return "?";
}

CanonicityReport verify_canonicity(const Transducer& t, const BpaSystem& system,
                                   const std::vector<std::pair<VarString, VarString>>& facts)
{
    using Clause = CanonicityViolation::Clause;
    CanonicityReport report;
    auto at = [](StateId q, Var a, const BpaSystem& g) {
        return "q" + std::to_string(index(q)) + " " + g.name(a);
    };

    NfcReport nfc = check_nfc(t);
    for (const NfcViolation& v : nfc.violations) report.violations.push_back({Clause::Nfc, at(v.state, v.input, system) + ": " + v.reason});
    if (nfc.passed()) {
        ConsistencyReport cr = check_consistency(t, system);
        for (const ConsistencyViolation& v : cr.violations) {
            report.violations.push_back({Clause::Consistency, "condition " + std::to_string(v.condition) + " at q" +
                                                                  std::to_string(index(v.state)) + " for " +
                                                                  format_string(system, v.left) + " / " +
                                                                  format_string(system, v.right)});
        }
    }

    NormTable norms = compute_norms(system);
    for (std::uint32_t qi = 0; qi < t.num_states(); ++qi) {
        StateId q{qi};
        for (std::uint32_t a = 0; a < system.num_variables(); ++a) {
            const VarString& out = t.step(q, Var{a}).output;
            if (auto pos = redundant_position(t, q, out)) {
                report.violations.push_back({Clause::RedundancyFree, at(q, Var{a}, system) + ": output " +
                                                                         format_string(system, out) + " has " +
                                                                         system.name(out[*pos]) +
                                                                         " erased at the state after its suffix"});
            }
            if (norms[Var{a}].is_finite() && out.size() > norms[Var{a}].value()) {
                report.violations.push_back({Clause::LongestLexSmallest, at(q, Var{a}, system) +
                                                                             ": output longer than the norm"});
            }
        }
    }

    for (const auto& [l, r] : facts) {
        VarString tl = translate_output(t, l);
        VarString tr = translate_output(t, r);
        std::string pair = format_string(system, l) + " ~ " + format_string(system, r);
        if (tl != tr) {
            report.violations.push_back({Clause::Equivalence, pair + " is not reflected"});
            continue;
        }
        for (const VarString* side : {&l, &r}) {
            if (redundant_position(t, t.initial(), *side)) continue;
            if (longest_then_lex_less(*side, tl)) {
                report.violations.push_back({Clause::LongestLexSmallest,
                                             pair + ": " + format_string(system, *side) +
                                                 " is redundancy-free and preferred to the normal form " +
                                                 format_string(system, tl)});
            }
        }
    }
    return report;
}

bool composition_check(const Transducer& t, const VarString& alpha, const VarString& gamma)
{
    TranslationResult g = translate(t, t.initial(), gamma);
    VarString expected = concat(translate(t, g.end_state, alpha).output, g.output);
    return translate_output(t, concat(alpha, gamma)) == expected;
}

} // namespace bbpa
