#include "bbpa/consistency.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "json.hpp"

namespace bbpa {

namespace {

void require_compatible(const Transducer& t, const BpaSystem& system)
{
    if (t.num_variables() != system.num_variables()) {
        throw Error("transducer has " + std::to_string(t.num_variables()) + " variables, system has " +
                    std::to_string(system.num_variables()));
    }
}

void require_nfc(const Transducer& t)
{
    NfcReport nfc = check_nfc(t);
    if (!nfc.passed()) {
        const NfcViolation& v = nfc.violations.front();
        throw NotNfcError("transducer is not nfc at state " + std::to_string(index(v.state)) + ": " + v.reason);
    }
}

std::string state_name(StateId q) { return "q" + std::to_string(index(q)); }

std::string format_move(const BpaSystem& system, const VarString& source, StateId q, const MoveKey& key)
{
    return format_string(system, source) + " =" + system.name(key.label) + "=>[" + state_name(q) + "] " +
           format_string(system, key.target);
}

std::string format_rule(const BpaSystem& system, const Rule& r)
{
    std::string s = system.name(r.head) + " " + system.name(r.label) + " ->";
    for (Var v : r.rhs) s += " " + system.name(v);
    return s;
}

bool has_suffix(const VarString& s, const VarString& suffix)
{
    return suffix.size() <= s.size() && std::equal(suffix.begin(), suffix.end(), s.end() - suffix.size());
}

// Target shape of a basic move: T_q(source), or T_q'(δ)·γ with γ a suffix of
// T_q(source), q' reached on γ and δ a right-hand side.
class ShapeCheck {
public:
    ShapeCheck(const Transducer& t, const BpaSystem& system) : t_(&t), images_(t.num_states())
    {
        for (std::uint32_t q = 0; q < t.num_states(); ++q) {
            for (const Rule& r : system.rules()) images_[q].insert(translate(t, StateId{q}, r.rhs).output);
        }
    }

    bool admits(StateId q, const VarString& image, const VarString& target) const
    {
        if (target == image) return true;
        for (std::size_t k = 0; k <= target.size(); ++k) {
            VarString gamma(target.begin() + static_cast<std::ptrdiff_t>(k), target.end());
            if (!has_suffix(image, gamma)) continue;
            VarString head(target.begin(), target.begin() + static_cast<std::ptrdiff_t>(k));
            if (images_[index(reach(*t_, q, gamma))].count(head)) return true;
        }
        return false;
    }

private:
    const Transducer* t_;
    std::vector<std::set<VarString>> images_;
};

} // namespace

std::string to_string(DeductionRule r)
{
    switch (r) {
    case DeductionRule::TauAxiom: return "i";
    case DeductionRule::RuleAxiom: return "ii";
    case DeductionRule::SilentStep: return "iii";
    case DeductionRule::LeftContext: return "iv";
    case DeductionRule::Erasure: return "v";
    }
    return "?";
}

std::vector<Var> ErasableSets::members(StateId q) const
{
    std::vector<Var> out;
    const auto& row = erasable.at(index(q));
    for (std::uint32_t i = 0; i < row.size(); ++i) {
        if (row[i]) out.push_back(Var{i});
    }
    return out;
}

ErasableSets erasable_sets(const Transducer& t, const BpaSystem& system)
{
    require_compatible(t, system);
    const std::size_t nq = t.num_states();
    const std::size_t nv = system.num_variables();
    ErasableSets e;
    e.erased_image.assign(nq, std::vector<bool>(nv, false));
    e.erasable.assign(nq, std::vector<bool>(nv, false));
    for (std::uint32_t q = 0; q < nq; ++q) {
        for (std::uint32_t a = 0; a < nv; ++a) e.erased_image[q][a] = t.step(StateId{q}, Var{a}).output.empty();
        auto& row = e.erasable[q];
        for (bool changed = true; changed;) {
            changed = false;
            for (const Rule& r : system.rules()) {
                if (!is_silent(r.label) || row[index(r.head)] || !e.erased_image[q][index(r.head)]) continue;
                bool all = std::all_of(r.rhs.begin(), r.rhs.end(), [&](Var v) { return row[index(v)]; });
                if (all) {
                    row[index(r.head)] = true;
                    changed = true;
                }
            }
        }
    }
    return e;
}

std::optional<std::size_t> LongMoveTable::basic_id(const VarString& s) const
{
    auto it = ids_.find(s);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::vector<LongMove> LongMoveTable::all_moves() const
{
    std::vector<LongMove> out;
    for (std::size_t b = 0; b < basic_.size(); ++b) {
        for (std::uint32_t q = 0; q < num_states_; ++q) {
            for (const auto& [key, d] : moves(b, StateId{q})) out.push_back({basic_[b], StateId{q}, key.label, key.target});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t LongMoveTable::move_count() const
{
    std::size_t n = 0;
    for (const auto& m : moves_) n += m.size();
    return n;
}

std::vector<std::string> LongMoveTable::derivation_chain(const BpaSystem& system, std::size_t basic_id, StateId q,
                                                         const MoveKey& key) const
{
    std::vector<std::string> chain;
    std::size_t b = basic_id;
    MoveKey k = key;
    for (;;) {
        const Derivation& d = moves(b, q).at(k);
        std::string line = format_move(system, basic_[b], q, k) + "  [" + to_string(d.rule);
        if (d.grammar_rule) line += ": " + format_rule(system, system.rules()[*d.grammar_rule]);
        line += "]";
        chain.push_back(std::move(line));
        if (!d.premise) break;
        b = d.premise_source;
        q = d.premise_state;
        k = *d.premise;
    }
    return chain;
}

LongMoveTable basic_moves(const Transducer& t, const BpaSystem& system)
{
    require_compatible(t, system);
    require_nfc(t);

    LongMoveTable table;
    table.erasable_ = erasable_sets(t, system);
    table.num_states_ = t.num_states();
    const std::size_t nq = t.num_states();

    auto add_basic = [&](const VarString& s) {
        if (table.ids_.emplace(s, table.basic_.size()).second) table.basic_.push_back(s);
    };
    add_basic({});
    for (std::uint32_t a = 0; a < system.num_variables(); ++a) add_basic({Var{a}});
    for (const Rule& r : system.rules()) {
        for (std::size_t k = 0; k < r.rhs.size(); ++k) add_basic(VarString(r.rhs.begin() + static_cast<std::ptrdiff_t>(k), r.rhs.end()));
    }
    const std::size_t nb = table.basic_.size();
    table.moves_.assign(nb * nq, {});

    auto node = [&](std::size_t b, StateId q) { return b * nq + index(q); };

    // Dependencies: a new move at the premise node yields a move at the
    // conclusion node.
    struct Edge {
        std::size_t to_basic;
        StateId to_state;
        DeductionRule rule;
        std::optional<std::size_t> grammar_rule;
        VarString appended; // δ of rule iv
    };
    std::vector<std::vector<Edge>> deps(nb * nq);
    for (std::size_t ri = 0; ri < system.rules().size(); ++ri) {
        const Rule& r = system.rules()[ri];
        if (!is_silent(r.label)) continue;
        std::size_t head = *table.basic_id({r.head});
        std::size_t rhs = *table.basic_id(r.rhs);
        for (std::uint32_t qi = 0; qi < nq; ++qi) {
            StateId q{qi};
            if (translate(t, q, {r.head}).output == translate(t, q, r.rhs).output) {
                deps[node(rhs, q)].push_back({head, q, DeductionRule::SilentStep, ri, {}});
            }
        }
    }
    for (std::size_t b = 0; b < nb; ++b) {
        const VarString& s = table.basic_[b];
        if (s.size() < 2) continue;
        Var a = s.front();
        VarString gamma(s.begin() + 1, s.end());
        std::size_t ida = *table.basic_id({a});
        std::size_t idg = *table.basic_id(gamma);
        for (std::uint32_t qi = 0; qi < nq; ++qi) {
            StateId q{qi};
            TranslationResult g = translate(t, q, gamma);
            deps[node(ida, g.end_state)].push_back({b, q, DeductionRule::LeftContext, std::nullopt, g.output});
            if (table.erasable_.in_image(g.end_state, a) && table.erasable_.contains(g.end_state, a)) {
                deps[node(idg, q)].push_back({b, q, DeductionRule::Erasure, std::nullopt, {}});
            }
        }
    }

    ShapeCheck shape(t, system);
    std::vector<VarString> images(nb * nq);
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::uint32_t qi = 0; qi < nq; ++qi) images[node(b, StateId{qi})] = translate(t, StateId{qi}, table.basic_[b]).output;
    }

    std::vector<std::vector<MoveKey>> log(nb * nq);
    std::vector<std::size_t> propagated(nb * nq, 0);
    std::vector<bool> queued(nb * nq, false);
    std::deque<std::size_t> work;

    auto insert = [&](std::size_t b, StateId q, MoveKey key, Derivation d) {
        std::size_t n = node(b, q);
        if (table.moves_[n].count(key)) return;
        if (!shape.admits(q, images[n], key.target)) {
            throw std::logic_error("basic move violates the target-shape invariant: " +
                                   format_move(system, table.basic_[b], q, key));
        }
        log[n].push_back(key);
        table.moves_[n].emplace(std::move(key), std::move(d));
        if (!queued[n]) {
            queued[n] = true;
            work.push_back(n);
        }
    };

    for (std::size_t b = 0; b < nb; ++b) {
        for (std::uint32_t qi = 0; qi < nq; ++qi) {
            StateId q{qi};
            insert(b, q, MoveKey{kTau, images[node(b, q)]}, Derivation{DeductionRule::TauAxiom, std::nullopt, 0, StateId{0}, std::nullopt});
        }
    }
    for (std::size_t ri = 0; ri < system.rules().size(); ++ri) {
        const Rule& r = system.rules()[ri];
        std::size_t head = *table.basic_id({r.head});
        for (std::uint32_t qi = 0; qi < nq; ++qi) {
            StateId q{qi};
            insert(head, q, MoveKey{r.label, translate(t, q, r.rhs).output}, Derivation{DeductionRule::RuleAxiom, ri, 0, StateId{0}, std::nullopt});
        }
    }

    while (!work.empty()) {
        std::size_t n = work.front();
        work.pop_front();
        queued[n] = false;
        std::size_t b = n / nq;
        StateId q{static_cast<std::uint32_t>(n % nq)};
        // Entries of log[n] may grow while iterating (self-dependencies).
        for (; propagated[n] < log[n].size(); ++propagated[n]) {
            const MoveKey premise = log[n][propagated[n]];
            for (const Edge& e : deps[n]) {
                MoveKey key = premise;
                if (e.rule == DeductionRule::LeftContext) key.target = concat(premise.target, e.appended);
                insert(e.to_basic, e.to_state, std::move(key), Derivation{e.rule, e.grammar_rule, b, q, premise});
            }
        }
    }
    return table;
}

namespace {

// Move set of `subject` at q. Basic subjects come straight from the table,
// others by peeling the leftmost variable.
MoveSet assemble(const LongMoveTable& table, const Transducer& t, const VarString& subject, StateId q)
{
    MoveSet out;
    if (auto id = table.basic_id(subject)) {
        for (const auto& [key, d] : table.moves(*id, q)) out[key.label].insert(key.target);
        return out;
    }
    if (subject.empty()) {
        out[kTau].insert({});
        return out;
    }
    Var a = subject.front();
    VarString gamma(subject.begin() + 1, subject.end());
    TranslationResult g = translate(t, q, gamma);
    for (const auto& [key, d] : table.moves(*table.basic_id({a}), g.end_state)) {
        out[key.label].insert(concat(key.target, g.output));
    }
    if (table.erasable().in_image(g.end_state, a) && table.erasable().contains(g.end_state, a)) {
        for (auto& [label, targets] : assemble(table, t, gamma, q)) out[label].insert(targets.begin(), targets.end());
    }
    return out;
}

std::vector<std::string> explain(const LongMoveTable& table, const Transducer& t, const BpaSystem& system,
                                 const VarString& subject, StateId q, const MoveKey& key)
{
    if (auto id = table.basic_id(subject)) return table.derivation_chain(system, *id, q, key);
    if (subject.empty()) return {format_move(system, subject, q, key) + "  [i]"};
    Var a = subject.front();
    VarString gamma(subject.begin() + 1, subject.end());
    TranslationResult g = translate(t, q, gamma);
    std::vector<std::string> chain{format_move(system, subject, q, key)};
    if (has_suffix(key.target, g.output)) {
        MoveKey inner{key.label, VarString(key.target.begin(), key.target.end() - static_cast<std::ptrdiff_t>(g.output.size()))};
        const auto& moves = table.moves(*table.basic_id({a}), g.end_state);
        if (moves.count(inner)) {
            chain.back() += "  [iv]";
            auto rest = table.derivation_chain(system, *table.basic_id({a}), g.end_state, inner);
            chain.insert(chain.end(), rest.begin(), rest.end());
            return chain;
        }
    }
    chain.back() += "  [v: " + system.name(a) + " erasable at " + state_name(g.end_state) + "]";
    auto rest = explain(table, t, system, gamma, q, key);
    chain.insert(chain.end(), rest.begin(), rest.end());
    return chain;
}

void compare(const LongMoveTable& table, const Transducer& t, const BpaSystem& system, int condition, StateId q,
             std::vector<Var> vars, const VarString& left, const VarString& right, ConsistencyReport& report)
{
    MoveSet l = assemble(table, t, left, q);
    MoveSet r = assemble(table, t, right, q);
    if (l == r) return;
    std::set<ActionId> labels;
    for (const auto& [a, _] : l) labels.insert(a);
    for (const auto& [a, _] : r) labels.insert(a);
    static const std::set<VarString> none;
    for (ActionId a : labels) {
        const auto& ls = l.count(a) ? l.at(a) : none;
        const auto& rs = r.count(a) ? r.at(a) : none;
        if (ls == rs) continue;
        ConsistencyViolation v{condition, q, vars, left, right, a, true, {}, {}};
        auto only_left = std::find_if(ls.begin(), ls.end(), [&](const VarString& s) { return !rs.count(s); });
        if (only_left != ls.end()) {
            v.witness_target = *only_left;
        } else {
            v.witness_on_left = false;
            v.witness_target = *std::find_if(rs.begin(), rs.end(), [&](const VarString& s) { return !ls.count(s); });
        }
        v.chain = explain(table, t, system, v.witness_on_left ? left : right, q, MoveKey{a, v.witness_target});
        report.violations.push_back(std::move(v));
    }
}

} // namespace

MoveSet long_moves_of(const LongMoveTable& table, const Transducer& t, const BpaSystem& system,
                      const VarString& subject, StateId q)
{
    require_compatible(t, system);
    if (!t.has_state(q)) throw Error("unknown transducer state " + std::to_string(index(q)));
    if (table.num_states() != t.num_states()) throw Error("move table was built for a different transducer");
    return assemble(table, t, subject, q);
}

ConsistencyReport check_consistency(const Transducer& t, const BpaSystem& system)
{
    LongMoveTable table = basic_moves(t, system);
    ConsistencyReport report;
    const std::size_t nv = system.num_variables();
    const StateId q0 = t.initial();
    for (std::uint32_t a = 0; a < nv; ++a) {
        if (t.step(q0, Var{a}).output.empty()) compare(table, t, system, 1, q0, {Var{a}}, {Var{a}}, {}, report);
    }
    for (std::uint32_t qi = 0; qi < t.num_states(); ++qi) {
        StateId q{qi};
        for (std::uint32_t a = 0; a < nv; ++a) {
            const VarString& out = t.step(q, Var{a}).output;
            if (!out.empty()) compare(table, t, system, 2, q, {Var{a}}, {Var{a}}, out, report);
        }
    }
    for (std::uint32_t qi = 0; qi < t.num_states(); ++qi) {
        StateId q{qi};
        for (std::uint32_t c = 0; c < nv; ++c) {
            if (!is_q_prime(t, q, Var{c})) continue;
            StateId mid = t.step(q, Var{c}).target;
            for (std::uint32_t a = 0; a < nv; ++a) {
                if (!t.step(mid, Var{a}).output.empty()) continue;
                compare(table, t, system, 3, q, {Var{a}, Var{c}}, {Var{a}, Var{c}}, {Var{c}}, report);
            }
        }
    }
    return report;
}

std::string report_to_json(const BpaSystem& system, const Transducer& t, const ConsistencyReport& report)
{
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["verdict"] = report.consistent() ? "consistent" : "inconsistent";
    doc["violations"] = ordered_json::array();
    for (const ConsistencyViolation& v : report.violations) {
        ordered_json rec;
        rec["condition"] = v.condition;
        rec["state"] = index(v.state);
        const auto& label = t.label(v.state);
        if (label) {
            ordered_json names = ordered_json::array();
            for (Var x : *label) names.push_back(system.name(x));
            rec["state_label"] = names;
        } else {
            rec["state_label"] = nullptr;
        }
        ordered_json vars = ordered_json::array();
        for (Var x : v.variables) vars.push_back(system.name(x));
        rec["variables"] = vars;
        rec["left"] = format_string_plain(system, v.left);
        rec["right"] = format_string_plain(system, v.right);
        rec["action"] = system.name(v.action);
        rec["witness"] = {{"side", v.witness_on_left ? "left" : "right"},
                          {"target", format_string_plain(system, v.witness_target)}};
        rec["chain"] = v.chain;
        doc["violations"].push_back(std::move(rec));
    }
    return doc.dump(2) + "\n";
}

std::optional<CertifiedTransducer> CertifiedTransducer::certify(const Transducer& t, const BpaSystem& system,
                                                                ConsistencyReport* report)
{
    ConsistencyReport r = check_consistency(t, system);
    bool ok = r.consistent();
    if (report) *report = std::move(r);
    if (!ok) return std::nullopt;
    return CertifiedTransducer(t);
}

Decision decide(const CertifiedTransducer& ct, const VarString& a, const VarString& b)
{
    return equiv(ct.transducer(), a, b) ? Decision::Proved : Decision::Unknown;
}

Decision decide(const Transducer& t, const BpaSystem& system, const VarString& a, const VarString& b)
{
    ConsistencyReport report;
    auto ct = CertifiedTransducer::certify(t, system, &report);
    if (!ct) {
        const ConsistencyViolation& v = report.violations.front();
        throw NotConsistentError("transducer is not consistent with the system (condition " +
                                 std::to_string(v.condition) + " at state " + std::to_string(index(v.state)) + ")");
    }
    return decide(*ct, a, b);
}

} // namespace bbpa
