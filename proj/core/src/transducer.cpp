#include "bbpa/transducer.hpp"

#include <algorithm>

namespace bbpa {

Transducer::Transducer(std::size_t num_variables, std::vector<Label> labels, std::vector<std::vector<Step>> delta,
                       StateId initial)
    : num_variables_(num_variables), labels_(std::move(labels)), delta_(std::move(delta)), initial_(initial)
{
    if (delta_.empty()) throw Error("transducer needs at least one state");
    if (labels_.size() != delta_.size()) throw Error("transducer labels do not match the state count");
    if (index(initial_) >= delta_.size()) throw Error("initial state out of range");
    for (const auto& row : delta_) {
        if (row.size() != num_variables_) throw Error("transducer table is not total");
        for (const Step& s : row) {
            if (index(s.target) >= delta_.size()) throw Error("transition to an unknown state");
            for (Var v : s.output) {
                if (index(v) >= num_variables_) throw Error("output uses an unknown variable");
            }
        }
    }
    for (auto& label : labels_) {
        if (!label) continue;
        for (Var v : *label) {
            if (index(v) >= num_variables_) throw Error("state label uses an unknown variable");
        }
        std::sort(label->begin(), label->end());
        label->erase(std::unique(label->begin(), label->end()), label->end());
    }
}

Transducer Transducer::identity(std::size_t num_variables)
{
    std::vector<Step> row;
    for (std::uint32_t i = 0; i < num_variables; ++i) row.push_back(Step{StateId{0}, VarString{Var{i}}});
    return Transducer(num_variables, {Label{std::vector<Var>{}}}, {row}, StateId{0});
}

std::size_t Transducer::size() const
{
    std::size_t n = 0;
    for (const auto& row : delta_) {
        for (const Step& s : row) n += 1 + s.output.size();
    }
    return n;
}

TranslationResult translate(const Transducer& t, StateId q, const VarString& s)
{
    if (!t.has_state(q)) throw Error("unknown transducer state " + std::to_string(index(q)));
    // Pieces are produced right to left; stitch them in reverse.
    std::vector<const VarString*> pieces;
    pieces.reserve(s.size());
    std::size_t total = 0;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        const Step& st = t.step(q, *it);
        pieces.push_back(&st.output);
        total += st.output.size();
        q = st.target;
    }
    TranslationResult r{q, {}};
    r.output.reserve(total);
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) r.output.insert(r.output.end(), (*it)->begin(), (*it)->end());
    return r;
}

StateId reach(const Transducer& t, StateId q, const VarString& s)
{
    for (auto it = s.rbegin(); it != s.rend(); ++it) q = t.step(q, *it).target;
    return q;
}

bool is_q_prime(const Transducer& t, StateId q, Var a)
{
    const VarString& out = t.step(q, a).output;
    return out.size() == 1 && out.front() == a;
}

bool is_normal_form(const Transducer& t, StateId q, const VarString& s)
{
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        if (!is_q_prime(t, q, *it)) return false;
        q = t.step(q, *it).target;
    }
    return true;
}

NfcReport check_nfc(const Transducer& t)
{
    NfcReport report;
    for (std::uint32_t qi = 0; qi < t.num_states(); ++qi) {
        StateId q{qi};
        for (std::uint32_t ai = 0; ai < t.num_variables(); ++ai) {
            Var a{ai};
            const Step& st = t.step(q, a);
            if (!is_normal_form(t, q, st.output)) {
                report.violations.push_back({q, a, "output is not a normal form at its source state"});
                continue;
            }
            if (translate(t, q, st.output) != TranslationResult{st.target, st.output}) {
                report.violations.push_back({q, a, "reading the output leads to a different target state"});
            }
        }
    }
    return report;
}

bool equiv(const Transducer& t, const VarString& a, const VarString& b)
{
    return translate(t, t.initial(), a).output == translate(t, t.initial(), b).output;
}

} // namespace bbpa
