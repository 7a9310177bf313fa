#include <fstream>
#include <sstream>

#include "json.hpp"

#include "bbpa/transducer.hpp"

namespace bbpa {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json names_of(const BpaSystem& system, const std::vector<Var>& vars)
{
    ordered_json arr = ordered_json::array();
    for (Var v : vars) arr.push_back(system.name(v));
    return arr;
}

Var resolve(const BpaSystem& system, const nlohmann::json& name, const char* where)
{
    if (!name.is_string()) throw ParseError(0, std::string(where) + ": expected a variable name");
    auto v = system.find_variable(name.get<std::string>());
    if (!v) throw ParseError(0, std::string(where) + ": unknown variable `" + name.get<std::string>() + "`");
    return *v;
}

std::uint32_t as_index(const nlohmann::json& j, const char* where)
{
    if (!j.is_number_unsigned()) throw ParseError(0, std::string(where) + ": expected a state index");
    return j.get<std::uint32_t>();
}

} // namespace

std::string serialize_transducer(const BpaSystem& system, const Transducer& t)
{
    std::ostringstream out;
    out << "{\n  \"states\": [";
    for (std::uint32_t q = 0; q < t.num_states(); ++q) {
        if (q) out << ", ";
        const auto& label = t.label(StateId{q});
        out << (label ? names_of(system, *label).dump() : std::string("null"));
    }
    out << "],\n  \"initial\": " << index(t.initial()) << ",\n  \"delta\": [\n";
    bool first = true;
    for (std::uint32_t q = 0; q < t.num_states(); ++q) {
        for (std::uint32_t a = 0; a < t.num_variables(); ++a) {
            const Step& st = t.step(StateId{q}, Var{a});
            ordered_json rec;
            rec["from"] = q;
            rec["input"] = system.name(Var{a});
            rec["to"] = index(st.target);
            rec["output"] = names_of(system, st.output);
            if (!first) out << ",\n";
            first = false;
            out << "    " << rec.dump();
        }
    }
    out << "\n  ]\n}\n";
    return out.str();
}

Transducer parse_transducer(const BpaSystem& system, const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, std::string("malformed transducer document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("states") || !doc.contains("initial") || !doc.contains("delta")) {
        throw ParseError(0, "transducer document needs `states`, `initial` and `delta`");
    }
    const auto& states = doc["states"];
    if (!states.is_array() || states.empty()) throw ParseError(0, "`states` must be a non-empty array");

    const std::size_t nq = states.size();
    const std::size_t nv = system.num_variables();
    std::vector<Transducer::Label> labels;
    for (const auto& s : states) {
        if (s.is_null()) {
            labels.emplace_back(std::nullopt);
            continue;
        }
        if (!s.is_array()) throw ParseError(0, "state label must be an array of names or null");
        std::vector<Var> label;
        for (const auto& n : s) label.push_back(resolve(system, n, "state label"));
        labels.emplace_back(std::move(label));
    }

    std::uint32_t initial = as_index(doc["initial"], "initial");
    if (initial >= nq) throw ParseError(0, "initial state out of range");

    std::vector<std::vector<std::optional<Step>>> table(nq, std::vector<std::optional<Step>>(nv));
    if (!doc["delta"].is_array()) throw ParseError(0, "`delta` must be an array");
    for (const auto& rec : doc["delta"]) {
        if (!rec.is_object() || !rec.contains("from") || !rec.contains("input") || !rec.contains("to") ||
            !rec.contains("output")) {
            throw ParseError(0, "delta record needs `from`, `input`, `to` and `output`");
        }
        std::uint32_t from = as_index(rec["from"], "from");
        std::uint32_t to = as_index(rec["to"], "to");
        if (from >= nq || to >= nq) throw ParseError(0, "delta record refers to an unknown state");
        Var input = resolve(system, rec["input"], "input");
        if (!rec["output"].is_array()) throw ParseError(0, "`output` must be an array of names");
        VarString output;
        for (const auto& n : rec["output"]) output.push_back(resolve(system, n, "output"));
        auto& slot = table[from][index(input)];
        if (slot) {
            throw ParseError(0, "duplicate delta entry for state " + std::to_string(from) + " and `" +
                                    system.name(input) + "`");
        }
        slot = Step{StateId{to}, std::move(output)};
    }

    std::vector<std::vector<Step>> delta(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        for (std::size_t a = 0; a < nv; ++a) {
            if (!table[q][a]) {
                throw ParseError(0, "transducer is partial: no entry for state " + std::to_string(q) + " and `" +
                                        system.variable_names()[a] + "`");
            }
            delta[q].push_back(std::move(*table[q][a]));
        }
    }
    return Transducer(nv, std::move(labels), std::move(delta), StateId{initial});
}

Transducer load_transducer(const BpaSystem& system, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open transducer file `" + path + "`");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_transducer(system, buf.str());
    } catch (const ParseError& e) {
        throw e.in_file(path);
    }
}

} // namespace bbpa
