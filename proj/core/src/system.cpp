#include "bbpa/system.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace bbpa {

namespace {

constexpr std::string_view kTauName = "tau";

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool is_identifier(std::string_view s)
{
    if (s.empty()) return false;
    auto head = static_cast<unsigned char>(s[0]);
    if (!(std::isalpha(head) || head == '_')) return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u == '_' || u == '\'';
    });
}

} // namespace

BpaSystem::BpaSystem(std::vector<std::string> variables, std::vector<std::string> visible_actions,
                     std::vector<Rule> rules)
    : variables_(std::move(variables))
{
    actions_.reserve(visible_actions.size() + 1);
    actions_.emplace_back(kTauName);
    for (auto& a : visible_actions) {
        if (a == kTauName) throw Error("`tau` is reserved and cannot be a visible action");
        actions_.push_back(std::move(a));
    }
    for (const Rule& r : rules) {
        if (index(r.head) >= variables_.size()) throw Error("rule head is not a declared variable");
        if (index(r.label) >= actions_.size()) throw Error("rule label is not a declared action");
        for (Var v : r.rhs) {
            if (index(v) >= variables_.size()) throw Error("rule right-hand side uses an undeclared variable");
        }
    }
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    rules_ = std::move(rules);
    by_head_.resize(variables_.size());
    for (std::size_t i = 0; i < rules_.size(); ++i) by_head_[index(rules_[i].head)].push_back(i);
}

std::optional<Var> BpaSystem::find_variable(std::string_view name) const
{
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i] == name) return Var{static_cast<std::uint32_t>(i)};
    }
    return std::nullopt;
}

std::optional<ActionId> BpaSystem::find_action(std::string_view name) const
{
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        if (actions_[i] == name) return ActionId{static_cast<std::uint32_t>(i)};
    }
    return std::nullopt;
}

std::span<const std::size_t> BpaSystem::rules_of(Var head) const
{
    return by_head_.at(index(head));
}

std::size_t BpaSystem::size() const
{
    std::size_t n = rules_.size();
    for (const Rule& r : rules_) n += r.rhs.size();
    return n;
}

bool BpaSystem::operator==(const BpaSystem& other) const
{
    return variables_ == other.variables_ && actions_ == other.actions_ && rules_ == other.rules_;
}

BpaSystem parse_system(std::string_view text)
{
    std::vector<std::string> variables;
    std::unordered_map<std::string, Var> var_index;
    std::vector<std::string> actions;
    std::unordered_map<std::string, ActionId> action_index;
    bool have_vars = false;
    bool explicit_actions = false;
    bool seen_rule = false;
    std::vector<Rule> rules;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = split_ws(line);
        if (tokens.empty()) {
            if (eol == text.size()) break;
            continue;
        }

        if (!have_vars) {
            if (tokens[0] != "vars") throw ParseError(line_no, "expected `vars` declaration first");
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                std::string name(tokens[i]);
                if (!is_identifier(name)) throw ParseError(line_no, "invalid variable name `" + name + "`");
                if (var_index.count(name)) throw ParseError(line_no, "duplicate variable `" + name + "`");
                var_index.emplace(name, Var{static_cast<std::uint32_t>(variables.size())});
                variables.push_back(std::move(name));
            }
            have_vars = true;
        } else if (tokens[0] == "actions") {
            if (explicit_actions || seen_rule) {
                throw ParseError(line_no, "`actions` must appear once, directly after `vars`");
            }
            explicit_actions = true;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                std::string name(tokens[i]);
                if (name == kTauName) throw ParseError(line_no, "`tau` is reserved and cannot be declared");
                if (!is_identifier(name)) throw ParseError(line_no, "invalid action name `" + name + "`");
                if (action_index.count(name)) throw ParseError(line_no, "duplicate action `" + name + "`");
                action_index.emplace(name, ActionId{static_cast<std::uint32_t>(actions.size() + 1)});
                actions.push_back(std::move(name));
            }
        } else if (tokens[0] == "vars") {
            throw ParseError(line_no, "duplicate `vars` declaration");
        } else {
            seen_rule = true;
            if (tokens.size() < 3 || tokens[2] != "->") {
                throw ParseError(line_no, "expected `<head> <action> -> <rhs...>`");
            }
            auto head = var_index.find(std::string(tokens[0]));
            if (head == var_index.end()) {
                throw ParseError(line_no, "undeclared variable `" + std::string(tokens[0]) + "`");
            }
            std::string act(tokens[1]);
            ActionId label = kTau;
            if (act != kTauName) {
                auto it = action_index.find(act);
                if (it == action_index.end()) {
                    if (explicit_actions) throw ParseError(line_no, "undeclared action `" + act + "`");
                    if (!is_identifier(act)) throw ParseError(line_no, "invalid action name `" + act + "`");
                    it = action_index.emplace(act, ActionId{static_cast<std::uint32_t>(actions.size() + 1)}).first;
                    actions.push_back(act);
                }
                label = it->second;
            }
            VarString rhs;
            for (std::size_t i = 3; i < tokens.size(); ++i) {
                auto it = var_index.find(std::string(tokens[i]));
                if (it == var_index.end()) {
                    throw ParseError(line_no, "undeclared variable `" + std::string(tokens[i]) + "`");
                }
                rhs.push_back(it->second);
            }
            rules.push_back(Rule{head->second, label, std::move(rhs)});
        }
        if (eol == text.size()) break;
    }
    if (!have_vars) throw ParseError(0, "missing `vars` declaration");
    return BpaSystem(std::move(variables), std::move(actions), std::move(rules));
}

BpaSystem load_system(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open system file `" + path + "`");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_system(buf.str());
    } catch (const ParseError& e) {
        throw e.in_file(path);
    }
}

std::string serialize_system(const BpaSystem& system)
{
    std::ostringstream out;
    out << "vars";
    for (const auto& v : system.variable_names()) out << ' ' << v;
    out << '\n';
    if (system.num_actions() > 1) {
        out << "actions";
        for (std::size_t i = 1; i < system.num_actions(); ++i) out << ' ' << system.action_names()[i];
        out << '\n';
    }
    for (const Rule& r : system.rules()) {
        out << system.name(r.head) << ' ' << system.name(r.label) << " ->";
        for (Var v : r.rhs) out << ' ' << system.name(v);
        out << '\n';
    }
    return out.str();
}

VarString parse_string(const BpaSystem& system, std::string_view text)
{
    VarString out;
    for (auto tok : split_ws(text)) {
        if (tok == "ε" || tok == "eps") continue;
        auto v = system.find_variable(tok);
        if (!v) throw ParseError(0, "unknown variable `" + std::string(tok) + "`");
        out.push_back(*v);
    }
    return out;
}

std::string format_string(const BpaSystem& system, const VarString& s)
{
    if (s.empty()) return "ε";
    return format_string_plain(system, s);
}

std::string format_string_plain(const BpaSystem& system, const VarString& s)
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += system.name(s[i]);
    }
    return out;
}

} // namespace bbpa
