#include "bbpa/cli.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

namespace bbpa::cli {

namespace fs = std::filesystem;

namespace {

GameBounds bounds_from(unsigned depth, unsigned tau_bound, std::size_t len_cap)
{
    GameBounds b;
    b.depth = depth;
    b.tau_bound = tau_bound;
    b.len_cap = len_cap;
    return b;
}

std::string describe(const GameBounds& b)
{
    return "depth=" + std::to_string(b.depth) + " tau-bound=" + std::to_string(b.tau_bound) +
           " len-cap=" + std::to_string(b.len_cap);
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write `" + path + "`");
    f << text;
}

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

// Whitespace-separated tokens; double quotes group (and may be empty).
std::vector<std::string> tokenize(const std::string& line, std::size_t lineno)
{
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        if (line[i] == '"') {
            std::size_t end = line.find('"', i + 1);
            if (end == std::string::npos) throw ParseError(lineno, "unterminated quoted string");
            toks.push_back(line.substr(i + 1, end - i - 1));
            i = end + 1;
            continue;
        }
        std::size_t end = i;
        while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
        toks.push_back(line.substr(i, end - i));
        i = end;
    }
    return toks;
}

class SuiteRunner {
public:
    explicit SuiteRunner(fs::path dir) : dir_(std::move(dir)) {}

    void run_manifest(const fs::path& manifest, SuiteResult& result)
    {
        std::ifstream in(manifest);
        if (!in) throw Error("cannot open manifest `" + manifest.string() + "`");
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::vector<std::string> toks;
            try {
                toks = tokenize(line, lineno);
                if (toks.empty()) continue;
                bool ok = check(toks, lineno);
                ++result.checks;
                if (ok) {
                    ++result.passed;
                } else {
                    result.failures.push_back(manifest.filename().string() + ":" + std::to_string(lineno) + ": " +
                                              line);
                }
            } catch (const ParseError& e) {
                throw e.line() ? e.in_file(manifest.string())
                               : ParseError(lineno, e.what()).in_file(manifest.string());
            }
        }
    }

private:
    const BpaSystem& system(const std::string& name)
    {
        auto it = systems_.find(name);
        if (it == systems_.end()) it = systems_.emplace(name, load_system((dir_ / name).string())).first;
        return it->second;
    }

    const Transducer& transducer(const std::string& sys, const std::string& name)
    {
        auto key = std::make_pair(sys, name);
        auto it = transducers_.find(key);
        if (it == transducers_.end()) {
            it = transducers_.emplace(key, load_transducer(system(sys), (dir_ / name).string())).first;
        }
        return it->second;
    }

    const Transducer& synthesized(const std::string& sys)
    {
        auto it = synthesized_.find(sys);
        if (it == synthesized_.end()) it = synthesized_.emplace(sys, synthesize(system(sys)).transducer).first;
        return it->second;
    }

    static void arity(const std::vector<std::string>& toks, std::size_t n, std::size_t lineno)
    {
        if (toks.size() != n) {
            throw ParseError(lineno, "`" + toks[0] + "` takes " + std::to_string(n - 1) + " arguments, got " +
                                         std::to_string(toks.size() - 1));
        }
    }

    static void expect_one_of(const std::string& got, std::initializer_list<const char*> allowed, std::size_t lineno)
    {
        for (const char* a : allowed) {
            if (got == a) return;
        }
        throw ParseError(lineno, "unexpected verdict `" + got + "`");
    }

    static unsigned number(const std::string& s, std::size_t lineno)
    {
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(s, &used);
            if (used == s.size()) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ParseError(lineno, "expected a number, got `" + s + "`");
    }

    bool check(const std::vector<std::string>& toks, std::size_t lineno)
    {
        const std::string& kind = toks[0];
        if (kind == "norm") {
            arity(toks, 4, lineno);
            const BpaSystem& g = system(toks[1]);
            auto v = g.find_variable(toks[2]);
            if (!v) throw ParseError(lineno, "unknown variable `" + toks[2] + "`");
            return compute_norms(g)[*v].to_string() == toks[3];
        }
        if (kind == "normed") {
            arity(toks, 3, lineno);
            expect_one_of(toks[2], {"true", "false"}, lineno);
            return is_normed(system(toks[1])) == (toks[2] == "true");
        }
        if (kind == "nfc") {
            arity(toks, 4, lineno);
            expect_one_of(toks[3], {"pass", "fail"}, lineno);
            return check_nfc(transducer(toks[1], toks[2])).passed() == (toks[3] == "pass");
        }
        if (kind == "consistency") {
            arity(toks, 4, lineno);
            expect_one_of(toks[3], {"consistent", "inconsistent"}, lineno);
            const BpaSystem& g = system(toks[1]);
            return check_consistency(transducer(toks[1], toks[2]), g).consistent() == (toks[3] == "consistent");
        }
        if (kind == "decide") {
            arity(toks, 6, lineno);
            expect_one_of(toks[5], {"equivalent", "unknown"}, lineno);
            const BpaSystem& g = system(toks[1]);
            auto ct = CertifiedTransducer::certify(transducer(toks[1], toks[2]), g);
            if (!ct) return false;
            Decision d = decide(*ct, parse_string(g, toks[3]), parse_string(g, toks[4]));
            return (d == Decision::Proved) == (toks[5] == "equivalent");
        }
        if (kind == "synth-decide") {
            arity(toks, 5, lineno);
            expect_one_of(toks[4], {"equivalent", "unknown"}, lineno);
            const BpaSystem& g = system(toks[1]);
            Decision d = decide(synthesized(toks[1]), g, parse_string(g, toks[2]), parse_string(g, toks[3]));
            return (d == Decision::Proved) == (toks[4] == "equivalent");
        }
        if (kind == "refute") {
            arity(toks, 8, lineno);
            expect_one_of(toks[7], {"distinguished", "unknown"}, lineno);
            const BpaSystem& g = system(toks[1]);
            GameBounds b = bounds_from(number(toks[4], lineno), number(toks[5], lineno), number(toks[6], lineno));
            GameVerdict v = distinguish(g, parse_string(g, toks[2]), parse_string(g, toks[3]), {}, b);
            return v.distinguished == (toks[7] == "distinguished");
        }
        throw ParseError(lineno, "unknown check kind `" + kind + "`");
    }

    fs::path dir_;
    std::map<std::string, BpaSystem> systems_;
    std::map<std::pair<std::string, std::string>, Transducer> transducers_;
    std::map<std::string, Transducer> synthesized_;
};

struct Options {
    std::string system;
    std::string transducer;
    std::string left;
    std::string right;
    std::string out_path;
    std::string trace_path;
    std::string corpus;
    unsigned depth = GameBounds{}.depth;
    unsigned tau_bound = GameBounds{}.tau_bound;
    std::size_t len_cap = GameBounds{}.len_cap;
    bool visible = false;
    bool json = false;
    bool witness = false;
};

int cmd_norms(const Options& o, std::ostream& out)
{
    BpaSystem g = load_system(o.system);
    NormTable n = o.visible ? compute_visible_norms(g) : compute_norms(g);
    bool finite = true;
    for (std::uint32_t a = 0; a < g.num_variables(); ++a) {
        out << g.name(Var{a}) << ' ' << n[Var{a}] << '\n';
        finite = finite && n[Var{a}].is_finite();
    }
    return finite ? kSuccess : kNegative;
}

int cmd_check_nfc(const Options& o, std::ostream& out, std::ostream& err)
{
    BpaSystem g = load_system(o.system);
    Transducer t = load_transducer(g, o.transducer);
    NfcReport r = check_nfc(t);
    out << (r.passed() ? "pass" : "fail") << '\n';
    for (const NfcViolation& v : r.violations) {
        err << "q" << index(v.state) << ' ' << g.name(v.input) << ": " << v.reason << '\n';
    }
    return r.passed() ? kSuccess : kNegative;
}

int cmd_check_consistency(const Options& o, std::ostream& out, std::ostream& err)
{
    BpaSystem g = load_system(o.system);
    Transducer t = load_transducer(g, o.transducer);
    ConsistencyReport r = check_consistency(t, g);
    if (o.json) {
        out << report_to_json(g, t, r);
    } else {
        out << (r.consistent() ? "consistent" : "inconsistent") << '\n';
        for (const ConsistencyViolation& v : r.violations) {
            err << "condition " << v.condition << " at q" << index(v.state) << ": " << format_string(g, v.left)
                << " vs " << format_string(g, v.right) << ", action " << g.name(v.action) << ", only "
                << (v.witness_on_left ? "left" : "right") << " moves to " << format_string(g, v.witness_target)
                << '\n';
            for (const std::string& line : v.chain) err << "  " << line << '\n';
        }
    }
    return r.consistent() ? kSuccess : kNegative;
}

int cmd_synthesize(const Options& o, std::ostream& out, std::ostream& err)
{
    BpaSystem g = load_system(o.system);
    SynthesisOptions opts;
    opts.bounds = bounds_from(o.depth, o.tau_bound, o.len_cap);
    std::optional<CanonicalCandidate> c;
    try {
        c = synthesize(g, opts);
    } catch (const UnnormedError& e) {
        err << "error: " << e.what() << '\n';
        return kNegative;
    } catch (const SearchExhausted& e) {
        err << "search exhausted: " << e.what() << '\n';
        return kUnknown;
    }
    std::string doc = serialize_transducer(g, c->transducer);
    if (o.out_path.empty()) {
        out << doc;
    } else {
        write_file(o.out_path, doc);
    }
    if (!o.trace_path.empty()) write_file(o.trace_path, format_trace(g, *c));
    return kSuccess;
}

int cmd_decide(const Options& o, std::ostream& out, std::ostream& err)
{
    BpaSystem g = load_system(o.system);
    Transducer t = load_transducer(g, o.transducer);
    VarString l = parse_string(g, o.left);
    VarString r = parse_string(g, o.right);
    ConsistencyReport report;
    auto ct = CertifiedTransducer::certify(t, g, &report);
    if (!ct) {
        out << "inconsistent\n";
        err << "transducer is not consistent with the system; no verdict\n";
        return kNegative;
    }
    if (decide(*ct, l, r) == Decision::Proved) {
        out << "equivalent\n";
        return kSuccess;
    }
    out << "unknown\n";
    return kUnknown;
}

int cmd_refute(const Options& o, std::ostream& out, std::ostream& err)
{
    BpaSystem g = load_system(o.system);
    GameBounds b = bounds_from(o.depth, o.tau_bound, o.len_cap);
    GameVerdict v = distinguish(g, parse_string(g, o.left), parse_string(g, o.right), {}, b);
    out << (v.distinguished ? "distinguished" : "unknown") << ' ' << describe(b) << '\n';
    if (v.distinguished && o.witness) err << format_witness(g, *v.witness);
    return v.distinguished ? kNegative : kUnknown;
}

int cmd_export_dot(const Options& o, std::ostream& out)
{
    BpaSystem g = load_system(o.system);
    out << export_dot(g, load_transducer(g, o.transducer));
    return kSuccess;
}

int cmd_suite(const Options& o, std::ostream& out, std::ostream& err)
{
    SuiteResult r = run_suite(o.corpus);
    for (const std::string& w : r.warnings) err << "warning: " << w << '\n';
    for (const std::string& f : r.failures) out << "FAIL " << f << '\n';
    out << r.passed << '/' << r.checks << " checks passed\n";
    return r.exit_code;
}

} // namespace

std::string export_dot(const BpaSystem& system, const Transducer& t)
{
    std::ostringstream out;
    out << "digraph transducer {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (std::uint32_t q = 0; q < t.num_states(); ++q) {
        const auto& label = t.label(StateId{q});
        std::string text = "q" + std::to_string(q);
        if (label) {
            text = "{";
            for (std::size_t i = 0; i < label->size(); ++i) text += (i ? "," : "") + system.name((*label)[i]);
            text += "}";
        }
        out << "  q" << q << " [label=\"" << dot_escape(text) << "\"";
        if (StateId{q} == t.initial()) out << ", shape=doublecircle";
        out << "];\n";
    }
    for (std::uint32_t q = 0; q < t.num_states(); ++q) {
        for (std::uint32_t a = 0; a < t.num_variables(); ++a) {
            const Step& st = t.step(StateId{q}, Var{a});
            out << "  q" << q << " -> q" << index(st.target) << " [label=\""
                << dot_escape(system.name(Var{a}) + " / " + format_string(system, st.output)) << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

SuiteResult run_suite(const std::string& dir)
{
    if (!fs::is_directory(dir)) throw Error("corpus directory `" + dir + "` does not exist");
    std::vector<fs::path> manifests;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".manifest") manifests.push_back(entry.path());
    }
    std::sort(manifests.begin(), manifests.end());

    SuiteResult result;
    SuiteRunner runner(dir);
    for (const fs::path& m : manifests) runner.run_manifest(m, result);
    if (result.checks == 0) result.warnings.push_back("no checks found in `" + dir + "`");
    result.exit_code = result.failures.empty() ? kSuccess : kNegative;
    return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Branching bisimilarity of normed BPA processes via normal-form transducers", "bbpa"};
    app.require_subcommand(1);
    Options o;

    auto add_bounds = [&](CLI::App* sub) {
        sub->add_option("--depth", o.depth, "attacker rounds")->capture_default_str();
        sub->add_option("--tau-bound", o.tau_bound, "longest silent prefix of a defender answer")->capture_default_str();
        sub->add_option("--len-cap", o.len_cap, "longest string the game may visit")->capture_default_str();
    };
    auto add_system = [&](CLI::App* sub) { sub->add_option("--system", o.system, "system file")->required(); };
    auto add_transducer = [&](CLI::App* sub) {
        sub->add_option("--transducer", o.transducer, "transducer document")->required();
    };
    auto add_pair = [&](CLI::App* sub) {
        sub->add_option("--left", o.left, "space-separated variables, \"\" for the empty string")->required();
        sub->add_option("--right", o.right, "space-separated variables, \"\" for the empty string")->required();
    };

    auto* norms = app.add_subcommand("norms", "print the norm of every variable");
    norms->add_option("system", o.system, "system file")->required();
    norms->add_flag("--visible", o.visible, "count only visible actions");

    auto* nfc = app.add_subcommand("check-nfc", "check the normal-form condition");
    add_system(nfc);
    add_transducer(nfc);

    auto* cons = app.add_subcommand("check-consistency", "check consistency of a transducer with a system");
    add_system(cons);
    add_transducer(cons);
    cons->add_flag("--json", o.json, "print the full report as JSON");

    auto* synth = app.add_subcommand("synthesize", "search for the canonical transducer");
    add_system(synth);
    add_bounds(synth);
    synth->add_option("--out", o.out_path, "write the transducer here instead of standard output");
    synth->add_option("--trace", o.trace_path, "write the search trace here");

    auto* dec = app.add_subcommand("decide", "prove equivalence with a transducer checked for consistency");
    add_system(dec);
    add_transducer(dec);
    add_pair(dec);

    auto* ref = app.add_subcommand("refute", "play the bounded bisimulation game");
    add_system(ref);
    add_pair(ref);
    add_bounds(ref);
    ref->add_flag("--witness", o.witness, "print the attacker strategy to standard error");

    auto* dot = app.add_subcommand("export-dot", "render a transducer in Graphviz format");
    add_system(dot);
    add_transducer(dot);

    auto* suite = app.add_subcommand("suite", "run every manifest of a corpus directory");
    suite->add_option("corpus", o.corpus, "corpus directory")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (norms->parsed()) return cmd_norms(o, out);
        if (nfc->parsed()) return cmd_check_nfc(o, out, err);
        if (cons->parsed()) return cmd_check_consistency(o, out, err);
        if (synth->parsed()) return cmd_synthesize(o, out, err);
        if (dec->parsed()) return cmd_decide(o, out, err);
        if (ref->parsed()) return cmd_refute(o, out, err);
        if (dot->parsed()) return cmd_export_dot(o, out);
        if (suite->parsed()) return cmd_suite(o, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace bbpa::cli
