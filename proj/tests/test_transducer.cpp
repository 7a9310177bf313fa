#include "doctest.h"
#include "testkit.hpp"

#include <fstream>
#include <sstream>

using namespace bbpa;
using testkit::str;

namespace {

Transducer corpus_transducer(const BpaSystem& g, const std::string& file)
{
    return load_transducer(g, testkit::corpus(file));
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("translation reads right to left")
{
    BpaSystem g = testkit::corpus_system("sys_sil.bpa");
    Transducer eraser = corpus_transducer(g, "sil.eraser.json");
    TranslationResult r = translate(eraser, StateId{0}, str(g, "X A X"));
    CHECK(r.end_state == StateId{0});
    CHECK(r.output == str(g, "A"));
    CHECK(translate(eraser, StateId{0}, {}).output.empty());
    CHECK_THROWS_AS(translate(eraser, StateId{3}, {}), Error);
}

TEST_CASE("the worked example transducer")
{
    BpaSystem g = testkit::corpus_system("sys_fb.bpa");
    Transducer t = corpus_transducer(g, "fb.canonical.json");
    CHECK(translate_output(t, str(g, "F_B A A B A C C A B")) == str(g, "A A B A C C A B"));
    CHECK(translate_output(t, str(g, "F_B A A C A B C A B")) == str(g, "F_B A A C A B C A B"));
    CHECK(translate_output(t, str(g, "FBA B")) == str(g, "A B"));
    CHECK(reach(t, t.initial(), str(g, "A B")) == StateId{1});
    CHECK(reach(t, t.initial(), str(g, "C B")) == StateId{0});
}

TEST_CASE("q-prime and normal forms")
{
    BpaSystem g = testkit::corpus_system("sys_sil.bpa");
    Transducer eraser = corpus_transducer(g, "sil.eraser.json");
    CHECK(is_q_prime(eraser, StateId{0}, *g.find_variable("A")));
    CHECK_FALSE(is_q_prime(eraser, StateId{0}, *g.find_variable("X")));
    CHECK(is_normal_form(eraser, StateId{0}, str(g, "A A")));
    CHECK_FALSE(is_normal_form(eraser, StateId{0}, str(g, "X A")));
    CHECK(is_normal_form(eraser, StateId{0}, {}));
}

TEST_CASE("nfc verdicts")
{
    BpaSystem sil = testkit::corpus_system("sys_sil.bpa");
    CHECK(check_nfc(corpus_transducer(sil, "sil.eraser.json")).passed());
    CHECK(check_nfc(Transducer::identity(2)).passed());
    NfcReport tampered = check_nfc(corpus_transducer(sil, "sil.tampered.json"));
    REQUIRE_FALSE(tampered.passed());
    CHECK(tampered.violations.front().input == *sil.find_variable("A"));

    // Output is a normal form but reading it lands elsewhere.
    std::vector<std::vector<Step>> delta{
        {Step{StateId{1}, {Var{0}}}, Step{StateId{0}, {Var{1}}}},
        {Step{StateId{1}, {Var{0}}}, Step{StateId{0}, {Var{0}}}},
    };
    Transducer wrong(2, {std::nullopt, std::nullopt}, delta, StateId{0});
    NfcReport r = check_nfc(wrong);
    REQUIRE_FALSE(r.passed());
    CHECK(r.violations.front().state == StateId{1});
    CHECK(r.violations.front().input == Var{1});
}

TEST_CASE("equiv")
{
    BpaSystem g = testkit::corpus_system("sys_sil.bpa");
    Transducer eraser = corpus_transducer(g, "sil.eraser.json");
    CHECK(equiv(eraser, str(g, "X A"), str(g, "A")));
    CHECK_FALSE(equiv(Transducer::identity(2), str(g, "X A"), str(g, "A")));
}

TEST_CASE("constructor validation")
{
    CHECK_THROWS_AS(Transducer(1, {}, {}, StateId{0}), Error);
    CHECK_THROWS_AS(Transducer(2, {std::nullopt}, {{Step{StateId{0}, {}}}}, StateId{0}), Error);
    CHECK_THROWS_AS(Transducer(1, {std::nullopt}, {{Step{StateId{1}, {}}}}, StateId{0}), Error);
    CHECK_THROWS_AS(Transducer(1, {std::nullopt}, {{Step{StateId{0}, {Var{4}}}}}, StateId{0}), Error);
    CHECK_THROWS_AS(Transducer(1, {std::nullopt}, {{Step{StateId{0}, {}}}}, StateId{2}), Error);
    Transducer sorted(3, {Transducer::Label{{Var{2}, Var{0}, Var{2}}}},
                      {{Step{StateId{0}, {}}, Step{StateId{0}, {Var{1}}}, Step{StateId{0}, {}}}}, StateId{0});
    CHECK(*sorted.label(StateId{0}) == std::vector<Var>{Var{0}, Var{2}});
    CHECK(sorted.size() == 4);
}

TEST_CASE("corpus documents are canonical")
{
    for (const auto& [sys, file] : testkit::nfc_corpus_pairs()) {
        CAPTURE(file);
        BpaSystem g = testkit::corpus_system(sys);
        Transducer t = corpus_transducer(g, file);
        CHECK(serialize_transducer(g, t) == slurp(testkit::corpus(file)));
        CHECK(parse_transducer(g, serialize_transducer(g, t)) == t);
    }
}

TEST_CASE("malformed transducer documents")
{
    BpaSystem g = testkit::corpus_system("sys_sil.bpa");
    const char* bad[] = {
        "not json",
        R"({"states": [[]], "initial": 0})",
        R"({"states": [], "initial": 0, "delta": []})",
        R"({"states": [[]], "initial": 1, "delta": []})",
        R"({"states": [["Q"]], "initial": 0, "delta": []})",
        R"({"states": [[]], "initial": 0, "delta": [{"from":0,"input":"X","to":0,"output":[]}]})",
        R"({"states": [[]], "initial": 0, "delta": [{"from":0,"input":"X","to":0,"output":[]},
            {"from":0,"input":"X","to":0,"output":[]}, {"from":0,"input":"A","to":0,"output":["A"]}]})",
        R"({"states": [[]], "initial": 0, "delta": [{"from":0,"input":"X","to":3,"output":[]},
            {"from":0,"input":"A","to":0,"output":["A"]}]})",
        R"({"states": [[]], "initial": 0, "delta": [{"from":0,"input":"X","to":0,"output":["Z"]},
            {"from":0,"input":"A","to":0,"output":["A"]}]})",
        R"({"states": [[]], "initial": -1, "delta": []})",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_transducer(g, text), ParseError);
    }
    CHECK_THROWS_AS(load_transducer(g, testkit::corpus("absent.json")), Error);
}

TEST_CASE("unlabelled states survive a round trip")
{
    BpaSystem g = testkit::corpus_system("sys_sil.bpa");
    Transducer t(2, {std::nullopt}, {{Step{StateId{0}, {Var{0}}}, Step{StateId{0}, {Var{1}}}}}, StateId{0});
    std::string doc = serialize_transducer(g, t);
    CHECK(doc.find("\"states\": [null]") != std::string::npos);
    CHECK(parse_transducer(g, doc) == t);
}

// Laws every nfc transducer satisfies, on random strings.
TEST_CASE("idempotency, suffix composition and normal-form fixpoint")
{
    testkit::Gen gen(2024);
    for (const auto& [sys, file] : testkit::nfc_corpus_pairs()) {
        CAPTURE(file);
        BpaSystem g = testkit::corpus_system(sys);
        Transducer t = corpus_transducer(g, file);
        REQUIRE(check_nfc(t).passed());
        for (int i = 0; i < 300; ++i) {
            StateId q{static_cast<std::uint32_t>(gen.below(t.num_states()))};
            VarString alpha = gen.string(g.num_variables(), 6);
            VarString gamma = gen.string(g.num_variables(), 6);
            TranslationResult once = translate(t, q, alpha);
            CHECK(translate(t, q, once.output) == once);
            CHECK(is_normal_form(t, q, once.output));
            TranslationResult tg = translate(t, q, gamma);
            CHECK(translate(t, q, concat(alpha, gamma)).output ==
                  concat(translate(t, tg.end_state, alpha).output, tg.output));
        }
    }
}
