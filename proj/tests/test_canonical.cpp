#include "doctest.h"
#include "testkit.hpp"

using namespace bbpa;
using testkit::str;

namespace {

Transducer corpus_transducer(const BpaSystem& g, const std::string& file)
{
    return load_transducer(g, testkit::corpus(file));
}

bool has_clause(const CanonicityReport& r, CanonicityViolation::Clause c)
{
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const CanonicityViolation& v) { return v.clause == c; });
}

} // namespace

TEST_CASE("synthesis: silent eraser")
{
    BpaSystem g = testkit::corpus_system("sys_sil.bpa");
    CanonicalCandidate c = synthesize(g);
    CHECK(c.transducer == corpus_transducer(g, "sil.eraser.json"));
    CHECK(*c.transducer.label(StateId{0}) == std::vector<Var>{*g.find_variable("X")});
    CHECK(format_trace(g, c).find("(redundant)") != std::string::npos);
}

TEST_CASE("synthesis: without silent rules outputs are the longest equivalent strings")
{
    for (const char* sys : {"sys_id.bpa", "sys_g1.bpa"}) {
        CAPTURE(sys);
        BpaSystem g = testkit::corpus_system(sys);
        Transducer t = synthesize(g).transducer;
        REQUIRE(t.num_states() == 1);
        for (std::uint32_t a = 0; a < g.num_variables(); ++a) {
            CHECK(t.step(StateId{0}, Var{a}) == Step{StateId{0}, {Var{a}}});
        }
    }
    // A_n performs 2^n - 1 a-steps, exactly like A1 repeated that often.
    BpaSystem e = parse_system(testkit::expn_text(3));
    Transducer t = synthesize(e).transducer;
    for (std::uint32_t i = 0; i < 3; ++i) {
        CHECK(t.step(StateId{0}, Var{i}).output == VarString((std::size_t{1} << (i + 1)) - 1, Var{0}));
    }
    // EXPN10 needs a game horizon beyond 1023 to confirm the longest output.
    CHECK_THROWS_AS(synthesize(testkit::corpus_system("sys_expn10.bpa")), SearchExhausted);
}

TEST_CASE("synthesis: the worked example")
{
    BpaSystem g = testkit::corpus_system("sys_fb.bpa");
    CanonicalCandidate c = synthesize(g);
    CHECK(c.transducer == corpus_transducer(g, "fb.canonical.json"));
    CHECK(redundant_set(c, str(g, "A B")) == std::vector<Var>{*g.find_variable("F_B")});
    CHECK(redundant_set(c, str(g, "C B")).empty());
    CHECK(redundant_set(c, {}).empty());
    CHECK(translate_output(c.transducer, str(g, "FBA")) == str(g, "FBA"));
    CHECK(translate_output(c.transducer, str(g, "FBA B")) == str(g, "A B"));
}

TEST_CASE("synthesis errors")
{
    CHECK_THROWS_AS(synthesize(testkit::corpus_system("sys_unnormed.bpa")), UnnormedError);
    SynthesisOptions tight;
    tight.node_budget = 1;
    CHECK_THROWS_AS(synthesize(testkit::corpus_system("sys_fb.bpa"), tight), SearchExhausted);
}

TEST_CASE("cc_norm")
{
    BpaSystem g = testkit::corpus_system("sys_fb.bpa");
    CanonicalCandidate c = synthesize(g);
    CcNorm e = cc_norm(c, g, {}, {});
    CHECK(e.value == 0);
    CHECK(e.exact);
    CcNorm f = cc_norm(c, g, str(g, "F_B"), {});
    CHECK(f.value == 1);
    CHECK(f.exact);
    CcNorm a = cc_norm(c, g, str(g, "A"), {});
    CHECK(a.value == 1);
    CHECK(a.exact);
    CcNorm abc = cc_norm(c, g, str(g, "A B C"), {});
    CHECK(abc.value == 3);

    RedundancyContext ctx(g.num_variables(), {*g.find_variable("F_B")});
    CHECK(cc_norm(c, g, str(g, "F_B"), ctx).value == 0);
    RedundancyContext missing(g.num_variables(), {*g.find_variable("A")});
    CHECK_THROWS_AS(cc_norm(c, g, str(g, "A"), missing), Error);

    BpaSystem sil = testkit::corpus_system("sys_sil.bpa");
    CanonicalCandidate cs = synthesize(sil);
    RedundancyContext xs(sil.num_variables(), {*sil.find_variable("X")});
    CHECK(cc_norm(cs, sil, str(sil, "X X A X"), xs).value == 1);
}

TEST_CASE("verify_canonicity")
{
    BpaSystem sil = testkit::corpus_system("sys_sil.bpa");
    Transducer eraser = corpus_transducer(sil, "sil.eraser.json");
    std::vector<std::pair<VarString, VarString>> facts{{str(sil, "X"), {}}};
    CHECK(verify_canonicity(eraser, sil, facts).no_violation_found());
    CanonicityReport tampered = verify_canonicity(corpus_transducer(sil, "sil.tampered.json"), sil, facts);
    CHECK(has_clause(tampered, CanonicityViolation::Clause::Nfc));
    CHECK(has_clause(tampered, CanonicityViolation::Clause::RedundancyFree));
    CanonicityReport id = verify_canonicity(Transducer::identity(2), sil, facts);
    CHECK(has_clause(id, CanonicityViolation::Clause::Equivalence));
    CHECK(to_string(CanonicityViolation::Clause::Equivalence) == "a");

    // An output containing an erased variable is not redundancy-free.
    Transducer padded(2, {Transducer::Label{{Var{0}}}},
                      {{Step{StateId{0}, {}}, Step{StateId{0}, {Var{0}, Var{1}}}}}, StateId{0});
    if (check_nfc(padded).passed()) {
        CHECK(has_clause(verify_canonicity(padded, sil, {}), CanonicityViolation::Clause::RedundancyFree));
    } else {
        CHECK(has_clause(verify_canonicity(padded, sil, {}), CanonicityViolation::Clause::Nfc));
    }

    BpaSystem id_sys = testkit::corpus_system("sys_id.bpa");
    CHECK(has_clause(verify_canonicity(corpus_transducer(id_sys, "id.erase_u.json"), id_sys, {}),
                     CanonicityViolation::Clause::Consistency));

    BpaSystem fb = testkit::corpus_system("sys_fb.bpa");
    std::vector<std::pair<VarString, VarString>> fb_facts{
        {str(fb, "F_B A B"), str(fb, "A B")}, {str(fb, "F_B B"), str(fb, "B")}, {str(fb, "FBA B"), str(fb, "A B")}};
    CHECK(verify_canonicity(corpus_transducer(fb, "fb.canonical.json"), fb, fb_facts).no_violation_found());
}

TEST_CASE("composition")
{
    BpaSystem g = testkit::corpus_system("sys_fb.bpa");
    Transducer t = corpus_transducer(g, "fb.canonical.json");
    CHECK(composition_check(t, str(g, "F_B"), str(g, "A B")));
    CHECK(translate_output(t, str(g, "F_B A B")) == str(g, "A B"));
    CHECK(composition_check(t, {}, str(g, "C A")));
    BpaSystem sil = testkit::corpus_system("sys_sil.bpa");
    CHECK(composition_check(corpus_transducer(sil, "sil.eraser.json"), str(sil, "X"), str(sil, "A")));
    testkit::Gen gen(71);
    for (int i = 0; i < 500; ++i) {
        CHECK(composition_check(t, gen.string(g.num_variables(), 5), gen.string(g.num_variables(), 5)));
    }
}

namespace {

struct Synthesized {
    BpaSystem g;
    CanonicalCandidate c;
};

std::vector<Synthesized> random_syntheses(std::uint64_t seed, int count)
{
    testkit::Gen gen(seed);
    std::vector<Synthesized> out;
    for (int i = 0; i < count; ++i) {
        BpaSystem g = gen.normed_system(2 + gen.below(3), 2, 0.4);
        try {
            CanonicalCandidate c = synthesize(g);
            out.push_back({std::move(g), std::move(c)});
        } catch (const SearchExhausted&) {
        }
    }
    return out;
}

} // namespace

TEST_CASE("synthesized transducers: structural properties")
{
    auto runs = random_syntheses(83, 80);
    REQUIRE(runs.size() > 40);
    for (const auto& [g, c] : runs) {
        const Transducer& t = c.transducer;
        CHECK(check_nfc(t).passed());
        CHECK(check_consistency(t, g).consistent());
        CHECK(t.num_states() <= (std::size_t{1} << g.num_variables()));
        NormTable n = compute_norms(g);
        for (std::uint32_t q = 0; q < t.num_states(); ++q) {
            REQUIRE(t.label(StateId{q}));
            const std::vector<Var>& label = *t.label(StateId{q});
            for (std::uint32_t a = 0; a < g.num_variables(); ++a) {
                const Step& st = t.step(StateId{q}, Var{a});
                CHECK(st.output.size() <= n[Var{a}].value());
                // no symbol is redundant before the part of the output to its right
                StateId at{q};
                for (auto it = st.output.rbegin(); it != st.output.rend(); ++it) {
                    const std::vector<Var>& here = *t.label(at);
                    CHECK_FALSE(std::binary_search(here.begin(), here.end(), *it));
                    at = t.step(at, *it).target;
                }
                // label members are erased and stay put
                if (std::binary_search(label.begin(), label.end(), Var{a})) {
                    CHECK(st.output.empty());
                    CHECK(st.target == StateId{q});
                }
            }
        }
    }
}

TEST_CASE("synthesis is deterministic and invariant under renaming")
{
    testkit::Gen gen(89);
    for (int i = 0; i < 40; ++i) {
        BpaSystem g = gen.normed_system(2 + gen.below(3), 2, 0.4);
        auto perm = testkit::random_permutation(gen, g.num_variables());
        BpaSystem h = testkit::permute(g, perm);
        try {
            CanonicalCandidate a = synthesize(g);
            CanonicalCandidate b = synthesize(g);
            CHECK(a.transducer == b.transducer);
            CHECK(format_trace(g, a) == format_trace(g, b));
            CanonicalCandidate p = synthesize(h);
            CHECK(a.transducer.num_states() == p.transducer.num_states());
            // the same pairs are identified
            for (int k = 0; k < 20; ++k) {
                VarString l = gen.string(g.num_variables(), 3);
                VarString r = gen.string(g.num_variables(), 3);
                CHECK(equiv(a.transducer, l, r) ==
                      equiv(p.transducer, testkit::permute(l, perm), testkit::permute(r, perm)));
            }
        } catch (const SearchExhausted&) {
        }
    }
}

TEST_CASE("synthesized transducers identify only game-equivalent strings")
{
    int proved = 0;
    testkit::Gen gen(97);
    for (const auto& [g, c] : random_syntheses(101, 60)) {
        for (int k = 0; k < 20; ++k) {
            VarString l = gen.string(g.num_variables(), 3);
            VarString r = gen.coin() ? translate_output(c.transducer, l) : gen.string(g.num_variables(), 3);
            if (!equiv(c.transducer, l, r)) continue;
            ++proved;
            CHECK_FALSE(distinguish(g, l, r, {}, GameBounds{8, 4, 12}).distinguished);
            // equal classes have equal class-changing norms
            RedundancyContext init(g.num_variables(), *c.transducer.label(c.transducer.initial()));
            CcNorm nl = cc_norm(c, g, l, init);
            CcNorm nr = cc_norm(c, g, r, init);
            if (nl.exact && nr.exact) CHECK(nl.value == nr.value);
        }
    }
    CHECK(proved > 200);
}

TEST_CASE("identified strings stay identified under a common prefix")
{
    testkit::Gen gen(103);
    int pairs = 0;
    for (const auto& [g, c] : random_syntheses(107, 40)) {
        const Transducer& t = c.transducer;
        for (int k = 0; k < 30; ++k) {
            VarString gamma = gen.string(g.num_variables(), 3);
            VarString delta = gen.coin() ? translate_output(t, gamma) : gen.string(g.num_variables(), 3);
            if (!equiv(t, gamma, delta)) continue;
            ++pairs;
            VarString alpha = gen.string(g.num_variables(), 3);
            CHECK(equiv(t, concat(alpha, gamma), concat(alpha, delta)));
        }
    }
    CHECK(pairs > 300);
}

TEST_CASE("a prefix vanishes exactly when it uses the redundant set of its suffix")
{
    testkit::Gen gen(109);
    int vanished = 0;
    for (const auto& [g, c] : random_syntheses(113, 40)) {
        const Transducer& t = c.transducer;
        for (int k = 0; k < 30; ++k) {
            VarString gamma = gen.string(g.num_variables(), 3);
            std::vector<Var> r = redundant_set(c, gamma);
            VarString alpha = gen.coin() && !r.empty() ? gen.string_over(r, 3) : gen.string(g.num_variables(), 3);
            bool in_r = std::all_of(alpha.begin(), alpha.end(),
                                    [&](Var v) { return std::binary_search(r.begin(), r.end(), v); });
            CHECK(equiv(t, concat(alpha, gamma), gamma) == in_r);
            vanished += in_r && !alpha.empty();
        }
    }
    CHECK(vanished > 50);
}
