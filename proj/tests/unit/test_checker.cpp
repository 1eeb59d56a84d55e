#include "doctest.h"

#include "fixtures.hpp"
#include "tcw/checker.hpp"
#include "tcw/error.hpp"
#include "tcw/logic.hpp"
#include "tcw/proc.hpp"

using namespace tcw;

namespace {

Formula P(const char* s) { return parse_formula(s); }
bool holds(const Pes& p, const char* f) { return check_closed(p, P(f)); }

} // namespace

TEST_CASE("legal pairs")
{
    Pes e1 = fixture("e1");
    Env bad{{"x", e1.id_of("a0")}, {"y", e1.id_of("c2")}};
    CHECK_FALSE(legal(e1, EventSet(), bad, P("run x . run y . T")));
    CHECK(legal(e1, EventSet(), {{"x", e1.id_of("a0")}}, P("run x . T")));
    CHECK(legal(e1, EventSet::single(e1.id_of("c2")), bad, P("T")));
    CHECK_THROWS_AS(legal(e1, EventSet(), {}, P("run x . T")), Error);
}

TEST_CASE("binding versus executing")
{
    Pes e1 = fixture("e1"), e2 = fixture("e2"), e3 = fixture("e3");
    CHECK(holds(e1, "ex {}{} < b x . T"));
    CHECK(holds(e1, "(ex {}{} < b x . T) & (ex {}{} < d y . T)"));
    const char* phi = "ex {}{} < a z . run z . ((ex {}{} < b x . T) & (ex {}{} < d y . T))";
    CHECK_FALSE(holds(e1, phi));
    CHECK(holds(e2, phi));
    CHECK(holds(e3, phi));
    const char* conc = "ex {}{} < a z . run z . ex {}{z} < b x . T";
    CHECK_FALSE(holds(e2, conc));
    CHECK(holds(e3, conc));
}

TEST_CASE("binding twice to the same label")
{
    Pes aa = fixture("aa"), a = fixture("a");
    for (const Pes* p : {&aa, &a}) {
        CHECK(holds(*p, "ex {}{} < a z . ex {}{} < a w . T"));
        CHECK_FALSE(holds(*p, "ex {}{} < a z . ex {}{} < a w . run z . run w . T"));
    }
}

TEST_CASE("negation of open formulas")
{
    Pes e4 = fixture("e4"), e5 = fixture("e5");
    for (const Pes* p : {&e4, &e5}) {
        CHECK_FALSE(holds(*p, "ex {}{} < a x . ex {}{} < b y . run x . ~(run y . T)"));
        CHECK_FALSE(holds(*p, "ex {}{} < a x . ex {}{} < b y . ~(ex {x, y}{} < c z . T)"));
    }
}

TEST_CASE("step sugar on the absorption example")
{
    Pes p = fixture("p"), q = fixture("q");
    const char* f = "step({}{} < a x, {}{} < b y) . (~(ex {}{x} < c z . T)) & (~(ex {}{y} < c w . T))";
    CHECK(holds(p, f));
    CHECK_FALSE(holds(q, f));
}

TEST_CASE("closed checks from the spectrum examples")
{
    Pes e6 = fixture("e6"), e7 = fixture("e7"), e9 = fixture("e9");
    CHECK(holds(e7, "step!({}{} < a x, {}{} < b y) . T"));
    CHECK_FALSE(holds(e6, "step!({}{} < a x, {}{} < b y) . T"));
    CHECK(holds(e9, "ex! {}{} < a x . ex! {x}{} < b y . T"));
    CHECK_FALSE(holds(e7, "ex! {}{} < a x . ex! {x}{} < b y . T"));
    CHECK(holds(e6, "T"));
    CHECK_THROWS_AS(check_closed(e6, P("run x . T")), Error);
}

TEST_CASE("fixpoints")
{
    Pes aaa = compile_term("a.a.a");
    CHECK(holds(aaa, "ex! {}{} < a x . max X(x) . all! {x}{} < a y . X(y)"));
    CHECK_FALSE(holds(aaa, "min X() . X()"));
    CHECK(holds(aaa, "max X() . X()"));
    // eventually no a is enabled
    CHECK(holds(aaa, "min X() . (~(ex! {}{} < a x . T)) | (ex! {}{} < a y . X())"));
    Pes loop = compile_term("a | a");
    CHECK(holds(loop, "min X() . (~(ex! {}{} < a x . T)) | (all! {}{} < a y . X())"));
    CHECK_THROWS_AS(check_closed(aaa, P("X()")), Error);
}

TEST_CASE("denotations are legal")
{
    Pes e1 = fixture("e1");
    Formula f = P("run x . run y . T");
    Denotation d = denotation(e1, f);
    Denotation l = legal_pairs(e1, f);
    for (const auto& pr : d.pairs) CHECK(l.pairs.count(pr) == 1);
    CHECK(d.vars == std::vector<std::string>{"x", "y"});
}

TEST_CASE("well-formed semantics")
{
    Pes e1 = fixture("e1");
    Env bad{{"x", e1.id_of("a0")}, {"y", e1.id_of("c2")}};
    Formula f = P("ex {}{} < b z . T");
    CHECK(wf_satisfies(e1, EventSet(), {}, f) == satisfies(e1, EventSet(), {}, f));
    CHECK(wf_satisfies(e1, EventSet(), bad, P("T")));
    CHECK_THROWS_AS(wf_satisfies(e1, EventSet(), {}, P("ex {}{} < a x . run y . T")), Error);
}

TEST_CASE("approximant saturation")
{
    Pes aaa = compile_term("a.a.a");
    Formula ev = P("min X() . (~(ex! {}{} < a x . T)) | (ex! {}{} < a y . X())");
    std::size_t k = mu_iterations(aaa, ev);
    CHECK(k >= 1);
    CHECK(check_closed(aaa, approximant(ev, k)) == check_closed(aaa, ev));
    CHECK(denotation(aaa, approximant(ev, k)).pairs == denotation(aaa, ev).pairs);
}
