#include "doctest.h"

#include "fixtures.hpp"
#include "gen.hpp"
#include "tcw/checker.hpp"
#include "tcw/distinguish.hpp"
#include "tcw/error.hpp"

using namespace tcw;

namespace {

void expect_distinction(const Pes& a, const Pes& b, Fragment f)
{
    Distinction d = distinguish(a, b, f);
    CHECK(d.verified);
    CHECK(is_closed(d.formula));
    CHECK(in_fragment(classify_fragment(d.formula), f));
    CHECK(check_closed(a, d.formula));
    CHECK_FALSE(check_closed(b, d.formula));
}

} // namespace

TEST_CASE("fixture pairs")
{
    expect_distinction(fixture("e6"), fixture("e7"), Fragment::Step);
    expect_distinction(fixture("e7"), fixture("e6"), Fragment::Step);
    expect_distinction(fixture("e7"), fixture("e9"), Fragment::Pomset);
    expect_distinction(fixture("e9"), fixture("e7"), Fragment::Pomset);
    expect_distinction(fixture("pomset_left"), fixture("pomset_right"), Fragment::HP);
    expect_distinction(fixture("pomset_right"), fixture("pomset_left"), Fragment::HP);
    expect_distinction(fixture("p"), fixture("q"), Fragment::Full);
    expect_distinction(fixture("q"), fixture("p"), Fragment::Full);
    expect_distinction(fixture("e1"), fixture("e2"), Fragment::HM);
}

TEST_CASE("hp distinction on the pomset-equivalent pair")
{
    Distinction d = distinguish(fixture("pomset_left"), fixture("pomset_right"), Fragment::HP);
    CHECK(to_string(d.formula) == "ex! {}{} < a h0 . (ex! {}{h0} < b h1 . T) & (ex! {h0}{} < b h1 . T)");
}

TEST_CASE("equivalent pairs are rejected")
{
    try {
        distinguish(fixture("aa"), fixture("a"), Fragment::Full);
        FAIL("expected ActuallyEquivalent");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ActuallyEquivalent);
    }
    CHECK_THROWS_AS(distinguish(fixture("p"), fixture("q"), Fragment::HP), Error);
}

TEST_CASE("depth cap")
{
    DistinguishOptions o;
    o.max_depth = 0;
    try {
        distinguish(fixture("p"), fixture("q"), Fragment::Full, o);
        FAIL("expected DepthExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DepthExceeded);
    }
}

TEST_CASE("random pairs up to six events")
{
    gen::Rng r(31);
    for (int i = 0; i < 40; ++i) {
        auto pr = gen::random_pair(r, 6, 2);
        for (Fragment f : {Fragment::HM, Fragment::Step, Fragment::Pomset, Fragment::HP, Fragment::Full}) {
            if (check_equivalence(pr.a, pr.b, equivalence_for(f)).equivalent) continue;
            expect_distinction(pr.a, pr.b, f);
        }
    }
}
