#include "doctest.h"

#include "enumerate.hpp"
#include "fixtures.hpp"
#include "reference.hpp"

// Frozen expectations for the reference code itself, computed by hand.

TEST_CASE("reference configurations")
{
    ref::Structure e1 = ref::Structure::from(fixture("e1"));  // a.b + c.d
    CHECK(ref::configs(e1) == std::vector<ref::Set>{0b0000, 0b0001, 0b0100, 0b0011, 0b1100});
    CHECK(ref::residual(e1, 0b0001) == 0b0010);
    ref::Structure e7 = ref::Structure::from(fixture("e7"));
    CHECK(ref::steps(e7, 0, ref::Mode::Single) == std::vector<ref::Set>{0b01, 0b10});
    CHECK(ref::steps(e7, 0, ref::Mode::Step) == std::vector<ref::Set>{0b01, 0b10, 0b11});
}

TEST_CASE("reference verdicts")
{
    auto S = [](const char* n) { return ref::Structure::from(fixture(n)); };
    CHECK(ref::bisimilar(S("e6"), S("e7"), ref::Mode::Single));
    CHECK_FALSE(ref::bisimilar(S("e6"), S("e7"), ref::Mode::Step));
    CHECK(ref::bisimilar(S("e7"), S("e9"), ref::Mode::Step));
    CHECK_FALSE(ref::bisimilar(S("e7"), S("e9"), ref::Mode::Pomset));
    CHECK(ref::bisimilar(S("pomset_left"), S("pomset_right"), ref::Mode::Pomset));
    CHECK_FALSE(ref::hp_bisimilar(S("pomset_left"), S("pomset_right"), false));
    CHECK(ref::hp_bisimilar(S("p"), S("q"), false));
    CHECK_FALSE(ref::hp_bisimilar(S("p"), S("q"), true));
    CHECK(ref::hp_bisimilar(S("aa"), S("a"), true));
}

TEST_CASE("enumeration separates the interleaving example only with steps")
{
    auto differ = [](const ref::Enumeration& e) {
        for (const auto& c : e.closed)
            if (c.left != c.right) return true;
        return false;
    };
    tcw::Pes e6 = fixture("e6"), e7 = fixture("e7");
    CHECK_FALSE(differ(ref::enumerate(e6, e7, ref::Frag::HM, 3)));
    CHECK(differ(ref::enumerate(e6, e7, ref::Frag::Step, 3)));
    CHECK(differ(ref::enumerate(e6, e7, ref::Frag::HP, 3)));
    tcw::Pes p = fixture("p"), q = fixture("q");
    CHECK_FALSE(differ(ref::enumerate(p, q, ref::Frag::HP, 2)));
}
