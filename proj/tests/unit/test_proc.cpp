#include "doctest.h"

#include "tcw/error.hpp"
#include "tcw/pes_text.hpp"
#include "tcw/proc.hpp"

using namespace tcw;

TEST_CASE("terms print back in normal form")
{
    CHECK(print_term(*parse_term("a.b + c.d")) == "a.b + c.d");
    CHECK(print_term(*parse_term("a.(b + d)")) == "a.(b + d)");
    CHECK(print_term(*parse_term("(a + b) | c")) == "(a + b) | c");
    CHECK(print_term(*parse_term("a.0")) == "a");
    CHECK(print_term(*parse_term("0")) == "0");
}

TEST_CASE("syntax errors carry positions")
{
    try {
        parse_term("a + (b");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SyntaxError);
        CHECK(e.has_position());
    }
    CHECK_THROWS_AS(parse_term("a + + b"), Error);
}

TEST_CASE("prefix is causality, choice is conflict, parallel is concurrency")
{
    Pes p = compile_term("a.b + c", "X");
    REQUIRE(p.size() == 3);
    EventId a = p.id_of("a0"), b = p.id_of("b1"), c = p.id_of("c2");
    CHECK(p.lt(a, b));
    CHECK(p.in_conflict(a, c));
    CHECK(p.in_conflict(b, c));
    Pes q = compile_term("a | b");
    CHECK(q.concurrent(q.id_of("a0"), q.id_of("b1")));
}

TEST_CASE("nil vanishes")
{
    CHECK(compile_term("0").size() == 0);
    CHECK(compile_term("a | 0").size() == 1);
    CHECK(compile_term("a + 0").size() == 1);
}

TEST_CASE("compiled names are stable")
{
    Pes p = compile_term("a | (b + d)", "E3");
    CHECK(print_pes(p) == "pes E3 {\n  event a0 : a;\n  event b1 : b;\n  event d2 : d;\n  b1 # d2;\n}\n");
}
