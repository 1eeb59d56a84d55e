#include "doctest.h"

#include "tcw/error.hpp"
#include "tcw/formula.hpp"

using namespace tcw;

namespace {

ErrorKind kind_of(const char* s)
{
    try {
        parse_formula(s);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error for " << s);
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("basic parsing")
{
    Formula f = parse_formula("ex {}{} < b x . T");
    CHECK(f.op() == Op::Bind);
    CHECK(f.binder().label == "b");
    CHECK(f.binder().var == "x");
    CHECK(f.body().op() == Op::Top);
    CHECK(parse_formula("T").op() == Op::Top);
    CHECK(parse_formula("F").op() == Op::Bot);
}

TEST_CASE("precedence")
{
    Formula f = parse_formula("~T & T | F");
    REQUIRE(f.op() == Op::Or);
    CHECK(f.left().op() == Op::And);
    CHECK(f.left().left().op() == Op::Neg);
    // binders extend to the right
    Formula g = parse_formula("ex {}{} < a x . T & F");
    CHECK(g.op() == Op::Bind);
    CHECK(g.body().op() == Op::And);
}

TEST_CASE("printing round-trips")
{
    for (const char* s : {
             "ex {x}{y} < a z . T & F",
             "~(all! {}{} < b x . run x . T)",
             "min X(x) . box x . X(x) | T",
             "step!({}{} < a u, {}{} < b v) . T",
             "max Y() . Y() & T",
             "ex {}{} < _ z . T",
             "(ex {}{} < a x . T) & (ex {}{} < b y . T)",
         }) {
        Formula f = parse_formula(s);
        CHECK(to_string(f) == s);
        CHECK(to_string(parse_formula(to_string(f))) == to_string(f));
    }
}

TEST_CASE("free variables")
{
    CHECK(free_vars(parse_formula("ex {x}{y} < a z . run z . run w . T")) == std::vector<std::string>{"x", "y", "w"});
    CHECK(free_vars(parse_formula("T")).empty());
    Formula mu = parse_formula("min X(x) . ex! {x}{} < a y . X(y)");
    CHECK(free_vars(mu) == std::vector<std::string>{"x"});
    CHECK(free_props(mu).empty());
    CHECK(free_props(parse_formula("ex {}{} < a y . X(y)")) == std::vector<std::string>{"X"});
    CHECK(is_closed(parse_formula("ex! {}{} < a y . T")));
}

TEST_CASE("validation")
{
    CHECK(kind_of("ex {}{} < a") == ErrorKind::SyntaxError);
    CHECK(kind_of("X(x) & X(x, y)") == ErrorKind::ArityMismatch);
    CHECK(kind_of("min X(x) . ~X(x)") == ErrorKind::NonPositiveOccurrence);
    CHECK(kind_of("min X(x) . T") == ErrorKind::FreeVarMismatch);
    CHECK(kind_of("min X(x) . run x . T | run y . X(x)") == ErrorKind::FreeVarMismatch);
    CHECK_NOTHROW(parse_formula("min X(x) . run x . T | X(x)"));
    CHECK(kind_of("ex {}{} < a x . T &") == ErrorKind::SyntaxError);
}

TEST_CASE("syntax error position")
{
    try {
        parse_formula("T &\n  ex {} < a x . T");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SyntaxError);
        REQUIRE(e.has_position());
        CHECK(e.position().line == 2);
    }
}

TEST_CASE("size")
{
    CHECK(formula_size(parse_formula("T")) == 1);
    CHECK(formula_size(parse_formula("~T & T")) == 4);
}
