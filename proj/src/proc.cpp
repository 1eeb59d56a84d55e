#include "tcw/proc.hpp"

#include "lexer.hpp"

namespace tcw {

namespace {

ProcPtr make(ProcTerm::Kind k, Label l, ProcPtr a, ProcPtr b)
{
    auto t = std::make_shared<ProcTerm>();
    t->kind = k;
    t->label = std::move(l);
    t->left = std::move(a);
    t->right = std::move(b);
    return t;
}

class TermParser {
  public:
    explicit TermParser(std::string_view src) : lx_(src) {}

    ProcPtr parse()
    {
        ProcPtr t = choice();
        if (!lx_.at_end()) lx_.fail("unexpected " + lx_.describe());
        return t;
    }

  private:
    ProcPtr choice()
    {
        ProcPtr t = par();
        while (lx_.at_symbol('+')) {
            lx_.next();
            t = make(ProcTerm::Kind::Choice, {}, t, par());
        }
        return t;
    }

    ProcPtr par()
    {
        ProcPtr t = prefix();
        while (lx_.at_symbol('|')) {
            lx_.next();
            t = make(ProcTerm::Kind::Par, {}, t, prefix());
        }
        return t;
    }

    ProcPtr prefix()
    {
        if (lx_.at_symbol('(')) {
            lx_.next();
            ProcPtr t = choice();
            lx_.expect_symbol(')');
            return t;
        }
        if (lx_.at_ident("0")) {
            lx_.next();
            return make(ProcTerm::Kind::Nil, {}, nullptr, nullptr);
        }
        std::string l = lx_.expect_ident("label, '0' or '('");
        ProcPtr cont;
        if (lx_.at_symbol('.')) {
            lx_.next();
            cont = prefix();
        } else {
            cont = make(ProcTerm::Kind::Nil, {}, nullptr, nullptr);
        }
        return make(ProcTerm::Kind::Prefix, l, nullptr, cont);
    }

    detail::Lexer lx_;
};

struct Compiler {
    RawPes raw;

    // Returns the ids of the events generated for t.
    std::vector<std::size_t> run(const ProcTerm& t)
    {
        switch (t.kind) {
        case ProcTerm::Kind::Nil:
            return {};
        case ProcTerm::Kind::Prefix: {
            std::size_t id = raw.events.size();
            std::string name = t.label + std::to_string(id);
            raw.events.push_back({name, t.label});
            auto rest = run(*t.right);
            for (auto r : rest) raw.causes.emplace_back(name, raw.events[r].name);
            rest.insert(rest.begin(), id);
            return rest;
        }
        case ProcTerm::Kind::Choice:
        case ProcTerm::Kind::Par: {
            auto a = run(*t.left);
            auto b = run(*t.right);
            if (t.kind == ProcTerm::Kind::Choice)
                for (auto x : a)
                    for (auto y : b) raw.conflicts.emplace_back(raw.events[x].name, raw.events[y].name);
            a.insert(a.end(), b.begin(), b.end());
            return a;
        }
        }
        return {};
    }
};

void print_into(const ProcTerm& t, int ctx, std::string& out)
{
    // ctx: 0 choice, 1 par, 2 prefix continuation
    switch (t.kind) {
    case ProcTerm::Kind::Nil: out += "0"; return;
    case ProcTerm::Kind::Prefix:
        out += t.label;
        if (t.right->kind != ProcTerm::Kind::Nil) {
            out += ".";
            print_into(*t.right, 2, out);
        }
        return;
    case ProcTerm::Kind::Choice:
    case ProcTerm::Kind::Par: {
        int level = t.kind == ProcTerm::Kind::Choice ? 0 : 1;
        bool paren = ctx > level;
        if (paren) out += "(";
        print_into(*t.left, level, out);
        out += level == 0 ? " + " : " | ";
        print_into(*t.right, level + 1, out);
        if (paren) out += ")";
        return;
    }
    }
}

} // namespace

ProcPtr parse_term(std::string_view src) { return TermParser(src).parse(); }

std::string print_term(const ProcTerm& t)
{
    std::string out;
    print_into(t, 0, out);
    return out;
}

Pes compile_term(const ProcTerm& t, const std::string& name)
{
    Compiler c;
    c.raw.name = name;
    c.run(t);
    if (c.raw.events.size() > kMaxEvents)
        throw Error(ErrorKind::SizeLimitExceeded, "term generates more than 64 events");
    return validate_pes(c.raw);
}

Pes compile_term(std::string_view src, const std::string& name) { return compile_term(*parse_term(src), name); }

} // namespace tcw
