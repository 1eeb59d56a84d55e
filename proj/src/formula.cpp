#include "tcw/formula.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lexer.hpp"
#include "tcw/error.hpp"

namespace tcw {

namespace {

Formula::Node base(Op op) { Formula::Node n; n.op = op; return n; }

void add_unique(std::vector<std::string>& out, const std::string& v)
{
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void fv_into(const Formula& f, std::vector<std::string>& out, const std::set<std::string>& bound)
{
    auto add = [&](const std::string& v) {
        if (!bound.count(v)) add_unique(out, v);
    };
    switch (f.op()) {
    case Op::Top:
    case Op::Bot:
        return;
    case Op::And:
    case Op::Or:
        fv_into(f.left(), out, bound);
        fv_into(f.right(), out, bound);
        return;
    case Op::Neg:
        fv_into(f.body(), out, bound);
        return;
    case Op::Bind:
    case Op::DualBind:
    case Op::ExecBind:
    case Op::DualExecBind: {
        const Binder& b = f.binder();
        for (const auto& v : b.causes) add(v);
        for (const auto& v : b.concs) add(v);
        auto inner = bound;
        inner.insert(b.var);
        fv_into(f.body(), out, inner);
        return;
    }
    case Op::Step:
    case Op::ExecStep: {
        auto inner = bound;
        for (const auto& b : f.steps()) {
            for (const auto& v : b.causes)
                if (!inner.count(v)) add_unique(out, v);
            for (const auto& v : b.concs)
                if (!inner.count(v)) add_unique(out, v);
            inner.insert(b.var);
        }
        fv_into(f.body(), out, inner);
        return;
    }
    case Op::Exec:
    case Op::DualExec:
        add(f.name());
        fv_into(f.body(), out, bound);
        return;
    case Op::Prop:
        for (const auto& v : f.vars()) add(v);
        return;
    case Op::Mu:
    case Op::Nu:
        for (const auto& v : f.vars()) add(v);
        return;
    }
}

void fp_into(const Formula& f, std::vector<std::string>& out, std::set<std::string>& bound)
{
    switch (f.op()) {
    case Op::Prop:
        if (!bound.count(f.name())) add_unique(out, f.name());
        return;
    case Op::Mu:
    case Op::Nu: {
        bool had = bound.count(f.name()) > 0;
        bound.insert(f.name());
        fp_into(f.body(), out, bound);
        if (!had) bound.erase(f.name());
        return;
    }
    case Op::And:
    case Op::Or:
        fp_into(f.left(), out, bound);
        fp_into(f.right(), out, bound);
        return;
    case Op::Top:
    case Op::Bot:
        return;
    default:
        fp_into(f.body(), out, bound);
        return;
    }
}

} // namespace

Formula::Formula() : node_(std::make_shared<const Node>(base(Op::Top))) {}

Formula Formula::top()
{
    static const Formula t(std::make_shared<const Node>(base(Op::Top)));
    return t;
}

Formula Formula::bot()
{
    static const Formula f(std::make_shared<const Node>(base(Op::Bot)));
    return f;
}

#define TCW_UNARY(fn, OP)                                   \
    Formula Formula::fn(Formula a)                          \
    {                                                       \
        Node n = base(OP);                                  \
        n.kids = {std::move(a)};                            \
        return Formula(std::make_shared<const Node>(std::move(n))); \
    }
TCW_UNARY(neg, Op::Neg)
#undef TCW_UNARY

Formula Formula::conj(Formula a, Formula b)
{
    Node n = base(Op::And);
    n.kids = {std::move(a), std::move(b)};
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::disj(Formula a, Formula b)
{
    Node n = base(Op::Or);
    n.kids = {std::move(a), std::move(b)};
    return Formula(std::make_shared<const Node>(std::move(n)));
}

namespace {
Formula::Node binder_node(Op op, Binder b, Formula body)
{
    Formula::Node n = base(op);
    n.binder = std::move(b);
    n.kids = {std::move(body)};
    return n;
}
} // namespace

Formula Formula::bind(Binder b, Formula body)
{
    return Formula(std::make_shared<const Node>(binder_node(Op::Bind, std::move(b), std::move(body))));
}
Formula Formula::dual_bind(Binder b, Formula body)
{
    return Formula(std::make_shared<const Node>(binder_node(Op::DualBind, std::move(b), std::move(body))));
}
Formula Formula::exec_bind(Binder b, Formula body)
{
    return Formula(std::make_shared<const Node>(binder_node(Op::ExecBind, std::move(b), std::move(body))));
}
Formula Formula::dual_exec_bind(Binder b, Formula body)
{
    return Formula(std::make_shared<const Node>(binder_node(Op::DualExecBind, std::move(b), std::move(body))));
}

Formula Formula::step(std::vector<Binder> bs, Formula body)
{
    Node n = base(Op::Step);
    n.steps = std::move(bs);
    n.kids = {std::move(body)};
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::exec_step(std::vector<Binder> bs, Formula body)
{
    Node n = base(Op::ExecStep);
    n.steps = std::move(bs);
    n.kids = {std::move(body)};
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::exec(std::string var, Formula body)
{
    Node n = base(Op::Exec);
    n.name = std::move(var);
    n.kids = {std::move(body)};
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::dual_exec(std::string var, Formula body)
{
    Node n = base(Op::DualExec);
    n.name = std::move(var);
    n.kids = {std::move(body)};
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::prop(std::string name, std::vector<std::string> args)
{
    Node n = base(Op::Prop);
    n.name = std::move(name);
    n.vars = std::move(args);
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::mu(std::string name, std::vector<std::string> params, Formula body)
{
    Node n = base(Op::Mu);
    n.name = std::move(name);
    n.vars = std::move(params);
    n.kids = {std::move(body)};
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::nu(std::string name, std::vector<std::string> params, Formula body)
{
    Node n = base(Op::Nu);
    n.name = std::move(name);
    n.vars = std::move(params);
    n.kids = {std::move(body)};
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conj_all(const std::vector<Formula>& fs)
{
    if (fs.empty()) return top();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs)
{
    if (fs.empty()) return bot();
    Formula acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

Op Formula::op() const { return node_->op; }
const Formula& Formula::left() const { return node_->kids.at(0); }
const Formula& Formula::right() const { return node_->kids.at(1); }
const Formula& Formula::body() const { return node_->kids.at(0); }
const Binder& Formula::binder() const { return node_->binder; }
const std::vector<Binder>& Formula::steps() const { return node_->steps; }
const std::string& Formula::name() const { return node_->name; }
const std::vector<std::string>& Formula::vars() const { return node_->vars; }

bool Formula::is_binder_like() const
{
    switch (op()) {
    case Op::Bind:
    case Op::DualBind:
    case Op::ExecBind:
    case Op::DualExecBind:
    case Op::Step:
    case Op::ExecStep:
    case Op::Exec:
    case Op::DualExec:
    case Op::Mu:
    case Op::Nu:
        return true;
    default:
        return false;
    }
}

bool operator==(const Formula& a, const Formula& b)
{
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.op == y.op && x.binder == y.binder && x.steps == y.steps && x.name == y.name &&
           x.vars == y.vars && x.kids == y.kids;
}

std::vector<std::string> free_vars(const Formula& f)
{
    std::vector<std::string> out;
    fv_into(f, out, {});
    return out;
}

std::vector<std::string> free_props(const Formula& f)
{
    std::vector<std::string> out;
    std::set<std::string> bound;
    fp_into(f, out, bound);
    return out;
}

bool is_closed(const Formula& f) { return free_vars(f).empty() && free_props(f).empty(); }

bool has_fixpoints(const Formula& f)
{
    switch (f.op()) {
    case Op::Prop:
    case Op::Mu:
    case Op::Nu:
        return true;
    case Op::Top:
    case Op::Bot:
        return false;
    case Op::And:
    case Op::Or:
        return has_fixpoints(f.left()) || has_fixpoints(f.right());
    default:
        return has_fixpoints(f.body());
    }
}

std::size_t formula_size(const Formula& f)
{
    switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Prop:
        return 1;
    case Op::And:
    case Op::Or:
        return 1 + formula_size(f.left()) + formula_size(f.right());
    default:
        return 1 + formula_size(f.body());
    }
}

// ---------------------------------------------------------------- printing

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i];
    }
    return s;
}

std::string binder_text(const Binder& b)
{
    return "{" + join(b.causes) + "}{" + join(b.concs) + "} < " + b.label + " " + b.var;
}

enum Ctx { CtxOr, CtxAnd, CtxUnary };

void print(const Formula& f, Ctx ctx, std::string& out);

void print_operand(const Formula& f, Ctx ctx, std::string& out)
{
    // Binders extend to the right, so they are bracketed whenever something may follow.
    if (f.is_binder_like()) {
        out += "(";
        print(f, CtxOr, out);
        out += ")";
    } else {
        print(f, ctx, out);
    }
}

void print(const Formula& f, Ctx ctx, std::string& out)
{
    switch (f.op()) {
    case Op::Top: out += "T"; return;
    case Op::Bot: out += "F"; return;
    case Op::Or:
    case Op::And: {
        bool is_or = f.op() == Op::Or;
        Ctx mine = is_or ? CtxOr : CtxAnd;
        bool paren = ctx > mine;
        if (paren) out += "(";
        print_operand(f.left(), mine, out);
        out += is_or ? " | " : " & ";
        print_operand(f.right(), is_or ? CtxAnd : CtxUnary, out);
        if (paren) out += ")";
        return;
    }
    case Op::Neg:
        out += "~";
        print_operand(f.body(), CtxUnary, out);
        return;
    case Op::Bind: out += "ex "; break;
    case Op::DualBind: out += "all "; break;
    case Op::ExecBind: out += "ex! "; break;
    case Op::DualExecBind: out += "all! "; break;
    case Op::Step:
    case Op::ExecStep: {
        out += f.op() == Op::Step ? "step(" : "step!(";
        for (std::size_t i = 0; i < f.steps().size(); ++i) {
            if (i) out += ", ";
            out += binder_text(f.steps()[i]);
        }
        out += ") . ";
        print(f.body(), CtxOr, out);
        return;
    }
    case Op::Exec:
    case Op::DualExec:
        out += f.op() == Op::Exec ? "run " : "box ";
        out += f.name() + " . ";
        print(f.body(), CtxOr, out);
        return;
    case Op::Prop:
        out += f.name() + "(" + join(f.vars()) + ")";
        return;
    case Op::Mu:
    case Op::Nu:
        out += f.op() == Op::Mu ? "min " : "max ";
        out += f.name() + "(" + join(f.vars()) + ") . ";
        print(f.body(), CtxOr, out);
        return;
    }
    out += binder_text(f.binder()) + " . ";
    print(f.body(), CtxOr, out);
}

} // namespace

std::string to_string(const Formula& f)
{
    std::string out;
    print(f, CtxOr, out);
    return out;
}

// ---------------------------------------------------------------- parsing

namespace {

const std::set<std::string, std::less<>> kKeywords = {"T", "F", "ex", "all", "step", "run", "box", "min", "max"};

class FormulaParser {
  public:
    explicit FormulaParser(std::string_view src) : lx_(src) {}

    Formula parse()
    {
        Formula f = or_expr();
        if (!lx_.at_end()) lx_.fail("unexpected " + lx_.describe());
        return f;
    }

  private:
    Formula or_expr()
    {
        Formula f = and_expr();
        while (lx_.at_symbol('|')) {
            lx_.next();
            f = Formula::disj(f, and_expr());
        }
        return f;
    }

    Formula and_expr()
    {
        Formula f = unary();
        while (lx_.at_symbol('&')) {
            lx_.next();
            f = Formula::conj(f, unary());
        }
        return f;
    }

    bool bang()
    {
        if (lx_.glued('!')) {
            lx_.next();
            lx_.expect_symbol('!');
            return true;
        }
        lx_.next();
        return false;
    }

    std::vector<std::string> id_list(char close)
    {
        std::vector<std::string> ids;
        while (!lx_.at_symbol(close)) {
            ids.push_back(variable());
            if (lx_.at_symbol(',')) lx_.next();
            else if (!lx_.at_symbol(close)) lx_.fail(std::string("expected ',' or '") + close + "' but found " + lx_.describe());
        }
        lx_.next();
        return ids;
    }

    std::string variable()
    {
        if (lx_.peek().kind == detail::Token::Ident && lx_.peek().text == kWildcard)
            lx_.fail("'_' is not a variable name");
        return lx_.expect_ident("variable");
    }

    Binder binder()
    {
        Binder b;
        if (lx_.at_symbol('{')) {
            lx_.next();
            b.causes = id_list('}');
            lx_.expect_symbol('{');
            b.concs = id_list('}');
            lx_.expect_symbol('<');
        }
        b.label = lx_.expect_ident("label");
        b.var = variable();
        return b;
    }

    Formula unary()
    {
        if (lx_.at_symbol('~')) {
            lx_.next();
            return Formula::neg(unary());
        }
        if (lx_.at_symbol('(')) {
            lx_.next();
            Formula f = or_expr();
            lx_.expect_symbol(')');
            return f;
        }
        const detail::Token& t = lx_.peek();
        if (t.kind != detail::Token::Ident) lx_.fail("expected a formula but found " + lx_.describe());
        if (t.text == "T") { lx_.next(); return Formula::top(); }
        if (t.text == "F") { lx_.next(); return Formula::bot(); }
        if (t.text == "ex" || t.text == "all") {
            bool existential = t.text == "ex";
            bool exec = bang();
            Binder b = binder();
            lx_.expect_symbol('.');
            Formula body = or_expr();
            if (existential) return exec ? Formula::exec_bind(b, body) : Formula::bind(b, body);
            return exec ? Formula::dual_exec_bind(b, body) : Formula::dual_bind(b, body);
        }
        if (t.text == "step") {
            bool exec = bang();
            lx_.expect_symbol('(');
            std::vector<Binder> bs{binder()};
            while (lx_.at_symbol(',')) {
                lx_.next();
                bs.push_back(binder());
            }
            lx_.expect_symbol(')');
            lx_.expect_symbol('.');
            Formula body = or_expr();
            return exec ? Formula::exec_step(bs, body) : Formula::step(bs, body);
        }
        if (t.text == "run" || t.text == "box") {
            bool run = t.text == "run";
            lx_.next();
            std::string v = variable();
            lx_.expect_symbol('.');
            Formula body = or_expr();
            return run ? Formula::exec(v, body) : Formula::dual_exec(v, body);
        }
        if (t.text == "min" || t.text == "max") {
            bool least = t.text == "min";
            lx_.next();
            std::string name = prop_name();
            lx_.expect_symbol('(');
            auto params = id_list(')');
            lx_.expect_symbol('.');
            Formula body = or_expr();
            return least ? Formula::mu(name, params, body) : Formula::nu(name, params, body);
        }
        std::string name = prop_name();
        if (!lx_.at_symbol('(')) lx_.fail("expected '(' after proposition '" + name + "'");
        lx_.next();
        return Formula::prop(name, id_list(')'));
    }

    std::string prop_name()
    {
        const detail::Token& t = lx_.peek();
        if (t.kind == detail::Token::Ident && (kKeywords.count(t.text) || t.text == kWildcard))
            lx_.fail("'" + t.text + "' cannot name a proposition");
        return lx_.expect_ident("proposition name");
    }

    detail::Lexer lx_;
};

struct Validator {
    std::map<std::string, std::size_t> arity;
    // Bound proposition name -> number of enclosing negations at its binder.
    std::vector<std::pair<std::string, int>> scope;

    void check_arity(const std::string& name, std::size_t n)
    {
        auto [it, fresh] = arity.emplace(name, n);
        if (!fresh && it->second != n)
            throw Error(ErrorKind::ArityMismatch, "proposition '" + name + "' used with arities " +
                                                      std::to_string(it->second) + " and " + std::to_string(n));
    }

    void run(const Formula& f, int negs)
    {
        switch (f.op()) {
        case Op::Top:
        case Op::Bot:
            return;
        case Op::And:
        case Op::Or:
            run(f.left(), negs);
            run(f.right(), negs);
            return;
        case Op::Neg:
            run(f.body(), negs + 1);
            return;
        case Op::Prop: {
            check_arity(f.name(), f.vars().size());
            for (auto it = scope.rbegin(); it != scope.rend(); ++it)
                if (it->first == f.name()) {
                    if ((negs - it->second) % 2 != 0)
                        throw Error(ErrorKind::NonPositiveOccurrence,
                                    "'" + f.name() + "' occurs under an odd number of negations");
                    break;
                }
            return;
        }
        case Op::Mu:
        case Op::Nu: {
            check_arity(f.name(), f.vars().size());
            std::set<std::string> params(f.vars().begin(), f.vars().end());
            if (params.size() != f.vars().size())
                throw Error(ErrorKind::FreeVarMismatch, "repeated parameter of '" + f.name() + "'");
            auto fv = free_vars(f.body());
            if (std::set<std::string>(fv.begin(), fv.end()) != params)
                throw Error(ErrorKind::FreeVarMismatch,
                            "free variables of the body of '" + f.name() + "' differ from its parameters");
            scope.emplace_back(f.name(), negs);
            run(f.body(), negs);
            scope.pop_back();
            return;
        }
        default:
            run(f.body(), negs);
            return;
        }
    }
};

} // namespace

void validate_formula(const Formula& f) { Validator().run(f, 0); }

Formula parse_formula(std::string_view src)
{
    Formula f = FormulaParser(src).parse();
    validate_formula(f);
    return f;
}

} // namespace tcw
