#include "tcw/logic.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "tcw/error.hpp"

namespace tcw {

namespace {

using Labels = std::optional<std::vector<Label>>;

Formula rebuild_binder(Op op, Binder b, Formula body)
{
    switch (op) {
    case Op::Bind: return Formula::bind(std::move(b), std::move(body));
    case Op::DualBind: return Formula::dual_bind(std::move(b), std::move(body));
    case Op::ExecBind: return Formula::exec_bind(std::move(b), std::move(body));
    case Op::DualExecBind: return Formula::dual_exec_bind(std::move(b), std::move(body));
    default: throw Error(ErrorKind::InvalidArgument, "not a binder");
    }
}

// Same operator and payload, new children.
Formula with_kids(const Formula& f, const std::vector<Formula>& kids)
{
    switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Prop:
        return f;
    case Op::And: return Formula::conj(kids[0], kids[1]);
    case Op::Or: return Formula::disj(kids[0], kids[1]);
    case Op::Neg: return Formula::neg(kids[0]);
    case Op::Bind:
    case Op::DualBind:
    case Op::ExecBind:
    case Op::DualExecBind:
        return rebuild_binder(f.op(), f.binder(), kids[0]);
    case Op::Step: return Formula::step(f.steps(), kids[0]);
    case Op::ExecStep: return Formula::exec_step(f.steps(), kids[0]);
    case Op::Exec: return Formula::exec(f.name(), kids[0]);
    case Op::DualExec: return Formula::dual_exec(f.name(), kids[0]);
    case Op::Mu: return Formula::mu(f.name(), f.vars(), kids[0]);
    case Op::Nu: return Formula::nu(f.name(), f.vars(), kids[0]);
    }
    return f;
}

std::vector<Formula> kids_of(const Formula& f)
{
    if (f.is_binary()) return {f.left(), f.right()};
    switch (f.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Prop:
        return {};
    default:
        return {f.body()};
    }
}

// Label instances of a binder under wildcard expansion.
std::vector<Binder> instances(const Binder& b, const Labels& labels)
{
    if (!b.is_wildcard() || !labels) return {b};
    std::vector<Binder> out;
    for (const auto& l : *labels) {
        Binder c = b;
        c.label = l;
        out.push_back(std::move(c));
    }
    return out;
}

Formula desugar_rec(const Formula& f, const Labels& labels, const DesugarOptions& opts)
{
    switch (f.op()) {
    case Op::Bind:
    case Op::DualBind:
    case Op::ExecBind:
    case Op::DualExecBind: {
        bool universal = f.op() == Op::DualBind || f.op() == Op::DualExecBind;
        Formula body = desugar_rec(f.body(), labels, opts);
        if (f.op() == Op::ExecBind) body = Formula::exec(f.binder().var, body);
        if (f.op() == Op::DualExecBind) body = Formula::dual_exec(f.binder().var, body);
        std::vector<Formula> parts;
        for (auto& b : instances(f.binder(), labels))
            parts.push_back(universal ? Formula::dual_bind(b, body) : Formula::bind(b, body));
        return universal ? Formula::conj_all(parts) : Formula::disj_all(parts);
    }
    case Op::Step:
    case Op::ExecStep: {
        std::vector<Binder> bs = f.steps();
        if (opts.step_concurrency)
            for (std::size_t i = 1; i < bs.size(); ++i)
                for (std::size_t j = 0; j < i; ++j)
                    if (std::find(bs[i].concs.begin(), bs[i].concs.end(), bs[j].var) == bs[i].concs.end())
                        bs[i].concs.push_back(bs[j].var);
        Formula inner = desugar_rec(f.body(), labels, opts);
        if (f.op() == Op::ExecStep)
            for (std::size_t i = bs.size(); i-- > 0;) inner = Formula::exec(bs[i].var, inner);
        std::vector<Formula> parts;
        std::function<void(std::size_t, std::vector<Binder>&)> combos = [&](std::size_t i, std::vector<Binder>& chosen) {
            if (i == bs.size()) {
                Formula g = inner;
                for (std::size_t k = chosen.size(); k-- > 0;) g = Formula::bind(chosen[k], g);
                parts.push_back(g);
                return;
            }
            for (auto& b : instances(bs[i], labels)) {
                chosen.push_back(b);
                combos(i + 1, chosen);
                chosen.pop_back();
            }
        };
        std::vector<Binder> chosen;
        combos(0, chosen);
        return Formula::disj_all(parts);
    }
    default: {
        auto kids = kids_of(f);
        for (auto& k : kids) k = desugar_rec(k, labels, opts);
        return with_kids(f, kids);
    }
    }
}

void collect_vars(const Formula& f, std::set<std::string>& out)
{
    auto add_binder = [&](const Binder& b) {
        out.insert(b.causes.begin(), b.causes.end());
        out.insert(b.concs.begin(), b.concs.end());
        out.insert(b.var);
    };
    switch (f.op()) {
    case Op::Bind:
    case Op::DualBind:
    case Op::ExecBind:
    case Op::DualExecBind:
        add_binder(f.binder());
        break;
    case Op::Step:
    case Op::ExecStep:
        for (const auto& b : f.steps()) add_binder(b);
        break;
    case Op::Exec:
    case Op::DualExec:
        out.insert(f.name());
        break;
    case Op::Prop:
    case Op::Mu:
    case Op::Nu:
        out.insert(f.vars().begin(), f.vars().end());
        break;
    default:
        break;
    }
    for (const auto& k : kids_of(f)) collect_vars(k, out);
}

void collect_props(const Formula& f, std::set<std::string>& out)
{
    if (f.op() == Op::Prop || f.op() == Op::Mu || f.op() == Op::Nu) out.insert(f.name());
    for (const auto& k : kids_of(f)) collect_props(k, out);
}

std::string fresh(const std::string& base, std::set<std::string>& avoid)
{
    for (std::size_t k = 1;; ++k) {
        std::string cand = base + "_" + std::to_string(k);
        if (avoid.insert(cand).second) return cand;
    }
}

std::string mapped(const std::map<std::string, std::string>& sub, const std::string& v)
{
    auto it = sub.find(v);
    return it == sub.end() ? v : it->second;
}

std::vector<std::string> mapped(const std::map<std::string, std::string>& sub, const std::vector<std::string>& vs)
{
    std::vector<std::string> out;
    for (const auto& v : vs) out.push_back(mapped(sub, v));
    return out;
}

struct Renamer {
    std::set<std::string> avoid;

    // Would binding z inside `scope_free` capture the image of some other variable?
    static bool captures(const std::map<std::string, std::string>& sub, const std::string& z,
                         const std::vector<std::string>& scope_free)
    {
        for (const auto& v : scope_free) {
            if (v == z) continue;
            if (mapped(sub, v) == z) return true;
        }
        return false;
    }

    Formula run(const Formula& f, std::map<std::string, std::string> sub)
    {
        if (sub.empty()) return f;
        switch (f.op()) {
        case Op::Top:
        case Op::Bot:
            return f;
        case Op::Prop:
            return Formula::prop(f.name(), mapped(sub, f.vars()));
        case Op::Mu:
        case Op::Nu: {
            auto params = mapped(sub, f.vars());
            if (std::set<std::string>(params.begin(), params.end()).size() != params.size())
                throw Error(ErrorKind::InvalidArgument,
                            "renaming would identify parameters of fixpoint '" + f.name() + "'");
            Formula body = run(f.body(), sub);
            return f.op() == Op::Mu ? Formula::mu(f.name(), params, body) : Formula::nu(f.name(), params, body);
        }
        case Op::Exec:
            return Formula::exec(mapped(sub, f.name()), run(f.body(), sub));
        case Op::DualExec:
            return Formula::dual_exec(mapped(sub, f.name()), run(f.body(), sub));
        case Op::Bind:
        case Op::DualBind:
        case Op::ExecBind:
        case Op::DualExecBind: {
            Binder b = f.binder();
            b.causes = mapped(sub, b.causes);
            b.concs = mapped(sub, b.concs);
            sub.erase(b.var);
            if (captures(sub, b.var, free_vars(f.body()))) {
                std::string z = fresh(b.var, avoid);
                sub[b.var] = z;
                b.var = z;
            }
            return rebuild_binder(f.op(), b, run(f.body(), sub));
        }
        case Op::Step:
        case Op::ExecStep: {
            std::vector<Binder> bs = f.steps();
            for (auto& b : bs) {
                b.causes = mapped(sub, b.causes);
                b.concs = mapped(sub, b.concs);
                sub.erase(b.var);
                bool clash = false;
                for (const auto& [k, v] : sub)
                    if (v == b.var && k != b.var) clash = true;
                if (clash) {
                    std::string z = fresh(b.var, avoid);
                    sub[b.var] = z;
                    b.var = z;
                }
            }
            Formula body = run(f.body(), sub);
            return f.op() == Op::Step ? Formula::step(bs, body) : Formula::exec_step(bs, body);
        }
        default: {
            auto kids = kids_of(f);
            for (auto& k : kids) k = run(k, sub);
            return with_kids(f, kids);
        }
        }
    }
};

Formula rename_prop(const Formula& f, const std::string& from, const std::string& to)
{
    if (f.op() == Op::Prop) return f.name() == from ? Formula::prop(to, f.vars()) : f;
    if ((f.op() == Op::Mu || f.op() == Op::Nu) && f.name() == from) return f;
    auto kids = kids_of(f);
    for (auto& k : kids) k = rename_prop(k, from, to);
    return with_kids(f, kids);
}

struct Substituter {
    const std::string& prop;
    const Formula& psi;
    const std::vector<std::string>& params;
    std::vector<std::string> psi_props;
    std::set<std::string> prop_avoid;
    std::set<std::string> var_avoid;

    Formula run(const Formula& f)
    {
        switch (f.op()) {
        case Op::Prop: {
            if (f.name() != prop) return f;
            if (f.vars().size() != params.size())
                throw Error(ErrorKind::ArityMismatch, "'" + prop + "' applied to " + std::to_string(f.vars().size()) +
                                                          " arguments, replacement has " +
                                                          std::to_string(params.size()));
            std::map<std::string, std::string> sub;
            for (std::size_t i = 0; i < params.size(); ++i)
                if (params[i] != f.vars()[i]) sub[params[i]] = f.vars()[i];
            Renamer r{var_avoid};
            Formula out = r.run(psi, sub);
            var_avoid = r.avoid;
            return out;
        }
        case Op::Mu:
        case Op::Nu: {
            if (f.name() == prop) return f;
            Formula g = f;
            if (std::find(psi_props.begin(), psi_props.end(), f.name()) != psi_props.end()) {
                std::string n = fresh(f.name(), prop_avoid);
                Formula body = rename_prop(f.body(), f.name(), n);
                g = f.op() == Op::Mu ? Formula::mu(n, f.vars(), body) : Formula::nu(n, f.vars(), body);
            }
            Formula body = run(g.body());
            return g.op() == Op::Mu ? Formula::mu(g.name(), g.vars(), body) : Formula::nu(g.name(), g.vars(), body);
        }
        default: {
            auto kids = kids_of(f);
            for (auto& k : kids) k = run(k);
            return with_kids(f, kids);
        }
        }
    }
};

// Exec-binder view: ex! or the explicit bind-then-run pattern.
bool exec_binder(const Formula& f, bool dual, const Binder** b, const Formula** body)
{
    Op sugar = dual ? Op::DualExecBind : Op::ExecBind;
    Op plain = dual ? Op::DualBind : Op::Bind;
    Op run = dual ? Op::DualExec : Op::Exec;
    if (f.op() == sugar) {
        *b = &f.binder();
        *body = &f.body();
        return true;
    }
    if (f.op() == plain && f.body().op() == run && f.body().name() == f.binder().var) {
        *b = &f.binder();
        *body = &f.body().body();
        return true;
    }
    return false;
}

struct Classifier {
    bool mu_ok;

    bool hm(const Formula& f, bool whole_steps) const
    {
        const Binder* b;
        const Formula* body;
        switch (f.op()) {
        case Op::Top:
        case Op::Bot:
            return true;
        case Op::And:
        case Op::Or:
            return hm(f.left(), whole_steps) && hm(f.right(), whole_steps);
        case Op::Neg:
            return hm(f.body(), whole_steps);
        case Op::ExecStep: {
            if (!whole_steps && f.steps().size() != 1) return false;
            for (const auto& s : f.steps())
                if (!s.has_empty_deps()) return false;
            return hm(f.body(), whole_steps);
        }
        case Op::Prop:
            return mu_ok && f.vars().empty();
        case Op::Mu:
        case Op::Nu:
            return mu_ok && f.vars().empty() && hm(f.body(), whole_steps);
        default:
            break;
        }
        if (exec_binder(f, false, &b, &body) || exec_binder(f, true, &b, &body))
            return b->has_empty_deps() && hm(*body, whole_steps);
        return false;
    }

    bool hp(const Formula& f) const
    {
        const Binder* b;
        const Formula* body;
        switch (f.op()) {
        case Op::Top:
        case Op::Bot:
            return true;
        case Op::And:
        case Op::Or:
            return hp(f.left()) && hp(f.right());
        case Op::Neg:
        case Op::ExecStep:
            return hp(f.body());
        case Op::Prop:
            return mu_ok;
        case Op::Mu:
        case Op::Nu:
            return mu_ok && hp(f.body());
        default:
            break;
        }
        if (exec_binder(f, false, &b, &body) || exec_binder(f, true, &b, &body)) return hp(*body);
        return false;
    }

    bool pomset(const Formula& f) const
    {
        const Binder* b;
        const Formula* body;
        switch (f.op()) {
        case Op::Top:
        case Op::Bot:
            return true;
        case Op::And:
        case Op::Or:
            return free_vars(f.left()).empty() && free_vars(f.right()).empty() && pomset(f.left()) &&
                   pomset(f.right());
        case Op::Neg:
            return free_vars(f.body()).empty() && pomset(f.body());
        case Op::ExecStep:
            return pomset(f.body());
        case Op::Prop:
            return mu_ok;
        case Op::Mu:
        case Op::Nu:
            return mu_ok && pomset(f.body());
        default:
            break;
        }
        if (exec_binder(f, false, &b, &body)) return pomset(*body);
        // The dual is a negated existential around a negated body.
        if (exec_binder(f, true, &b, &body))
            return free_vars(f).empty() && free_vars(*body).empty() && pomset(*body);
        return false;
    }
};

bool wf_rec(const Formula& f)
{
    switch (f.op()) {
    case Op::Bind:
    case Op::DualBind: {
        const Binder& b = f.binder();
        for (const auto& v : free_vars(f.body())) {
            bool ok = v == b.var || std::find(b.causes.begin(), b.causes.end(), v) != b.causes.end() ||
                      std::find(b.concs.begin(), b.concs.end(), v) != b.concs.end();
            if (!ok) return false;
        }
        return wf_rec(f.body());
    }
    case Op::Prop:
    case Op::Mu:
    case Op::Nu:
        throw Error(ErrorKind::NotApplicable, "well-formedness is defined for fixpoint-free formulas");
    default:
        for (const auto& k : kids_of(f))
            if (!wf_rec(k)) return false;
        return true;
    }
}

} // namespace

Formula desugar(const Formula& f, const std::optional<std::vector<Label>>& labels, const DesugarOptions& opts)
{
    return desugar_rec(f, labels, opts);
}

bool is_well_formed(const Formula& f) { return wf_rec(desugar(f, std::nullopt)); }

std::vector<std::string> FragmentSet::names() const
{
    std::vector<std::string> out;
    auto add = [&](bool b, const char* n) {
        if (b) out.emplace_back(n);
    };
    add(hm, "hm");
    add(step, "step");
    add(pomset, "pomset");
    add(hp, "hp");
    add(full, "full");
    add(well_formed, "well_formed");
    add(hm_mu, "hm_mu");
    add(step_mu, "step_mu");
    add(pomset_mu, "pomset_mu");
    add(hp_mu, "hp_mu");
    add(full_mu, "full_mu");
    return out;
}

std::string_view fragment_name(Fragment f)
{
    switch (f) {
    case Fragment::HM: return "hm";
    case Fragment::Step: return "step";
    case Fragment::Pomset: return "pomset";
    case Fragment::HP: return "hp";
    case Fragment::Full: return "hhp";
    }
    return "?";
}

std::optional<Fragment> parse_fragment(std::string_view s)
{
    if (s == "hm") return Fragment::HM;
    if (s == "step") return Fragment::Step;
    if (s == "pomset") return Fragment::Pomset;
    if (s == "hp") return Fragment::HP;
    if (s == "hhp" || s == "full") return Fragment::Full;
    return std::nullopt;
}

bool in_fragment(const FragmentSet& fs, Fragment f)
{
    switch (f) {
    case Fragment::HM: return fs.hm;
    case Fragment::Step: return fs.step;
    case Fragment::Pomset: return fs.pomset;
    case Fragment::HP: return fs.hp;
    case Fragment::Full: return fs.full;
    }
    return false;
}

FragmentSet classify_fragment(const Formula& f)
{
    FragmentSet fs;
    Classifier with_mu{true};
    fs.hm_mu = with_mu.hm(f, false);
    fs.step_mu = with_mu.hm(f, true);
    fs.pomset_mu = with_mu.pomset(f);
    fs.hp_mu = with_mu.hp(f);
    bool plain = !has_fixpoints(f);
    fs.hm = plain && fs.hm_mu;
    fs.step = plain && fs.step_mu;
    fs.pomset = plain && fs.pomset_mu;
    fs.hp = plain && fs.hp_mu;
    fs.well_formed = plain && is_well_formed(f);
    return fs;
}

Formula rename(const Formula& f, const std::map<std::string, std::string>& sub)
{
    Renamer r;
    collect_vars(f, r.avoid);
    for (const auto& [k, v] : sub) {
        r.avoid.insert(k);
        r.avoid.insert(v);
    }
    std::map<std::string, std::string> clean;
    for (const auto& [k, v] : sub)
        if (k != v) clean[k] = v;
    return r.run(f, clean);
}

Formula substitute(const Formula& f, const std::string& prop, const Formula& psi, const std::vector<std::string>& params)
{
    Substituter s{prop, psi, params, free_props(psi), {}, {}};
    collect_props(f, s.prop_avoid);
    collect_props(psi, s.prop_avoid);
    collect_vars(f, s.var_avoid);
    collect_vars(psi, s.var_avoid);
    return s.run(f);
}

Formula substitute(const Formula& f, const std::string& prop, const Formula& psi)
{
    return substitute(f, prop, psi, free_vars(psi));
}

Formula unfold(const Formula& fix)
{
    if (fix.op() != Op::Mu && fix.op() != Op::Nu)
        throw Error(ErrorKind::InvalidArgument, "unfold expects a fixpoint formula");
    return substitute(fix.body(), fix.name(), fix, fix.vars());
}

Formula approximant(const Formula& mu, std::size_t alpha)
{
    if (mu.op() != Op::Mu) throw Error(ErrorKind::InvalidArgument, "approximants are taken of least fixpoints");
    // Empty denotation with the parameters free, so the substitution keeps free variables.
    Formula cur = Formula::bot();
    for (std::size_t i = mu.vars().size(); i-- > 0;) cur = Formula::exec(mu.vars()[i], cur);
    for (std::size_t k = 0; k < alpha; ++k) cur = substitute(mu.body(), mu.name(), cur, mu.vars());
    return cur;
}

Formula pomset_to_formula(const VarPomset& p, const Formula& tail)
{
    const std::size_t n = p.vars.size();
    if (p.labels.size() != n) throw Error(ErrorKind::InvalidArgument, "one label per variable expected");
    std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
    for (auto [i, j] : p.less) {
        if (i >= n || j >= n) throw Error(ErrorKind::InvalidArgument, "order pair out of range");
        lt[i][j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (lt[i][k] && lt[k][j]) lt[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (lt[i][i]) throw Error(ErrorKind::InvalidArgument, "order is cyclic");

    std::vector<bool> remaining(n, true);
    Formula acc = tail;
    for (std::size_t left = n; left > 0; --left) {
        std::size_t pick = n;
        for (std::size_t z = n; z-- > 0;) {
            if (!remaining[z]) continue;
            bool maximal = true;
            for (std::size_t w = 0; w < n; ++w)
                if (remaining[w] && lt[z][w]) maximal = false;
            if (maximal) { pick = z; break; }
        }
        remaining[pick] = false;
        Binder b;
        b.label = p.labels[pick];
        b.var = p.vars[pick];
        for (std::size_t w = 0; w < n; ++w) {
            if (!remaining[w]) continue;
            (lt[w][pick] ? b.causes : b.concs).push_back(p.vars[w]);
        }
        acc = Formula::exec_bind(b, acc);
    }
    return acc;
}

std::vector<Binder> exec_prefix(const Formula& f)
{
    std::vector<Binder> out;
    const Formula* cur = &f;
    while (true) {
        const Binder* b;
        const Formula* body;
        if (exec_binder(*cur, false, &b, &body)) {
            out.push_back(*b);
            cur = body;
            continue;
        }
        if (cur->op() == Op::ExecStep) {
            std::size_t first = out.size();
            for (const auto& s : cur->steps()) {
                Binder c = s;
                for (std::size_t j = first; j < out.size(); ++j)
                    if (std::find(c.concs.begin(), c.concs.end(), out[j].var) == c.concs.end())
                        c.concs.push_back(out[j].var);
                out.push_back(c);
            }
            cur = &cur->body();
            continue;
        }
        return out;
    }
}

bool pomset_matches_prefix(const PomsetView& x, const std::vector<Binder>& prefix)
{
    const std::size_t n = prefix.size();
    // Resolve each dependency to the index of the binder it refers to.
    std::vector<std::vector<std::size_t>> causes(n), concs(n);
    std::map<std::string, std::size_t> bound;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& v : prefix[i].causes) {
            auto it = bound.find(v);
            if (it == bound.end()) throw Error(ErrorKind::PrefixNotClosed, "'" + v + "' is not bound earlier");
            causes[i].push_back(it->second);
        }
        for (const auto& v : prefix[i].concs) {
            auto it = bound.find(v);
            if (it == bound.end()) throw Error(ErrorKind::PrefixNotClosed, "'" + v + "' is not bound earlier");
            concs[i].push_back(it->second);
        }
        bound[prefix[i].var] = i;
    }
    if (x.events.size() != n) return false;
    const Pes& p = *x.pes;
    std::vector<EventId> g(n);
    EventSet used;
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == n) return true;
        for (EventId e : x.events - used) {
            if (!prefix[i].is_wildcard() && p.label(e) != prefix[i].label) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j)
                if (p.lt(e, g[j])) ok = false;  // must be executable in binder order
            for (auto j : causes[i])
                if (!p.lt(g[j], e)) ok = false;
            for (auto j : concs[i])
                if (p.lt(g[j], e)) ok = false;
            if (!ok) continue;
            g[i] = e;
            used.insert(e);
            if (go(i + 1)) return true;
            used.erase(e);
        }
        return false;
    };
    return go(0);
}

} // namespace tcw
