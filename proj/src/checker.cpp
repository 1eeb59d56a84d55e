#include "tcw/checker.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "tcw/error.hpp"

namespace tcw {

namespace {

constexpr EventId kUnbound = 0xFFFFFFFFu;

struct PNode {
    Op op = Op::Top;
    int a = -1, b = -1;
    int var = -1;
    std::vector<int> causes, concs;
    EventSet label_events;
    int prop = -1;
    std::vector<int> args;
    std::vector<int> fv;
    std::vector<int> ctx;  // binders: fv(body) without the bound variable
    std::vector<int> fp;
};

void add_unique(std::vector<int>& v, int x)
{
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

struct Program {
    std::vector<PNode> nodes;
    std::map<std::string, int> var_slots;
    std::map<std::string, int> prop_slots;
    std::vector<std::size_t> prop_arity;
    std::unordered_map<const Formula::Node*, int> seen;
    const Pes* pes = nullptr;

    int var(const std::string& v)
    {
        auto [it, fresh] = var_slots.emplace(v, static_cast<int>(var_slots.size()));
        return it->second;
    }

    int prop(const std::string& p, std::size_t arity)
    {
        auto [it, fresh] = prop_slots.emplace(p, static_cast<int>(prop_slots.size()));
        if (fresh) prop_arity.push_back(arity);
        else if (prop_arity[it->second] != arity)
            throw Error(ErrorKind::ArityMismatch, "proposition '" + p + "' used with different arities");
        return it->second;
    }

    int compile(const Formula& f)
    {
        if (auto it = seen.find(f.id()); it != seen.end()) return it->second;
        PNode n;
        n.op = f.op();
        switch (f.op()) {
        case Op::Top:
        case Op::Bot:
            break;
        case Op::And:
        case Op::Or:
            n.a = compile(f.left());
            n.b = compile(f.right());
            n.fv = nodes[n.a].fv;
            for (int v : nodes[n.b].fv) add_unique(n.fv, v);
            n.fp = nodes[n.a].fp;
            for (int p : nodes[n.b].fp) add_unique(n.fp, p);
            break;
        case Op::Neg:
            n.a = compile(f.body());
            n.fv = nodes[n.a].fv;
            n.fp = nodes[n.a].fp;
            break;
        case Op::Bind:
        case Op::DualBind: {
            const Binder& b = f.binder();
            if (b.is_wildcard()) throw Error(ErrorKind::InvalidArgument, "wildcard label survived desugaring");
            n.a = compile(f.body());
            n.var = var(b.var);
            for (const auto& v : b.causes) n.causes.push_back(var(v));
            for (const auto& v : b.concs) n.concs.push_back(var(v));
            for (EventId e = 0; e < pes->size(); ++e)
                if (pes->label(e) == b.label) n.label_events.insert(e);
            for (int v : nodes[n.a].fv)
                if (v != n.var) n.ctx.push_back(v);
            for (int v : n.causes) add_unique(n.fv, v);
            for (int v : n.concs) add_unique(n.fv, v);
            for (int v : n.ctx) add_unique(n.fv, v);
            n.fp = nodes[n.a].fp;
            break;
        }
        case Op::Exec:
        case Op::DualExec:
            n.a = compile(f.body());
            n.var = var(f.name());
            n.fv = {n.var};
            for (int v : nodes[n.a].fv) add_unique(n.fv, v);
            n.fp = nodes[n.a].fp;
            break;
        case Op::Prop:
            n.prop = prop(f.name(), f.vars().size());
            for (const auto& v : f.vars()) n.args.push_back(var(v));
            for (int v : n.args) add_unique(n.fv, v);
            n.fp = {n.prop};
            break;
        case Op::Mu:
        case Op::Nu: {
            n.prop = prop(f.name(), f.vars().size());
            for (const auto& v : f.vars()) n.args.push_back(var(v));
            n.a = compile(f.body());
            n.fv = n.args;
            for (int p : nodes[n.a].fp)
                if (p != n.prop) n.fp.push_back(p);
            break;
        }
        default:
            throw Error(ErrorKind::InvalidArgument, "sugar survived desugaring");
        }
        nodes.push_back(std::move(n));
        int id = static_cast<int>(nodes.size()) - 1;
        seen.emplace(f.id(), id);
        return id;
    }
};

using TupleKey = std::string;

TupleKey tuple_key(EventSet c, const std::vector<EventId>& t)
{
    TupleKey k;
    k.reserve(8 + t.size());
    std::uint64_t bits = c.bits();
    k.append(reinterpret_cast<const char*>(&bits), 8);
    for (EventId e : t) k.push_back(static_cast<char>(e));
    return k;
}

struct PropVal {
    std::unordered_set<TupleKey> set;
    std::uint64_t version = 0;
};

class Evaluator {
  public:
    Evaluator(const Pes& pes, Program& prog, bool wf, std::size_t cap)
        : pes_(pes), prog_(prog), wf_(wf), cap_(cap)
    {
        env_.assign(prog.var_slots.size(), kUnbound);
        props_.resize(prog.prop_slots.size());
        bound_.assign(prog.prop_slots.size(), false);
    }

    void bind_var(int slot, EventId e) { env_[slot] = e; }
    void bind_prop(int slot, std::unordered_set<TupleKey> set)
    {
        props_[slot].set = std::move(set);
        props_[slot].version = ++next_version_;
        bound_[slot] = true;
    }
    bool prop_bound(int slot) const { return bound_[slot]; }

    bool legal(int id, EventSet c) const
    {
        EventSet s = c;
        for (int v : prog_.nodes[id].fv) s.insert(env_[v]);
        return pes_.is_consistent(s);
    }

    bool sat(int id, EventSet c)
    {
        const PNode& n = prog_.nodes[id];
        if (n.op == Op::Top) return true;
        if (n.op == Op::Bot) return false;
        std::string key = memo_key(id, c);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool r = eval(id, c);
        memo_.emplace(std::move(key), r);
        return r;
    }

    const std::vector<EventSet>& configs()
    {
        if (!have_configs_) {
            configs_ = enum_configurations(pes_, cap_);
            have_configs_ = true;
        }
        return configs_;
    }

    // Least or greatest fixpoint of a Mu/Nu node under the current proposition values.
    const std::unordered_set<TupleKey>& fix(int id, std::size_t* rounds = nullptr)
    {
        const PNode& n = prog_.nodes[id];
        std::vector<std::uint64_t> stamp;
        for (int p : n.fp) stamp.push_back(props_[p].version);
        auto it = fix_cache_.find(id);
        if (it != fix_cache_.end() && it->second.first == stamp && !rounds) return it->second.second;

        std::vector<std::pair<EventSet, std::vector<EventId>>> lp;
        for (EventSet c : configs())
            for_tuples(n.args.size(), [&](const std::vector<EventId>& t) {
                if (pes_.is_consistent(c | EventSet::of(t))) lp.emplace_back(c, t);
            });

        PropVal saved = props_[n.prop];
        bool saved_bound = bound_[n.prop];
        std::vector<EventId> saved_env;
        for (int v : n.args) saved_env.push_back(env_[v]);

        std::unordered_set<TupleKey> cur;
        if (n.op == Op::Nu)
            for (auto& [c, t] : lp) cur.insert(tuple_key(c, t));
        std::size_t count = 0;
        while (true) {
            ++count;
            bind_prop(n.prop, cur);
            std::unordered_set<TupleKey> next;
            for (auto& [c, t] : lp) {
                for (std::size_t i = 0; i < t.size(); ++i) env_[n.args[i]] = t[i];
                if (sat(n.a, c)) next.insert(tuple_key(c, t));
            }
            if (next == cur) break;
            cur = std::move(next);
        }
        props_[n.prop] = std::move(saved);
        bound_[n.prop] = saved_bound;
        for (std::size_t i = 0; i < n.args.size(); ++i) env_[n.args[i]] = saved_env[i];
        if (rounds) *rounds = count - 1;
        auto& slot = fix_cache_[id];
        slot.first = stamp;
        slot.second = std::move(cur);
        return slot.second;
    }

    template <class F>
    void for_tuples(std::size_t k, F&& f) const
    {
        std::vector<EventId> t(k, 0);
        if (k > 0 && pes_.size() == 0) return;
        while (true) {
            f(t);
            std::size_t i = 0;
            while (i < k && ++t[i] == pes_.size()) t[i++] = 0;
            if (i == k) return;
        }
    }

  private:
    std::string memo_key(int id, EventSet c) const
    {
        const PNode& n = prog_.nodes[id];
        std::string k;
        k.reserve(12 + n.fv.size() + 8 * n.fp.size());
        std::uint64_t bits = c.bits();
        k.append(reinterpret_cast<const char*>(&id), sizeof id);
        k.append(reinterpret_cast<const char*>(&bits), 8);
        for (int v : n.fv) k.push_back(static_cast<char>(env_[v]));
        for (int p : n.fp) k.append(reinterpret_cast<const char*>(&props_[p].version), 8);
        return k;
    }

    EventSet ctx_set(const PNode& n) const
    {
        EventSet s;
        for (int v : n.ctx) s.insert(env_[v]);
        return s;
    }

    // Events e that a binder node may bind at c.
    bool candidate(const PNode& n, EventId e, EventSet ctx) const
    {
        if (!wf_ && pes_.conflicts(e).intersects(ctx)) return false;
        for (int x : n.causes)
            if (!pes_.lt(env_[x], e)) return false;
        for (int y : n.concs)
            if (!pes_.concurrent(env_[y], e)) return false;
        return true;
    }

    bool eval(int id, EventSet c)
    {
        const PNode& n = prog_.nodes[id];
        switch (n.op) {
        case Op::And:
            return (wf_ || legal(id, c)) && sat(n.a, c) && sat(n.b, c);
        case Op::Or:
            return (wf_ || legal(id, c)) && (sat(n.a, c) || sat(n.b, c));
        case Op::Neg:
            return (wf_ || legal(n.a, c)) && !sat(n.a, c);
        case Op::Bind:
        case Op::DualBind: {
            bool exists = n.op == Op::Bind;
            if (!wf_ && !legal(id, c)) return false;
            EventSet ctx = ctx_set(n);
            EventSet cands = pes_.residual(c) & n.label_events;
            EventId saved = env_[n.var];
            bool result = !exists;
            for (EventId e : cands) {
                if (!candidate(n, e, ctx)) continue;
                env_[n.var] = e;
                bool s = sat(n.a, c);
                if (s == exists) {
                    result = exists;
                    break;
                }
            }
            env_[n.var] = saved;
            return result;
        }
        case Op::Exec: {
            EventId e = env_[n.var];
            return pes_.enabled(c, e) && sat(n.a, c | EventSet::single(e));
        }
        case Op::DualExec: {
            if (!wf_ && !legal(id, c)) return false;
            EventId e = env_[n.var];
            return !pes_.enabled(c, e) || sat(n.a, c | EventSet::single(e));
        }
        case Op::Prop: {
            std::vector<EventId> t;
            for (int v : n.args) t.push_back(env_[v]);
            return props_[n.prop].set.count(tuple_key(c, t)) > 0;
        }
        case Op::Mu:
        case Op::Nu: {
            std::vector<EventId> t;
            for (int v : n.args) t.push_back(env_[v]);
            return fix(id).count(tuple_key(c, t)) > 0;
        }
        default:
            return false;
        }
    }

    const Pes& pes_;
    Program& prog_;
    bool wf_;
    std::size_t cap_;
    std::vector<EventId> env_;
    std::vector<PropVal> props_;
    std::vector<bool> bound_;
    std::uint64_t next_version_ = 0;
    std::unordered_map<std::string, bool> memo_;
    std::unordered_map<int, std::pair<std::vector<std::uint64_t>, std::unordered_set<TupleKey>>> fix_cache_;
    std::vector<EventSet> configs_;
    bool have_configs_ = false;
};

struct Prepared {
    Program prog;
    int root = 0;
    std::vector<std::string> fv;
};

Prepared prepare(const Pes& pes, const Formula& f, const CheckOptions& opts)
{
    if (pes.size() > 255) throw Error(ErrorKind::SizeLimitExceeded, "structure too large for the checker");
    validate_formula(f);
    Formula core = desugar(f, pes.labels(), opts.desugar);
    Prepared p;
    p.prog.pes = &pes;
    p.root = p.prog.compile(core);
    p.fv = free_vars(core);
    return p;
}

void bind_props(const Prepared& p, Evaluator& ev, const PropEnv& props)
{
    for (const auto& [name, slot] : p.prog.prop_slots) {
        auto it = props.find(name);
        if (it == props.end()) continue;
        std::unordered_set<TupleKey> s;
        for (const auto& [c, t] : it->second) {
            if (t.size() != p.prog.prop_arity[slot])
                throw Error(ErrorKind::ArityMismatch, "value for '" + name + "' has the wrong arity");
            s.insert(tuple_key(c, t));
        }
        ev.bind_prop(slot, std::move(s));
    }
    for (const auto& name : p.prog.prop_slots) (void)name;
}

void check_props_bound(const Prepared& p, const PropEnv& props)
{
    for (int slot : p.prog.nodes[p.root].fp)
        for (const auto& [name, s] : p.prog.prop_slots)
            if (s == slot && !props.count(name))
                throw Error(ErrorKind::UnboundProposition, "no value for proposition '" + name + "'");
}

void bind_env(const Prepared& p, Evaluator& ev, const Pes& pes, const Env& env)
{
    for (const auto& v : p.fv) {
        auto it = env.find(v);
        if (it == env.end()) throw Error(ErrorKind::UnboundVariable, "variable '" + v + "' is not bound");
        if (it->second >= pes.size()) throw Error(ErrorKind::UnknownEventId, "variable '" + v + "' bound to no event");
        ev.bind_var(p.prog.var_slots.at(v), it->second);
    }
}

void check_config(const Pes& pes, EventSet c)
{
    if (!is_configuration(pes, c)) throw Error(ErrorKind::NotAConfiguration, "not a configuration");
}

} // namespace

bool legal(const Pes& pes, EventSet c, const Env& env, const Formula& f)
{
    EventSet s = c;
    for (const auto& v : free_vars(desugar(f, std::nullopt))) {
        auto it = env.find(v);
        if (it == env.end()) throw Error(ErrorKind::UnboundVariable, "variable '" + v + "' is not bound");
        s.insert(it->second);
    }
    return pes.is_consistent(s);
}

bool satisfies(const Pes& pes, EventSet c, const Env& env, const Formula& f, const PropEnv& props,
               const CheckOptions& opts)
{
    check_config(pes, c);
    Prepared p = prepare(pes, f, opts);
    check_props_bound(p, props);
    Evaluator ev(pes, p.prog, false, opts.config_cap);
    bind_props(p, ev, props);
    bind_env(p, ev, pes, env);
    return ev.sat(p.root, c);
}

bool check_closed(const Pes& pes, const Formula& f, const CheckOptions& opts)
{
    if (!free_vars(f).empty() || !free_props(f).empty())
        throw Error(ErrorKind::FormulaNotClosed, "formula has free variables or propositions");
    return satisfies(pes, EventSet(), {}, f, {}, opts);
}

Denotation denotation(const Pes& pes, const Formula& f, const PropEnv& props, const CheckOptions& opts)
{
    Prepared p = prepare(pes, f, opts);
    check_props_bound(p, props);
    Evaluator ev(pes, p.prog, false, opts.config_cap);
    bind_props(p, ev, props);
    Denotation d;
    d.vars = p.fv;
    std::vector<int> slots;
    for (const auto& v : p.fv) slots.push_back(p.prog.var_slots.at(v));
    for (EventSet c : ev.configs())
        ev.for_tuples(slots.size(), [&](const std::vector<EventId>& t) {
            for (std::size_t i = 0; i < t.size(); ++i) ev.bind_var(slots[i], t[i]);
            if (ev.sat(p.root, c)) d.pairs.emplace(c, t);
        });
    return d;
}

Denotation legal_pairs(const Pes& pes, const Formula& f, const CheckOptions& opts)
{
    Denotation d;
    d.vars = free_vars(desugar(f, std::nullopt));
    Program prog;
    prog.pes = &pes;
    Evaluator ev(pes, prog, false, opts.config_cap);
    for (EventSet c : ev.configs())
        ev.for_tuples(d.vars.size(), [&](const std::vector<EventId>& t) {
            if (pes.is_consistent(c | EventSet::of(t))) d.pairs.emplace(c, t);
        });
    return d;
}

bool wf_satisfies(const Pes& pes, EventSet c, const Env& env, const Formula& f, const CheckOptions& opts)
{
    check_config(pes, c);
    if (!is_well_formed(f)) throw Error(ErrorKind::NotWellFormed, "formula is not well formed");
    Prepared p = prepare(pes, f, opts);
    Evaluator ev(pes, p.prog, true, opts.config_cap);
    bind_env(p, ev, pes, env);
    return ev.sat(p.root, c);
}

std::size_t mu_iterations(const Pes& pes, const Formula& mu, const PropEnv& props, const CheckOptions& opts)
{
    if (mu.op() != Op::Mu && mu.op() != Op::Nu)
        throw Error(ErrorKind::InvalidArgument, "expected a fixpoint formula");
    Prepared p = prepare(pes, mu, opts);
    check_props_bound(p, props);
    Evaluator ev(pes, p.prog, false, opts.config_cap);
    bind_props(p, ev, props);
    std::size_t rounds = 0;
    ev.fix(p.root, &rounds);
    return rounds;
}

} // namespace tcw
