#include "tcw/distinguish.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "tcw/checker.hpp"
#include "tcw/error.hpp"

namespace tcw {

Equivalence equivalence_for(Fragment f)
{
    switch (f) {
    case Fragment::HM: return Equivalence::Interleaving;
    case Fragment::Step: return Equivalence::Step;
    case Fragment::Pomset: return Equivalence::Pomset;
    case Fragment::HP: return Equivalence::HP;
    case Fragment::Full: return Equivalence::HHP;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown fragment");
}

namespace {

std::string hname(std::size_t i) { return "h" + std::to_string(i); }

void push_unique(std::vector<Formula>& out, std::set<std::string>& seen, Formula f)
{
    if (seen.insert(to_string(f)).second) out.push_back(std::move(f));
}

class Synthesizer {
  public:
    Synthesizer(const Pes& a, const Pes& b, Fragment frag, const EquivReport& r, std::size_t max_depth)
        : a_(a), b_(b), frag_(frag), r_(r), max_depth_(max_depth)
    {
    }

    // Holds at the side-1 component of state s and fails at the side-2 component.
    Formula run(std::size_t s, std::size_t depth)
    {
        if (auto it = memo_.find(s); it != memo_.end()) return it->second;
        if (depth > max_depth_)
            throw Error(ErrorKind::DepthExceeded, "distinguishing formula exceeds depth " + std::to_string(max_depth_));
        if (r_.removed_at[s] == EquivReport::npos) throw std::logic_error("state in the bisimulation has no formula");
        const TraceStep& step = r_.trace[r_.removed_at[s]];
        Formula f = (frag_ == Fragment::HP || frag_ == Fragment::Full) ? history(s, step, depth) : basic(s, step, depth);
        memo_.emplace(s, f);
        return f;
    }

  private:
    const ProductState& st(std::size_t s) const { return r_.states[s]; }

    void check_earlier(std::size_t s, std::size_t t) const
    {
        if (r_.removed_at[t] == EquivReport::npos || r_.removed_at[t] >= r_.removed_at[s])
            throw std::logic_error("removal trace is not well founded");
    }

    Formula basic(std::size_t s, const TraceStep& step, std::size_t depth)
    {
        const ProductState& p = st(s);
        const Move& m = step.side == 1 ? p.moves1[step.move] : p.moves2[step.move];
        const Pes& mover = step.side == 1 ? a_ : b_;
        std::vector<Formula> conj;
        std::set<std::string> seen;
        for (auto t : m.targets) {
            check_earlier(s, t);
            Formula psi = run(t, depth + 1);
            push_unique(conj, seen, step.side == 1 ? psi : Formula::neg(psi));
        }
        Formula body = Formula::conj_all(conj);
        std::size_t k = p.c1.size();
        std::vector<EventId> xs = m.step.to_vector();
        Formula f;
        if (frag_ == Fragment::HM) {
            f = Formula::exec_bind({{}, {}, mover.label(xs[0]), "x" + std::to_string(k)}, body);
        } else if (frag_ == Fragment::Step) {
            std::vector<Binder> bs;
            for (std::size_t i = 0; i < xs.size(); ++i)
                bs.push_back({{}, {}, mover.label(xs[i]), "x" + std::to_string(k + i)});
            f = Formula::exec_step(bs, body);
        } else {
            VarPomset vp;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                vp.vars.push_back("x" + std::to_string(k + i));
                vp.labels.push_back(mover.label(xs[i]));
                for (std::size_t j = 0; j < xs.size(); ++j)
                    if (mover.lt(xs[j], xs[i])) vp.less.emplace_back(j, i);
            }
            f = pomset_to_formula(vp, body);
        }
        return step.side == 1 ? f : Formula::neg(f);
    }

    // Position of each pair of the map, which is sorted, names it.
    static std::size_t position(const EventMap& f, std::pair<EventId, EventId> p)
    {
        return static_cast<std::size_t>(std::find(f.begin(), f.end(), p) - f.begin());
    }

    // Renames the canonical variables of state t into the naming of state s,
    // where the pair `fresh_pair` (absent from s) is called `fresh_name`.
    Formula transport(std::size_t t, const Formula& psi, std::size_t s, std::pair<EventId, EventId> fresh_pair,
                      const std::string& fresh_name) const
    {
        std::map<std::string, std::string> sub;
        const EventMap& ft = st(t).f;
        const EventMap& fs = st(s).f;
        for (std::size_t i = 0; i < ft.size(); ++i) {
            std::string to = ft[i] == fresh_pair ? fresh_name : hname(position(fs, ft[i]));
            sub[hname(i)] = to;
        }
        return rename(psi, sub);
    }

    Formula history(std::size_t s, const TraceStep& step, std::size_t depth)
    {
        const ProductState& p = st(s);
        const std::size_t k = p.f.size();
        if (step.side == 0) {
            check_earlier(s, step.pred);
            return transport(step.pred, run(step.pred, depth + 1), s, {kMaxEvents, kMaxEvents}, "");
        }
        bool left = step.side == 1;
        const Move& m = left ? p.moves1[step.move] : p.moves2[step.move];
        EventId e = m.step.min();
        const Pes& mover = left ? a_ : b_;
        std::string z = hname(k);

        std::vector<Formula> conj;
        std::set<std::string> seen;
        if (frag_ == Fragment::Full) {
            // Replay the whole history from the empty configuration, then the new event.
            std::vector<std::size_t> order(k);
            for (std::size_t i = 0; i < k; ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
                return (a_.below(p.f[i].first) & p.c1).size() < (a_.below(p.f[j].first) & p.c1).size();
            });
            Formula chain = Formula::exec(z, Formula::top());
            for (std::size_t i = k; i-- > 0;) chain = Formula::exec(hname(order[i]), chain);
            push_unique(conj, seen, chain);
        }
        for (auto t : m.targets) {
            check_earlier(s, t);
            const EventMap& ft = st(t).f;
            std::pair<EventId, EventId> fresh{kMaxEvents, kMaxEvents};
            for (auto q : ft)
                if (!std::binary_search(p.f.begin(), p.f.end(), q)) fresh = q;
            Formula psi = transport(t, run(t, depth + 1), s, fresh, z);
            push_unique(conj, seen, left ? psi : Formula::neg(psi));
        }
        Binder bd;
        bd.label = mover.label(e);
        bd.var = z;
        for (std::size_t i = 0; i < k; ++i) {
            bool below = left ? a_.lt(p.f[i].first, e) : b_.lt(p.f[i].second, e);
            (below ? bd.causes : bd.concs).push_back(hname(i));
        }
        Formula body = Formula::conj_all(conj);
        Formula f = frag_ == Fragment::Full ? Formula::bind(bd, body) : Formula::exec_bind(bd, body);
        return left ? f : Formula::neg(f);
    }

    const Pes& a_;
    const Pes& b_;
    Fragment frag_;
    const EquivReport& r_;
    std::size_t max_depth_;
    std::unordered_map<std::size_t, Formula> memo_;
};

} // namespace

Distinction distinguish(const Pes& a, const Pes& b, Fragment frag, const DistinguishOptions& opts)
{
    EquivReport r = check_equivalence(a, b, equivalence_for(frag), opts.limits);
    if (r.equivalent)
        throw Error(ErrorKind::ActuallyEquivalent,
                    "structures are " + std::string(equivalence_name(r.relation)) + "-equivalent");
    Synthesizer syn(a, b, frag, r, opts.max_depth);
    Distinction d{syn.run(0, 0), frag, false};
    d.verified = check_closed(a, d.formula) && !check_closed(b, d.formula);
    return d;
}

bool verify_distinguishing(const Pes& a, const Pes& b, const Formula& f)
{
    return check_closed(a, f) != check_closed(b, f);
}

} // namespace tcw
