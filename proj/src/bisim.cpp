#include "tcw/bisim.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "tcw/error.hpp"

namespace tcw {

std::string_view equivalence_name(Equivalence e)
{
    switch (e) {
    case Equivalence::Interleaving: return "bisim";
    case Equivalence::Step: return "step";
    case Equivalence::Pomset: return "pomset";
    case Equivalence::HP: return "hp";
    case Equivalence::HHP: return "hhp";
    }
    return "?";
}

std::optional<Equivalence> parse_equivalence(std::string_view s)
{
    if (s == "bisim" || s == "interleaving") return Equivalence::Interleaving;
    if (s == "step") return Equivalence::Step;
    if (s == "pomset") return Equivalence::Pomset;
    if (s == "hp") return Equivalence::HP;
    if (s == "hhp") return Equivalence::HHP;
    return std::nullopt;
}

namespace {

void guard(const Pes& a, const Pes& b, const Limits& lim)
{
    if (a.size() > lim.max_events || b.size() > lim.max_events)
        throw Error(ErrorKind::SizeLimitExceeded, "structures are limited to " + std::to_string(lim.max_events) +
                                                      " events for equivalence checking");
}

// Isomorphism classes of pomsets drawn from either structure.
class PomsetCatalog {
  public:
    int classify(const PomsetView& v)
    {
        auto& bucket = buckets_[signature(v)];
        for (auto& [rep, id] : bucket)
            if (pomset_iso(rep, v)) return id;
        bucket.emplace_back(v, next_);
        return next_++;
    }

  private:
    static std::string signature(const PomsetView& v)
    {
        std::vector<std::string> parts;
        for (EventId e : v.events)
            parts.push_back(v.pes->label(e) + "/" + std::to_string((v.pes->below(e) & v.events).size()) + "/" +
                            std::to_string((v.pes->above(e) & v.events).size()));
        std::sort(parts.begin(), parts.end());
        std::string s;
        for (auto& p : parts) s += p + ";";
        return s;
    }

    std::map<std::string, std::vector<std::pair<PomsetView, int>>> buckets_;
    int next_ = 0;
};

struct SideTransitions {
    const Pes& pes;
    TransitionMode mode;
    PomsetCatalog& catalog;
    std::unordered_map<EventSet, std::vector<std::pair<EventSet, int>>, EventSetHash> cache;

    const std::vector<std::pair<EventSet, int>>& at(EventSet c)
    {
        auto it = cache.find(c);
        if (it != cache.end()) return it->second;
        std::vector<std::pair<EventSet, int>> out;
        for (const auto& t : transitions(pes, c, mode)) out.emplace_back(t.step, catalog.classify({&pes, t.step}));
        return cache.emplace(c, std::move(out)).first->second;
    }
};

struct PairHash {
    std::size_t operator()(const std::pair<EventSet, EventSet>& p) const noexcept
    {
        return EventSetHash{}(p.first) * 31 + EventSetHash{}(p.second);
    }
};

void refine(EquivReport& r, bool downward)
{
    const std::size_t n = r.states.size();
    r.alive.assign(n, true);
    r.removed_at.assign(n, EquivReport::npos);
    auto dead = [&](const Move& m) {
        for (auto t : m.targets)
            if (r.alive[t]) return false;
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        ++r.rounds;
        for (std::size_t s = 0; s < n; ++s) {
            if (!r.alive[s]) continue;
            const ProductState& st = r.states[s];
            TraceStep step;
            step.round = r.rounds;
            step.state = s;
            bool fail = false;
            for (std::size_t m = 0; m < st.moves1.size() && !fail; ++m)
                if (dead(st.moves1[m])) { fail = true; step.side = 1; step.move = m; }
            for (std::size_t m = 0; m < st.moves2.size() && !fail; ++m)
                if (dead(st.moves2[m])) { fail = true; step.side = 2; step.move = m; }
            if (downward)
                for (auto p : st.preds)
                    if (!fail && !r.alive[p]) { fail = true; step.side = 0; step.pred = p; }
            if (!fail) continue;
            r.alive[s] = false;
            r.removed_at[s] = r.trace.size();
            r.trace.push_back(step);
            changed = true;
        }
    }
    r.equivalent = n > 0 && r.alive[0];
}

} // namespace

EquivReport bisim_basic(const Pes& a, const Pes& b, TransitionMode mode, const Limits& lim)
{
    guard(a, b, lim);
    EquivReport r;
    r.relation = mode == TransitionMode::Single ? Equivalence::Interleaving
                 : mode == TransitionMode::Step ? Equivalence::Step
                                                : Equivalence::Pomset;
    PomsetCatalog catalog;
    SideTransitions ta{a, mode, catalog, {}}, tb{b, mode, catalog, {}};
    std::unordered_map<std::pair<EventSet, EventSet>, std::size_t, PairHash> index;
    auto intern = [&](EventSet c1, EventSet c2) {
        auto [it, fresh] = index.emplace(std::make_pair(c1, c2), r.states.size());
        if (fresh) {
            if (r.states.size() >= lim.max_states)
                throw Error(ErrorKind::SizeLimitExceeded, "product exceeds " + std::to_string(lim.max_states) + " states");
            ProductState st;
            st.c1 = c1;
            st.c2 = c2;
            r.states.push_back(std::move(st));
        }
        return it->second;
    };
    intern(EventSet(), EventSet());
    for (std::size_t s = 0; s < r.states.size(); ++s) {
        EventSet c1 = r.states[s].c1, c2 = r.states[s].c2;
        const auto& out1 = ta.at(c1);
        const auto& out2 = tb.at(c2);
        std::vector<Move> m1, m2;
        for (auto [x1, k1] : out1) {
            Move m{x1, {}};
            for (auto [x2, k2] : out2)
                if (k1 == k2) m.targets.push_back(intern(c1 | x1, c2 | x2));
            m1.push_back(std::move(m));
        }
        for (auto [x2, k2] : out2) {
            Move m{x2, {}};
            for (auto [x1, k1] : out1)
                if (k1 == k2) m.targets.push_back(intern(c1 | x1, c2 | x2));
            m2.push_back(std::move(m));
        }
        r.states[s].moves1 = std::move(m1);
        r.states[s].moves2 = std::move(m2);
    }
    refine(r, false);
    return r;
}

namespace {

std::string map_key(const EventMap& f)
{
    std::string k;
    for (auto [x, y] : f) {
        k.push_back(static_cast<char>(x));
        k.push_back(static_cast<char>(y));
    }
    return k;
}

EventMap extended(EventMap f, EventId x, EventId y)
{
    f.emplace_back(x, y);
    std::sort(f.begin(), f.end());
    return f;
}

EventMap inverse(const EventMap& f)
{
    EventMap g;
    for (auto [x, y] : f) g.emplace_back(y, x);
    std::sort(g.begin(), g.end());
    return g;
}

// f extended by x -> y is still an isomorphism, given x and y extend the configurations.
bool extends(const Pes& a, const Pes& b, const EventMap& f, EventId x, EventId y)
{
    if (a.label(x) != b.label(y)) return false;
    for (auto [u, v] : f)
        if (a.lt(u, x) != b.lt(v, y)) return false;
    return true;
}

// All isomorphic extensions of f by a bijection x1 -> x2.
std::vector<EventMap> block_extensions(const Pes& a, const Pes& b, const EventMap& f, EventSet x1, EventSet x2)
{
    std::vector<EventMap> out;
    std::vector<EventId> xs = x1.to_vector();
    // Events in ascending id order do not respect causality in general; add them in a
    // linear extension so each step extends the previous one.
    std::sort(xs.begin(), xs.end(), [&](EventId p, EventId q) {
        return (a.below(p) & x1).size() < (a.below(q) & x1).size();
    });
    std::function<void(std::size_t, EventMap&, EventSet)> go = [&](std::size_t i, EventMap& cur, EventSet used) {
        if (i == xs.size()) {
            EventMap m = cur;
            std::sort(m.begin(), m.end());
            out.push_back(std::move(m));
            return;
        }
        for (EventId y : x2 - used) {
            if (!extends(a, b, cur, xs[i], y)) continue;
            // y must not be below an already placed image whose preimage is not above xs[i].
            bool ok = true;
            for (auto [u, v] : cur)
                if (b.lt(y, v) != a.lt(xs[i], u)) ok = false;
            if (!ok) continue;
            cur.emplace_back(xs[i], y);
            go(i + 1, cur, used | EventSet::single(y));
            cur.pop_back();
        }
    };
    EventMap cur = f;
    go(0, cur, EventSet());
    return out;
}

EquivReport history_preserving(const Pes& a, const Pes& b, const Limits& lim, HpTransfer transfer, bool hereditary)
{
    guard(a, b, lim);
    EquivReport r;
    r.relation = hereditary ? Equivalence::HHP : Equivalence::HP;
    std::unordered_map<std::string, std::size_t> index;
    auto intern = [&](EventSet c1, EventSet c2, EventMap f) {
        auto [it, fresh] = index.emplace(map_key(f), r.states.size());
        if (fresh) {
            if (r.states.size() >= lim.max_states)
                throw Error(ErrorKind::SizeLimitExceeded, "product exceeds " + std::to_string(lim.max_states) + " states");
            ProductState st;
            st.c1 = c1;
            st.c2 = c2;
            st.f = std::move(f);
            r.states.push_back(std::move(st));
        }
        return it->second;
    };
    intern(EventSet(), EventSet(), {});

    PomsetCatalog catalog;
    SideTransitions ta{a, TransitionMode::Pomset, catalog, {}}, tb{b, TransitionMode::Pomset, catalog, {}};

    for (std::size_t s = 0; s < r.states.size(); ++s) {
        EventSet c1 = r.states[s].c1, c2 = r.states[s].c2;
        EventMap f = r.states[s].f;
        std::vector<Move> m1, m2;
        if (transfer == HpTransfer::Single) {
            EventMap finv = inverse(f);
            for (EventId x : a.enabled_set(c1)) {
                Move m{EventSet::single(x), {}};
                for (EventId y : b.enabled_set(c2))
                    if (extends(a, b, f, x, y))
                        m.targets.push_back(intern(c1 | EventSet::single(x), c2 | EventSet::single(y), extended(f, x, y)));
                m1.push_back(std::move(m));
            }
            for (EventId y : b.enabled_set(c2)) {
                Move m{EventSet::single(y), {}};
                for (EventId x : a.enabled_set(c1))
                    if (extends(b, a, finv, y, x))
                        m.targets.push_back(intern(c1 | EventSet::single(x), c2 | EventSet::single(y), extended(f, x, y)));
                m2.push_back(std::move(m));
            }
        } else {
            const auto& out1 = ta.at(c1);
            const auto& out2 = tb.at(c2);
            auto targets_for = [&](EventSet x1, EventSet x2) {
                std::vector<std::size_t> t;
                for (auto& g : block_extensions(a, b, f, x1, x2)) t.push_back(intern(c1 | x1, c2 | x2, g));
                return t;
            };
            for (auto [x1, k1] : out1) {
                Move m{x1, {}};
                for (auto [x2, k2] : out2)
                    if (k1 == k2)
                        for (auto t : targets_for(x1, x2)) m.targets.push_back(t);
                m1.push_back(std::move(m));
            }
            for (auto [x2, k2] : out2) {
                Move m{x2, {}};
                for (auto [x1, k1] : out1)
                    if (k1 == k2)
                        for (auto t : targets_for(x1, x2)) m.targets.push_back(t);
                m2.push_back(std::move(m));
            }
        }
        r.states[s].moves1 = std::move(m1);
        r.states[s].moves2 = std::move(m2);
    }

    if (hereditary) {
        for (auto& st : r.states) {
            for (auto [x, y] : st.f) {
                if ((a.above(x) & st.c1).empty()) {
                    EventMap g;
                    for (auto p : st.f)
                        if (p.first != x) g.push_back(p);
                    auto it = index.find(map_key(g));
                    if (it == index.end()) throw std::logic_error("restriction of a reachable state is missing");
                    st.preds.push_back(it->second);
                }
            }
        }
    }
    refine(r, hereditary);
    return r;
}

} // namespace

EquivReport bisim_hp(const Pes& a, const Pes& b, const Limits& lim, HpTransfer transfer)
{
    return history_preserving(a, b, lim, transfer, false);
}

EquivReport bisim_hhp(const Pes& a, const Pes& b, const Limits& lim)
{
    return history_preserving(a, b, lim, HpTransfer::Single, true);
}

EquivReport check_equivalence(const Pes& a, const Pes& b, Equivalence rel, const Limits& lim)
{
    switch (rel) {
    case Equivalence::Interleaving: return bisim_basic(a, b, TransitionMode::Single, lim);
    case Equivalence::Step: return bisim_basic(a, b, TransitionMode::Step, lim);
    case Equivalence::Pomset: return bisim_basic(a, b, TransitionMode::Pomset, lim);
    case Equivalence::HP: return bisim_hp(a, b, lim);
    case Equivalence::HHP: return bisim_hhp(a, b, lim);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown equivalence");
}

Spectrum spectrum(const Pes& a, const Pes& b, const Limits& lim)
{
    Spectrum s;
    s.interleaving = bisim_basic(a, b, TransitionMode::Single, lim).equivalent;
    s.step = bisim_basic(a, b, TransitionMode::Step, lim).equivalent;
    s.pomset = bisim_basic(a, b, TransitionMode::Pomset, lim).equivalent;
    s.hp = bisim_hp(a, b, lim).equivalent;
    s.hhp = bisim_hhp(a, b, lim).equivalent;
    if ((s.hhp && !s.hp) || (s.hp && !s.pomset) || (s.pomset && !s.step) || (s.step && !s.interleaving))
        throw std::logic_error("equivalence verdicts are not monotone");
    return s;
}

} // namespace tcw
