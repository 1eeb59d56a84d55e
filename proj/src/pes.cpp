#include "tcw/pes.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

namespace tcw {

bool canonical_less(EventSet a, EventSet b)
{
    if (a.size() != b.size()) return a.size() < b.size();
    // Same size: the first differing id decides, smaller id first.
    std::uint64_t diff = a.bits() ^ b.bits();
    if (diff == 0) return false;
    std::uint64_t low = diff & (~diff + 1);
    return (a.bits() & low) != 0;
}

std::string_view relation_name(Relation r)
{
    switch (r) {
    case Relation::Equal: return "equal";
    case Relation::Causes: return "causes";
    case Relation::CausedBy: return "caused_by";
    case Relation::Concurrent: return "concurrent";
    case Relation::Conflict: return "conflict";
    }
    return "?";
}

std::string_view mode_name(TransitionMode m)
{
    switch (m) {
    case TransitionMode::Single: return "single";
    case TransitionMode::Step: return "step";
    case TransitionMode::Pomset: return "pomset";
    }
    return "?";
}

Pes validate_pes(const RawPes& raw)
{
    const std::size_t n = raw.events.size();
    if (n > kMaxEvents)
        throw Error(ErrorKind::SizeLimitExceeded,
                    "at most " + std::to_string(kMaxEvents) + " events are supported");

    std::map<std::string, EventId, std::less<>> ids;
    for (std::size_t i = 0; i < n; ++i) {
        if (!ids.emplace(raw.events[i].name, static_cast<EventId>(i)).second)
            throw Error(ErrorKind::DuplicateEventId, "event '" + raw.events[i].name + "' declared twice");
    }
    auto lookup = [&](const std::string& name) {
        auto it = ids.find(name);
        if (it == ids.end()) throw Error(ErrorKind::UnknownEventId, "unknown event '" + name + "'");
        return it->second;
    };

    Pes p;
    p.name_ = raw.name;
    p.events_ = raw.events;
    p.below_.assign(n, EventSet());
    p.above_.assign(n, EventSet());
    p.conflict_.assign(n, EventSet());

    for (const auto& [a, b] : raw.causes) {
        EventId x = lookup(a), y = lookup(b);
        p.below_[y].insert(x);
    }
    // Warshall closure.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (p.below_[i].contains(static_cast<EventId>(k))) p.below_[i] |= p.below_[k];
    for (std::size_t i = 0; i < n; ++i) {
        if (p.below_[i].contains(static_cast<EventId>(i)))
            throw Error(ErrorKind::CycleInCausality, "event '" + raw.events[i].name + "' lies on a causal cycle");
        for (EventId j : p.below_[i]) p.above_[j].insert(static_cast<EventId>(i));
    }

    std::vector<EventSet> gen(n);
    for (const auto& [a, b] : raw.conflicts) {
        EventId x = lookup(a), y = lookup(b);
        if (x == y) throw Error(ErrorKind::SelfConflict, "event '" + a + "' declared in conflict with itself");
        gen[x].insert(y);
        gen[y].insert(x);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (EventId j : gen[i])
            if (p.below_[i].contains(j) || p.below_[j].contains(static_cast<EventId>(i)))
                throw Error(ErrorKind::ConflictCauseOverlap,
                            "events '" + raw.events[i].name + "' and '" + raw.events[j].name +
                                "' are both causally related and in conflict");
    // x # y iff some a <= x and b <= y are in generating conflict.
    for (std::size_t x = 0; x < n; ++x) {
        EventSet down_x = p.below_[x] | EventSet::single(static_cast<EventId>(x));
        EventSet hit;
        for (EventId a : down_x) hit |= gen[a];
        EventSet result;
        for (std::size_t y = 0; y < n; ++y) {
            EventSet down_y = p.below_[y] | EventSet::single(static_cast<EventId>(y));
            if (hit.intersects(down_y)) result.insert(static_cast<EventId>(y));
        }
        p.conflict_[x] = result;
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (p.conflict_[x].contains(static_cast<EventId>(x)))
            throw Error(ErrorKind::SelfConflict,
                        "event '" + raw.events[x].name + "' inherits a conflict with itself");
        for (EventId y : p.conflict_[x])
            if (p.below_[x].contains(y))
                throw Error(ErrorKind::ConflictCauseOverlap,
                            "event '" + raw.events[x].name + "' conflicts with its cause '" +
                                raw.events[y].name + "'");
    }
    return p;
}

bool operator==(const Pes& a, const Pes& b)
{
    if (a.name_ != b.name_ || a.events_.size() != b.events_.size()) return false;
    for (std::size_t i = 0; i < a.events_.size(); ++i)
        if (a.events_[i].name != b.events_[i].name || a.events_[i].label != b.events_[i].label)
            return false;
    return a.below_ == b.below_ && a.conflict_ == b.conflict_;
}

std::optional<EventId> Pes::find(std::string_view name) const
{
    for (std::size_t i = 0; i < events_.size(); ++i)
        if (events_[i].name == name) return static_cast<EventId>(i);
    return std::nullopt;
}

EventId Pes::id_of(std::string_view name) const
{
    if (auto e = find(name)) return *e;
    throw Error(ErrorKind::UnknownEventId, "unknown event '" + std::string(name) + "'");
}

bool Pes::is_consistent(EventSet s) const
{
    for (EventId e : s)
        if (conflict_[e].intersects(s)) return false;
    return true;
}

bool Pes::is_downward_closed(EventSet s) const
{
    for (EventId e : s)
        if (!below_[e].subset_of(s)) return false;
    return true;
}

EventSet Pes::enabled_set(EventSet c) const
{
    EventSet out;
    for (EventId e : all() - c)
        if (enabled(c, e)) out.insert(e);
    return out;
}

EventSet Pes::residual(EventSet c) const
{
    EventSet out;
    for (EventId e : all() - c)
        if (!conflict_[e].intersects(c)) out.insert(e);
    return out;
}

std::vector<Label> Pes::labels() const
{
    std::set<Label> s;
    for (const auto& e : events_) s.insert(e.label);
    return {s.begin(), s.end()};
}

std::vector<std::pair<EventId, EventId>> Pes::immediate_causality() const
{
    std::vector<std::pair<EventId, EventId>> out;
    for (EventId b = 0; b < size(); ++b)
        for (EventId a : below_[b]) {
            bool covered = true;
            for (EventId m : below_[b])
                if (m != a && below_[m].contains(a)) { covered = false; break; }
            if (covered) out.emplace_back(a, b);
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<EventId, EventId>> Pes::immediate_conflicts() const
{
    std::vector<std::pair<EventId, EventId>> out;
    for (EventId a = 0; a < size(); ++a)
        for (EventId b : conflict_[a]) {
            if (b <= a) continue;
            // Inherited if a strict cause of a or b already conflicts with the other side.
            bool inherited = false;
            for (EventId x : below_[a])
                if (in_conflict(x, b)) inherited = true;
            for (EventId y : below_[b])
                if (in_conflict(a, y)) inherited = true;
            if (!inherited) out.emplace_back(a, b);
        }
    return out;
}

Relation relation(const Pes& pes, EventId a, EventId b)
{
    if (a >= pes.size() || b >= pes.size()) throw Error(ErrorKind::UnknownEventId, "event id out of range");
    if (a == b) return Relation::Equal;
    if (pes.lt(a, b)) return Relation::Causes;
    if (pes.lt(b, a)) return Relation::CausedBy;
    if (pes.in_conflict(a, b)) return Relation::Conflict;
    return Relation::Concurrent;
}

Configuration Configuration::of(const Pes& pes, EventSet events)
{
    if (!events.subset_of(pes.all()) || !pes.is_configuration(events))
        throw Error(ErrorKind::NotAConfiguration, "event set is not a configuration");
    return Configuration(&pes, events);
}

bool is_configuration(const Pes& pes, EventSet x)
{
    return x.subset_of(pes.all()) && pes.is_configuration(x);
}

std::vector<EventSet> enum_configurations(const Pes& pes, std::size_t cap)
{
    std::unordered_set<EventSet, EventSetHash> seen{EventSet()};
    std::vector<EventSet> order{EventSet()};
    for (std::size_t i = 0; i < order.size(); ++i) {
        EventSet c = order[i];
        for (EventId e : pes.enabled_set(c)) {
            EventSet next = c | EventSet::single(e);
            if (seen.insert(next).second) {
                if (seen.size() > cap)
                    throw Error(ErrorKind::SizeLimitExceeded,
                                "more than " + std::to_string(cap) + " configurations");
                order.push_back(next);
            }
        }
    }
    std::sort(order.begin(), order.end(), canonical_less);
    return order;
}

EventSet residual(const Pes& pes, const Configuration& c) { return pes.residual(c.events()); }

namespace {

// Each extension is reached by exactly one include/exclude decision path.
void extensions(const Pes& pes, EventSet base, EventSet x, EventSet banned, std::size_t max_size,
                std::vector<EventSet>& out)
{
    EventSet cand = pes.enabled_set(base | x) - banned;
    if (cand.empty() || (max_size != 0 && x.size() == max_size)) {
        if (!x.empty()) out.push_back(x);
        return;
    }
    EventId e = cand.min();
    extensions(pes, base, x | EventSet::single(e), banned, max_size, out);
    extensions(pes, base, x, banned | EventSet::single(e), max_size, out);
}

} // namespace

std::vector<Transition> transitions(const Pes& pes, EventSet c, TransitionMode mode, std::size_t max_size)
{
    if (!is_configuration(pes, c)) throw Error(ErrorKind::NotAConfiguration, "source is not a configuration");
    std::vector<EventSet> steps;
    switch (mode) {
    case TransitionMode::Single:
        for (EventId e : pes.enabled_set(c)) steps.push_back(EventSet::single(e));
        break;
    case TransitionMode::Step: {
        // Enabled events are pairwise causally unrelated, so a step is a consistent
        // subset of them.
        std::vector<EventSet> all;
        extensions(pes, c, EventSet(), EventSet(), max_size, all);
        for (EventSet x : all)
            if (x.subset_of(pes.enabled_set(c))) steps.push_back(x);
        break;
    }
    case TransitionMode::Pomset:
        extensions(pes, c, EventSet(), EventSet(), max_size, steps);
        break;
    }
    std::sort(steps.begin(), steps.end(), canonical_less);
    std::vector<Transition> out;
    out.reserve(steps.size());
    for (EventSet x : steps) out.push_back({x, c | x});
    return out;
}

std::vector<Transition> transitions(const Configuration& c, TransitionMode mode, std::size_t max_size)
{
    return transitions(c.pes(), c.events(), mode, max_size);
}

namespace {

struct IsoSearch {
    const Pes& px;
    const Pes& py;
    std::vector<EventId> xs;
    EventSet ys;
    std::vector<EventId> image;
    EventSet used;

    std::size_t indeg(const Pes& p, EventSet s, EventId e) const { return (p.below(e) & s).size(); }
    std::size_t outdeg(const Pes& p, EventSet s, EventId e) const { return (p.above(e) & s).size(); }

    bool run(std::size_t i, EventSet xset)
    {
        if (i == xs.size()) return true;
        EventId x = xs[i];
        std::size_t in = indeg(px, xset, x), out = outdeg(px, xset, x);
        for (EventId y : ys - used) {
            if (py.label(y) != px.label(x)) continue;
            if (indeg(py, ys, y) != in || outdeg(py, ys, y) != out) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                if (px.lt(xs[j], x) != py.lt(image[j], y)) ok = false;
                if (px.lt(x, xs[j]) != py.lt(y, image[j])) ok = false;
            }
            if (!ok) continue;
            image[i] = y;
            used.insert(y);
            if (run(i + 1, xset)) return true;
            used.erase(y);
        }
        return false;
    }
};

} // namespace

std::optional<EventMap> pomset_iso(const PomsetView& x, const PomsetView& y)
{
    if (x.events.size() != y.events.size()) return std::nullopt;
    IsoSearch s{*x.pes, *y.pes, x.events.to_vector(), y.events, {}, EventSet()};
    s.image.assign(s.xs.size(), 0);
    if (!s.run(0, x.events)) return std::nullopt;
    EventMap m;
    for (std::size_t i = 0; i < s.xs.size(); ++i) m.emplace_back(s.xs[i], s.image[i]);
    return m;
}

} // namespace tcw
