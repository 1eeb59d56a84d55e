#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tcw/error.hpp"
#include "tcw/event_set.hpp"

namespace tcw {

using Label = std::string;

struct Event {
    std::string name;
    Label label;
};

// Unvalidated input: events plus generating causality and conflict pairs,
// referenced by event name.
struct RawPes {
    std::string name;
    std::vector<Event> events;
    std::vector<std::pair<std::string, std::string>> causes;
    std::vector<std::pair<std::string, std::string>> conflicts;
};

enum class Relation { Equal, Causes, CausedBy, Concurrent, Conflict };

std::string_view relation_name(Relation r);

// A validated prime event structure. Causality is stored transitively closed,
// conflict symmetric and inherited along causality.
class Pes {
  public:
    Pes() = default;

    const std::string& name() const { return name_; }
    std::size_t size() const { return events_.size(); }
    const Event& event(EventId e) const { return events_.at(e); }
    std::span<const Event> events() const { return events_; }
    const Label& label(EventId e) const { return events_[e].label; }

    EventSet all() const { return EventSet::first_n(events_.size()); }
    EventSet below(EventId e) const { return below_[e]; }
    EventSet above(EventId e) const { return above_[e]; }
    EventSet conflicts(EventId e) const { return conflict_[e]; }

    bool lt(EventId a, EventId b) const { return below_[b].contains(a); }
    bool leq(EventId a, EventId b) const { return a == b || lt(a, b); }
    bool in_conflict(EventId a, EventId b) const { return conflict_[a].contains(b); }
    bool concurrent(EventId a, EventId b) const
    {
        return a != b && !lt(a, b) && !lt(b, a) && !in_conflict(a, b);
    }

    std::optional<EventId> find(std::string_view name) const;
    EventId id_of(std::string_view name) const;

    bool is_consistent(EventSet s) const;
    bool is_downward_closed(EventSet s) const;
    bool is_configuration(EventSet s) const { return is_consistent(s) && is_downward_closed(s); }
    // e can be added to configuration c.
    bool enabled(EventSet c, EventId e) const
    {
        return !c.contains(e) && below_[e].subset_of(c) && !conflict_[e].intersects(c);
    }
    EventSet enabled_set(EventSet c) const;
    EventSet residual(EventSet c) const;

    // Sorted distinct labels.
    std::vector<Label> labels() const;
    // Covering pairs of causality.
    std::vector<std::pair<EventId, EventId>> immediate_causality() const;
    // Conflicts not inherited from a conflict between causes; each pair once, a < b.
    std::vector<std::pair<EventId, EventId>> immediate_conflicts() const;

    friend bool operator==(const Pes& a, const Pes& b);
    friend Pes validate_pes(const RawPes& raw);

  private:
    std::string name_;
    std::vector<Event> events_;
    std::vector<EventSet> below_;
    std::vector<EventSet> above_;
    std::vector<EventSet> conflict_;
};

Pes validate_pes(const RawPes& raw);

Relation relation(const Pes& pes, EventId a, EventId b);

// A configuration of a particular structure.
class Configuration {
  public:
    static Configuration of(const Pes& pes, EventSet events);
    static Configuration empty(const Pes& pes) { return Configuration(&pes, EventSet()); }

    const Pes& pes() const { return *pes_; }
    EventSet events() const { return events_; }

    friend bool operator==(const Configuration& a, const Configuration& b)
    {
        return a.pes_ == b.pes_ && a.events_ == b.events_;
    }

  private:
    Configuration(const Pes* pes, EventSet events) : pes_(pes), events_(events) {}
    const Pes* pes_;
    EventSet events_;
};

inline constexpr std::size_t kDefaultConfigCap = std::size_t{1} << 20;

bool is_configuration(const Pes& pes, EventSet x);

// All configurations ordered by size, then lexicographically on sorted ids.
std::vector<EventSet> enum_configurations(const Pes& pes, std::size_t cap = kDefaultConfigCap);

EventSet residual(const Pes& pes, const Configuration& c);

enum class TransitionMode { Single, Step, Pomset };

std::string_view mode_name(TransitionMode m);

struct Transition {
    EventSet step;
    EventSet target;
};

// Transitions out of c ordered by |X| then lexicographically. max_size 0 means unbounded.
std::vector<Transition> transitions(const Pes& pes, EventSet c, TransitionMode mode,
                                    std::size_t max_size = 0);
std::vector<Transition> transitions(const Configuration& c, TransitionMode mode,
                                    std::size_t max_size = 0);

// A finite set of events of a structure seen as a labelled partial order.
struct PomsetView {
    const Pes* pes;
    EventSet events;
};

using EventMap = std::vector<std::pair<EventId, EventId>>;

// Label- and order-preserving bijection, sorted by the left id, if one exists.
std::optional<EventMap> pomset_iso(const PomsetView& x, const PomsetView& y);

} // namespace tcw
