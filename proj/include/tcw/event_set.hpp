#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <vector>

namespace tcw {

using EventId = std::uint32_t;

inline constexpr std::size_t kMaxEvents = 64;

// A set of events of one structure, stored as a 64-bit mask.
class EventSet {
  public:
    class iterator {
      public:
        using value_type = EventId;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        explicit iterator(std::uint64_t rest) : rest_(rest) {}
        EventId operator*() const { return static_cast<EventId>(std::countr_zero(rest_)); }
        iterator& operator++() { rest_ &= rest_ - 1; return *this; }
        iterator operator++(int) { auto old = *this; ++*this; return old; }
        bool operator==(const iterator& o) const { return rest_ == o.rest_; }

      private:
        std::uint64_t rest_ = 0;
    };

    constexpr EventSet() = default;
    constexpr explicit EventSet(std::uint64_t bits) : bits_(bits) {}

    static EventSet single(EventId e) { return EventSet(std::uint64_t{1} << e); }
    static EventSet first_n(std::size_t n)
    {
        return EventSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }
    template <class Range>
    static EventSet of(const Range& ids)
    {
        EventSet s;
        for (auto e : ids) s.insert(static_cast<EventId>(e));
        return s;
    }

    std::uint64_t bits() const { return bits_; }
    bool empty() const { return bits_ == 0; }
    std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    bool contains(EventId e) const { return (bits_ >> e) & 1u; }
    void insert(EventId e) { bits_ |= std::uint64_t{1} << e; }
    void erase(EventId e) { bits_ &= ~(std::uint64_t{1} << e); }
    bool subset_of(EventSet o) const { return (bits_ & ~o.bits_) == 0; }
    bool intersects(EventSet o) const { return (bits_ & o.bits_) != 0; }
    EventId min() const { return static_cast<EventId>(std::countr_zero(bits_)); }

    EventSet operator|(EventSet o) const { return EventSet(bits_ | o.bits_); }
    EventSet operator&(EventSet o) const { return EventSet(bits_ & o.bits_); }
    EventSet operator-(EventSet o) const { return EventSet(bits_ & ~o.bits_); }
    EventSet& operator|=(EventSet o) { bits_ |= o.bits_; return *this; }
    EventSet& operator&=(EventSet o) { bits_ &= o.bits_; return *this; }
    EventSet& operator-=(EventSet o) { bits_ &= ~o.bits_; return *this; }

    iterator begin() const { return iterator(bits_); }
    iterator end() const { return iterator(0); }

    std::vector<EventId> to_vector() const { return {begin(), end()}; }

    friend bool operator==(EventSet, EventSet) = default;
    friend auto operator<=>(EventSet a, EventSet b) { return a.bits_ <=> b.bits_; }

  private:
    std::uint64_t bits_ = 0;
};

// Orders by size, then lexicographically on the ascending id lists.
bool canonical_less(EventSet a, EventSet b);

struct EventSetHash {
    std::size_t operator()(EventSet s) const noexcept
    {
        std::uint64_t x = s.bits() * 0x9E3779B97F4A7C15ull;
        return static_cast<std::size_t>(x ^ (x >> 31));
    }
};

} // namespace tcw
