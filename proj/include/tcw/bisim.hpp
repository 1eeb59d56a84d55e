#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tcw/pes.hpp"

namespace tcw {

enum class Equivalence { Interleaving, Step, Pomset, HP, HHP };

std::string_view equivalence_name(Equivalence e);
std::optional<Equivalence> parse_equivalence(std::string_view s);

struct Limits {
    std::size_t max_events = 16;  // per structure
    std::size_t max_states = std::size_t{1} << 20;
};

// A move of one side from a state, with the states reachable by matching it on the other side.
struct Move {
    EventSet step;
    std::vector<std::size_t> targets;
};

// A state of the product: a configuration pair, plus the isomorphism for
// history-preserving relations.
struct ProductState {
    EventSet c1, c2;
    EventMap f;
    std::vector<Move> moves1, moves2;
    std::vector<std::size_t> preds;  // hhp: immediate restrictions
};

struct TraceStep {
    std::size_t round = 0;
    std::size_t state = 0;
    int side = 1;  // 1 or 2: which structure's move failed; 0 for a downward failure
    std::size_t move = 0;
    std::size_t pred = 0;  // downward failures: the removed restriction
};

struct EquivReport {
    Equivalence relation = Equivalence::Interleaving;
    bool equivalent = false;
    std::vector<ProductState> states;  // states[0] is the initial state
    std::vector<bool> alive;           // the greatest bisimulation, over `states`
    std::vector<TraceStep> trace;      // removals in order
    std::vector<std::size_t> removed_at;  // index into trace, or npos
    std::size_t rounds = 0;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

enum class HpTransfer { Single, Pomset };

EquivReport bisim_basic(const Pes& a, const Pes& b, TransitionMode mode, const Limits& lim = {});
EquivReport bisim_hp(const Pes& a, const Pes& b, const Limits& lim = {}, HpTransfer transfer = HpTransfer::Single);
EquivReport bisim_hhp(const Pes& a, const Pes& b, const Limits& lim = {});
EquivReport check_equivalence(const Pes& a, const Pes& b, Equivalence rel, const Limits& lim = {});

struct Spectrum {
    bool interleaving = false;
    bool step = false;
    bool pomset = false;
    bool hp = false;
    bool hhp = false;
};

// All five verdicts; throws std::logic_error if they are not monotone.
Spectrum spectrum(const Pes& a, const Pes& b, const Limits& lim = {});

} // namespace tcw
