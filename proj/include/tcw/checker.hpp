#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tcw/formula.hpp"
#include "tcw/logic.hpp"
#include "tcw/pes.hpp"

namespace tcw {

// Variable assignment; only free variables of the formula are consulted.
using Env = std::map<std::string, EventId>;

// A set of (configuration, events) pairs, the events listed in `vars` order.
struct Denotation {
    std::vector<std::string> vars;
    std::set<std::pair<EventSet, std::vector<EventId>>> pairs;

    bool contains(EventSet c, const std::vector<EventId>& t) const { return pairs.count({c, t}) > 0; }
    friend bool operator==(const Denotation&, const Denotation&) = default;
};

// Interpretation of free propositions: name -> set of (configuration, argument tuple).
using PropEnv = std::map<std::string, std::set<std::pair<EventSet, std::vector<EventId>>>>;

struct CheckOptions {
    DesugarOptions desugar;
    std::size_t config_cap = kDefaultConfigCap;
};

// C together with the events bound to the free variables of f is consistent.
bool legal(const Pes& pes, EventSet c, const Env& env, const Formula& f);

bool satisfies(const Pes& pes, EventSet c, const Env& env, const Formula& f, const PropEnv& props = {},
               const CheckOptions& opts = {});

// Closed formula at the empty configuration.
bool check_closed(const Pes& pes, const Formula& f, const CheckOptions& opts = {});

// All satisfying pairs, the tuple ordered by free_vars(f).
Denotation denotation(const Pes& pes, const Formula& f, const PropEnv& props = {}, const CheckOptions& opts = {});

// Legal pairs for the free variables of f.
Denotation legal_pairs(const Pes& pes, const Formula& f, const CheckOptions& opts = {});

// Semantics without the legality side conditions; requires a well-formed formula.
bool wf_satisfies(const Pes& pes, EventSet c, const Env& env, const Formula& f, const CheckOptions& opts = {});

// Number of Knaster-Tarski rounds before the least fixpoint formula stabilises
// on this structure (outermost fixpoint only).
std::size_t mu_iterations(const Pes& pes, const Formula& mu, const PropEnv& props = {}, const CheckOptions& opts = {});

} // namespace tcw
