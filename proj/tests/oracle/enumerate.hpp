#pragma once

// Exhaustive enumeration of fragment formulas up to a nesting depth, modulo
// joint denotation on two structures. Each constructor is interpreted directly
// on denotations (sets of configuration/assignment pairs), so formulas with the
// same free variables and denotation are represented once.
//
// Depth: T has depth 0; every negation, conjunction, binder, step modality and
// execution modality adds one.

#include <string>
#include <vector>

#include "tcw/formula.hpp"

namespace tcw {
class Pes;
}

namespace ref {

enum class Frag { HM, Step, Pomset, HP, Full };

struct ClosedClass {
    tcw::Formula rep;
    bool left = false;   // verdict at the empty configuration of the first structure
    bool right = false;
};

struct Enumeration {
    std::vector<ClosedClass> closed;
    std::size_t total_classes = 0;
};

Enumeration enumerate(const tcw::Pes& a, const tcw::Pes& b, Frag f, int depth);

} // namespace ref
