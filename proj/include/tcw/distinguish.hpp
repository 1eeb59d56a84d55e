#pragma once

#include "tcw/bisim.hpp"
#include "tcw/formula.hpp"
#include "tcw/logic.hpp"

namespace tcw {

struct DistinguishOptions {
    Limits limits;
    std::size_t max_depth = 64;
};

struct Distinction {
    Formula formula;       // holds on the first structure, fails on the second
    Fragment fragment;
    bool verified = false; // closed-formula verdicts were recomputed and differ
};

Equivalence equivalence_for(Fragment f);

// Builds a closed formula of the fragment telling the structures apart, from the
// removal trace of the matching equivalence. Throws ActuallyEquivalent or DepthExceeded.
Distinction distinguish(const Pes& a, const Pes& b, Fragment frag, const DistinguishOptions& opts = {});

// The formula holds on exactly one of the two structures.
bool verify_distinguishing(const Pes& a, const Pes& b, const Formula& f);

} // namespace tcw
