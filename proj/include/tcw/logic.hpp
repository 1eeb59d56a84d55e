#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcw/formula.hpp"
#include "tcw/pes.hpp"

namespace tcw {

struct DesugarOptions {
    // step(B1, ..., Bn): the i-th binder is additionally required to be concurrent
    // with the variables bound by B1 ... B(i-1). Off gives the plain nesting.
    bool step_concurrency = true;
};

// Rewrites sugar (ex!, all!, step, step!) into core operators and expands the
// '_' label over `labels` (disjunction for existential forms, conjunction for
// universal ones). With no label set the wildcard is kept.
Formula desugar(const Formula& f, const std::optional<std::vector<Label>>& labels,
                const DesugarOptions& opts = {});

// Every binder's body only mentions the binder's own variables. Fixpoints give NotApplicable.
bool is_well_formed(const Formula& f);

struct FragmentSet {
    bool hm = false;
    bool step = false;
    bool pomset = false;
    bool hp = false;
    bool full = true;
    bool well_formed = false;
    // The same fragments with fixpoints and propositions admitted.
    bool hm_mu = false;
    bool step_mu = false;
    bool pomset_mu = false;
    bool hp_mu = false;
    bool full_mu = true;

    std::vector<std::string> names() const;
};

enum class Fragment { HM, Step, Pomset, HP, Full };

std::string_view fragment_name(Fragment f);
std::optional<Fragment> parse_fragment(std::string_view s);
bool in_fragment(const FragmentSet& fs, Fragment f);

FragmentSet classify_fragment(const Formula& f);

// Simultaneous capture-avoiding renaming of free variables.
Formula rename(const Formula& f, const std::map<std::string, std::string>& sub);

// f[psi/X]: each free X(y) becomes psi with `params` renamed to y.
Formula substitute(const Formula& f, const std::string& prop, const Formula& psi,
                   const std::vector<std::string>& params);
// Uses free_vars(psi) as the parameter tuple.
Formula substitute(const Formula& f, const std::string& prop, const Formula& psi);

// phi[fix X(x).phi / X] for a Mu or Nu formula.
Formula unfold(const Formula& fix);

// alpha-th approximant of a least fixpoint: 0 gives an empty formula over the
// parameters, alpha+1 substitutes the alpha-th into the body.
Formula approximant(const Formula& mu, std::size_t alpha);

// Labelled partial order over named variables; `less` holds pairs (i, j) meaning
// vars[i] < vars[j] and need not be transitively closed.
struct VarPomset {
    std::vector<std::string> vars;
    std::vector<Label> labels;
    std::vector<std::pair<std::size_t, std::size_t>> less;
};

// Chain of immediate-execution binders characterising p, ending in tail.
Formula pomset_to_formula(const VarPomset& p, const Formula& tail = Formula::top());

// The binders of a chain of immediate-execution binders (stops at the first other node).
std::vector<Binder> exec_prefix(const Formula& f);

// x is isomorphic to a pomset admitted by the closed binder chain, executed in order.
bool pomset_matches_prefix(const PomsetView& x, const std::vector<Binder>& prefix);

} // namespace tcw
