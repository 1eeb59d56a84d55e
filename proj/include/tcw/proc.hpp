#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "tcw/pes.hpp"

namespace tcw {

// P ::= 0 | LABEL '.' P | P '+' P | P '|' P | '(' P ')'
// '.' binds tightest, then '|', then '+'. A bare LABEL means LABEL.0.
struct ProcTerm {
    enum class Kind { Nil, Prefix, Choice, Par };
    Kind kind = Kind::Nil;
    Label label;
    std::shared_ptr<const ProcTerm> left;
    std::shared_ptr<const ProcTerm> right;
};

using ProcPtr = std::shared_ptr<const ProcTerm>;

ProcPtr parse_term(std::string_view src);
std::string print_term(const ProcTerm& t);

// Events get fresh ids left to right; names are label followed by the id.
Pes compile_term(const ProcTerm& t, const std::string& name = "P");
Pes compile_term(std::string_view src, const std::string& name = "P");

} // namespace tcw
