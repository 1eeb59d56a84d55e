#pragma once

#include <string>
#include <string_view>

#include "tcw/pes.hpp"

namespace tcw {

// Text format:
//   pes NAME {
//     event a1 : a;  event b1 : b;
//     a1 < b1;
//     a1 # b1;
//   }
RawPes parse_pes_raw(std::string_view text);
Pes parse_pes(std::string_view text);
Pes load_pes_file(const std::string& path);

// Normalized text: events in id order, covering causality pairs, immediate conflicts.
std::string print_pes(const Pes& pes);

} // namespace tcw
