#pragma once

#include <string>

#include "tcw/pes_text.hpp"

inline tcw::Pes fixture(const std::string& name) { return tcw::load_pes_file(std::string(TCW_FIXTURE_DIR) + "/" + name + ".pes"); }
