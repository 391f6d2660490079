#pragma once

#include <string>

#include "gac/classify.hpp"
#include "gac/ktheory.hpp"
#include "gac/moves.hpp"
#include "gac/search.hpp"

namespace gac {

// Stable machine-readable records consumed by `gac --json` and check-path.

std::string move_to_json_text(const MoveInstance& m, int indent = -1);
MoveInstance move_from_json_text(const std::string& text);

std::string path_to_json_text(const MovePath& p, int indent = -1);
MovePath path_from_json_text(const std::string& text);

std::string verdict_to_json_text(const Verdict& v, int indent = -1);

std::string bundle_to_json_text(const InvariantBundle& b, int indent = -1);

}  // namespace gac
