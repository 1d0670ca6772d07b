#pragma once

// JSON form of a window module (schema "lcg.window-module/1"):
//
//   { "schema": "lcg.window-module/1", "m": 2, "lo": -5, "hi": -2,
//     "complete_below": false, "complete_above": true,
//     "components": [ { "degree": -5, "dim": 4, "exact": true,
//                       "labels": [[-1,-4], ...] }, ... ],
//     "actions": [ { "op": "x", "axis": 1, "from": -5, "to": -4,
//                    "matrix": [["1","0",...], ...], "escapes": [false, ...] }, ... ] }
//
// Matrix entries are exact rationals written "p" or "p/q". "labels" is
// omitted when the module carries none; "escapes" is omitted when no column
// escapes. Actions that are not listed are zero.

#include "lcg/window_module.hpp"

#include "json.hpp"

namespace lcg {

nlohmann::json to_json(const WindowModule& m);
/// Throws std::invalid_argument on malformed input and InvariantError when the
/// described module violates the module invariants.
WindowModule module_from_json(const nlohmann::json& j);

}  // namespace lcg
