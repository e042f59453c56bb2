#pragma once

#include <string>

#include "gfcd/model.hpp"

namespace gfcd {

/// JSON container for a generated scenario. Complex matrices are stored as
///   {"rows": r, "cols": c, "layout": "row-major-interleaved", "data": [re, im, ...]}
/// with doubles printed round-trip exact.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

}  // namespace gfcd
