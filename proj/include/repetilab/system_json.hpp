#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "repetilab/core_model.hpp"

namespace repetilab {

using AnySystem = std::variant<LSystem, NUSystem>;

// Parses the JSON system description. Unknown fields, multi-scalar symbol
// names and symbols outside the alphabet are ParseErrors; semantic checks
// (empty rules, level caps, cycles) are left to validation.
AnySystem parse_system(std::string_view json_text);
AnySystem load_system(const std::string& path);

// Compact single-line JSON with the canonical field order
// kind, alphabet, rules, coding, axiom, level, length.
std::string to_json(const LSystem& system);
std::string to_json(const NUSystem& system);

}  // namespace repetilab
