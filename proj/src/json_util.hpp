#pragma once

// Internal helpers shared by the file-format readers.

#include <string>
#include <string_view>

#include "json.hpp"

namespace alarms::detail {

using json = nlohmann::ordered_json;

// Parses JSON text; syntax errors become ParseError with line and column.
json parse_json_text(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

// Field access with a path-qualified ValidationError on absence or type
// mismatch.
const json& require(const json& object, const char* key,
                    const std::string& where);
std::string require_string(const json& object, const char* key,
                           const std::string& where);
double require_number(const json& object, const char* key,
                      const std::string& where);
double number_or(const json& object, const char* key, double fallback,
                 const std::string& where);

// Rounds to 6 decimals for exported times.
double round6(double seconds);

}  // namespace alarms::detail
