#include "json_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "alarms/error.hpp"

namespace alarms::detail {

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is 1-based position of the offending byte.
    std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1,
                                              text.size());
    int line = 1;
    int column = 1;
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string message = e.what();
    // Strip the library's "[json.exception.parse_error.101] " prefix.
    if (auto pos = message.find("] "); pos != std::string::npos) {
      message = message.substr(pos + 2);
    }
    throw ParseError("JSON syntax error: " + message, line, column);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("failed writing '" + path + "'");
}

const json& require(const json& object, const char* key,
                    const std::string& where) {
  if (!object.is_object()) {
    throw ValidationError(where + ": expected an object");
  }
  auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  return *it;
}

std::string require_string(const json& object, const char* key,
                           const std::string& where) {
  const json& value = require(object, key, where);
  if (!value.is_string()) {
    throw ValidationError(where + "." + key + ": expected a string");
  }
  return value.get<std::string>();
}

double require_number(const json& object, const char* key,
                      const std::string& where) {
  const json& value = require(object, key, where);
  if (!value.is_number()) {
    throw ValidationError(where + "." + key + ": expected a number");
  }
  return value.get<double>();
}

double number_or(const json& object, const char* key, double fallback,
                 const std::string& where) {
  if (!object.contains(key)) return fallback;
  return require_number(object, key, where);
}

double round6(double seconds) { return std::round(seconds * 1e6) / 1e6; }

}  // namespace alarms::detail
