#include "alarms/alert_level.hpp"

#include <algorithm>
#include <cctype>

#include "alarms/error.hpp"

namespace alarms {

namespace {

constexpr std::array<std::string_view, kNumAlertLevels> kNames = {
    "Nominal", "Advisory", "Caution", "Warning", "Directive"};
constexpr std::array<char, kNumAlertLevels> kCodes = {'N', 'A', 'C', 'W', 'D'};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

AlertLevel alert_level_from_ordinal(int value) {
  if (value < 0 || value >= kNumAlertLevels) {
    throw ValidationError("alert level ordinal out of range: " +
                          std::to_string(value));
  }
  return static_cast<AlertLevel>(value);
}

char alert_code(AlertLevel level) { return kCodes[ordinal(level)]; }

std::string_view alert_name(AlertLevel level) { return kNames[ordinal(level)]; }

AlertLevel parse_alert_level(std::string_view text) {
  for (int i = 0; i < kNumAlertLevels; ++i) {
    if (text.size() == 1 &&
        std::toupper(static_cast<unsigned char>(text[0])) == kCodes[i]) {
      return static_cast<AlertLevel>(i);
    }
    if (iequals(text, kNames[i])) return static_cast<AlertLevel>(i);
  }
  if (iequals(text, "None")) return AlertLevel::kNominal;
  throw ValidationError("unknown alert level '" + std::string(text) + "'");
}

UrgencyTimeframe timeframe(AlertLevel level) {
  switch (level) {
    case AlertLevel::kNominal:
      throw ValidationError("Nominal has no urgency timeframe");
    case AlertLevel::kAdvisory:
      return {level, std::nullopt};
    case AlertLevel::kCaution:
      return {level, 40.0};
    case AlertLevel::kWarning:
      return {level, 15.0};
    case AlertLevel::kDirective:
      return {level, 10.0};
  }
  throw ValidationError("invalid alert level");
}

}  // namespace alarms
