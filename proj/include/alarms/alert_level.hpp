#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace alarms {

enum class AlertLevel : std::uint8_t {
  kNominal = 0,
  kAdvisory = 1,
  kCaution = 2,
  kWarning = 3,
  kDirective = 4,
};

inline constexpr int kNumAlertLevels = 5;

inline constexpr std::array<AlertLevel, kNumAlertLevels> kAllAlertLevels = {
    AlertLevel::kNominal, AlertLevel::kAdvisory, AlertLevel::kCaution,
    AlertLevel::kWarning, AlertLevel::kDirective};

constexpr int ordinal(AlertLevel level) { return static_cast<int>(level); }

AlertLevel alert_level_from_ordinal(int ordinal);

// One-letter code N/A/C/W/D.
char alert_code(AlertLevel level);
std::string_view alert_name(AlertLevel level);

// Accepts a one-letter code or the full name (case-insensitive); "None" is
// an alias for Nominal.
AlertLevel parse_alert_level(std::string_view text);

// Time allowed to address an alert of the given level. Advisory alerts are
// non-critical and carry no bound.
struct UrgencyTimeframe {
  AlertLevel level;
  std::optional<double> max_seconds;

  bool bounded() const { return max_seconds.has_value(); }
};

// Throws ValidationError for Nominal: there is no alert to address.
UrgencyTimeframe timeframe(AlertLevel level);

}  // namespace alarms
