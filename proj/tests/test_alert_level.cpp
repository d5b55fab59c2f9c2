#include "doctest.h"

#include "alarms/alert_level.hpp"
#include "alarms/error.hpp"

using namespace alarms;

TEST_CASE("alert levels are ordered") {
  CHECK(AlertLevel::kNominal < AlertLevel::kAdvisory);
  CHECK(AlertLevel::kWarning < AlertLevel::kDirective);
  CHECK(ordinal(AlertLevel::kCaution) == 2);
  CHECK(alert_level_from_ordinal(4) == AlertLevel::kDirective);
  CHECK_THROWS_AS(alert_level_from_ordinal(5), ValidationError);
}

TEST_CASE("codes and names parse") {
  for (auto level : kAllAlertLevels) {
    CHECK(parse_alert_level(std::string(1, alert_code(level))) == level);
    CHECK(parse_alert_level(alert_name(level)) == level);
  }
  CHECK(parse_alert_level("caution") == AlertLevel::kCaution);
  CHECK(parse_alert_level("None") == AlertLevel::kNominal);
  CHECK_THROWS_AS(parse_alert_level("X"), ValidationError);
  CHECK_THROWS_AS(parse_alert_level(""), ValidationError);
}

TEST_CASE("urgency timeframes") {
  CHECK(*timeframe(AlertLevel::kDirective).max_seconds == 10.0);
  CHECK(*timeframe(AlertLevel::kWarning).max_seconds == 15.0);
  CHECK(*timeframe(AlertLevel::kCaution).max_seconds == 40.0);
  CHECK_FALSE(timeframe(AlertLevel::kAdvisory).bounded());
  CHECK_THROWS_AS(timeframe(AlertLevel::kNominal), ValidationError);
}
