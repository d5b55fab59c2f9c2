#include "doctest.h"

#include <string>

#include "alarms/error.hpp"
#include "alarms/hazard_matrix.hpp"
#include "oracles.hpp"

using namespace alarms;

TEST_CASE("demo matrix") {
  auto m = load_matrix_file(oracle::data_path("demo_matrix.json"));
  CHECK(m.num_sensors() == 4);
  CHECK(m.num_hazards() == 2);
  CHECK(m.num_cells() == 6);
  CHECK(max_alert(m, "Ice Protection", "Adverse Weather") == AlertLevel::kCaution);
  CHECK(max_alert(m, "Ice Protection", "Altitude Deviation") == AlertLevel::kNominal);
  CHECK(m.sensors_of(m.hazard_index("Altitude Deviation")).size() == 3);
}

TEST_CASE("avionics matrix lookups") {
  auto m = load_matrix_file(oracle::data_path("avionics_matrix.json"));
  CHECK(max_alert(m, "EGPWS", "Adverse Weather Encounter") == AlertLevel::kWarning);
  CHECK(max_alert(m, "Electrical", "Adverse Weather Encounter") == AlertLevel::kNominal);
  CHECK(max_alert(m, "Hydraulic", "System Failure") == AlertLevel::kCaution);
}

TEST_CASE("minimal matrix") {
  auto m = parse_matrix(R"({"sensors":[{"id":"S"}],"hazards":[{"id":"H"}],
                            "cells":[{"sensor":"S","hazard":"H","cap":"W"}]})");
  CHECK(m.num_cells() == 1);
  CHECK(*m.cap(0, 0) == AlertLevel::kWarning);
}

TEST_CASE("serialization round-trips") {
  auto m = load_matrix_file(oracle::data_path("demo_matrix.json"));
  auto again = parse_matrix(serialize_matrix(m));
  CHECK(serialize_matrix(again) == serialize_matrix(m));
  CHECK(again.sensors()[1].category == "aviation");
}

TEST_CASE("invalid matrices") {
  SUBCASE("orphan column") {
    try {
      parse_matrix(R"({"sensors":[{"id":"S"}],"hazards":[{"id":"H"},{"id":"G"}],
                       "cells":[{"sensor":"S","hazard":"H","cap":"W"}]})");
      FAIL("expected an error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("orphan column") != std::string::npos);
    }
  }
  SUBCASE("orphan row") {
    CHECK_THROWS_WITH_AS(
        parse_matrix(R"({"sensors":[{"id":"S"},{"id":"T"}],"hazards":[{"id":"H"}],
                         "cells":[{"sensor":"S","hazard":"H","cap":"W"}]})"),
        doctest::Contains("orphan row"), ValidationError);
  }
  SUBCASE("nominal cap") {
    CHECK_THROWS_AS(parse_matrix(R"({"sensors":[{"id":"S"}],"hazards":[{"id":"H"}],
                                     "cells":[{"sensor":"S","hazard":"H","cap":"N"}]})"),
                    ValidationError);
  }
  SUBCASE("duplicate cell") {
    CHECK_THROWS_AS(parse_matrix(R"({"sensors":[{"id":"S"}],"hazards":[{"id":"H"}],
                                     "cells":[{"sensor":"S","hazard":"H","cap":"W"},
                                              {"sensor":"S","hazard":"H","cap":"A"}]})"),
                    ValidationError);
  }
  SUBCASE("unknown sensor in cell") {
    CHECK_THROWS_AS(parse_matrix(R"({"sensors":[{"id":"S"}],"hazards":[{"id":"H"}],
                                     "cells":[{"sensor":"Q","hazard":"H","cap":"W"}]})"),
                    ValidationError);
  }
  SUBCASE("syntax error carries position") {
    try {
      parse_matrix("{\n  \"sensors\": [,]\n}");
      FAIL("expected an error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_matrix_file("/nonexistent/matrix.json"), IoError);
  }
}
